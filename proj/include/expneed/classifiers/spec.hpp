#ifndef EXPNEED_CLASSIFIERS_SPEC_HPP
#define EXPNEED_CLASSIFIERS_SPEC_HPP

#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "expneed/error.hpp"
#include "expneed/features.hpp"

namespace expneed {

enum class Algorithm : std::uint8_t {
    naive_bayes,
    svm,
    random_forest,
    decision_tree,
    logistic_regression,
    adaboost,
    knn,
};

inline constexpr Algorithm all_algorithms[] = {
    Algorithm::naive_bayes,         Algorithm::svm,      Algorithm::random_forest, Algorithm::decision_tree,
    Algorithm::logistic_regression, Algorithm::adaboost, Algorithm::knn};

constexpr std::string_view to_string(Algorithm a) noexcept {
    switch (a) {
        case Algorithm::naive_bayes: return "naive_bayes";
        case Algorithm::svm: return "svm";
        case Algorithm::random_forest: return "random_forest";
        case Algorithm::decision_tree: return "decision_tree";
        case Algorithm::logistic_regression: return "logistic_regression";
        case Algorithm::adaboost: return "adaboost";
        case Algorithm::knn: return "knn";
    }
    return "";
}

inline Algorithm parse_algorithm(std::string_view s) {
    for (auto a : all_algorithms)
        if (to_string(a) == s) return a;
    throw ValidationError("unknown algorithm '" + std::string(s) + "'");
}

// ---------------------------------------------------------------------------
// Hyperparameter values

using ParamValue = std::variant<bool, std::int64_t, double, std::string>;

inline nlohmann::ordered_json param_to_json(const ParamValue& v) {
    return std::visit([](const auto& x) { return nlohmann::ordered_json(x); }, v);
}

inline ParamValue param_from_json(const nlohmann::ordered_json& j) {
    if (j.is_boolean()) return j.get<bool>();
    if (j.is_number_integer()) return j.get<std::int64_t>();
    if (j.is_number_float()) return j.get<double>();
    if (j.is_string()) return j.get<std::string>();
    throw ValidationError("hyperparameter values must be booleans, numbers or strings");
}

inline std::string param_to_string(const ParamValue& v) { return param_to_json(v).dump(); }

/// Declared hyperparameters in declaration order. Used both for user-given
/// (partial) and resolved (complete, canonical) parameter sets.
using ParamMap = std::vector<std::pair<std::string, ParamValue>>;

inline const ParamValue* find_param(const ParamMap& params, std::string_view key) {
    for (const auto& [k, v] : params)
        if (k == key) return &v;
    return nullptr;
}

namespace detail {

// Each parameter normalizes a user value to its canonical type or throws.
struct ParamDef {
    std::string name;
    ParamValue default_value;
    std::function<ParamValue(const ParamValue&)> canonicalize;
};

[[noreturn]] inline void bad_param(const std::string& name, const ParamValue& v, const std::string& expected) {
    throw ValidationError("invalid value " + param_to_string(v) + " for hyperparameter '" + name +
                          "' (expected " + expected + ")");
}

inline auto real_param(std::string name, double def, double lo, bool lo_inclusive,
                       double hi = INFINITY) -> ParamDef {
    auto check = [name, lo, lo_inclusive, hi](const ParamValue& v) -> ParamValue {
        double x;
        if (auto* d = std::get_if<double>(&v))
            x = *d;
        else if (auto* i = std::get_if<std::int64_t>(&v))
            x = static_cast<double>(*i);
        else
            bad_param(name, v, "a number");
        const bool ok = std::isfinite(x) && (lo_inclusive ? x >= lo : x > lo) && x <= hi;
        if (!ok) bad_param(name, v, std::string(lo_inclusive ? ">= " : "> ") + nlohmann::json(lo).dump());
        return x;
    };
    return {name, def, check};
}

inline auto int_param(std::string name, std::int64_t def, std::int64_t lo) -> ParamDef {
    auto check = [name, lo](const ParamValue& v) -> ParamValue {
        std::int64_t x;
        if (auto* i = std::get_if<std::int64_t>(&v))
            x = *i;
        else if (auto* d = std::get_if<double>(&v); d && std::floor(*d) == *d && std::abs(*d) < 9e15)
            x = static_cast<std::int64_t>(*d);
        else
            bad_param(name, v, "an integer");
        if (x < lo) bad_param(name, v, "an integer >= " + std::to_string(lo));
        return x;
    };
    return {name, def, check};
}

inline auto bool_param(std::string name, bool def) -> ParamDef {
    auto check = [name](const ParamValue& v) -> ParamValue {
        if (auto* b = std::get_if<bool>(&v)) return *b;
        if (auto* s = std::get_if<std::string>(&v)) {
            if (*s == "true" || *s == "True") return true;
            if (*s == "false" || *s == "False") return false;
        }
        bad_param(name, v, "a boolean");
    };
    return {name, def, check};
}

inline auto choice_param(std::string name, std::string def, std::vector<std::string> choices) -> ParamDef {
    auto check = [name, choices](const ParamValue& v) -> ParamValue {
        if (auto* s = std::get_if<std::string>(&v))
            for (const auto& c : choices)
                if (*s == c) return *s;
        std::string listing;
        for (const auto& c : choices) listing += (listing.empty() ? "" : "|") + c;
        bad_param(name, v, "one of " + listing);
    };
    return {name, std::move(def), check};
}

// max_features: "all" | "sqrt" | "auto" (= sqrt) | "log2" | integer count >= 1
// | fraction in (0, 1].
inline auto max_features_param(std::string def) -> ParamDef {
    auto check = [](const ParamValue& v) -> ParamValue {
        const std::string name = "max_features";
        if (auto* s = std::get_if<std::string>(&v)) {
            if (*s == "none" || *s == "None" || *s == "all") return std::string("all");
            if (*s == "auto" || *s == "sqrt" || *s == "log2") return *s;
        } else if (auto* i = std::get_if<std::int64_t>(&v); i && *i >= 1) {
            return *i;
        } else if (auto* d = std::get_if<double>(&v); d && *d > 0.0 && *d <= 1.0) {
            return *d;
        }
        bad_param(name, v, "all|sqrt|auto|log2, a count >= 1 or a fraction in (0,1]");
    };
    return {"max_features", std::move(def), check};
}

// gamma: "auto" (= 1 / n_features) or a positive number.
inline auto gamma_param() -> ParamDef {
    auto check = [](const ParamValue& v) -> ParamValue {
        if (auto* s = std::get_if<std::string>(&v); s && *s == "auto") return *s;
        if (auto* d = std::get_if<double>(&v); d && std::isfinite(*d) && *d > 0.0) return *d;
        if (auto* i = std::get_if<std::int64_t>(&v); i && *i > 0) return static_cast<double>(*i);
        bad_param("gamma", v, "\"auto\" or a positive number");
    };
    return {"gamma", std::string("auto"), check};
}

inline const std::vector<ParamDef>& schema(Algorithm a) {
    static const std::map<Algorithm, std::vector<ParamDef>> schemas = [] {
        std::map<Algorithm, std::vector<ParamDef>> m;
        m[Algorithm::naive_bayes] = {
            real_param("alpha", 1.0, 0.0, false),
            bool_param("fit_prior", true),
        };
        m[Algorithm::logistic_regression] = {
            real_param("C", 1.0, 0.0, false),
            choice_param("solver", "newton-cg", {"newton-cg", "liblinear"}),
            int_param("max_iter", 100, 1),
            real_param("tol", 1e-4, 0.0, false),
        };
        m[Algorithm::svm] = {
            real_param("C", 1.0, 0.0, false),
            choice_param("kernel", "rbf", {"linear", "rbf"}),
            gamma_param(),
            real_param("tol", 1e-3, 0.0, false),
            int_param("max_iter", 1'000'000, 1),
        };
        m[Algorithm::decision_tree] = {
            choice_param("criterion", "gini", {"gini", "entropy"}),
            choice_param("splitter", "best", {"best", "random"}),
            max_features_param("all"),
            int_param("max_depth", 0, 0),
            int_param("min_samples_split", 2, 2),
        };
        m[Algorithm::random_forest] = {
            int_param("n_estimators", 100, 1),
            choice_param("criterion", "gini", {"gini", "entropy"}),
            max_features_param("sqrt"),
            int_param("max_depth", 0, 0),
            int_param("min_samples_split", 2, 2),
            bool_param("bootstrap", true),
        };
        m[Algorithm::adaboost] = {
            choice_param("algorithm", "SAMME", {"SAMME"}),
            int_param("n_estimators", 50, 1),
            real_param("learning_rate", 1.0, 0.0, false),
        };
        m[Algorithm::knn] = {
            int_param("n_neighbors", 5, 1),
            choice_param("weights", "uniform", {"uniform", "distance"}),
            // Index structure only; search is always exact.
            choice_param("algorithm", "auto", {"auto", "ball_tree", "kd_tree", "brute"}),
        };
        return m;
    }();
    return schemas.at(a);
}

}  // namespace detail

/// Fills defaults and canonicalizes values; unknown keys are rejected.
inline ParamMap resolve_params(Algorithm a, const ParamMap& given) {
    const auto& defs = detail::schema(a);
    for (const auto& [key, value] : given) {
        bool known = false;
        for (const auto& def : defs) known = known || def.name == key;
        if (!known) {
            std::string listing;
            for (const auto& def : defs) listing += (listing.empty() ? "" : ", ") + def.name;
            throw ValidationError("unknown hyperparameter '" + key + "' for " + std::string(to_string(a)) +
                                  " (known: " + listing + ")");
        }
    }
    ParamMap resolved;
    for (const auto& def : defs) {
        const ParamValue* v = find_param(given, def.name);
        resolved.emplace_back(def.name, def.canonicalize(v ? *v : def.default_value));
    }
    return resolved;
}

/// Algorithm + embedding + hyperparameters. Parameters are stored resolved, so
/// two specs compare equal iff they train the same model.
class ClassifierSpec {
public:
    ClassifierSpec(Algorithm algorithm, Embedding embedding, const ParamMap& params = {})
        : algorithm_(algorithm), embedding_(embedding), params_(resolve_params(algorithm, params)) {}

    Algorithm algorithm() const noexcept { return algorithm_; }
    Embedding embedding() const noexcept { return embedding_; }
    const ParamMap& params() const noexcept { return params_; }

    const ParamValue& param(std::string_view key) const {
        const ParamValue* v = find_param(params_, key);
        if (!v) throw Error(ErrorKind::internal, "no hyperparameter '" + std::string(key) + "'");
        return *v;
    }
    double real(std::string_view key) const { return std::get<double>(param(key)); }
    std::int64_t integer(std::string_view key) const { return std::get<std::int64_t>(param(key)); }
    bool flag(std::string_view key) const { return std::get<bool>(param(key)); }
    const std::string& choice(std::string_view key) const { return std::get<std::string>(param(key)); }

    nlohmann::ordered_json to_json() const {
        nlohmann::ordered_json hp = nlohmann::ordered_json::object();
        for (const auto& [k, v] : params_) hp[k] = param_to_json(v);
        return {{"algorithm", to_string(algorithm_)}, {"embedding", to_string(embedding_)}, {"hyperparameters", hp}};
    }

    static ClassifierSpec from_json(const nlohmann::ordered_json& j) {
        if (!j.is_object() || !j.contains("algorithm"))
            throw ValidationError("classifier spec needs an \"algorithm\" field");
        for (const auto& [key, _] : j.items())
            if (key != "algorithm" && key != "embedding" && key != "hyperparameters")
                throw ValidationError("unknown key '" + key + "' in classifier spec");
        const auto algorithm = parse_algorithm(j.at("algorithm").get<std::string>());
        const auto embedding = parse_embedding(j.value("embedding", std::string("tfidf")));
        ParamMap params;
        if (j.contains("hyperparameters")) {
            const auto& hp = j.at("hyperparameters");
            if (!hp.is_object()) throw ValidationError("\"hyperparameters\" must be an object");
            for (const auto& [k, v] : hp.items()) params.emplace_back(k, param_from_json(v));
        }
        return ClassifierSpec(algorithm, embedding, params);
    }

    /// e.g. "naive_bayes[tfidf] alpha=1.0 fit_prior=false".
    std::string describe() const {
        std::string s = std::string(to_string(algorithm_)) + "[" + std::string(to_string(embedding_)) + "]";
        for (const auto& [k, v] : params_) s += " " + k + "=" + param_to_string(v);
        return s;
    }

    friend bool operator==(const ClassifierSpec&, const ClassifierSpec&) = default;

private:
    Algorithm algorithm_;
    Embedding embedding_;
    ParamMap params_;
};

}  // namespace expneed

#endif
