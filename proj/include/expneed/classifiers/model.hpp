#ifndef EXPNEED_CLASSIFIERS_MODEL_HPP
#define EXPNEED_CLASSIFIERS_MODEL_HPP

#include <array>
#include <fstream>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "expneed/classifiers/common.hpp"
#include "expneed/classifiers/knn.hpp"
#include "expneed/classifiers/logistic_regression.hpp"
#include "expneed/classifiers/naive_bayes.hpp"
#include "expneed/classifiers/spec.hpp"
#include "expneed/classifiers/svm.hpp"
#include "expneed/classifiers/tree.hpp"

namespace expneed {

/// A fitted classifier over feature vectors of a fixed dimension.
class Model {
public:
    using Impl = std::variant<NaiveBayesModel, SvmModel, RandomForestModel, DecisionTreeModel,
                              LogisticRegressionModel, AdaBoostModel, KnnModel>;

    Model(ClassifierSpec spec, std::size_t dimension, std::array<std::size_t, 2> class_counts, Impl impl)
        : spec_(std::move(spec)), dimension_(dimension), class_counts_(class_counts), impl_(std::move(impl)) {}

    const ClassifierSpec& spec() const noexcept { return spec_; }
    std::size_t dimension() const noexcept { return dimension_; }
    /// Training class counts {negative, positive}.
    std::array<std::size_t, 2> class_counts() const noexcept { return class_counts_; }
    const Impl& impl() const noexcept { return impl_; }

    Prediction predict(const SparseVector& x) const {
        if (x.dimension != dimension_)
            throw ValidationError("feature dimension " + std::to_string(x.dimension) +
                                  " does not match the model's " + std::to_string(dimension_));
        const double s = std::visit([&](const auto& m) { return m.score(x); }, impl_);
        return {s >= 0.5, s};
    }

    /// Solver convergence for iterative fits (svm, logistic regression).
    std::optional<bool> converged() const {
        if (auto* m = std::get_if<SvmModel>(&impl_)) return m->converged();
        if (auto* m = std::get_if<LogisticRegressionModel>(&impl_)) return m->converged();
        return std::nullopt;
    }

    Json to_json() const {
        return {{"spec", spec_.to_json()},
                {"dimension", dimension_},
                {"class_counts", class_counts_},
                {"parameters", std::visit([](const auto& m) { return m.to_json(); }, impl_)}};
    }

    static Model from_json(const Json& j) {
        ClassifierSpec spec = ClassifierSpec::from_json(j.at("spec"));
        const auto dim = j.at("dimension").get<std::size_t>();
        const auto counts = j.at("class_counts").get<std::array<std::size_t, 2>>();
        const Json& p = j.at("parameters");
        Impl impl = [&]() -> Impl {
            switch (spec.algorithm()) {
                case Algorithm::naive_bayes: return NaiveBayesModel::from_json(p, dim);
                case Algorithm::svm: return SvmModel::from_json(p, dim);
                case Algorithm::random_forest: return RandomForestModel::from_json(p, dim);
                case Algorithm::decision_tree: return DecisionTreeModel::from_json(p, dim);
                case Algorithm::logistic_regression: return LogisticRegressionModel::from_json(p, dim);
                case Algorithm::adaboost: return AdaBoostModel::from_json(p, dim);
                case Algorithm::knn: return KnnModel::from_json(p, dim);
            }
            throw ModelIoError("unknown algorithm");
        }();
        return Model(std::move(spec), dim, counts, std::move(impl));
    }

private:
    ClassifierSpec spec_;
    std::size_t dimension_;
    std::array<std::size_t, 2> class_counts_;
    Impl impl_;
};

/// Fits `spec` on vectors. Deterministic in (spec, data, seed).
inline Model fit(const ClassifierSpec& spec, const TrainingSet& data, std::uint64_t seed = 0) {
    data.validate();
    Model::Impl impl = [&]() -> Model::Impl {
        switch (spec.algorithm()) {
            case Algorithm::naive_bayes: return NaiveBayesModel::fit(spec, data);
            case Algorithm::svm: return SvmModel::fit(spec, data);
            case Algorithm::random_forest: return RandomForestModel::fit(spec, data, seed);
            case Algorithm::decision_tree: return DecisionTreeModel::fit(spec, data, seed);
            case Algorithm::logistic_regression: return LogisticRegressionModel::fit(spec, data);
            case Algorithm::adaboost: return AdaBoostModel::fit(spec, data, seed);
            case Algorithm::knn: return KnnModel::fit(spec, data);
        }
        throw Error(ErrorKind::internal, "unknown algorithm");
    }();
    return Model(spec, data.dimension, data.class_counts(), std::move(impl));
}

// ---------------------------------------------------------------------------
// Text pipeline

/// Vocabulary fitted on the training texts + embedding + classifier. Scores
/// raw review text without touching the training data again.
class TextModel {
public:
    static constexpr std::string_view format_name = "expneed-model";
    static constexpr int format_major = 1;
    static constexpr int format_minor = 0;

    TextModel(Vocabulary vocabulary, Model model) : vocabulary_(std::move(vocabulary)), model_(std::move(model)) {}

    const ClassifierSpec& spec() const noexcept { return model_.spec(); }
    const Vocabulary& vocabulary() const noexcept { return vocabulary_; }
    const Model& model() const noexcept { return model_; }

    SparseVector vectorize(std::string_view text) const {
        return transform(vocabulary_, spec().embedding(), tokenize(text));
    }

    Prediction predict(std::string_view text) const { return model_.predict(vectorize(text)); }

    Json to_json() const {
        return {{"format", format_name},
                {"version", std::to_string(format_major) + "." + std::to_string(format_minor)},
                {"vocabulary",
                 {{"n_documents", vocabulary_.n_documents()},
                  {"terms", vocabulary_.terms()},
                  {"document_frequency", vocabulary_.document_frequencies()}}},
                {"model", model_.to_json()}};
    }

    static TextModel from_json(const Json& j) {
        try {
            if (j.value("format", std::string()) != format_name) throw ModelIoError("not an expneed model file");
            const auto version = j.at("version").get<std::string>();
            if (version.substr(0, version.find('.')) != std::to_string(format_major))
                throw ModelIoError("unsupported model format version " + version);
            const Json& v = j.at("vocabulary");
            Vocabulary vocab(v.at("terms").get<std::vector<std::string>>(),
                             v.at("document_frequency").get<std::vector<std::size_t>>(),
                             v.at("n_documents").get<std::size_t>());
            Model model = Model::from_json(j.at("model"));
            if (model.dimension() != vocab.size()) throw ModelIoError("model dimension differs from vocabulary size");
            return TextModel(std::move(vocab), std::move(model));
        } catch (const ModelIoError&) {
            throw;
        } catch (const std::exception& e) {
            throw ModelIoError(std::string("malformed model file: ") + e.what());
        }
    }

    void save(const std::string& path) const {
        std::ofstream out(path, std::ios::binary);
        if (!out) throw ModelIoError("cannot write model file: " + path);
        out << to_json().dump() << '\n';
        if (!out) throw ModelIoError("failed writing model file: " + path);
    }

    static TextModel load(const std::string& path) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw ModelIoError("cannot open model file: " + path);
        Json j;
        try {
            j = Json::parse(in);
        } catch (const std::exception& e) {
            throw ModelIoError("model file is not valid JSON: " + std::string(e.what()));
        }
        return from_json(j);
    }

private:
    Vocabulary vocabulary_;
    Model model_;
};

/// Fits the vocabulary on `texts` only, vectorizes, and fits the classifier.
inline TextModel train_text_model(const ClassifierSpec& spec, std::span<const std::string> texts,
                                  std::span<const std::uint8_t> labels, std::uint64_t seed = 0) {
    if (texts.size() != labels.size()) throw ValidationError("texts/labels size mismatch");
    std::vector<TokenStream> tokens;
    tokens.reserve(texts.size());
    for (const auto& t : texts) tokens.push_back(tokenize(t));
    Vocabulary vocab = fit_vocabulary(tokens);
    TrainingSet data;
    data.dimension = vocab.size();
    data.labels.assign(labels.begin(), labels.end());
    for (const auto& doc : tokens) data.vectors.push_back(transform(vocab, spec.embedding(), doc));
    Model model = fit(spec, data, seed);
    return TextModel(std::move(vocab), std::move(model));
}

}  // namespace expneed

#endif
