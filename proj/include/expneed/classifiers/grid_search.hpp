#ifndef EXPNEED_CLASSIFIERS_GRID_SEARCH_HPP
#define EXPNEED_CLASSIFIERS_GRID_SEARCH_HPP

#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "expneed/classifiers/model.hpp"
#include "expneed/corpus.hpp"
#include "expneed/evaluation/metrics.hpp"
#include "expneed/evaluation/sampling.hpp"

namespace expneed {

using LogSink = std::function<void(std::string_view)>;

inline void log_to_stderr(std::string_view message) { std::cerr << "warning: " << message << '\n'; }

/// Candidate values per hyperparameter plus the embeddings to try.
struct HyperGrid {
    Algorithm algorithm = Algorithm::naive_bayes;
    std::vector<std::pair<std::string, std::vector<ParamValue>>> axes;
    std::vector<Embedding> embeddings{Embedding::tfidf};

    /// Iteration order: embeddings outermost, then the axes in declared order
    /// with the last axis varying fastest. Points are returned unresolved so
    /// that invalid values surface when the point is fit.
    std::vector<std::pair<Embedding, ParamMap>> points() const {
        if (embeddings.empty()) throw ValidationError("grid has no embeddings");
        for (const auto& [name, values] : axes)
            if (values.empty()) throw ValidationError("grid axis '" + name + "' has no values");
        std::size_t combos = 1;
        for (const auto& axis : axes) combos *= axis.second.size();
        std::vector<std::pair<Embedding, ParamMap>> out;
        for (auto embedding : embeddings) {
            for (std::size_t combo = 0; combo < combos; ++combo) {
                std::vector<std::size_t> pick(axes.size());
                std::size_t rest = combo;
                for (std::size_t a = axes.size(); a-- > 0;) {
                    pick[a] = rest % axes[a].second.size();
                    rest /= axes[a].second.size();
                }
                ParamMap params;
                for (std::size_t a = 0; a < axes.size(); ++a) params.emplace_back(axes[a].first, axes[a].second[pick[a]]);
                out.emplace_back(embedding, std::move(params));
            }
        }
        return out;
    }

    Json to_json() const {
        Json ax = Json::object();
        for (const auto& [name, values] : axes) {
            Json vs = Json::array();
            for (const auto& v : values) vs.push_back(param_to_json(v));
            ax[name] = std::move(vs);
        }
        Json emb = Json::array();
        for (auto e : embeddings) emb.push_back(to_string(e));
        return {{"algorithm", to_string(algorithm)}, {"embeddings", emb}, {"hyperparameters", ax}};
    }

    static HyperGrid from_json(const Json& j) {
        if (!j.is_object() || !j.contains("algorithm"))
            throw ValidationError("grid needs an \"algorithm\" field");
        for (const auto& [key, _] : j.items())
            if (key != "algorithm" && key != "embeddings" && key != "hyperparameters")
                throw ValidationError("unknown key '" + key + "' in grid");
        HyperGrid g;
        g.algorithm = parse_algorithm(j.at("algorithm").get<std::string>());
        if (j.contains("embeddings")) {
            g.embeddings.clear();
            for (const auto& e : j.at("embeddings")) g.embeddings.push_back(parse_embedding(e.get<std::string>()));
        }
        if (j.contains("hyperparameters")) {
            for (const auto& [name, values] : j.at("hyperparameters").items()) {
                std::vector<ParamValue> vs;
                if (values.is_array())
                    for (const auto& v : values) vs.push_back(param_from_json(v));
                else
                    vs.push_back(param_from_json(values));
                g.axes.emplace_back(name, std::move(vs));
            }
        }
        return g;
    }
};

enum class SelectionMetric { macro_f_beta, positive_f_beta, accuracy };

inline SelectionMetric parse_selection_metric(std::string_view s) {
    if (s == "macro_f_beta") return SelectionMetric::macro_f_beta;
    if (s == "positive_f_beta") return SelectionMetric::positive_f_beta;
    if (s == "accuracy") return SelectionMetric::accuracy;
    throw ValidationError("unknown selection metric '" + std::string(s) + "'");
}

inline std::string to_string(SelectionMetric m) {
    switch (m) {
        case SelectionMetric::macro_f_beta: return "macro_f_beta";
        case SelectionMetric::positive_f_beta: return "positive_f_beta";
        case SelectionMetric::accuracy: return "accuracy";
    }
    return "";
}

inline double selection_score(SelectionMetric metric, const ConfusionMatrix& cm, double beta) {
    switch (metric) {
        case SelectionMetric::macro_f_beta:
            return (positive_metrics(cm, beta).f_beta + negative_metrics(cm, beta).f_beta) / 2.0;
        case SelectionMetric::positive_f_beta:
            return positive_metrics(cm, beta).f_beta;
        case SelectionMetric::accuracy:
            return cm.total() ? static_cast<double>(cm.tp + cm.tn) / static_cast<double>(cm.total()) : 0.0;
    }
    return 0.0;
}

struct GridPointResult {
    Embedding embedding;
    ParamMap params;
    std::optional<ClassifierSpec> spec;  // empty when the point was invalid
    double mean_score = 0.0;
    std::vector<double> fold_scores;
    std::string error;
};

struct GridSearchResult {
    ClassifierSpec best;
    std::size_t best_index = 0;
    std::vector<GridPointResult> points;
};

inline std::vector<std::string> review_texts(const LabeledDataset& ds, const std::vector<std::size_t>& positions) {
    std::vector<std::string> texts;
    texts.reserve(positions.size());
    for (auto p : positions) texts.push_back(ds[p].text);
    return texts;
}

inline std::vector<std::uint8_t> review_labels(const LabeledDataset& ds, const std::vector<std::size_t>& positions) {
    std::vector<std::uint8_t> labels;
    labels.reserve(positions.size());
    for (auto p : positions) labels.push_back(ds[p].explanation_need ? 1 : 0);
    return labels;
}

/// Exhaustive search: every grid point is scored by stratified k-fold on
/// `data` (vocabulary refit per fold), and the highest mean score wins. Ties
/// go to the earliest point in iteration order. Points whose fit throws are
/// disqualified with a warning; if none survives the search fails.
inline GridSearchResult grid_search(const HyperGrid& grid, const LabeledDataset& data, std::size_t folds,
                                    SelectionMetric metric, double beta, std::uint64_t seed,
                                    const LogSink& log = log_to_stderr) {
    if (folds < 2) throw ValidationError("grid search needs at least 2 folds");
    const auto plans = stratified_kfold(data, folds, seed);

    std::vector<GridPointResult> results;
    std::optional<std::size_t> best;
    for (auto& [embedding, params] : grid.points()) {
        GridPointResult point{embedding, params, std::nullopt, 0.0, {}, {}};
        try {
            ClassifierSpec spec(grid.algorithm, embedding, params);
            point.spec = spec;
            for (const auto& plan : plans) {
                const auto texts = review_texts(data, plan.train);
                const auto labels = review_labels(data, plan.train);
                const TextModel model = train_text_model(spec, texts, labels, detail::derive_seed(seed, plan.fold));
                ConfusionMatrix cm;
                for (auto p : plan.test) cm.add(data[p].explanation_need, model.predict(data[p].text).label);
                point.fold_scores.push_back(selection_score(metric, cm, beta));
            }
            double sum = 0.0;
            for (double s : point.fold_scores) sum += s;
            point.mean_score = sum / static_cast<double>(point.fold_scores.size());
        } catch (const Error& e) {
            point.error = e.what();
            point.fold_scores.clear();
            std::string where = std::string(to_string(grid.algorithm)) + "[" + std::string(to_string(embedding)) + "]";
            for (const auto& [k, v] : params) where += " " + k + "=" + param_to_string(v);
            log("grid point " + where + " disqualified: " + e.what());
        }
        if (point.error.empty() && (!best || point.mean_score > results[*best].mean_score)) best = results.size();
        results.push_back(std::move(point));
    }
    if (!best) throw ValidationError("grid search: every grid point failed to fit");
    GridSearchResult out{*results[*best].spec, *best, std::move(results)};
    return out;
}

}  // namespace expneed

#endif
