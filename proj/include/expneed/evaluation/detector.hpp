#ifndef EXPNEED_EVALUATION_DETECTOR_HPP
#define EXPNEED_EVALUATION_DETECTOR_HPP

#include <memory>
#include <optional>
#include <string>
#include <utility>

#include "expneed/classifiers/grid_search.hpp"
#include "expneed/classifiers/model.hpp"
#include "expneed/corpus.hpp"
#include "expneed/rule_based.hpp"

namespace expneed {

/// A detector after training: labels reviews.
class FittedDetector {
public:
    virtual ~FittedDetector() = default;
    virtual Prediction predict(const Review& review) const = 0;
    /// Audit details for reports (chosen hyperparameters, convergence, ...).
    virtual Json details() const { return Json::object(); }
};

/// Something that can be trained on a labeled dataset: the rule, a fixed
/// classifier spec, or a grid searched inside the training data.
class Detector {
public:
    virtual ~Detector() = default;
    virtual std::unique_ptr<FittedDetector> train(const LabeledDataset& train, std::uint64_t seed) const = 0;
    virtual Json config() const = 0;
};

// ---------------------------------------------------------------------------

class FittedRule final : public FittedDetector {
public:
    Prediction predict(const Review& review) const override {
        const bool need = classify_rule_based(review.text).explanation_need();
        return {need, need ? 1.0 : 0.0};
    }
};

class RuleBasedDetector final : public Detector {
public:
    std::unique_ptr<FittedDetector> train(const LabeledDataset&, std::uint64_t) const override {
        return std::make_unique<FittedRule>();
    }
    Json config() const override { return {{"method", "rule_based"}, {"include", "'?' OR 'why'"}}; }
};

class FittedTextModel final : public FittedDetector {
public:
    explicit FittedTextModel(TextModel model, Json extra = Json::object())
        : model_(std::move(model)), extra_(std::move(extra)) {}

    Prediction predict(const Review& review) const override { return model_.predict(review.text); }

    Json details() const override {
        Json j = extra_;
        j["vocabulary_size"] = model_.vocabulary().size();
        if (auto c = model_.model().converged()) j["converged"] = *c;
        return j;
    }

    const TextModel& model() const noexcept { return model_; }

private:
    TextModel model_;
    Json extra_;
};

class ClassifierDetector final : public Detector {
public:
    explicit ClassifierDetector(ClassifierSpec spec) : spec_(std::move(spec)) {}

    std::unique_ptr<FittedDetector> train(const LabeledDataset& train, std::uint64_t seed) const override {
        std::vector<std::size_t> all(train.size());
        for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
        auto model = train_text_model(spec_, review_texts(train, all), review_labels(train, all), seed);
        return std::make_unique<FittedTextModel>(std::move(model));
    }

    Json config() const override { return {{"method", "classifier"}, {"spec", spec_.to_json()}}; }
    const ClassifierSpec& spec() const noexcept { return spec_; }

private:
    ClassifierSpec spec_;
};

/// Selects hyperparameters by an inner k-fold search over the training data
/// it is given, then refits the winner on all of it. The outer test fold is
/// never seen.
class GridSearchDetector final : public Detector {
public:
    GridSearchDetector(HyperGrid grid, std::size_t inner_folds, SelectionMetric metric, double beta,
                       LogSink log = log_to_stderr)
        : grid_(std::move(grid)), inner_folds_(inner_folds), metric_(metric), beta_(beta), log_(std::move(log)) {}

    std::unique_ptr<FittedDetector> train(const LabeledDataset& train, std::uint64_t seed) const override {
        auto search = grid_search(grid_, train, inner_folds_, metric_, beta_, seed, log_);
        std::vector<std::size_t> all(train.size());
        for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
        auto model = train_text_model(search.best, review_texts(train, all), review_labels(train, all), seed);
        Json extra{{"selected", search.best.to_json()},
                   {"selection_score", search.points[search.best_index].mean_score}};
        return std::make_unique<FittedTextModel>(std::move(model), std::move(extra));
    }

    Json config() const override {
        return {{"method", "grid_search"},
                {"grid", grid_.to_json()},
                {"inner_folds", inner_folds_},
                {"selection_metric", to_string(metric_)}};
    }

private:
    HyperGrid grid_;
    std::size_t inner_folds_;
    SelectionMetric metric_;
    double beta_;
    LogSink log_;
};

}  // namespace expneed

#endif
