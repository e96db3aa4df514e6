#ifndef EXPNEED_EVALUATION_HARNESS_HPP
#define EXPNEED_EVALUATION_HARNESS_HPP

#include <memory>
#include <string>
#include <vector>

#include "expneed/detail/parallel.hpp"
#include "expneed/evaluation/detector.hpp"
#include "expneed/evaluation/report.hpp"
#include "expneed/evaluation/sampling.hpp"

namespace expneed {

struct CrossValidationOptions {
    std::size_t folds = 10;
    std::size_t repeats = 5;
    double beta = default_beta;
    std::uint64_t seed = 0;
    Averaging averaging = Averaging::per_fold;
    std::size_t jobs = 1;
};

/// Fold plans of every repeat. Repeat r uses the fold seed
/// derive_seed(seed, r).
inline std::vector<FoldPlan> repeated_fold_plans(const LabeledDataset& ds, std::size_t folds, std::size_t repeats,
                                                 std::uint64_t seed) {
    std::vector<FoldPlan> plans;
    for (std::size_t r = 0; r < repeats; ++r) {
        auto repeat_plans = stratified_kfold(ds, folds, detail::derive_seed(seed, r), r);
        for (auto& p : repeat_plans) plans.push_back(std::move(p));
    }
    return plans;
}

/// Repeated stratified k-fold. The detector is trained on each training split
/// alone (any vocabulary is fit there), evaluated on the held-out split, and
/// fold metrics are averaged over all folds x repeats.
inline EvalReport cross_validate(const Detector& detector, const LabeledDataset& ds,
                                 const CrossValidationOptions& options) {
    if (options.repeats < 1) throw ValidationError("cross-validation needs at least one repeat");
    const auto plans = repeated_fold_plans(ds, options.folds, options.repeats, options.seed);

    std::vector<FoldOutcome> outcomes(plans.size());
    detail::parallel_for(plans.size(), options.jobs, [&](std::size_t k) {
        const FoldPlan& plan = plans[k];
        try {
            const auto train = ds.subset(plan.train);
            const auto fitted = detector.train(train, detail::derive_seed(plan.seed, plan.fold + 1));
            ConfusionMatrix cm;
            for (auto p : plan.test) cm.add(ds[p].explanation_need, fitted->predict(ds[p]).label);
            outcomes[k] = make_outcome(plan.repeat, plan.fold, cm, options.beta);
            outcomes[k].details = fitted->details();
        } catch (const Error& e) {
            throw Error(e.kind(), "repeat " + std::to_string(plan.repeat) + ", fold " + std::to_string(plan.fold) +
                                      ": " + e.what());
        }
    });
    return summarize(ds.name(), std::move(outcomes), options.beta, options.averaging, options.repeats, options.folds);
}

/// Scores a trained detector on a labeled (not undersampled) test set: one
/// report per app, in order of first appearance, when `group_by_app`, then a
/// "Total" report.
inline std::vector<EvalReport> evaluate_holdout(const FittedDetector& detector, const LabeledDataset& test,
                                                double beta, bool group_by_app) {
    std::vector<bool> predicted(test.size());
    for (std::size_t i = 0; i < test.size(); ++i) predicted[i] = detector.predict(test[i]).label;

    auto report_for = [&](const std::string& label, auto&& include) {
        ConfusionMatrix cm;
        for (std::size_t i = 0; i < test.size(); ++i)
            if (include(test[i])) cm.add(test[i].explanation_need, predicted[i]);
        return summarize(label, {make_outcome(0, 0, cm, beta)}, beta, Averaging::pooled, 1, 1);
    };

    std::vector<EvalReport> reports;
    if (group_by_app)
        for (const auto& app : test.app_names())
            reports.push_back(report_for(app, [&](const Review& r) { return r.app_name == app; }));
    reports.push_back(report_for("Total", [](const Review&) { return true; }));
    return reports;
}

}  // namespace expneed

#endif
