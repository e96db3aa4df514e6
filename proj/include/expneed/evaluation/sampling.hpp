#ifndef EXPNEED_EVALUATION_SAMPLING_HPP
#define EXPNEED_EVALUATION_SAMPLING_HPP

#include <algorithm>
#include <array>
#include <cstdint>
#include <vector>

#include "expneed/corpus.hpp"
#include "expneed/detail/random.hpp"

namespace expneed {

/// Random under-sampling: drops majority-class reviews uniformly at random
/// until both classes are equally large. Minority reviews are all kept and
/// survivors keep their original order.
inline LabeledDataset undersample(const LabeledDataset& ds, std::uint64_t seed) {
    std::array<std::vector<std::size_t>, 2> by_class;
    for (std::size_t i = 0; i < ds.size(); ++i) by_class[ds[i].explanation_need ? 1 : 0].push_back(i);
    if (by_class[0].empty() || by_class[1].empty())
        throw ValidationError("undersampling needs both classes present");

    const int majority = by_class[1].size() > by_class[0].size() ? 1 : 0;
    const std::size_t keep = by_class[1 - majority].size();
    std::vector<std::size_t> pool = by_class[majority];
    detail::Rng rng(seed);
    rng.shuffle(pool);
    pool.resize(keep);

    std::vector<std::size_t> kept = by_class[1 - majority];
    kept.insert(kept.end(), pool.begin(), pool.end());
    std::sort(kept.begin(), kept.end());
    return ds.subset(kept);
}

/// One train/test split of a repeat. Positions index into the dataset.
struct FoldPlan {
    std::size_t repeat = 0;
    std::size_t fold = 0;
    std::vector<std::size_t> train;
    std::vector<std::size_t> test;
    std::uint64_t seed = 0;
};

/// Stratified k-fold split. Each class is shuffled and dealt round-robin over
/// the folds, the deal continuing across classes (negatives first), so
/// per-fold class counts are within one of k-th shares and fold sizes
/// differ by at most one.
///
/// Requires 2 <= k <= |ds| and both classes present. A class with fewer than
/// k members leaves some test folds without it.
inline std::vector<FoldPlan> stratified_kfold(const LabeledDataset& ds, std::size_t k, std::uint64_t seed,
                                              std::size_t repeat = 0) {
    if (k < 2) throw ValidationError("k-fold needs k >= 2");
    if (k > ds.size())
        throw ValidationError("k=" + std::to_string(k) + " exceeds the dataset size " + std::to_string(ds.size()));
    std::array<std::vector<std::size_t>, 2> by_class;
    for (std::size_t i = 0; i < ds.size(); ++i) by_class[ds[i].explanation_need ? 1 : 0].push_back(i);
    if (by_class[0].empty() || by_class[1].empty()) throw ValidationError("k-fold needs both classes present");

    detail::Rng rng(seed);
    std::vector<std::size_t> fold_of(ds.size());
    std::size_t deal = 0;
    for (auto& members : by_class) {
        rng.shuffle(members);
        for (auto i : members) fold_of[i] = deal++ % k;
    }

    std::vector<FoldPlan> plans(k);
    for (std::size_t f = 0; f < k; ++f) {
        plans[f].repeat = repeat;
        plans[f].fold = f;
        plans[f].seed = seed;
    }
    for (std::size_t i = 0; i < ds.size(); ++i)
        for (std::size_t f = 0; f < k; ++f) (fold_of[i] == f ? plans[f].test : plans[f].train).push_back(i);
    return plans;
}

}  // namespace expneed

#endif
