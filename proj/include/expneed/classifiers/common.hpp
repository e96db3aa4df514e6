#ifndef EXPNEED_CLASSIFIERS_COMMON_HPP
#define EXPNEED_CLASSIFIERS_COMMON_HPP

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "expneed/error.hpp"
#include "expneed/features.hpp"

namespace expneed {

using Json = nlohmann::ordered_json;

/// Feature vectors with 0/1 labels (1 = explanation need).
struct TrainingSet {
    std::size_t dimension = 0;
    std::vector<SparseVector> vectors;
    std::vector<std::uint8_t> labels;

    std::size_t size() const noexcept { return vectors.size(); }

    std::array<std::size_t, 2> class_counts() const noexcept {
        std::array<std::size_t, 2> counts{};
        for (auto y : labels) ++counts[y ? 1 : 0];
        return counts;
    }

    /// Throws unless the set is non-empty, consistent, and holds both classes.
    void validate() const {
        if (vectors.empty()) throw ValidationError("training data is empty");
        if (vectors.size() != labels.size()) throw ValidationError("vectors/labels size mismatch");
        for (const auto& v : vectors)
            if (v.dimension != dimension) throw ValidationError("training vector dimension mismatch");
        const auto counts = class_counts();
        if (counts[0] == 0 || counts[1] == 0)
            throw ValidationError("training data must contain both classes");
    }
};

struct Prediction {
    bool label = false;
    double score = 0.0;  // probability-like, in [0, 1]
};

namespace detail {

inline double sigmoid(double z) noexcept {
    if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

/// log(1 + exp(-m)) without overflow.
inline double log1p_exp_neg(double m) noexcept {
    return m > 0 ? std::log1p(std::exp(-m)) : -m + std::log1p(std::exp(m));
}

inline Json sparse_to_json(const SparseVector& v) {
    Json idx = Json::array(), w = Json::array();
    for (const auto& e : v.entries) {
        idx.push_back(e.index);
        w.push_back(e.weight);
    }
    return {{"indices", idx}, {"weights", w}};
}

inline SparseVector sparse_from_json(const Json& j, std::size_t dimension) {
    SparseVector v{dimension, {}};
    const auto& idx = j.at("indices");
    const auto& w = j.at("weights");
    if (idx.size() != w.size()) throw ModelIoError("sparse vector index/weight length mismatch");
    for (std::size_t k = 0; k < idx.size(); ++k) {
        const auto index = idx[k].get<std::uint32_t>();
        if (index >= dimension || (k > 0 && index <= v.entries.back().index))
            throw ModelIoError("sparse vector indices must increase and stay below the dimension");
        v.entries.push_back({index, w[k].get<double>()});
    }
    return v;
}

}  // namespace detail
}  // namespace expneed

#endif
