#ifndef EXPNEED_CLASSIFIERS_KNN_HPP
#define EXPNEED_CLASSIFIERS_KNN_HPP

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "expneed/classifiers/common.hpp"
#include "expneed/classifiers/spec.hpp"

namespace expneed {

/// Exact k-nearest neighbours under Euclidean distance. Ties in distance are
/// broken by training order. score = (weighted) share of positive neighbours;
/// with distance weights, neighbours at distance zero take all the weight.
class KnnModel {
public:
    static KnnModel fit(const ClassifierSpec& spec, const TrainingSet& data) {
        KnnModel m;
        m.k_ = static_cast<std::size_t>(spec.integer("n_neighbors"));
        if (m.k_ > data.size())
            throw ValidationError("n_neighbors=" + std::to_string(m.k_) + " exceeds the " +
                                  std::to_string(data.size()) + " training samples");
        m.distance_weights_ = spec.choice("weights") == "distance";
        m.points_ = data.vectors;
        m.labels_ = data.labels;
        return m;
    }

    double score(const SparseVector& x) const {
        std::vector<std::pair<double, std::size_t>> dist(points_.size());
        for (std::size_t i = 0; i < points_.size(); ++i) dist[i] = {squared_distance(points_[i], x), i};
        std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k_), dist.end());

        if (!distance_weights_) {
            std::size_t positive = 0;
            for (std::size_t r = 0; r < k_; ++r) positive += labels_[dist[r].second] ? 1 : 0;
            return static_cast<double>(positive) / static_cast<double>(k_);
        }
        std::size_t exact = 0, exact_positive = 0;
        for (std::size_t r = 0; r < k_; ++r) {
            if (dist[r].first == 0.0) {
                ++exact;
                exact_positive += labels_[dist[r].second] ? 1 : 0;
            }
        }
        if (exact > 0) return static_cast<double>(exact_positive) / static_cast<double>(exact);
        double pos = 0.0, total = 0.0;
        for (std::size_t r = 0; r < k_; ++r) {
            const double w = 1.0 / std::sqrt(dist[r].first);
            total += w;
            if (labels_[dist[r].second]) pos += w;
        }
        return pos / total;
    }

    std::size_t k() const noexcept { return k_; }

    Json to_json() const {
        Json pts = Json::array();
        for (const auto& p : points_) pts.push_back(detail::sparse_to_json(p));
        return {{"n_neighbors", k_}, {"distance_weights", distance_weights_}, {"labels", labels_}, {"points", pts}};
    }
    static KnnModel from_json(const Json& j, std::size_t dimension) {
        KnnModel m;
        m.k_ = j.at("n_neighbors").get<std::size_t>();
        m.distance_weights_ = j.at("distance_weights").get<bool>();
        m.labels_ = j.at("labels").get<std::vector<std::uint8_t>>();
        for (const auto& p : j.at("points")) m.points_.push_back(detail::sparse_from_json(p, dimension));
        if (m.points_.size() != m.labels_.size() || m.k_ == 0 || m.k_ > m.points_.size())
            throw ModelIoError("malformed knn model");
        return m;
    }

private:
    std::size_t k_ = 5;
    bool distance_weights_ = false;
    std::vector<SparseVector> points_;
    std::vector<std::uint8_t> labels_;
};

}  // namespace expneed

#endif
