#ifndef EXPNEED_CLASSIFIERS_TREE_HPP
#define EXPNEED_CLASSIFIERS_TREE_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <unordered_map>
#include <vector>

#include "expneed/classifiers/common.hpp"
#include "expneed/classifiers/spec.hpp"
#include "expneed/detail/random.hpp"

namespace expneed {

enum class Impurity : std::uint8_t { gini, entropy };

struct TreeOptions {
    Impurity criterion = Impurity::gini;
    bool random_splitter = false;
    std::size_t max_features = 0;  // features to inspect per node (resolved count)
    std::size_t max_depth = 0;     // 0 = unlimited
    std::size_t min_samples_split = 2;
};

namespace detail {

/// Resolves a canonical max_features value against the feature count.
inline std::size_t resolve_max_features(const ParamValue& v, std::size_t n_features) {
    const auto n = static_cast<double>(std::max<std::size_t>(1, n_features));
    std::size_t k = n_features;
    if (auto* s = std::get_if<std::string>(&v)) {
        if (*s == "sqrt" || *s == "auto") k = static_cast<std::size_t>(std::sqrt(n));
        else if (*s == "log2") k = static_cast<std::size_t>(std::log2(n));
    } else if (auto* i = std::get_if<std::int64_t>(&v)) {
        k = static_cast<std::size_t>(*i);
    } else if (auto* d = std::get_if<double>(&v)) {
        k = static_cast<std::size_t>(*d * n);
    }
    return std::clamp<std::size_t>(k, 1, std::max<std::size_t>(1, n_features));
}

inline double impurity(Impurity kind, double pos, double neg) noexcept {
    const double total = pos + neg;
    if (total <= 0) return 0.0;
    const double p = pos / total, q = neg / total;
    if (kind == Impurity::gini) return 1.0 - p * p - q * q;
    double h = 0.0;
    if (p > 0) h -= p * std::log2(p);
    if (q > 0) h -= q * std::log2(q);
    return h;
}

}  // namespace detail

/// Binary CART tree over sparse features with per-sample weights.
/// Internal nodes send x[feature] <= threshold to the left child; leaves hold
/// the weighted fraction of positive training samples.
class DecisionTree {
public:
    struct Node {
        std::int32_t feature = -1;  // -1 for leaves
        double threshold = 0.0;
        std::int32_t left = -1;
        std::int32_t right = -1;
        double positive_fraction = 0.0;
    };

    /// `weights[i] == 0` excludes sample i.
    static DecisionTree build(const TrainingSet& data, const std::vector<double>& weights,
                              const TreeOptions& options, detail::Rng& rng) {
        DecisionTree tree;
        std::vector<std::uint32_t> root;
        for (std::size_t i = 0; i < data.size(); ++i)
            if (weights[i] > 0) root.push_back(static_cast<std::uint32_t>(i));

        struct Pending {
            std::int32_t node;
            std::vector<std::uint32_t> samples;
            std::size_t depth;
        };
        std::vector<Pending> stack;
        tree.nodes_.push_back({});
        stack.push_back({0, std::move(root), 0});

        while (!stack.empty()) {
            Pending job = std::move(stack.back());
            stack.pop_back();

            double pos = 0, neg = 0;
            for (auto i : job.samples) (data.labels[i] ? pos : neg) += weights[i];
            tree.nodes_[job.node].positive_fraction = (pos + neg) > 0 ? pos / (pos + neg) : 0.0;

            const bool depth_ok = options.max_depth == 0 || job.depth < options.max_depth;
            if (pos == 0 || neg == 0 || !depth_ok || job.samples.size() < options.min_samples_split) continue;

            auto split = find_split(data, weights, job.samples, pos, neg, options, rng);
            if (!split) continue;

            std::vector<std::uint32_t> left, right;
            for (auto i : job.samples)
                (data.vectors[i].weight_at(split->feature) <= split->threshold ? left : right).push_back(i);

            const auto left_id = static_cast<std::int32_t>(tree.nodes_.size());
            tree.nodes_.push_back({});
            tree.nodes_.push_back({});
            Node& node = tree.nodes_[job.node];
            node.feature = static_cast<std::int32_t>(split->feature);
            node.threshold = split->threshold;
            node.left = left_id;
            node.right = left_id + 1;
            // Right pushed first so the left subtree is expanded first.
            stack.push_back({left_id + 1, std::move(right), job.depth + 1});
            stack.push_back({left_id, std::move(left), job.depth + 1});
        }
        return tree;
    }

    const Node& leaf_for(const SparseVector& x) const {
        std::int32_t id = 0;
        while (nodes_[id].feature >= 0) {
            const Node& n = nodes_[id];
            id = x.weight_at(static_cast<std::uint32_t>(n.feature)) <= n.threshold ? n.left : n.right;
        }
        return nodes_[id];
    }

    double score(const SparseVector& x) const { return leaf_for(x).positive_fraction; }

    const std::vector<Node>& nodes() const noexcept { return nodes_; }
    std::size_t depth() const {
        std::vector<std::size_t> d(nodes_.size(), 0);
        std::size_t best = 0;
        for (std::size_t i = 0; i < nodes_.size(); ++i) {
            best = std::max(best, d[i]);
            if (nodes_[i].feature >= 0) d[nodes_[i].left] = d[nodes_[i].right] = d[i] + 1;
        }
        return best;
    }

    Json to_json() const {
        Json f = Json::array(), t = Json::array(), l = Json::array(), r = Json::array(), v = Json::array();
        for (const auto& n : nodes_) {
            f.push_back(n.feature);
            t.push_back(n.threshold);
            l.push_back(n.left);
            r.push_back(n.right);
            v.push_back(n.positive_fraction);
        }
        return {{"feature", f}, {"threshold", t}, {"left", l}, {"right", r}, {"value", v}};
    }

    static DecisionTree from_json(const Json& j, std::size_t dimension) {
        DecisionTree tree;
        const auto& f = j.at("feature");
        const std::size_t count = f.size();
        for (const char* key : {"threshold", "left", "right", "value"})
            if (j.at(key).size() != count) throw ModelIoError("tree arrays differ in length");
        for (std::size_t i = 0; i < count; ++i) {
            Node n{f[i].get<std::int32_t>(), j["threshold"][i].get<double>(), j["left"][i].get<std::int32_t>(),
                   j["right"][i].get<std::int32_t>(), j["value"][i].get<double>()};
            const auto limit = static_cast<std::int32_t>(count);
            if (n.feature >= 0 && (static_cast<std::size_t>(n.feature) >= dimension || n.left <= static_cast<std::int32_t>(i) ||
                                   n.right <= static_cast<std::int32_t>(i) || n.left >= limit || n.right >= limit))
                throw ModelIoError("malformed tree node " + std::to_string(i));
            tree.nodes_.push_back(n);
        }
        if (tree.nodes_.empty()) throw ModelIoError("empty tree");
        return tree;
    }

private:
    struct Split {
        std::uint32_t feature;
        double threshold;
        double gain;
    };

    struct ValueGroup {
        double value;
        double pos;
        double neg;
    };

    static std::optional<Split> find_split(const TrainingSet& data, const std::vector<double>& weights,
                                           const std::vector<std::uint32_t>& samples, double pos, double neg,
                                           const TreeOptions& options, detail::Rng& rng) {
        // Per-feature nonzero values inside this node; absent features are
        // constant (all zero) here and can't split.
        std::unordered_map<std::uint32_t, std::vector<std::uint32_t>> present;
        for (std::size_t k = 0; k < samples.size(); ++k)
            for (const auto& e : data.vectors[samples[k]].entries) present[e.index].push_back(static_cast<std::uint32_t>(k));

        std::vector<std::uint32_t> candidates;
        candidates.reserve(present.size());
        for (const auto& [feature, _] : present) candidates.push_back(feature);
        std::sort(candidates.begin(), candidates.end());
        rng.shuffle(candidates);

        const double total = pos + neg;
        const double parent = total * detail::impurity(options.criterion, pos, neg);
        std::optional<Split> best;
        std::size_t inspected = 0;
        std::vector<ValueGroup> groups;

        for (auto feature : candidates) {
            if (inspected >= options.max_features && best) break;

            // Collect (value, weights) including the implicit zero group.
            const auto& members = present[feature];
            groups.clear();
            double zero_pos = pos, zero_neg = neg;
            for (auto k : members) {
                const auto i = samples[k];
                const double w = weights[i];
                const double value = data.vectors[i].weight_at(feature);
                if (data.labels[i]) {
                    groups.push_back({value, w, 0.0});
                    zero_pos -= w;
                } else {
                    groups.push_back({value, 0.0, w});
                    zero_neg -= w;
                }
            }
            if (members.size() < samples.size()) groups.push_back({0.0, std::max(0.0, zero_pos), std::max(0.0, zero_neg)});
            std::sort(groups.begin(), groups.end(), [](const auto& a, const auto& b) { return a.value < b.value; });
            // Merge equal values.
            std::size_t out = 0;
            for (std::size_t g = 0; g < groups.size(); ++g) {
                if (out > 0 && groups[out - 1].value == groups[g].value) {
                    groups[out - 1].pos += groups[g].pos;
                    groups[out - 1].neg += groups[g].neg;
                } else {
                    groups[out++] = groups[g];
                }
            }
            groups.resize(out);
            if (groups.size() < 2) continue;  // constant feature; does not count
            ++inspected;

            auto evaluate = [&](double threshold, double lp, double ln) {
                const double rp = pos - lp, rn = neg - ln;
                const double child = (lp + ln) * detail::impurity(options.criterion, lp, ln) +
                                     (rp + rn) * detail::impurity(options.criterion, rp, rn);
                const double gain = parent - child;
                if (!best || gain > best->gain) best = Split{feature, threshold, gain};
            };

            if (options.random_splitter) {
                const double lo = groups.front().value, hi = groups.back().value;
                double threshold = lo + rng.unit() * (hi - lo);
                if (threshold >= hi) threshold = lo;
                double lp = 0, ln = 0;
                for (const auto& g : groups) {
                    if (g.value > threshold) break;
                    lp += g.pos;
                    ln += g.neg;
                }
                evaluate(threshold, lp, ln);
            } else {
                double lp = 0, ln = 0;
                for (std::size_t g = 0; g + 1 < groups.size(); ++g) {
                    lp += groups[g].pos;
                    ln += groups[g].neg;
                    double threshold = groups[g].value / 2.0 + groups[g + 1].value / 2.0;
                    if (threshold >= groups[g + 1].value) threshold = groups[g].value;
                    evaluate(threshold, lp, ln);
                }
            }
        }
        return best;
    }

    std::vector<Node> nodes_;
};

inline TreeOptions tree_options(const ClassifierSpec& spec, std::size_t n_features) {
    TreeOptions o;
    o.criterion = spec.choice("criterion") == "entropy" ? Impurity::entropy : Impurity::gini;
    o.max_features = detail::resolve_max_features(spec.param("max_features"), n_features);
    o.max_depth = static_cast<std::size_t>(spec.integer("max_depth"));
    o.min_samples_split = static_cast<std::size_t>(spec.integer("min_samples_split"));
    return o;
}

/// Single CART tree; score = positive fraction of the reached leaf.
class DecisionTreeModel {
public:
    static DecisionTreeModel fit(const ClassifierSpec& spec, const TrainingSet& data, std::uint64_t seed) {
        TreeOptions o = tree_options(spec, data.dimension);
        o.random_splitter = spec.choice("splitter") == "random";
        detail::Rng rng(seed);
        DecisionTreeModel m;
        m.tree_ = DecisionTree::build(data, std::vector<double>(data.size(), 1.0), o, rng);
        m.max_features_ = o.max_features;
        return m;
    }

    double score(const SparseVector& x) const { return tree_.score(x); }
    const DecisionTree& tree() const noexcept { return tree_; }
    std::size_t resolved_max_features() const noexcept { return max_features_; }

    Json to_json() const { return {{"max_features_resolved", max_features_}, {"tree", tree_.to_json()}}; }
    static DecisionTreeModel from_json(const Json& j, std::size_t dimension) {
        DecisionTreeModel m;
        m.max_features_ = j.at("max_features_resolved").get<std::size_t>();
        m.tree_ = DecisionTree::from_json(j.at("tree"), dimension);
        return m;
    }

private:
    DecisionTree tree_;
    std::size_t max_features_ = 0;
};

/// Bagged CART trees; score = mean leaf positive fraction. Tree k is grown
/// from seed `seed` for k = 0 and derive_seed(seed, k) otherwise, so a
/// one-tree forest without bootstrap equals a decision tree fit with the same
/// seed and options.
class RandomForestModel {
public:
    static RandomForestModel fit(const ClassifierSpec& spec, const TrainingSet& data, std::uint64_t seed) {
        const TreeOptions o = tree_options(spec, data.dimension);
        const auto n_trees = static_cast<std::size_t>(spec.integer("n_estimators"));
        const bool bootstrap = spec.flag("bootstrap");
        RandomForestModel m;
        m.max_features_ = o.max_features;
        m.trees_.reserve(n_trees);
        for (std::size_t k = 0; k < n_trees; ++k) {
            const std::uint64_t tree_seed = k == 0 ? seed : detail::derive_seed(seed, k);
            std::vector<double> weights(data.size(), 1.0);
            if (bootstrap) {
                detail::Rng draw(detail::derive_seed(tree_seed, 0xB007));
                std::fill(weights.begin(), weights.end(), 0.0);
                for (std::size_t s = 0; s < data.size(); ++s) weights[draw.below(data.size())] += 1.0;
            }
            detail::Rng rng(tree_seed);
            m.trees_.push_back(DecisionTree::build(data, weights, o, rng));
        }
        return m;
    }

    double score(const SparseVector& x) const {
        double sum = 0.0;
        for (const auto& t : trees_) sum += t.score(x);
        return sum / static_cast<double>(trees_.size());
    }

    const std::vector<DecisionTree>& trees() const noexcept { return trees_; }
    std::size_t resolved_max_features() const noexcept { return max_features_; }

    Json to_json() const {
        Json trees = Json::array();
        for (const auto& t : trees_) trees.push_back(t.to_json());
        return {{"max_features_resolved", max_features_}, {"trees", std::move(trees)}};
    }
    static RandomForestModel from_json(const Json& j, std::size_t dimension) {
        RandomForestModel m;
        m.max_features_ = j.at("max_features_resolved").get<std::size_t>();
        for (const auto& t : j.at("trees")) m.trees_.push_back(DecisionTree::from_json(t, dimension));
        if (m.trees_.empty()) throw ModelIoError("forest without trees");
        return m;
    }

private:
    std::vector<DecisionTree> trees_;
    std::size_t max_features_ = 0;
};

/// Two-class SAMME over depth-1 gini stumps. Each round's stump votes +1/-1
/// with weight alpha_m = learning_rate * ln((1 - err) / err); boosting stops
/// early on a perfect stump (its weight is 1) or when err >= 0.5.
/// score(x) = sigmoid(sum_m alpha_m h_m(x)).
class AdaBoostModel {
public:
    static AdaBoostModel fit(const ClassifierSpec& spec, const TrainingSet& data, std::uint64_t seed) {
        const auto rounds = static_cast<std::size_t>(spec.integer("n_estimators"));
        const double rate = spec.real("learning_rate");
        TreeOptions o;
        o.max_depth = 1;
        o.max_features = std::max<std::size_t>(1, data.dimension);

        const std::size_t n = data.size();
        std::vector<double> w(n, 1.0 / static_cast<double>(n));
        AdaBoostModel m;
        for (std::size_t round = 0; round < rounds; ++round) {
            detail::Rng rng(detail::derive_seed(seed, round));
            DecisionTree stump = DecisionTree::build(data, w, o, rng);

            std::vector<bool> wrong(n);
            double err = 0.0, total = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                wrong[i] = vote(stump, data.vectors[i]) != (data.labels[i] ? 1 : -1);
                total += w[i];
                if (wrong[i]) err += w[i];
            }
            err /= total;
            if (err <= 0.0) {
                m.stumps_.push_back(std::move(stump));
                m.alphas_.push_back(1.0);
                break;
            }
            if (err >= 0.5) {
                if (m.stumps_.empty())
                    throw ValidationError("adaboost: the first stump is no better than chance");
                break;
            }
            const double alpha = rate * std::log((1.0 - err) / err);
            m.stumps_.push_back(std::move(stump));
            m.alphas_.push_back(alpha);
            if (round + 1 == rounds) break;

            double sum = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                if (wrong[i] && w[i] > 0) w[i] *= std::exp(alpha);
                sum += w[i];
            }
            for (auto& wi : w) wi /= sum;
        }
        return m;
    }

    static int vote(const DecisionTree& stump, const SparseVector& x) {
        return stump.score(x) > 0.5 ? 1 : -1;
    }

    /// Weighted vote over the first `rounds` stumps (all when 0).
    double decision(const SparseVector& x, std::size_t rounds = 0) const {
        const std::size_t limit = rounds == 0 ? stumps_.size() : std::min(rounds, stumps_.size());
        double f = 0.0;
        for (std::size_t k = 0; k < limit; ++k) f += alphas_[k] * vote(stumps_[k], x);
        return f;
    }

    double score(const SparseVector& x) const { return detail::sigmoid(decision(x)); }

    std::size_t rounds() const noexcept { return stumps_.size(); }
    const std::vector<double>& alphas() const noexcept { return alphas_; }

    Json to_json() const {
        Json stumps = Json::array();
        for (const auto& s : stumps_) stumps.push_back(s.to_json());
        return {{"alphas", alphas_}, {"stumps", std::move(stumps)}};
    }
    static AdaBoostModel from_json(const Json& j, std::size_t dimension) {
        AdaBoostModel m;
        m.alphas_ = j.at("alphas").get<std::vector<double>>();
        for (const auto& s : j.at("stumps")) m.stumps_.push_back(DecisionTree::from_json(s, dimension));
        if (m.alphas_.size() != m.stumps_.size() || m.stumps_.empty())
            throw ModelIoError("adaboost alphas/stumps mismatch");
        return m;
    }

private:
    std::vector<DecisionTree> stumps_;
    std::vector<double> alphas_;
};

}  // namespace expneed

#endif
