#ifndef EXPNEED_CLASSIFIERS_NAIVE_BAYES_HPP
#define EXPNEED_CLASSIFIERS_NAIVE_BAYES_HPP

#include <array>
#include <cmath>
#include <vector>

#include "expneed/classifiers/common.hpp"
#include "expneed/classifiers/spec.hpp"

namespace expneed {

/// Multinomial naive Bayes with additive (Lidstone) smoothing:
///   theta[c][t] = (N[c][t] + alpha) / (N[c] + alpha * |V|)
/// where N[c][t] sums feature t's weight over class-c documents. Without
/// fit_prior the class prior is uniform.
class NaiveBayesModel {
public:
    static NaiveBayesModel fit(const ClassifierSpec& spec, const TrainingSet& data) {
        const double alpha = spec.real("alpha");
        const auto counts = data.class_counts();
        NaiveBayesModel m;
        for (int c = 0; c < 2; ++c) {
            m.log_prior_[c] = spec.flag("fit_prior")
                                  ? std::log(static_cast<double>(counts[c]) / static_cast<double>(data.size()))
                                  : std::log(0.5);
            m.log_theta_[c].assign(data.dimension, 0.0);
        }
        std::array<std::vector<double>, 2> feature_mass{std::vector<double>(data.dimension, 0.0),
                                                        std::vector<double>(data.dimension, 0.0)};
        std::array<double, 2> class_mass{0.0, 0.0};
        for (std::size_t i = 0; i < data.size(); ++i) {
            const int c = data.labels[i] ? 1 : 0;
            for (const auto& e : data.vectors[i].entries) {
                feature_mass[c][e.index] += e.weight;
                class_mass[c] += e.weight;
            }
        }
        const double smoothing = alpha * static_cast<double>(data.dimension);
        for (int c = 0; c < 2; ++c)
            for (std::size_t t = 0; t < data.dimension; ++t)
                m.log_theta_[c][t] = std::log((feature_mass[c][t] + alpha) / (class_mass[c] + smoothing));
        return m;
    }

    /// Joint log-likelihoods log P(c) + sum_t x_t log theta[c][t].
    std::array<double, 2> joint_log_likelihood(const SparseVector& x) const {
        std::array<double, 2> jll = log_prior_;
        for (int c = 0; c < 2; ++c)
            for (const auto& e : x.entries) jll[c] += e.weight * log_theta_[c][e.index];
        return jll;
    }

    /// Normalized class posteriors {P(negative|x), P(positive|x)}.
    std::array<double, 2> posteriors(const SparseVector& x) const {
        const auto jll = joint_log_likelihood(x);
        const double hi = std::max(jll[0], jll[1]);
        const double e0 = std::exp(jll[0] - hi), e1 = std::exp(jll[1] - hi);
        return {e0 / (e0 + e1), e1 / (e0 + e1)};
    }

    double score(const SparseVector& x) const { return posteriors(x)[1]; }

    Json to_json() const {
        return {{"log_prior", log_prior_}, {"log_theta_negative", log_theta_[0]},
                {"log_theta_positive", log_theta_[1]}};
    }

    static NaiveBayesModel from_json(const Json& j, std::size_t dimension) {
        NaiveBayesModel m;
        m.log_prior_ = j.at("log_prior").get<std::array<double, 2>>();
        m.log_theta_[0] = j.at("log_theta_negative").get<std::vector<double>>();
        m.log_theta_[1] = j.at("log_theta_positive").get<std::vector<double>>();
        if (m.log_theta_[0].size() != dimension || m.log_theta_[1].size() != dimension)
            throw ModelIoError("naive Bayes parameter length does not match the vocabulary");
        return m;
    }

private:
    std::array<double, 2> log_prior_{};
    std::array<std::vector<double>, 2> log_theta_;
};

}  // namespace expneed

#endif
