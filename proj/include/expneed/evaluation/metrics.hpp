#ifndef EXPNEED_EVALUATION_METRICS_HPP
#define EXPNEED_EVALUATION_METRICS_HPP

#include <cstddef>
#include <string>

#include "expneed/error.hpp"

namespace expneed {

/// Weight used throughout: one explanation need per 19.52 reviews, and equal
/// assessment and vetting times, so beta equals lambda.
inline constexpr double default_beta = 19.52;

/// Average number of artifacts inspected per relevant one: total / relevant.
inline double compute_lambda(std::size_t relevant, std::size_t total) {
    if (relevant == 0) throw ValidationError("lambda needs at least one relevant artifact");
    if (relevant > total) throw ValidationError("relevant count exceeds total");
    return static_cast<double>(total) / static_cast<double>(relevant);
}

/// beta = time_a * lambda / time_v, where time_a is the mean time to assess an
/// artifact by hand and time_v the mean time to vet one tool detection.
struct BetaConfig {
    double time_a = 1.0;
    double time_v = 1.0;
    double lambda = default_beta;

    void validate() const {
        if (!(time_a > 0) || !(time_v > 0) || !(lambda > 0))
            throw ValidationError("time_a, time_v and lambda must all be positive");
    }

    double beta() const {
        validate();
        return time_a * lambda / time_v;
    }
};

/// (1 + b^2) P R / (b^2 P + R); 0 when both P and R are 0. beta = 0 gives P.
inline double f_beta(double precision, double recall, double beta) noexcept {
    if (beta == 0.0) return precision;
    if (precision == 0.0 && recall == 0.0) return 0.0;
    const double b2 = beta * beta;
    return (1.0 + b2) * precision * recall / (b2 * precision + recall);
}

struct ConfusionMatrix {
    std::size_t tp = 0, fp = 0, fn = 0, tn = 0;

    void add(bool gold, bool predicted) noexcept {
        if (gold) (predicted ? tp : fn) += 1;
        else (predicted ? fp : tn) += 1;
    }
    std::size_t total() const noexcept { return tp + fp + fn + tn; }

    ConfusionMatrix& operator+=(const ConfusionMatrix& o) noexcept {
        tp += o.tp;
        fp += o.fp;
        fn += o.fn;
        tn += o.tn;
        return *this;
    }
    friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;
};

/// Precision/recall/F_beta for one class. Zero denominators give 0 and set
/// `degenerate`.
struct ClassMetrics {
    double recall = 0.0;
    double precision = 0.0;
    double f_beta = 0.0;
    double support = 0.0;
    bool degenerate = false;
};

namespace detail {

inline ClassMetrics class_metrics(std::size_t hits, std::size_t false_alarms, std::size_t misses, double beta) {
    ClassMetrics m;
    m.support = static_cast<double>(hits + misses);
    const std::size_t predicted = hits + false_alarms;
    const std::size_t actual = hits + misses;
    if (predicted > 0) m.precision = static_cast<double>(hits) / static_cast<double>(predicted);
    else m.degenerate = true;
    if (actual > 0) m.recall = static_cast<double>(hits) / static_cast<double>(actual);
    else m.degenerate = true;
    m.f_beta = f_beta(m.precision, m.recall, beta);
    return m;
}

}  // namespace detail

/// Explanation Need class.
inline ClassMetrics positive_metrics(const ConfusionMatrix& cm, double beta) {
    return detail::class_metrics(cm.tp, cm.fp, cm.fn, beta);
}

/// Not-Explanation-Need class.
inline ClassMetrics negative_metrics(const ConfusionMatrix& cm, double beta) {
    return detail::class_metrics(cm.tn, cm.fn, cm.fp, beta);
}

}  // namespace expneed

#endif
