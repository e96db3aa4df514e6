#ifndef EXPNEED_EVALUATION_REPORT_HPP
#define EXPNEED_EVALUATION_REPORT_HPP

#include <cstdio>
#include <string>
#include <vector>

#include <json.hpp>

#include "expneed/evaluation/metrics.hpp"

namespace expneed {

using Json = nlohmann::ordered_json;

inline constexpr int report_schema_version = 1;

/// per_fold: metrics are computed per fold and then averaged. pooled: the
/// fold confusion matrices are summed first.
enum class Averaging { per_fold, pooled };

inline std::string to_string(Averaging a) { return a == Averaging::per_fold ? "per_fold" : "pooled"; }

inline Averaging parse_averaging(const std::string& s) {
    if (s == "per_fold") return Averaging::per_fold;
    if (s == "pooled") return Averaging::pooled;
    throw ValidationError("unknown averaging '" + s + "' (expected per_fold or pooled)");
}

struct FoldOutcome {
    std::size_t repeat = 0;
    std::size_t fold = 0;
    ConfusionMatrix confusion;
    ClassMetrics positive;
    ClassMetrics negative;
    double macro_f_beta = 0.0;
    Json details = Json::object();  // e.g. selected hyperparameters, convergence
};

inline FoldOutcome make_outcome(std::size_t repeat, std::size_t fold, const ConfusionMatrix& cm, double beta) {
    FoldOutcome o{repeat, fold, cm, positive_metrics(cm, beta), negative_metrics(cm, beta), 0.0, Json::object()};
    o.macro_f_beta = (o.positive.f_beta + o.negative.f_beta) / 2.0;
    return o;
}

struct EvalReport {
    std::string label;
    double beta = default_beta;
    Averaging averaging = Averaging::per_fold;
    std::size_t repeats = 1;
    std::size_t folds = 1;
    ClassMetrics positive;
    ClassMetrics negative;
    double macro_f_beta = 0.0;
    ConfusionMatrix confusion;  // summed over all folds
    bool empty = false;
    std::vector<FoldOutcome> per_fold;
};

/// Aggregates fold outcomes (ordered by (repeat, fold)) into one report.
inline EvalReport summarize(std::string label, std::vector<FoldOutcome> outcomes, double beta, Averaging averaging,
                            std::size_t repeats, std::size_t folds) {
    EvalReport r;
    r.label = std::move(label);
    r.beta = beta;
    r.averaging = averaging;
    r.repeats = repeats;
    r.folds = folds;
    for (const auto& o : outcomes) r.confusion += o.confusion;
    r.empty = r.confusion.total() == 0;

    if (averaging == Averaging::pooled || outcomes.size() <= 1) {
        r.positive = positive_metrics(r.confusion, beta);
        r.negative = negative_metrics(r.confusion, beta);
    } else {
        auto accumulate = [&](ClassMetrics FoldOutcome::*cls) {
            ClassMetrics sum;
            for (const auto& o : outcomes) {
                const ClassMetrics& m = o.*cls;
                sum.recall += m.recall;
                sum.precision += m.precision;
                sum.f_beta += m.f_beta;
                sum.support += m.support;
                sum.degenerate = sum.degenerate || m.degenerate;
            }
            const auto n = static_cast<double>(outcomes.size());
            sum.recall /= n;
            sum.precision /= n;
            sum.f_beta /= n;
            sum.support /= n;
            return sum;
        };
        r.positive = accumulate(&FoldOutcome::positive);
        r.negative = accumulate(&FoldOutcome::negative);
    }
    r.macro_f_beta = (r.positive.f_beta + r.negative.f_beta) / 2.0;
    r.per_fold = std::move(outcomes);
    return r;
}

inline Json to_json(const ClassMetrics& m) {
    return {{"recall", m.recall},
            {"precision", m.precision},
            {"f_beta", m.f_beta},
            {"support", m.support},
            {"degenerate", m.degenerate}};
}

inline Json to_json(const ConfusionMatrix& cm) {
    return {{"tp", cm.tp}, {"fp", cm.fp}, {"fn", cm.fn}, {"tn", cm.tn}};
}

inline Json to_json(const EvalReport& r, bool include_folds = true) {
    Json j{{"label", r.label},
           {"beta", r.beta},
           {"averaging", to_string(r.averaging)},
           {"repeats", r.repeats},
           {"folds", r.folds},
           {"empty", r.empty},
           {"explanation_need", to_json(r.positive)},
           {"no_explanation_need", to_json(r.negative)},
           {"macro_f_beta", r.macro_f_beta},
           {"confusion", to_json(r.confusion)}};
    if (include_folds && r.per_fold.size() > 1) {
        Json folds = Json::array();
        for (const auto& o : r.per_fold) {
            Json f{{"repeat", o.repeat},
                   {"fold", o.fold},
                   {"confusion", to_json(o.confusion)},
                   {"explanation_need", to_json(o.positive)},
                   {"no_explanation_need", to_json(o.negative)},
                   {"macro_f_beta", o.macro_f_beta}};
            if (!o.details.empty()) f["details"] = o.details;
            folds.push_back(std::move(f));
        }
        j["per_fold"] = std::move(folds);
    }
    return j;
}

namespace detail {
inline std::string two_decimals(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", x);
    return buf;
}
}  // namespace detail

/// Markdown table with the column order Rec, Pre, F_beta (Expl. Need), Rec,
/// Pre, F_beta (No Expl. Need), Mac-F_beta. Empty groups print dashes.
inline std::string to_markdown(const std::vector<EvalReport>& reports) {
    std::string beta = reports.empty() ? detail::two_decimals(default_beta) : detail::two_decimals(reports.front().beta);
    std::string out = "| Set | Need Rec | Need Pre | Need F_β | No-need Rec | No-need Pre | No-need F_β | Mac-F_β |\n";
    out += "|---|---:|---:|---:|---:|---:|---:|---:|\n";
    for (const auto& r : reports) {
        out += "| " + r.label;
        if (r.empty) {
            out += " | - | - | - | - | - | - | - |\n";
            continue;
        }
        for (const ClassMetrics* m : {&r.positive, &r.negative})
            out += " | " + detail::two_decimals(m->recall) + " | " + detail::two_decimals(m->precision) + " | " +
                   detail::two_decimals(m->f_beta);
        out += " | " + detail::two_decimals(r.macro_f_beta) + " |\n";
    }
    out += "\nβ = " + beta + "\n";
    return out;
}

}  // namespace expneed

#endif
