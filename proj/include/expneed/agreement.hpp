#ifndef EXPNEED_AGREEMENT_HPP
#define EXPNEED_AGREEMENT_HPP

#include <cmath>
#include <cstddef>
#include <string>
#include <string_view>
#include <unordered_set>

#include "expneed/detail/csv.hpp"
#include "expneed/error.hpp"

namespace expneed {

/// Paired binary ratings:
///   a: both negative, b: rater 1 positive / rater 2 negative,
///   c: rater 1 negative / rater 2 positive, d: both positive.
struct ContingencyTable2x2 {
    std::size_t a = 0, b = 0, c = 0, d = 0;

    std::size_t n() const noexcept { return a + b + c + d; }

    void add(bool rater1, bool rater2) noexcept {
        if (rater1) (rater2 ? d : b) += 1;
        else (rater2 ? c : a) += 1;
    }

    void validate() const {
        if (n() == 0) throw ValidationError("contingency table is empty");
    }

    friend bool operator==(const ContingencyTable2x2&, const ContingencyTable2x2&) = default;
};

/// Chance-corrected coefficient plus whether chance agreement was 1 (the
/// coefficient is then defined as 1 for perfect observed agreement, else 0).
struct Coefficient {
    double value = 0.0;
    bool degenerate = false;
};

inline double percent_agreement(const ContingencyTable2x2& t) {
    t.validate();
    return static_cast<double>(t.a + t.d) / static_cast<double>(t.n());
}

namespace detail {
inline Coefficient chance_corrected(double observed, double expected) {
    if (expected >= 1.0) {
        if (observed >= 1.0) return {1.0, true};
        return {0.0, true};
    }
    return {(observed - expected) / (1.0 - expected), false};
}
}  // namespace detail

/// Cohen's kappa; chance agreement from the product of rater marginals.
inline Coefficient cohens_kappa_detail(const ContingencyTable2x2& t) {
    t.validate();
    const double n = static_cast<double>(t.n());
    const double r1_pos = static_cast<double>(t.b + t.d) / n;
    const double r2_pos = static_cast<double>(t.c + t.d) / n;
    const double expected = r1_pos * r2_pos + (1.0 - r1_pos) * (1.0 - r2_pos);
    return detail::chance_corrected(percent_agreement(t), expected);
}

inline double cohens_kappa(const ContingencyTable2x2& t) { return cohens_kappa_detail(t).value; }

/// Gwet's AC1 for two raters and two categories; chance agreement is
/// 2 pi (1 - pi) with pi the mean positive-rating share of the two raters.
inline Coefficient gwets_ac1_detail(const ContingencyTable2x2& t) {
    t.validate();
    const double n = static_cast<double>(t.n());
    const double pi = (static_cast<double>(t.b + t.d) / n + static_cast<double>(t.c + t.d) / n) / 2.0;
    const double expected = 2.0 * pi * (1.0 - pi);
    return detail::chance_corrected(percent_agreement(t), expected);
}

inline double gwets_ac1(const ContingencyTable2x2& t) { return gwets_ac1_detail(t).value; }

enum class AgreementBand { none, slight, fair, moderate, substantial, almost_perfect };

inline std::string_view to_string(AgreementBand b) noexcept {
    switch (b) {
        case AgreementBand::none: return "none";
        case AgreementBand::slight: return "slight";
        case AgreementBand::fair: return "fair";
        case AgreementBand::moderate: return "moderate";
        case AgreementBand::substantial: return "substantial";
        case AgreementBand::almost_perfect: return "almost perfect";
    }
    return "";
}

/// Landis-Koch band of round(value, 2) (half away from zero):
/// <= 0 none, .01-.20 slight, .21-.40 fair, .41-.60 moderate,
/// .61-.80 substantial, .81-1.00 almost perfect.
inline AgreementBand landis_koch_band(double value) {
    if (!(value >= -1.0 - 1e-12 && value <= 1.0 + 1e-12))
        throw ValidationError("agreement coefficient outside [-1, 1]");
    // The 1e-9 nudge lets decimal ties such as 0.205 round up even though
    // their binary representation sits just below the tie.
    const auto hundredths = static_cast<long>(std::floor(std::abs(value) * 100.0 + 0.5 + 1e-9)) * (value < 0 ? -1 : 1);
    if (hundredths <= 0) return AgreementBand::none;
    if (hundredths <= 20) return AgreementBand::slight;
    if (hundredths <= 40) return AgreementBand::fair;
    if (hundredths <= 60) return AgreementBand::moderate;
    if (hundredths <= 80) return AgreementBand::substantial;
    return AgreementBand::almost_perfect;
}

struct AgreementReport {
    ContingencyTable2x2 table;
    double percent_agreement = 0.0;
    Coefficient cohens_kappa;
    Coefficient gwets_ac1;
    AgreementBand kappa_band = AgreementBand::none;
    AgreementBand ac1_band = AgreementBand::none;
};

inline AgreementReport agreement_report(const ContingencyTable2x2& t) {
    AgreementReport r;
    r.table = t;
    r.percent_agreement = percent_agreement(t);
    r.cohens_kappa = cohens_kappa_detail(t);
    r.gwets_ac1 = gwets_ac1_detail(t);
    r.kappa_band = landis_koch_band(r.cohens_kappa.value);
    r.ac1_band = landis_koch_band(r.gwets_ac1.value);
    return r;
}

/// Reads `review_id,rater1,rater2` rows (ratings 0/1) into a table.
inline ContingencyTable2x2 parse_annotation_pairs(std::string_view csv_text) {
    const auto rows = detail::parse_csv(csv_text);
    detail::expect_header(rows, {"review_id", "rater1", "rater2"});
    ContingencyTable2x2 t;
    std::unordered_set<std::string> ids;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto& row = rows[i];
        if (row.size() != 3) throw ValidationError("expected 3 columns, found " + std::to_string(row.size()), i);
        if (row[0].empty()) throw ValidationError("empty review_id", i);
        if (!ids.insert(row[0]).second) throw ValidationError("duplicate review_id '" + row[0] + "'", i);
        auto rating = [&](const std::string& v, const char* who) {
            if (v == "0") return false;
            if (v == "1") return true;
            throw ValidationError(std::string(v.empty() ? "missing " : "bad ") + who + " rating '" + v + "'", i);
        };
        t.add(rating(row[1], "rater1"), rating(row[2], "rater2"));
    }
    t.validate();
    return t;
}

inline ContingencyTable2x2 pair_annotations(const std::string& path) {
    return parse_annotation_pairs(detail::read_file(path));
}

}  // namespace expneed

#endif
