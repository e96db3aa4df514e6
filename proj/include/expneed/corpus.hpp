#ifndef EXPNEED_CORPUS_HPP
#define EXPNEED_CORPUS_HPP

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "expneed/detail/csv.hpp"
#include "expneed/error.hpp"

namespace expneed {

// ---------------------------------------------------------------------------
// Taxonomy

enum class TaxonomyCategory : std::uint8_t {
    training,
    interaction,
    business,
    dissatisfaction,
    errata,
};

inline constexpr std::array<TaxonomyCategory, 5> all_categories{
    TaxonomyCategory::training, TaxonomyCategory::interaction, TaxonomyCategory::business,
    TaxonomyCategory::dissatisfaction, TaxonomyCategory::errata};

/// Primary: the knowledge gap is the user's only issue. Secondary: it rides on
/// an underlying deficiency of the app.
enum class ConcernLevel : std::uint8_t { primary, secondary };

constexpr ConcernLevel concern_level(TaxonomyCategory c) noexcept {
    switch (c) {
        case TaxonomyCategory::training:
        case TaxonomyCategory::interaction:
        case TaxonomyCategory::business:
            return ConcernLevel::primary;
        case TaxonomyCategory::dissatisfaction:
        case TaxonomyCategory::errata:
            break;
    }
    return ConcernLevel::secondary;
}

constexpr std::string_view to_string(TaxonomyCategory c) noexcept {
    switch (c) {
        case TaxonomyCategory::training: return "training";
        case TaxonomyCategory::interaction: return "interaction";
        case TaxonomyCategory::business: return "business";
        case TaxonomyCategory::dissatisfaction: return "dissatisfaction";
        case TaxonomyCategory::errata: return "errata";
    }
    return "";
}

inline std::optional<TaxonomyCategory> parse_category(std::string_view s) noexcept {
    for (auto c : all_categories)
        if (to_string(c) == s) return c;
    return std::nullopt;
}

enum class SourceStore : std::uint8_t { apple, google, unknown };

constexpr std::string_view to_string(SourceStore s) noexcept {
    switch (s) {
        case SourceStore::apple: return "apple";
        case SourceStore::google: return "google";
        case SourceStore::unknown: return "unknown";
    }
    return "";
}

inline std::optional<SourceStore> parse_store(std::string_view s) noexcept {
    for (auto store : {SourceStore::apple, SourceStore::google, SourceStore::unknown})
        if (to_string(store) == s) return store;
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Reviews and datasets

struct Review {
    std::string review_id;
    std::string app_name;
    SourceStore source_store = SourceStore::unknown;
    std::string text;
    bool explanation_need = false;
    std::optional<TaxonomyCategory> category;

    friend bool operator==(const Review&, const Review&) = default;
};

namespace detail {

inline bool is_blank(std::string_view s) noexcept {
    return std::all_of(s.begin(), s.end(), [](unsigned char ch) {
        return ch == ' ' || ch == '\t' || ch == '\n' || ch == '\r' || ch == '\f' || ch == '\v';
    });
}

/// Returns the violated invariant, or an empty string.
inline std::string review_violation(const Review& r) {
    if (r.review_id.empty()) return "empty review_id";
    if (is_blank(r.text)) return "empty review text";
    if (r.explanation_need && !r.category) return "missing category on positive row";
    if (!r.explanation_need && r.category) return "category on negative row";
    return {};
}

}  // namespace detail

/// Validated, immutable collection of reviews. Safe to share across threads.
class LabeledDataset {
public:
    LabeledDataset() = default;

    LabeledDataset(std::string name, std::vector<Review> reviews)
        : name_(std::move(name)), reviews_(std::move(reviews)) {
        std::unordered_set<std::string_view> seen;
        seen.reserve(reviews_.size());
        for (std::size_t i = 0; i < reviews_.size(); ++i) {
            const Review& r = reviews_[i];
            if (auto why = detail::review_violation(r); !why.empty())
                throw ValidationError(why, i + 1);
            if (!seen.insert(r.review_id).second)
                throw ValidationError("duplicate review_id '" + r.review_id + "'", i + 1);
        }
    }

    const std::string& name() const noexcept { return name_; }
    const std::vector<Review>& reviews() const noexcept { return reviews_; }
    std::size_t size() const noexcept { return reviews_.size(); }
    bool empty() const noexcept { return reviews_.empty(); }
    const Review& operator[](std::size_t i) const { return reviews_[i]; }
    auto begin() const noexcept { return reviews_.begin(); }
    auto end() const noexcept { return reviews_.end(); }

    std::size_t positives() const noexcept {
        return static_cast<std::size_t>(std::count_if(
            reviews_.begin(), reviews_.end(), [](const Review& r) { return r.explanation_need; }));
    }

    /// Sub-dataset of the given positions, in the order given.
    LabeledDataset subset(const std::vector<std::size_t>& positions, std::string name = {}) const {
        std::vector<Review> picked;
        picked.reserve(positions.size());
        for (auto p : positions) picked.push_back(reviews_.at(p));
        return LabeledDataset(name.empty() ? name_ : std::move(name), std::move(picked));
    }

    /// App names in order of first appearance.
    std::vector<std::string> app_names() const {
        std::vector<std::string> names;
        std::unordered_set<std::string_view> seen;
        for (const auto& r : reviews_)
            if (seen.insert(r.app_name).second) names.push_back(r.app_name);
        return names;
    }

    friend bool operator==(const LabeledDataset&, const LabeledDataset&) = default;

private:
    std::string name_;
    std::vector<Review> reviews_;
};

// ---------------------------------------------------------------------------
// Canonical CSV

inline const std::vector<std::string>& dataset_columns() {
    static const std::vector<std::string> columns{
        "review_id", "app_name", "source_store", "review_text", "explanation_need", "category"};
    return columns;
}

/// Parses the canonical dataset CSV. Row numbers in errors count data records
/// from 1 (the header is not counted).
inline LabeledDataset parse_dataset(std::string_view csv_text, std::string name) {
    const auto rows = detail::parse_csv(csv_text);
    detail::expect_header(rows, dataset_columns());

    std::vector<Review> reviews;
    reviews.reserve(rows.size() - 1);
    std::unordered_set<std::string> seen;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto& row = rows[i];
        const std::size_t row_no = i;
        if (row.size() != dataset_columns().size())
            throw ValidationError("expected 6 columns, found " + std::to_string(row.size()), row_no);

        Review r;
        r.review_id = row[0];
        r.app_name = row[1];
        auto store = parse_store(row[2]);
        if (!store) throw ValidationError("bad source_store '" + row[2] + "'", row_no);
        r.source_store = *store;
        r.text = row[3];

        if (row[4] == "1")
            r.explanation_need = true;
        else if (row[4] == "0")
            r.explanation_need = false;
        else
            throw ValidationError("bad boolean explanation_need '" + row[4] + "'", row_no);

        if (!row[5].empty()) {
            auto category = parse_category(row[5]);
            if (!category) throw ValidationError("unknown category '" + row[5] + "'", row_no);
            r.category = category;
        }
        if (auto why = detail::review_violation(r); !why.empty()) throw ValidationError(why, row_no);
        if (!seen.insert(r.review_id).second)
            throw ValidationError("duplicate review_id '" + r.review_id + "'", row_no);
        reviews.push_back(std::move(r));
    }
    return LabeledDataset(std::move(name), std::move(reviews));
}

inline LabeledDataset load_dataset(const std::string& path, std::string name) {
    return parse_dataset(detail::read_file(path), std::move(name));
}

inline void write_dataset(std::ostream& out, const LabeledDataset& ds) {
    detail::write_csv_row(out, dataset_columns());
    for (const auto& r : ds) {
        detail::write_csv_row(out, {r.review_id, r.app_name, std::string(to_string(r.source_store)),
                                    r.text, r.explanation_need ? "1" : "0",
                                    r.category ? std::string(to_string(*r.category)) : ""});
    }
}

inline void save_dataset(const std::string& path, const LabeledDataset& ds) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot write file: " + path);
    write_dataset(out, ds);
}

// ---------------------------------------------------------------------------
// Statistics

/// count / total as a ratio, with exact round-half-up percent formatting.
struct Share {
    std::size_t count = 0;
    std::size_t total = 0;

    double ratio() const noexcept {
        return total == 0 ? 0.0 : static_cast<double>(count) / static_cast<double>(total);
    }

    /// Percentage in tenths of a percent, rounded half up using integer
    /// arithmetic (no binary floating-point ties).
    std::uint64_t permille_rounded() const noexcept {
        if (total == 0) return 0;
        return (std::uint64_t{count} * 2000 + total) / (std::uint64_t{total} * 2);
    }

    /// e.g. "4.4%".
    std::string percent() const {
        const auto tenths = permille_rounded();
        return std::to_string(tenths / 10) + "." + std::to_string(tenths % 10) + "%";
    }
};

struct AppStats {
    std::string app_name;
    std::size_t total = 0;
    std::size_t needs = 0;
    std::array<std::size_t, 5> per_category{};

    Share needs_share() const noexcept { return {needs, total}; }
};

struct DatasetStats {
    std::size_t total = 0;
    std::size_t needs = 0;
    std::array<std::size_t, 5> per_category{};
    std::vector<AppStats> per_app;  // first-appearance order

    Share needs_share() const noexcept { return {needs, total}; }
    double needs_pct() const noexcept { return needs_share().ratio(); }

    std::size_t category_count(TaxonomyCategory c) const noexcept {
        return per_category[static_cast<std::size_t>(c)];
    }
    /// Share of the category among all explanation needs.
    Share category_share(TaxonomyCategory c) const noexcept { return {category_count(c), needs}; }

    Share concern_share(ConcernLevel level) const noexcept {
        std::size_t n = 0;
        for (auto c : all_categories)
            if (concern_level(c) == level) n += category_count(c);
        return {n, needs};
    }
};

inline DatasetStats dataset_stats(const LabeledDataset& ds) {
    DatasetStats stats;
    std::unordered_map<std::string, std::size_t> app_slot;
    for (const auto& r : ds) {
        auto [it, inserted] = app_slot.try_emplace(r.app_name, stats.per_app.size());
        if (inserted) stats.per_app.push_back(AppStats{r.app_name});
        AppStats& app = stats.per_app[it->second];

        ++stats.total;
        ++app.total;
        if (r.explanation_need) {
            ++stats.needs;
            ++app.needs;
            const auto slot = static_cast<std::size_t>(*r.category);
            ++stats.per_category[slot];
            ++app.per_category[slot];
        }
    }
    return stats;
}

// ---------------------------------------------------------------------------
// Selection

inline LabeledDataset filter_by_apps(const LabeledDataset& ds, const std::set<std::string>& apps) {
    if (apps.empty()) throw ValidationError("app selection is empty");
    const auto available = ds.app_names();
    for (const auto& app : apps) {
        if (std::find(available.begin(), available.end(), app) == available.end()) {
            std::string listing;
            for (const auto& a : available) listing += (listing.empty() ? "" : ", ") + a;
            throw ValidationError("unknown app '" + app + "'; available: " + listing);
        }
    }
    std::vector<Review> kept;
    for (const auto& r : ds)
        if (apps.contains(r.app_name)) kept.push_back(r);
    return LabeledDataset(ds.name(), std::move(kept));
}

}  // namespace expneed

#endif
