#ifndef EXPNEED_FEATURES_HPP
#define EXPNEED_FEATURES_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "expneed/detail/csv.hpp"
#include "expneed/error.hpp"

namespace expneed {

// ---------------------------------------------------------------------------
// Tokenization

using TokenStream = std::vector<std::string>;

namespace detail {

inline constexpr char32_t replacement_char = 0xFFFD;

/// Decodes one UTF-8 sequence starting at `pos`; malformed input yields
/// U+FFFD and consumes one byte.
inline char32_t decode_utf8(std::string_view s, std::size_t& pos) {
    const auto lead = static_cast<unsigned char>(s[pos]);
    if (lead < 0x80) {
        ++pos;
        return lead;
    }
    int extra = 0;
    char32_t cp = 0;
    if ((lead & 0xE0) == 0xC0) {
        extra = 1;
        cp = lead & 0x1F;
    } else if ((lead & 0xF0) == 0xE0) {
        extra = 2;
        cp = lead & 0x0F;
    } else if ((lead & 0xF8) == 0xF0) {
        extra = 3;
        cp = lead & 0x07;
    } else {
        ++pos;
        return replacement_char;
    }
    if (pos + extra >= s.size()) {
        ++pos;
        return replacement_char;
    }
    for (int k = 1; k <= extra; ++k) {
        const auto cont = static_cast<unsigned char>(s[pos + k]);
        if ((cont & 0xC0) != 0x80) {
            ++pos;
            return replacement_char;
        }
        cp = (cp << 6) | (cont & 0x3F);
    }
    static constexpr char32_t min_for_length[] = {0, 0x80, 0x800, 0x10000};
    if (cp < min_for_length[extra] || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
        ++pos;
        return replacement_char;
    }
    pos += extra + 1;
    return cp;
}

inline void append_utf8(std::string& out, char32_t cp) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

inline bool is_apostrophe(char32_t cp) noexcept { return cp == U'\'' || cp == 0x2019; }

// ASCII letters and digits are word characters. Outside ASCII, punctuation,
// symbol, space, emoji and control blocks separate words; any other code
// point (letters of other scripts, CJK, combining marks) is part of a word.
inline bool is_word_char(char32_t cp) noexcept {
    if (cp < 0x80)
        return (cp >= U'a' && cp <= U'z') || (cp >= U'A' && cp <= U'Z') || (cp >= U'0' && cp <= U'9');
    if (cp <= 0xBF) return false;                    // C1 controls, Latin-1 punctuation
    if (cp == 0xD7 || cp == 0xF7) return false;      // multiplication, division signs
    if (cp >= 0x2000 && cp <= 0x2BFF) return false;  // general punctuation .. misc symbols
    if (cp >= 0x2E00 && cp <= 0x2E7F) return false;  // supplemental punctuation
    if (cp >= 0x3000 && cp <= 0x303F) return false;  // CJK punctuation
    if (cp >= 0xFE00 && cp <= 0xFE0F) return false;  // variation selectors
    if (cp >= 0xFE30 && cp <= 0xFE6F) return false;  // compatibility punctuation
    if (cp == 0xFEFF || cp == replacement_char) return false;
    if ((cp >= 0xFF01 && cp <= 0xFF0F) || (cp >= 0xFF1A && cp <= 0xFF20) ||
        (cp >= 0xFF3B && cp <= 0xFF40) || (cp >= 0xFF5B && cp <= 0xFF65))
        return false;                                // fullwidth punctuation
    if (cp >= 0x1F000 && cp <= 0x1FAFF) return false;  // emoji and pictographs
    if (cp >= 0xE0000) return false;                 // tags, private use planes
    return true;
}

inline char32_t to_lower(char32_t cp) noexcept {
    if (cp < 0x80) return (cp >= U'A' && cp <= U'Z') ? cp + 0x20 : cp;
    if (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7) return cp + 0x20;
    if (cp >= 0x100 && cp <= 0x17F) {
        if (cp == 0x130) return U'i';
        if (cp == 0x178) return 0xFF;
        const bool odd_upper = (cp >= 0x139 && cp <= 0x148) || (cp >= 0x179 && cp <= 0x17E);
        if (odd_upper) return (cp % 2 == 1) ? cp + 1 : cp;
        if (cp == 0x138 || cp == 0x149 || cp == 0x17F) return cp;
        return (cp % 2 == 0) ? cp + 1 : cp;
    }
    if (cp >= 0x391 && cp <= 0x3A9 && cp != 0x3A2) return cp + 0x20;  // Greek
    if (cp >= 0x410 && cp <= 0x42F) return cp + 0x20;                 // Cyrillic
    if (cp >= 0x400 && cp <= 0x40F) return cp + 0x50;
    return cp;
}

}  // namespace detail

/// Lowercased word tokens: maximal runs of word characters, where an
/// apostrophe (' or U+2019, normalized to ') is kept only between two word
/// characters. Everything else, including '?', separates tokens.
inline TokenStream tokenize(std::string_view text) {
    std::vector<char32_t> cps;
    cps.reserve(text.size());
    for (std::size_t pos = 0; pos < text.size();) cps.push_back(detail::decode_utf8(text, pos));

    TokenStream tokens;
    std::string current;
    for (std::size_t i = 0; i < cps.size(); ++i) {
        const char32_t cp = cps[i];
        if (detail::is_word_char(cp)) {
            detail::append_utf8(current, detail::to_lower(cp));
            continue;
        }
        if (detail::is_apostrophe(cp) && !current.empty() && i + 1 < cps.size() &&
            detail::is_word_char(cps[i + 1])) {
            current.push_back('\'');
            continue;
        }
        if (!current.empty()) tokens.push_back(std::move(current));
        current.clear();
    }
    if (!current.empty()) tokens.push_back(std::move(current));
    return tokens;
}

// ---------------------------------------------------------------------------
// Sparse vectors

struct SparseEntry {
    std::uint32_t index = 0;
    double weight = 0.0;

    friend bool operator==(const SparseEntry&, const SparseEntry&) = default;
};

/// Entries sorted by strictly increasing index, all < dimension.
struct SparseVector {
    std::size_t dimension = 0;
    std::vector<SparseEntry> entries;

    bool is_zero() const noexcept { return entries.empty(); }

    double weight_at(std::uint32_t index) const noexcept {
        auto it = std::lower_bound(entries.begin(), entries.end(), index,
                                   [](const SparseEntry& e, std::uint32_t i) { return e.index < i; });
        return (it != entries.end() && it->index == index) ? it->weight : 0.0;
    }

    friend bool operator==(const SparseVector&, const SparseVector&) = default;
};

inline double dot(const SparseVector& a, const SparseVector& b) noexcept {
    double sum = 0.0;
    auto ia = a.entries.begin();
    auto ib = b.entries.begin();
    while (ia != a.entries.end() && ib != b.entries.end()) {
        if (ia->index < ib->index)
            ++ia;
        else if (ib->index < ia->index)
            ++ib;
        else
            sum += (ia++)->weight * (ib++)->weight;
    }
    return sum;
}

inline double dot(const SparseVector& a, std::span<const double> dense) noexcept {
    double sum = 0.0;
    for (const auto& e : a.entries) sum += e.weight * dense[e.index];
    return sum;
}

inline double squared_norm(const SparseVector& a) noexcept {
    double sum = 0.0;
    for (const auto& e : a.entries) sum += e.weight * e.weight;
    return sum;
}

/// ||a - b||^2 by merging the supports (no cancellation from the
/// norm-expansion identity).
inline double squared_distance(const SparseVector& a, const SparseVector& b) noexcept {
    double sum = 0.0;
    auto ia = a.entries.begin();
    auto ib = b.entries.begin();
    while (ia != a.entries.end() || ib != b.entries.end()) {
        double diff;
        if (ib == b.entries.end() || (ia != a.entries.end() && ia->index < ib->index)) {
            diff = (ia++)->weight;
        } else if (ia == a.entries.end() || ib->index < ia->index) {
            diff = (ib++)->weight;
        } else {
            diff = ia->weight - ib->weight;
            ++ia;
            ++ib;
        }
        sum += diff * diff;
    }
    return sum;
}

// ---------------------------------------------------------------------------
// Vocabulary

enum class Embedding : std::uint8_t { bow, tfidf };

constexpr std::string_view to_string(Embedding e) noexcept { return e == Embedding::bow ? "bow" : "tfidf"; }

inline Embedding parse_embedding(std::string_view s) {
    if (s == "bow") return Embedding::bow;
    if (s == "tfidf") return Embedding::tfidf;
    throw ValidationError("unknown embedding '" + std::string(s) + "' (expected bow or tfidf)");
}

/// Term -> dense index, with document frequencies. Terms are indexed in
/// lexicographic (byte) order so the layout does not depend on input order.
class Vocabulary {
public:
    Vocabulary() = default;

    /// Rebuilds a vocabulary from its parts (used by model loading).
    Vocabulary(std::vector<std::string> terms, std::vector<std::size_t> document_frequency,
               std::size_t n_documents)
        : terms_(std::move(terms)), df_(std::move(document_frequency)), n_documents_(n_documents) {
        if (terms_.size() != df_.size()) throw ValidationError("vocabulary terms/df size mismatch");
        for (std::size_t i = 0; i < terms_.size(); ++i) {
            if (df_[i] < 1 || df_[i] > n_documents_)
                throw ValidationError("document frequency out of range for '" + terms_[i] + "'");
            if (!index_.emplace(terms_[i], static_cast<std::uint32_t>(i)).second)
                throw ValidationError("duplicate vocabulary term '" + terms_[i] + "'");
        }
    }

    std::size_t size() const noexcept { return terms_.size(); }
    std::size_t n_documents() const noexcept { return n_documents_; }
    const std::vector<std::string>& terms() const noexcept { return terms_; }
    const std::vector<std::size_t>& document_frequencies() const noexcept { return df_; }

    std::optional<std::uint32_t> index_of(std::string_view term) const {
        auto it = index_.find(std::string(term));
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }

    std::size_t document_frequency(std::string_view term) const {
        auto idx = index_of(term);
        return idx ? df_[*idx] : 0;
    }

    /// Smoothed idf: ln((1 + n) / (1 + df)) + 1.
    double idf(std::uint32_t index) const noexcept {
        return std::log((1.0 + static_cast<double>(n_documents_)) / (1.0 + static_cast<double>(df_[index]))) +
               1.0;
    }

    friend Vocabulary fit_vocabulary(std::span<const TokenStream> corpus);

private:
    std::vector<std::string> terms_;
    std::vector<std::size_t> df_;
    std::size_t n_documents_ = 0;
    std::unordered_map<std::string, std::uint32_t> index_;
};

inline Vocabulary fit_vocabulary(std::span<const TokenStream> corpus) {
    if (corpus.empty()) throw ValidationError("cannot fit a vocabulary on an empty corpus");
    std::map<std::string, std::size_t> df;
    for (const auto& doc : corpus) {
        std::vector<std::string_view> distinct(doc.begin(), doc.end());
        std::sort(distinct.begin(), distinct.end());
        distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
        for (auto term : distinct) ++df[std::string(term)];
    }
    std::vector<std::string> terms;
    std::vector<std::size_t> counts;
    terms.reserve(df.size());
    counts.reserve(df.size());
    for (auto& [term, count] : df) {
        terms.push_back(term);
        counts.push_back(count);
    }
    return Vocabulary(std::move(terms), std::move(counts), corpus.size());
}

inline Vocabulary fit_vocabulary(const std::vector<TokenStream>& corpus) {
    return fit_vocabulary(std::span<const TokenStream>(corpus));
}

/// Raw term counts; out-of-vocabulary tokens are dropped.
inline SparseVector transform_bow(const Vocabulary& vocab, const TokenStream& doc) {
    std::map<std::uint32_t, double> counts;
    for (const auto& token : doc)
        if (auto idx = vocab.index_of(token)) counts[*idx] += 1.0;
    SparseVector v{vocab.size(), {}};
    v.entries.reserve(counts.size());
    for (auto [index, count] : counts) v.entries.push_back({index, count});
    return v;
}

/// tf * smoothed idf, then L2-normalized. A vector with no in-vocabulary
/// tokens stays zero.
inline SparseVector transform_tfidf(const Vocabulary& vocab, const TokenStream& doc) {
    SparseVector v = transform_bow(vocab, doc);
    double norm = 0.0;
    for (auto& e : v.entries) {
        e.weight *= vocab.idf(e.index);
        norm += e.weight * e.weight;
    }
    if (norm > 0.0) {
        norm = std::sqrt(norm);
        for (auto& e : v.entries) e.weight /= norm;
    }
    return v;
}

inline SparseVector transform(const Vocabulary& vocab, Embedding embedding, const TokenStream& doc) {
    return embedding == Embedding::bow ? transform_bow(vocab, doc) : transform_tfidf(vocab, doc);
}

/// Debug dump: `term,index,df`.
inline void write_vocabulary_csv(std::ostream& out, const Vocabulary& vocab) {
    detail::write_csv_row(out, {"term", "index", "df"});
    for (std::size_t i = 0; i < vocab.size(); ++i)
        detail::write_csv_row(out, {vocab.terms()[i], std::to_string(i),
                                    std::to_string(vocab.document_frequencies()[i])});
}

}  // namespace expneed

#endif
