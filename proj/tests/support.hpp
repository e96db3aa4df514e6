#ifndef EXPNEED_TESTS_SUPPORT_HPP
#define EXPNEED_TESTS_SUPPORT_HPP

#include <array>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "expneed/expneed.hpp"

namespace expneed::testing {

inline Review make_review(std::string id, std::string app, std::string text, bool need,
                          std::optional<TaxonomyCategory> category = std::nullopt) {
    if (need && !category) category = TaxonomyCategory::interaction;
    return Review{std::move(id), std::move(app), SourceStore::google, std::move(text), need, category};
}

/// Row-count description of one app: total reviews and positives per category.
struct AppCounts {
    std::string app;
    std::size_t total;
    std::array<std::size_t, 5> per_category;  // training, interaction, business, dissatisfaction, errata
};

/// Materializes reviews with exactly the requested counts.
inline LabeledDataset dataset_from_counts(const std::string& name, const std::vector<AppCounts>& apps) {
    std::vector<Review> reviews;
    std::size_t id = 0;
    for (const auto& a : apps) {
        std::size_t needs = 0;
        for (std::size_t c = 0; c < 5; ++c) {
            for (std::size_t i = 0; i < a.per_category[c]; ++i)
                reviews.push_back(make_review("r" + std::to_string(id++), a.app, "why is this happening?", true,
                                              all_categories[c]));
            needs += a.per_category[c];
        }
        for (std::size_t i = needs; i < a.total; ++i)
            reviews.push_back(make_review("r" + std::to_string(id++), a.app, "great app love it", false));
    }
    return LabeledDataset(name, std::move(reviews));
}

/// Learnable synthetic corpus: positives draw from question-like vocabulary,
/// negatives from praise/complaint vocabulary, with shared filler words.
inline LabeledDataset synthetic_corpus(std::size_t positives, std::size_t negatives, std::uint64_t seed,
                                       const std::string& app = "Synth") {
    static const std::vector<std::string> pos_words{"how", "why", "where", "explain", "understand", "confusing",
                                                    "what", "means", "unclear", "cannot", "find", "setting"};
    static const std::vector<std::string> neg_words{"great", "love", "awesome", "perfect", "thanks", "nice",
                                                    "excellent", "fantastic", "best", "wonderful", "crash", "slow"};
    static const std::vector<std::string> filler{"app", "the", "this", "it", "is", "my", "phone", "update", "use"};
    std::mt19937_64 gen(seed);
    auto pick = [&](const std::vector<std::string>& words) {
        return words[std::uniform_int_distribution<std::size_t>(0, words.size() - 1)(gen)];
    };
    std::vector<Review> reviews;
    const std::size_t n = positives + negatives;
    std::size_t p = 0, q = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const bool need = (p < positives) && (q >= negatives || i % 2 == 0);
        std::string text;
        for (int w = 0; w < 6; ++w) {
            if (!text.empty()) text += ' ';
            text += w % 2 == 0 ? pick(need ? pos_words : neg_words) : pick(filler);
        }
        reviews.push_back(make_review(app + "-" + std::to_string(i), app, text, need,
                                      need ? std::optional(all_categories[i % 5]) : std::nullopt));
        (need ? p : q)++;
    }
    return LabeledDataset("synthetic", std::move(reviews));
}

inline std::string csv_text(const LabeledDataset& ds) {
    std::ostringstream out;
    write_dataset(out, ds);
    return out.str();
}

/// Unique scratch directory removed on destruction.
class TempDir {
public:
    TempDir() {
        static std::size_t counter = 0;
        path_ = std::filesystem::temp_directory_path() /
                ("expneed-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }

    std::string file(const std::string& name) const { return (path_ / name).string(); }

    std::string write(const std::string& name, const std::string& content) const {
        std::ofstream(file(name), std::ios::binary) << content;
        return file(name);
    }

private:
    std::filesystem::path path_;
};

inline std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

}  // namespace expneed::testing

#endif
