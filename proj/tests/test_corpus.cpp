#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "support.hpp"

using namespace expneed;
using expneed::testing::AppCounts;
using expneed::testing::dataset_from_counts;
using expneed::testing::make_review;

namespace {

const std::string header = "review_id,app_name,source_store,review_text,explanation_need,category\n";

std::string validation_message(const std::string& csv) {
    try {
        parse_dataset(csv, "t");
    } catch (const ValidationError& e) {
        return e.what();
    }
    return {};
}

std::size_t validation_row(const std::string& csv) {
    try {
        parse_dataset(csv, "t");
    } catch (const ValidationError& e) {
        return e.row().value_or(0);
    }
    return 0;
}

}  // namespace

TEST(LoadDataset, ThreeWellFormedRows) {
    const auto ds = parse_dataset(header +
                                      "1,Alpha,apple,\"Why, oh why?\",1,training\n"
                                      "2,Alpha,google,love it,0,\n"
                                      "3,Beta,unknown,\"multi\nline \"\"quoted\"\"\",0,\n",
                                  "fixture");
    ASSERT_EQ(ds.size(), 3u);
    EXPECT_EQ(ds.name(), "fixture");
    EXPECT_EQ(ds[0].text, "Why, oh why?");
    EXPECT_EQ(ds[0].category, TaxonomyCategory::training);
    EXPECT_EQ(ds[0].source_store, SourceStore::apple);
    EXPECT_EQ(ds[2].text, "multi\nline \"quoted\"");
    EXPECT_EQ(ds.positives(), 1u);
}

TEST(LoadDataset, AcceptsCrlfAndBom) {
    const auto ds = parse_dataset("\xEF\xBB\xBF" + std::string("review_id,app_name,source_store,review_text,"
                                                            "explanation_need,category\r\n1,A,apple,ok,0,\r\n"),
                                  "t");
    ASSERT_EQ(ds.size(), 1u);
    EXPECT_EQ(ds[0].text, "ok");
}

TEST(LoadDataset, CategoryOnNegativeRow) {
    const std::string csv = header + "1,A,apple,fine,0,\n2,A,apple,broken,0,errata\n";
    EXPECT_NE(validation_message(csv).find("category on negative row"), std::string::npos);
    EXPECT_EQ(validation_row(csv), 2u);
}

TEST(LoadDataset, MalformedRowsNameTheViolation) {
    EXPECT_NE(validation_message(header + "1,A,apple,x,yes,\n").find("bad boolean"), std::string::npos);
    EXPECT_NE(validation_message(header + "1,A,apple,x,1,\n").find("missing category"), std::string::npos);
    EXPECT_NE(validation_message(header + "1,A,apple,x\n").find("expected 6 columns"), std::string::npos);
    EXPECT_NE(validation_message(header + "1,A,apple,x,0,\n1,A,apple,y,0,\n").find("duplicate review_id"),
              std::string::npos);
    EXPECT_EQ(validation_row(header + "1,A,apple,x,0,\n1,A,apple,y,0,\n"), 2u);
    EXPECT_NE(validation_message(header + "1,A,apple,x,1,weird\n").find("unknown category"), std::string::npos);
    EXPECT_NE(validation_message(header + "1,A,huawei,x,0,\n").find("source_store"), std::string::npos);
    EXPECT_NE(validation_message(header + "1,A,apple,   ,0,\n").find("empty review text"), std::string::npos);
    EXPECT_FALSE(validation_message("id,text\n1,x\n").empty());
    EXPECT_FALSE(validation_message(header + "1,A,apple,\"unterminated,0,\n").empty());
}

TEST(LoadDataset, MissingFileIsAValidationError) {
    EXPECT_THROW(load_dataset("/nonexistent/dir/file.csv", "x"), ValidationError);
}

TEST(LoadDataset, ExportRoundTrip) {
    std::vector<Review> reviews{
        make_review("a\"1", "App, Inc.", "line one\nline two, with \"quotes\"", true, TaxonomyCategory::business),
        make_review("2", "Zed", "  padded  ", false),
        make_review("3", "Zed", "Ünïcödé ‘quotes’ and emoji 😀?", true, TaxonomyCategory::errata),
    };
    reviews[1].source_store = SourceStore::unknown;
    const LabeledDataset ds("rt", reviews);
    const auto reloaded = parse_dataset(expneed::testing::csv_text(ds), "rt");
    EXPECT_EQ(reloaded.reviews(), ds.reviews());
}

TEST(LoadDataset, RoundTripOfGeneratedCorpus) {
    const auto ds = expneed::testing::synthetic_corpus(40, 60, 7);
    expneed::testing::TempDir dir;
    save_dataset(dir.file("ds.csv"), ds);
    EXPECT_EQ(load_dataset(dir.file("ds.csv"), "x").reviews(), ds.reviews());
}

TEST(DatasetInvariants, ConstructorRejectsViolations) {
    EXPECT_THROW(LabeledDataset("x", {make_review("", "A", "t", false)}), ValidationError);
    EXPECT_THROW(LabeledDataset("x", {make_review("1", "A", "t", false), make_review("1", "A", "u", false)}),
                 ValidationError);
    Review bad = make_review("1", "A", "t", false);
    bad.category = TaxonomyCategory::errata;
    EXPECT_THROW(LabeledDataset("x", {bad}), ValidationError);
}

TEST(DatasetStats, UnknownAppsRow) {
    const auto ds = dataset_from_counts("unknown-apps", {{"Unkown Apps", 2449, {20, 20, 20, 28, 20}}});
    const auto s = dataset_stats(ds);
    EXPECT_EQ(s.total, 2449u);
    EXPECT_EQ(s.needs, 108u);
    EXPECT_NEAR(s.needs_pct(), 0.044, 0.0005);
    EXPECT_EQ(s.needs_share().percent(), "4.4%");
}

TEST(DatasetStats, FullCorpusTotalRow) {
    const auto ds = dataset_from_counts("all", {{"Everything", 5564, {53, 59, 37, 92, 44}}});
    const auto s = dataset_stats(ds);
    EXPECT_EQ(s.total, 5564u);
    EXPECT_EQ(s.needs, 285u);
    EXPECT_EQ(s.needs_share().percent(), "5.1%");
    EXPECT_EQ(s.category_share(TaxonomyCategory::training).percent(), "18.6%");
    EXPECT_EQ(s.category_share(TaxonomyCategory::interaction).percent(), "20.7%");
    EXPECT_EQ(s.category_share(TaxonomyCategory::business).percent(), "13.0%");
    EXPECT_EQ(s.category_share(TaxonomyCategory::dissatisfaction).percent(), "32.3%");
    EXPECT_EQ(s.category_share(TaxonomyCategory::errata).percent(), "15.4%");
    EXPECT_EQ(s.concern_share(ConcernLevel::primary).count, 149u);
    EXPECT_EQ(s.concern_share(ConcernLevel::primary).percent(), "52.3%");
}

TEST(DatasetStats, ZeroPositives) {
    const auto ds = dataset_from_counts("neg", {{"A", 10, {0, 0, 0, 0, 0}}});
    const auto s = dataset_stats(ds);
    EXPECT_EQ(s.needs_pct(), 0.0);
    for (auto c : all_categories) {
        EXPECT_EQ(s.category_count(c), 0u);
        EXPECT_EQ(s.category_share(c).ratio(), 0.0);
    }
    EXPECT_EQ(s.needs_share().percent(), "0.0%");
}

TEST(DatasetStats, PerAppRowsCountedIndependently) {
    const auto ds = dataset_from_counts("g", {{"WeChat", 125, {4, 6, 2, 4, 2}},
                                              {"Memrise", 122, {0, 1, 0, 0, 0}},
                                              {"Duolingo", 118, {0, 0, 1, 1, 0}},
                                              {"GitHub", 121, {1, 1, 0, 1, 0}}});
    const auto s = dataset_stats(ds);
    ASSERT_EQ(s.per_app.size(), 4u);
    // Oracle: count rows straight off the review list.
    for (const auto& app : s.per_app) {
        std::size_t total = 0, needs = 0;
        for (const auto& r : ds) {
            if (r.app_name != app.app_name) continue;
            ++total;
            needs += r.explanation_need;
        }
        EXPECT_EQ(app.total, total) << app.app_name;
        EXPECT_EQ(app.needs, needs) << app.app_name;
    }
    EXPECT_EQ(s.per_app[0].app_name, "WeChat");
    EXPECT_EQ(s.per_app[0].needs_share().percent(), "14.4%");
    EXPECT_EQ(s.total, 486u);
    EXPECT_EQ(s.needs, 24u);
}

TEST(DatasetStats, PercentRoundsHalfUp) {
    EXPECT_EQ((Share{1, 8}).percent(), "12.5%");    // exact
    EXPECT_EQ((Share{1, 16}).percent(), "6.3%");    // 6.25 -> 6.3
    EXPECT_EQ((Share{1, 32}).percent(), "3.1%");    // 3.125 -> 3.1
    EXPECT_EQ((Share{1, 2000}).percent(), "0.1%");  // 0.05 -> 0.1
    EXPECT_EQ((Share{0, 0}).percent(), "0.0%");
}

TEST(DatasetStats, PermutationInvariant) {
    const auto ds = expneed::testing::synthetic_corpus(30, 70, 3);
    std::vector<Review> shuffled = ds.reviews();
    std::mt19937 gen(11);
    for (int trial = 0; trial < 5; ++trial) {
        std::shuffle(shuffled.begin(), shuffled.end(), gen);
        const auto a = dataset_stats(ds);
        const auto b = dataset_stats(LabeledDataset("p", shuffled));
        EXPECT_EQ(a.total, b.total);
        EXPECT_EQ(a.needs, b.needs);
        EXPECT_EQ(a.per_category, b.per_category);
    }
}

TEST(FilterByApps, GeneralDsSlice) {
    const auto ds = dataset_from_counts("g", {{"WeChat", 125, {4, 6, 2, 4, 2}},
                                              {"Memrise", 122, {0, 1, 0, 0, 0}},
                                              {"Duolingo", 118, {0, 0, 1, 1, 0}},
                                              {"GitHub", 121, {1, 1, 0, 1, 0}}});
    const auto wechat = filter_by_apps(ds, {"WeChat"});
    EXPECT_EQ(wechat.size(), 125u);
    EXPECT_EQ(wechat.positives(), 18u);
    EXPECT_EQ(filter_by_apps(ds, {"WeChat", "Memrise", "Duolingo", "GitHub"}).reviews(), ds.reviews());
}

TEST(FilterByApps, PreservesOrderAndSize) {
    std::vector<Review> reviews;
    for (int i = 0; i < 30; ++i)
        reviews.push_back(make_review(std::to_string(i), i % 3 == 0 ? "A" : (i % 3 == 1 ? "B" : "C"), "t", false));
    const LabeledDataset ds("x", reviews);
    const auto b = filter_by_apps(ds, {"B"});
    ASSERT_EQ(b.size(), 10u);
    for (std::size_t i = 1; i < b.size(); ++i) EXPECT_LT(std::stoi(b[i - 1].review_id), std::stoi(b[i].review_id));
}

TEST(FilterByApps, Errors) {
    const auto ds = dataset_from_counts("g", {{"WeChat", 3, {0, 1, 0, 0, 0}}, {"GitHub", 2, {0, 0, 0, 0, 0}}});
    EXPECT_THROW(filter_by_apps(ds, {}), ValidationError);
    try {
        filter_by_apps(ds, {"Signal"});
        FAIL();
    } catch (const ValidationError& e) {
        const std::string msg = e.what();
        EXPECT_NE(msg.find("Signal"), std::string::npos);
        EXPECT_NE(msg.find("WeChat, GitHub"), std::string::npos);
    }
}

TEST(Taxonomy, ConcernLevelsAndNames) {
    EXPECT_EQ(concern_level(TaxonomyCategory::training), ConcernLevel::primary);
    EXPECT_EQ(concern_level(TaxonomyCategory::interaction), ConcernLevel::primary);
    EXPECT_EQ(concern_level(TaxonomyCategory::business), ConcernLevel::primary);
    EXPECT_EQ(concern_level(TaxonomyCategory::dissatisfaction), ConcernLevel::secondary);
    EXPECT_EQ(concern_level(TaxonomyCategory::errata), ConcernLevel::secondary);
    for (auto c : all_categories) EXPECT_EQ(parse_category(to_string(c)), c);
    EXPECT_FALSE(parse_category("bogus"));
}
