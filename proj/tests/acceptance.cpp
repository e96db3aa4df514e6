// Acceptance checks: one PASS/FAIL line per criterion.
// The published-dataset checks run only when EXPNEED_CROSSVAL_DS and
// EXPNEED_GENERAL_DS name canonical CSV files. Without them those criteria
// print FAIL marked unattainable, and only they are left out of the exit code.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "expneed/expneed.hpp"

using namespace expneed;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;
int unattainable = 0;

void report(const std::string& id, const std::string& name, const char* status, const std::string& detail) {
    if (std::string(status) == "FAIL") ++failures;
    std::cout << "[" << status << "] " << id << " " << name << " -- " << detail << std::endl;
}

void report_unattainable(const std::string& id, const std::string& name, const std::string& reason) {
    ++unattainable;
    std::cout << "[FAIL] " << id << " " << name << " -- unattainable: " << reason << std::endl;
}

/// Collects named sub-check failures for one criterion.
struct Checks {
    std::vector<std::string> failed;
    std::size_t total = 0;

    void expect(bool ok, const std::string& what) {
        ++total;
        if (!ok) failed.push_back(what);
    }
    bool ok() const { return failed.empty(); }
    std::string summary() const {
        if (failed.empty()) return std::to_string(total) + " checks";
        std::string s = std::to_string(failed.size()) + "/" + std::to_string(total) + " failed:";
        for (const auto& f : failed) s += " " + f + ";";
        return s;
    }
};

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(double x, int digits = 4) {
    std::ostringstream s;
    s.precision(digits);
    s << std::fixed << x;
    return s.str();
}

double round2(double x) { return std::round(x * 100.0) / 100.0; }

Review review(std::string id, std::string text, bool need) {
    Review r;
    r.review_id = std::move(id);
    r.app_name = "Synth";
    r.text = std::move(text);
    r.explanation_need = need;
    if (need) r.category = TaxonomyCategory::interaction;
    return r;
}

LabeledDataset synthetic(std::size_t pos, std::size_t neg, std::uint64_t seed) {
    static const std::vector<std::string> pos_words{"how", "why", "where", "explain", "unclear", "what"};
    static const std::vector<std::string> neg_words{"great", "love", "awesome", "crash", "slow", "nice"};
    static const std::vector<std::string> filler{"app", "the", "it", "my", "phone", "update"};
    std::mt19937_64 gen(seed);
    auto pick = [&](const std::vector<std::string>& w) { return w[gen() % w.size()]; };
    std::vector<Review> reviews;
    for (std::size_t i = 0; i < pos + neg; ++i) {
        const bool need = i < pos;
        std::string text = pick(need ? pos_words : neg_words) + " " + pick(filler) + " " +
                           pick(need ? pos_words : neg_words) + " " + pick(filler) + " u" + std::to_string(i);
        reviews.push_back(review("r" + std::to_string(i), text, need));
    }
    return LabeledDataset("synthetic", std::move(reviews));
}

// ---------------------------------------------------------------------------

void agreement_exactness() {
    const auto start = Clock::now();
    const ContingencyTable2x2 t{448, 17, 7, 13};
    const double po = percent_agreement(t), kappa = cohens_kappa(t), ac1 = gwets_ac1(t);
    const double elapsed = seconds_since(start);
    const bool ok = std::abs(po - 0.9505) <= 0.001 && std::abs(kappa - 0.495) <= 0.001 &&
                    std::abs(ac1 - 0.945) <= 0.001 && elapsed < 1.0;
    report("A1", "agreement exactness", ok ? "PASS" : "FAIL",
           "agreement=" + fmt(po) + " kappa=" + fmt(kappa) + " ac1=" + fmt(ac1) + " (+-0.001), " +
               fmt(elapsed * 1000, 3) + " ms");
}

void beta_derivation() {
    const double lambda = compute_lambda(285, 5564);
    const double beta = BetaConfig{1.5, 1.5, lambda}.beta();
    const bool ok = std::abs(lambda - 19.52) <= 0.01 && beta == lambda;
    report("A2", "beta derivation", ok ? "PASS" : "FAIL",
           "lambda(285, 5564)=" + fmt(lambda) + ", beta(time_a=time_v)=" + fmt(beta));
}

void f_beta_spot_checks() {
    const double a = f_beta(0.94, 0.92, 19.52), b = f_beta(0.37, 0.79, 19.52);
    const bool ok = round2(a) == 0.92 && round2(b) == 0.79;
    report("A3", "F-beta spot checks", ok ? "PASS" : "FAIL",
           "F(P=0.94,R=0.92)=" + fmt(a) + ", F(P=0.37,R=0.79)=" + fmt(b));
}

void property_suite() {
    const auto start = Clock::now();
    Checks c;
    std::mt19937_64 gen(2024);
    std::uniform_real_distribution<double> unit(0.01, 1.0);

    // F-beta: monotone, bounded by min/max, limits.
    bool monotone = true, bounded = true, limits = true;
    for (int i = 0; i < 2000; ++i) {
        const double p = unit(gen), r = unit(gen), beta = unit(gen) * 30.0;
        const double f = f_beta(p, r, beta);
        if (f < std::min(p, r) - 1e-12 || f > std::max(p, r) + 1e-12) bounded = false;
        if (p < 0.99 && !(f_beta(p + 0.01, r, beta) > f)) monotone = false;
        if (r < 0.99 && !(f_beta(p, r + 0.01, beta) > f)) monotone = false;
        if (f_beta(p, r, 0.0) != p || std::abs(f_beta(p, r, 1e6) - r) > 1e-3) limits = false;
    }
    c.expect(monotone, "f_beta monotone");
    c.expect(bounded, "f_beta bounded");
    c.expect(limits, "f_beta limits");

    // Undersampling: exact balance, 5078/261 -> 522.
    {
        std::vector<Review> reviews;
        for (std::size_t i = 0; i < 5078; ++i)
            reviews.push_back(review("c" + std::to_string(i), "text", i < 261));
        const auto u = undersample(LabeledDataset("crossval-shape", reviews), 7);
        c.expect(u.size() == 522 && u.positives() == 261, "undersample 5078/261 -> 522");
        bool balanced = true;
        for (int trial = 0; trial < 30; ++trial) {
            const auto ds = synthetic(1 + gen() % 30, 1 + gen() % 120, gen());
            const auto s = undersample(ds, gen());
            balanced = balanced && s.positives() * 2 == s.size();
        }
        c.expect(balanced, "undersample balance");
    }

    // Stratified folds: partition, disjointness, stratification within one.
    {
        bool partition = true, stratified = true;
        for (int trial = 0; trial < 40; ++trial) {
            const std::size_t pos = 2 + gen() % 30, neg = 2 + gen() % 90;
            const std::size_t k = 2 + gen() % std::min<std::size_t>(9, pos + neg - 1);
            const auto ds = synthetic(pos, neg, gen());
            std::vector<int> covered(ds.size(), 0);
            for (const auto& plan : stratified_kfold(ds, k, gen())) {
                std::set<std::size_t> train(plan.train.begin(), plan.train.end());
                std::size_t fold_pos = 0;
                for (auto i : plan.test) {
                    ++covered[i];
                    if (train.contains(i)) partition = false;
                    fold_pos += ds[i].explanation_need;
                }
                if (plan.train.size() + plan.test.size() != ds.size()) partition = false;
                const double ideal_pos = static_cast<double>(pos) / static_cast<double>(k);
                const double ideal_neg = static_cast<double>(neg) / static_cast<double>(k);
                if (std::abs(static_cast<double>(fold_pos) - ideal_pos) > 1.0 ||
                    std::abs(static_cast<double>(plan.test.size() - fold_pos) - ideal_neg) > 1.0)
                    stratified = false;
            }
            for (int n : covered) partition = partition && n == 1;
        }
        c.expect(partition, "k-fold partition/disjoint");
        c.expect(stratified, "k-fold stratification");
    }

    // No leakage: each fold's vocabulary is exactly the training-split tokens.
    {
        const auto ds = synthetic(20, 20, 3);  // every review carries a unique token
        bool clean = true;
        for (const auto& plan : stratified_kfold(ds, 5, 11)) {
            const auto model = train_text_model(ClassifierSpec(Algorithm::naive_bayes, Embedding::tfidf),
                                                review_texts(ds, plan.train), review_labels(ds, plan.train));
            std::set<std::string> allowed;
            for (auto i : plan.train)
                for (const auto& t : tokenize(ds[i].text)) allowed.insert(t);
            const auto& terms = model.vocabulary().terms();
            clean = clean && std::set<std::string>(terms.begin(), terms.end()) == allowed;
        }
        c.expect(clean, "no vocabulary leakage");
    }

    // Rule: monotone under appended '?', case-invariant.
    {
        static const std::vector<std::string> words{"why", "Why", "WHY", "whyever", "how", "App", "?", "ok."};
        bool monotone_rule = true, case_inv = true;
        for (int trial = 0; trial < 500; ++trial) {
            std::string text;
            for (int w = 0, n = static_cast<int>(gen() % 7); w < n; ++w) text += words[gen() % words.size()] + " ";
            monotone_rule = monotone_rule && classify_rule_based(text + "?").explanation_need();
            std::string upper = text, lower = text;
            for (auto& ch : upper) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
            for (auto& ch : lower) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
            const bool base = classify_rule_based(text).explanation_need();
            case_inv = case_inv && classify_rule_based(upper).explanation_need() == base &&
                       classify_rule_based(lower).explanation_need() == base;
        }
        c.expect(monotone_rule, "rule monotone");
        c.expect(case_inv, "rule case-invariant");
    }

    // NB posteriors sum to one; KNN duplicate invariance.
    {
        const auto ds = synthetic(30, 30, 5);
        std::vector<std::size_t> all(ds.size());
        for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
        const auto texts = review_texts(ds, all);
        const auto labels = review_labels(ds, all);
        const auto nb = train_text_model(ClassifierSpec(Algorithm::naive_bayes, Embedding::tfidf), texts, labels);
        bool normalized = true;
        for (const auto& t : texts) {
            const auto post = std::get<NaiveBayesModel>(nb.model().impl()).posteriors(nb.vectorize(t + " why app"));
            normalized = normalized && std::abs(post[0] + post[1] - 1.0) <= 1e-9;
        }
        c.expect(normalized, "NB posteriors sum to 1");

        std::vector<std::string> dup_texts;
        std::vector<std::uint8_t> dup_labels;
        for (int copy = 0; copy < 3; ++copy) {
            dup_texts.insert(dup_texts.end(), texts.begin(), texts.end());
            dup_labels.insert(dup_labels.end(), labels.begin(), labels.end());
        }
        bool invariant = true;
        for (std::int64_t k : {1, 3, 5}) {
            const auto base = train_text_model(ClassifierSpec(Algorithm::knn, Embedding::tfidf, {{"n_neighbors", k}}),
                                               texts, labels);
            const auto dup = train_text_model(
                ClassifierSpec(Algorithm::knn, Embedding::tfidf, {{"n_neighbors", 3 * k}}), dup_texts, dup_labels);
            for (const auto& probe : {"why app crash", "love it", "how do i explain", "nice phone update"})
                invariant = invariant && base.predict(probe).score == dup.predict(probe).score;
        }
        c.expect(invariant, "KNN duplicate invariance");
    }

    // Deterministic re-run: byte-identical report JSON.
    {
        const auto ds = synthetic(25, 40, 9);
        CrossValidationOptions o;
        o.folds = 5;
        o.repeats = 3;
        o.seed = 77;
        const ClassifierDetector rf(ClassifierSpec(Algorithm::random_forest, Embedding::tfidf,
                                                   {{"n_estimators", std::int64_t{10}}}));
        const auto a = to_json(cross_validate(rf, undersample(ds, 77), o)).dump(2);
        const auto b = to_json(cross_validate(rf, undersample(ds, 77), o)).dump(2);
        c.expect(a == b, "byte-identical reruns");
    }

    const double elapsed = seconds_since(start);
    c.expect(elapsed < 120.0, "runtime < 2 min");
    report("A4", "property suite", c.ok() ? "PASS" : "FAIL", c.summary() + ", " + fmt(elapsed, 2) + " s");
}

void oracle_equivalence() {
    Checks c;
    // TF-IDF: [[a,b],[a]], doc [a,b].
    {
        const auto vocab = fit_vocabulary(std::vector<TokenStream>{{"a", "b"}, {"a"}});
        const auto x = transform_tfidf(vocab, {"a", "b"});
        const double ia = std::log(3.0 / 3.0) + 1.0, ib = std::log(3.0 / 2.0) + 1.0;
        const double norm = std::sqrt(ia * ia + ib * ib);
        c.expect(x.entries.size() == 2 && std::abs(x.weight_at(0) - ia / norm) <= 1e-9 &&
                     std::abs(x.weight_at(1) - ib / norm) <= 1e-9,
                 "tfidf two-doc");
    }
    // TF-IDF: single doc, single distinct token.
    {
        const auto vocab = fit_vocabulary(std::vector<TokenStream>{{"solo"}});
        c.expect(std::abs(transform_tfidf(vocab, {"solo", "solo"}).weight_at(0) - 1.0) <= 1e-9, "tfidf single");
    }
    // NB: {("why broken?",+), ("love it",-)} scoring "why why", alpha=1, BoW.
    {
        const std::vector<std::string> texts{"why broken?", "love it"};
        const std::vector<std::uint8_t> labels{1, 0};
        const auto m = train_text_model(ClassifierSpec(Algorithm::naive_bayes, Embedding::bow, {{"alpha", 1.0}}),
                                        texts, labels);
        const double tp = 2.0 / 6.0, tn = 1.0 / 6.0;
        const double expected = (tp * tp) / (tp * tp + tn * tn);
        const auto p = m.predict("why why");
        c.expect(p.label && std::abs(p.score - expected) <= 1e-9, "NB why-why");
    }
    // NB: empty vector with fitted prior -> majority prior.
    {
        const std::vector<std::string> texts{"why a", "why b", "how c", "love d"};
        const std::vector<std::uint8_t> labels{1, 1, 1, 0};
        const auto m = train_text_model(ClassifierSpec(Algorithm::naive_bayes, Embedding::tfidf), texts, labels);
        const auto p = m.predict("zzz");
        c.expect(p.label && std::abs(p.score - 0.75) <= 1e-9, "NB empty vector prior");
    }
    report("A5", "oracle equivalence", c.ok() ? "PASS" : "FAIL", c.summary());
}

struct MlRow {
    const char* name;
    ClassifierSpec spec;
    double macro;
};

void published_dataset() {
    const char* crossval_path = std::getenv("EXPNEED_CROSSVAL_DS");
    const char* general_path = std::getenv("EXPNEED_GENERAL_DS");
    if (!crossval_path || !general_path) {
        const std::string reason =
            "published dataset not available; set EXPNEED_CROSSVAL_DS and EXPNEED_GENERAL_DS to canonical CSVs";
        report_unattainable("A6", "published dataset: rule-based CV and holdout", reason);
        report_unattainable("A6b", "published dataset: ML rows within +-0.10", reason);
        return;
    }
    try {
        const auto crossval = load_dataset(crossval_path, "CrossVal-DS");
        const auto general = load_dataset(general_path, "General-DS");
        const std::uint64_t seed = 42;
        const auto balanced = undersample(crossval, seed);
        CrossValidationOptions o;
        o.seed = seed;
        const auto cv = cross_validate(RuleBasedDetector{}, balanced, o);
        const auto holdout = evaluate_holdout(FittedRule{}, general, default_beta, true).back();
        const bool ok = std::abs(cv.macro_f_beta - 0.93) <= 0.02 && std::abs(holdout.positive.recall - 0.67) <= 0.02 &&
                        std::abs(holdout.positive.precision - 0.39) <= 0.02 &&
                        std::abs(holdout.macro_f_beta - 0.81) <= 0.02;
        report("A6", "published dataset: rule-based CV and holdout", ok ? "PASS" : "FAIL",
               "CV macro=" + fmt(cv.macro_f_beta, 3) + " (0.93); holdout rec=" + fmt(holdout.positive.recall, 3) +
                   " pre=" + fmt(holdout.positive.precision, 3) + " macro=" + fmt(holdout.macro_f_beta, 3) +
                   " (0.67/0.39/0.81), n=" + std::to_string(balanced.size()));

        using P = ParamMap;
        const auto s = [](const char* v) { return ParamValue{std::string(v)}; };
        const std::vector<MlRow> rows{
            {"NB tfidf", ClassifierSpec(Algorithm::naive_bayes, Embedding::tfidf, P{{"alpha", 1.0}, {"fit_prior", false}}), 0.66},
            {"SVM tfidf", ClassifierSpec(Algorithm::svm, Embedding::tfidf, P{{"C", 1.0}, {"gamma", 0.001}, {"kernel", s("linear")}}), 0.73},
            {"RF tfidf", ClassifierSpec(Algorithm::random_forest, Embedding::tfidf, P{{"criterion", s("entropy")}, {"max_features", s("auto")}, {"n_estimators", std::int64_t{500}}}), 0.75},
            {"DT tfidf", ClassifierSpec(Algorithm::decision_tree, Embedding::tfidf, P{{"criterion", s("gini")}, {"max_features", s("log2")}, {"splitter", s("best")}}), 0.58},
            {"LR tfidf", ClassifierSpec(Algorithm::logistic_regression, Embedding::tfidf, P{{"C", 1.0}, {"solver", s("newton-cg")}}), 0.72},
            {"AB tfidf", ClassifierSpec(Algorithm::adaboost, Embedding::tfidf, P{{"n_estimators", std::int64_t{50}}}), 0.74},
            {"KNN tfidf", ClassifierSpec(Algorithm::knn, Embedding::tfidf, P{{"n_neighbors", std::int64_t{20}}, {"weights", s("uniform")}}), 0.64},
            {"NB bow", ClassifierSpec(Algorithm::naive_bayes, Embedding::bow, P{{"alpha", 1.0}, {"fit_prior", true}}), 0.65},
            {"SVM bow", ClassifierSpec(Algorithm::svm, Embedding::bow, P{{"C", 100.0}, {"gamma", s("auto")}, {"kernel", s("rbf")}}), 0.74},
            {"RF bow", ClassifierSpec(Algorithm::random_forest, Embedding::bow, P{{"criterion", s("entropy")}, {"max_features", s("auto")}, {"n_estimators", std::int64_t{500}}}), 0.76},
            {"DT bow", ClassifierSpec(Algorithm::decision_tree, Embedding::bow, P{{"criterion", s("gini")}, {"max_features", s("log2")}, {"splitter", s("best")}}), 0.63},
            {"LR bow", ClassifierSpec(Algorithm::logistic_regression, Embedding::bow, P{{"C", 1.0}, {"solver", s("liblinear")}}), 0.73},
            {"AB bow", ClassifierSpec(Algorithm::adaboost, Embedding::bow, P{{"n_estimators", std::int64_t{200}}}), 0.75},
            {"KNN bow", ClassifierSpec(Algorithm::knn, Embedding::bow, P{{"n_neighbors", std::int64_t{16}}, {"weights", s("distance")}}), 0.60},
        };
        std::string detail;
        bool all_ok = true;
        for (const auto& row : rows) {
            const auto r = cross_validate(ClassifierDetector(row.spec), balanced, o);
            const bool in_band = std::abs(r.macro_f_beta - row.macro) <= 0.10;
            all_ok = all_ok && in_band;
            detail += std::string(row.name) + "=" + fmt(r.macro_f_beta, 2) + "(" + fmt(row.macro, 2) + ")" +
                      (in_band ? "" : "!") + " ";
        }
        report("A6b", "published dataset: ML rows within +-0.10", all_ok ? "PASS" : "FAIL", detail);
    } catch (const std::exception& e) {
        report("A6", "published dataset: rule-based CV and holdout", "FAIL", e.what());
    }
}

}  // namespace

void guarded(const std::string& id, const std::string& name, const std::function<void()>& criterion) {
    try {
        criterion();
    } catch (const std::exception& e) {
        report(id, name, "FAIL", std::string("exception: ") + e.what());
    }
}

int main() {
    guarded("A1", "agreement exactness", agreement_exactness);
    guarded("A2", "beta derivation", beta_derivation);
    guarded("A3", "F-beta spot checks", f_beta_spot_checks);
    guarded("A4", "property suite", property_suite);
    guarded("A5", "oracle equivalence", oracle_equivalence);
    guarded("A6", "published dataset", published_dataset);
    std::cout << "acceptance: " << failures << " failed, " << unattainable << " unattainable without external data"
              << std::endl;
    return failures == 0 ? 0 : 1;
}
