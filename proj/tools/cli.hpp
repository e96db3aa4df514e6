#ifndef EXPNEED_TOOLS_CLI_HPP
#define EXPNEED_TOOLS_CLI_HPP

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <memory>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "expneed/expneed.hpp"

namespace expneed::cli {

// ---------------------------------------------------------------------------
// Experiment configuration (JSON). See README for the grammar.

struct ExperimentConfig {
    std::string dataset_path;
    std::string dataset_name = "dataset";
    std::string method = "rule_based";  // rule_based | classifier | grid_search
    std::optional<ClassifierSpec> classifier;
    std::optional<HyperGrid> grid;
    std::size_t inner_folds = 3;
    SelectionMetric selection_metric = SelectionMetric::macro_f_beta;
    bool undersample = true;
    std::size_t folds = 10;
    std::size_t repeats = 5;
    std::optional<double> beta;
    std::optional<Json> beta_derivation;
    std::uint64_t seed = 0;
    Averaging averaging = Averaging::per_fold;
    std::size_t jobs = 1;
    std::string report_json;
    std::string report_markdown;
};

namespace detail {

inline void reject_unknown_keys(const Json& j, const std::set<std::string>& known, const std::string& where) {
    for (const auto& [key, _] : j.items())
        if (!known.contains(key)) throw ValidationError("unknown key '" + key + "' in " + where);
}

template <typename T>
T get_field(const Json& j, const char* key, const std::string& where) {
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError("bad or missing '" + std::string(key) + "' in " + where + ": " + e.what());
    }
}

inline std::string resolve_path(const std::string& base_dir, const std::string& path) {
    if (path.empty() || std::filesystem::path(path).is_absolute() || base_dir.empty()) return path;
    return (std::filesystem::path(base_dir) / path).lexically_normal().string();
}

}  // namespace detail

inline ExperimentConfig parse_config_fields(const Json& j, const std::string& base_dir) {
    const std::string where = "config";
    if (!j.is_object()) throw ValidationError("config must be a JSON object");
    detail::reject_unknown_keys(j,
                                {"dataset", "dataset_name", "method", "classifier", "grid", "inner_folds",
                                 "selection_metric", "undersample", "folds", "repeats", "beta", "beta_derivation",
                                 "seed", "averaging", "jobs", "report"},
                                where);
    ExperimentConfig c;
    c.dataset_path = detail::resolve_path(base_dir, detail::get_field<std::string>(j, "dataset", where));
    c.dataset_name = j.value("dataset_name", c.dataset_name);
    c.method = j.value("method", c.method);
    if (c.method == "classifier") {
        if (!j.contains("classifier")) throw ValidationError("method 'classifier' needs a \"classifier\" spec");
        c.classifier = ClassifierSpec::from_json(j.at("classifier"));
    } else if (c.method == "grid_search") {
        if (!j.contains("grid")) throw ValidationError("method 'grid_search' needs a \"grid\"");
        c.grid = HyperGrid::from_json(j.at("grid"));
        c.grid->points();  // validates the product is non-empty
    } else if (c.method != "rule_based") {
        throw ValidationError("unknown method '" + c.method + "' (expected rule_based, classifier or grid_search)");
    }
    c.inner_folds = j.value("inner_folds", c.inner_folds);
    if (j.contains("selection_metric"))
        c.selection_metric = parse_selection_metric(detail::get_field<std::string>(j, "selection_metric", where));
    c.undersample = j.value("undersample", c.undersample);
    c.folds = j.value("folds", c.folds);
    c.repeats = j.value("repeats", c.repeats);
    if (j.contains("beta")) c.beta = detail::get_field<double>(j, "beta", where);
    if (j.contains("beta_derivation")) c.beta_derivation = j.at("beta_derivation");
    if (c.beta.has_value() == c.beta_derivation.has_value())
        throw ValidationError("config needs exactly one of \"beta\" and \"beta_derivation\"");
    if (c.beta && !(*c.beta >= 0)) throw ValidationError("beta must be non-negative");
    if (!j.contains("seed")) throw ValidationError("config needs a \"seed\"");
    c.seed = detail::get_field<std::uint64_t>(j, "seed", where);
    if (j.contains("averaging")) c.averaging = parse_averaging(detail::get_field<std::string>(j, "averaging", where));
    c.jobs = j.value("jobs", c.jobs);
    if (j.contains("report")) {
        const Json& r = j.at("report");
        detail::reject_unknown_keys(r, {"json", "markdown"}, "report");
        c.report_json = detail::resolve_path(base_dir, r.value("json", std::string()));
        c.report_markdown = detail::resolve_path(base_dir, r.value("markdown", std::string()));
    }
    return c;
}

inline ExperimentConfig parse_config(const Json& j, const std::string& base_dir = {}) {
    try {
        return parse_config_fields(j, base_dir);
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("malformed config: ") + e.what());
    }
}

struct ResolvedBeta {
    double beta;
    Json provenance;
};

/// beta directly, or time_a * lambda / time_v with lambda a number, a
/// {relevant, total} pair, or "dataset" (inverse prevalence of the loaded data).
inline ResolvedBeta resolve_beta(const ExperimentConfig& c, const LabeledDataset& ds) try {
    if (c.beta) return {*c.beta, {{"beta", *c.beta}, {"source", "explicit"}}};
    const Json& d = *c.beta_derivation;
    detail::reject_unknown_keys(d, {"time_a", "time_v", "lambda"}, "beta_derivation");
    BetaConfig bc;
    bc.time_a = d.value("time_a", 1.0);
    bc.time_v = d.value("time_v", 1.0);
    Json lambda_source;
    const Json& l = d.contains("lambda") ? d.at("lambda") : Json("dataset");
    if (l.is_number()) {
        bc.lambda = l.get<double>();
        lambda_source = "explicit";
    } else if (l.is_object()) {
        bc.lambda = compute_lambda(detail::get_field<std::size_t>(l, "relevant", "lambda"),
                                   detail::get_field<std::size_t>(l, "total", "lambda"));
        lambda_source = l;
    } else if (l == "dataset") {
        bc.lambda = compute_lambda(ds.positives(), ds.size());
        lambda_source = {{"relevant", ds.positives()}, {"total", ds.size()}};
    } else {
        throw ValidationError("lambda must be a number, {relevant, total} or \"dataset\"");
    }
    const double beta = bc.beta();
    return {beta,
            {{"beta", beta}, {"source", "derived"}, {"time_a", bc.time_a}, {"time_v", bc.time_v},
             {"lambda", bc.lambda}, {"lambda_source", lambda_source}}};
} catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed beta_derivation: ") + e.what());
}

inline std::unique_ptr<Detector> make_detector(const ExperimentConfig& c, double beta) {
    if (c.method == "classifier") return std::make_unique<ClassifierDetector>(*c.classifier);
    if (c.method == "grid_search")
        return std::make_unique<GridSearchDetector>(*c.grid, c.inner_folds, c.selection_metric, beta);
    return std::make_unique<RuleBasedDetector>();
}

struct ExperimentResult {
    EvalReport report;
    Json document;
};

/// Runs the configured experiment. The document embeds the resolved config.
inline ExperimentResult run_experiment(const ExperimentConfig& c, bool deterministic) {
    const LabeledDataset loaded = load_dataset(c.dataset_path, c.dataset_name);
    const auto beta = resolve_beta(c, loaded);
    const LabeledDataset data = c.undersample ? undersample(loaded, c.seed) : loaded;
    const auto detector = make_detector(c, beta.beta);

    CrossValidationOptions options;
    options.folds = c.folds;
    options.repeats = c.repeats;
    options.beta = beta.beta;
    options.seed = c.seed;
    options.averaging = c.averaging;
    options.jobs = c.jobs;
    const EvalReport report = cross_validate(*detector, data, options);

    std::size_t fits = 0, not_converged = 0;
    for (const auto& f : report.per_fold) {
        if (f.details.contains("converged")) {
            ++fits;
            if (!f.details["converged"].get<bool>()) ++not_converged;
        }
    }

    Json doc{{"schema_version", report_schema_version}, {"tool", "expneed"}};
    if (!deterministic) {
        const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
        std::ostringstream ts;
        ts << std::put_time(std::gmtime(&now), "%Y-%m-%dT%H:%M:%SZ");
        doc["generated_at"] = ts.str();
    }
    doc["config"] = {{"dataset", c.dataset_path},
                     {"dataset_name", c.dataset_name},
                     {"dataset_size", loaded.size()},
                     {"dataset_positives", loaded.positives()},
                     {"undersample", c.undersample},
                     {"evaluated_size", data.size()},
                     {"method", detector->config()},
                     {"folds", c.folds},
                     {"repeats", c.repeats},
                     {"beta", beta.provenance},
                     {"seed", c.seed},
                     {"averaging", to_string(c.averaging)}};
    doc["convergence"] = {{"iterative_fits", fits}, {"not_converged", not_converged}};
    doc["report"] = to_json(report);
    return {report, std::move(doc)};
}

// ---------------------------------------------------------------------------
// Predictions exchange format: review_id,predicted,score

struct PredictionRow {
    std::string review_id;
    bool predicted = false;
    double score = 0.0;
};

inline void write_predictions(std::ostream& out, const std::vector<PredictionRow>& rows) {
    expneed::detail::write_csv_row(out, {"review_id", "predicted", "score"});
    for (const auto& r : rows)
        expneed::detail::write_csv_row(out, {r.review_id, r.predicted ? "1" : "0", Json(r.score).dump()});
}

inline std::vector<PredictionRow> parse_predictions(std::string_view csv_text) {
    const auto rows = expneed::detail::parse_csv(csv_text);
    expneed::detail::expect_header(rows, {"review_id", "predicted", "score"});
    std::vector<PredictionRow> out;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto& row = rows[i];
        if (row.size() != 3) throw ValidationError("expected 3 columns, found " + std::to_string(row.size()), i);
        PredictionRow p;
        p.review_id = row[0];
        if (row[1] == "1") p.predicted = true;
        else if (row[1] != "0") throw ValidationError("predicted must be 0 or 1, got '" + row[1] + "'", i);
        try {
            std::size_t used = 0;
            p.score = std::stod(row[2], &used);
            if (used != row[2].size()) throw std::invalid_argument("trailing characters");
        } catch (const std::exception&) {
            throw ValidationError("score is not a number: '" + row[2] + "'", i);
        }
        if (!(p.score >= 0.0 && p.score <= 1.0)) throw ValidationError("score outside [0, 1]: " + row[2], i);
        out.push_back(std::move(p));
    }
    return out;
}

/// Label assignment read from a predictions file, checked against the gold
/// ids: every gold id exactly once, nothing else.
class PredictionTable final : public FittedDetector {
public:
    PredictionTable(const std::vector<PredictionRow>& rows, const LabeledDataset& gold) {
        std::set<std::string> duplicates, unknown, missing;
        std::set<std::string> gold_ids;
        for (const auto& r : gold) gold_ids.insert(r.review_id);
        for (const auto& p : rows) {
            if (!by_id_.emplace(p.review_id, p).second) duplicates.insert(p.review_id);
            if (!gold_ids.contains(p.review_id)) unknown.insert(p.review_id);
        }
        for (const auto& id : gold_ids)
            if (!by_id_.contains(id)) missing.insert(id);
        std::string problems;
        auto list = [&](const char* what, const std::set<std::string>& ids) {
            if (ids.empty()) return;
            problems += std::string(problems.empty() ? "" : "; ") + what + ":";
            for (const auto& id : ids) problems += " " + id;
        };
        list("missing ids", missing);
        list("duplicate ids", duplicates);
        list("ids not in gold", unknown);
        if (!problems.empty()) throw ValidationError("predictions do not match gold: " + problems);
    }

    Prediction predict(const Review& review) const override {
        const auto& p = by_id_.at(review.review_id);
        return {p.predicted, p.score};
    }

private:
    std::map<std::string, PredictionRow> by_id_;
};

// ---------------------------------------------------------------------------
// Output helpers

inline std::string stats_table(const LabeledDataset& ds, const DatasetStats& s) {
    std::ostringstream out;
    out << "Dataset: " << ds.name() << " (" << s.total << " reviews)\n\n";
    out << "| # | App | Size | Expl. Needs | Tra | Int | Bus | Dis | Err |\n";
    out << "|---:|---|---:|---|---:|---:|---:|---:|---:|\n";
    std::size_t row = 1;
    for (const auto& app : s.per_app) {
        out << "| " << row++ << ". | " << app.app_name << " | " << app.total << " | " << app.needs << " ("
            << app.needs_share().percent() << ")";
        for (auto count : app.per_category) out << " | " << count;
        out << " |\n";
    }
    out << "| | Total | " << s.total << " | " << s.needs << " (" << s.needs_share().percent() << ")";
    for (auto c : all_categories) out << " | " << s.category_count(c) << " (" << s.category_share(c).percent() << ")";
    out << " |\n\n";
    const Share primary = s.concern_share(ConcernLevel::primary);
    const Share secondary = s.concern_share(ConcernLevel::secondary);
    out << "Primary concerns (training, interaction, business): " << primary.count << " (" << primary.percent()
        << ")\n";
    out << "Secondary concerns (dissatisfaction, errata): " << secondary.count << " (" << secondary.percent()
        << ")\n";
    return out.str();
}

inline Json stats_json(const LabeledDataset& ds, const DatasetStats& s) {
    auto categories = [](const std::array<std::size_t, 5>& counts) {
        Json j = Json::object();
        for (auto c : all_categories) j[std::string(to_string(c))] = counts[static_cast<std::size_t>(c)];
        return j;
    };
    Json apps = Json::array();
    for (const auto& a : s.per_app)
        apps.push_back({{"app_name", a.app_name},
                        {"total", a.total},
                        {"needs", a.needs},
                        {"needs_pct", a.needs_share().ratio()},
                        {"needs_pct_display", a.needs_share().percent()},
                        {"per_category", categories(a.per_category)}});
    Json shares = Json::object();
    for (auto c : all_categories)
        shares[std::string(to_string(c))] = {{"count", s.category_count(c)},
                                              {"pct", s.category_share(c).ratio()},
                                              {"pct_display", s.category_share(c).percent()}};
    return {{"dataset", ds.name()},
            {"total", s.total},
            {"needs", s.needs},
            {"needs_pct", s.needs_pct()},
            {"needs_pct_display", s.needs_share().percent()},
            {"per_category", shares},
            {"primary_concern_pct", s.concern_share(ConcernLevel::primary).ratio()},
            {"per_app", apps}};
}

inline std::string confusion_summary(const ConfusionMatrix& cm) {
    std::ostringstream out;
    out << "confusion vs gold: tp=" << cm.tp << " fp=" << cm.fp << " fn=" << cm.fn << " tn=" << cm.tn << "\n";
    return out.str();
}

inline void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot write file: " + path);
    out << content;
}

inline std::string agreement_text(const AgreementReport& r) {
    std::ostringstream out;
    out << std::fixed;
    out << "Inter-annotator agreement (n=" << r.table.n() << ")\n\n";
    out << "|                 | Rater 1: no expl. need | Rater 1: expl. need |\n";
    out << "|---|---:|---:|\n";
    out << "| Rater 2: no expl. need | " << r.table.a << " | " << r.table.b << " |\n";
    out << "| Rater 2: expl. need | " << r.table.c << " | " << r.table.d << " |\n\n";
    out << "Agreement:     " << std::setprecision(2) << r.percent_agreement * 100.0 << "%\n";
    out << "Cohen's Kappa: " << std::setprecision(3) << r.cohens_kappa.value << " (" << to_string(r.kappa_band)
        << (r.cohens_kappa.degenerate ? ", degenerate" : "") << ")\n";
    out << "Gwet's AC1:    " << std::setprecision(3) << r.gwets_ac1.value << " (" << to_string(r.ac1_band)
        << (r.gwets_ac1.degenerate ? ", degenerate" : "") << ")\n";
    return out.str();
}

// ---------------------------------------------------------------------------
// Entry point

/// Exit codes: 0 success, 2 input/validation, 3 model I/O, 4 internal.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Detect explanation needs in app reviews and evaluate detectors."};
    app.require_subcommand(1);

    // stats
    auto* stats = app.add_subcommand("stats", "Corpus statistics per app and taxonomy category");
    std::string stats_dataset, stats_name = "dataset", stats_format = "text";
    std::vector<std::string> stats_apps;
    stats->add_option("dataset", stats_dataset, "Canonical dataset CSV")->required();
    stats->add_option("--name", stats_name, "Dataset name");
    stats->add_option("--apps", stats_apps, "Restrict to these apps");
    stats->add_option("--format", stats_format, "text | json")->check(CLI::IsMember({"text", "json"}));

    // detect
    auto* detect = app.add_subcommand("detect", "Label a dataset with the rule or a saved model");
    std::string detect_dataset, detect_model, detect_out;
    bool detect_rule = false, detect_by_app = false;
    double detect_beta = default_beta;
    detect->add_option("dataset", detect_dataset, "Canonical dataset CSV")->required();
    auto* rule_flag = detect->add_flag("--rule-based", detect_rule, "Use the '?' / 'why' rule");
    auto* model_opt = detect->add_option("--model", detect_model, "Saved model (JSON)");
    rule_flag->excludes(model_opt);
    detect->add_option("-o,--out", detect_out, "Predictions CSV to write (default: stdout)");
    detect->add_option("--beta", detect_beta, "F-beta weight for the summary");
    detect->add_flag("--by-app", detect_by_app, "Summarize per app as well");

    // train
    auto* train = app.add_subcommand("train", "Fit a classifier on a dataset and save it");
    std::string train_dataset, train_spec_file, train_out, train_vocab_out, train_algorithm, train_embedding = "tfidf";
    std::vector<std::string> train_params;
    std::uint64_t train_seed = 0;
    bool train_undersample = false;
    train->add_option("dataset", train_dataset, "Canonical dataset CSV")->required();
    train->add_option("--spec", train_spec_file, "Classifier spec JSON file");
    train->add_option("--algorithm", train_algorithm, "Algorithm (instead of --spec)");
    train->add_option("--embedding", train_embedding, "bow | tfidf");
    train->add_option("--param", train_params, "Hyperparameter key=value (JSON value)");
    train->add_option("--seed", train_seed, "Seed")->required();
    train->add_flag("--undersample", train_undersample, "Balance classes first");
    train->add_option("-o,--out", train_out, "Model file to write")->required();
    train->add_option("--vocab-out", train_vocab_out, "Also dump the vocabulary as CSV");

    // cv
    auto* cv = app.add_subcommand("cv", "Run a cross-validation experiment from a config file");
    std::string cv_config, cv_json, cv_md;
    bool cv_deterministic = false;
    std::size_t cv_jobs = 0;
    cv->add_option("config", cv_config, "Experiment config (JSON)")->required();
    cv->add_option("--json", cv_json, "Report JSON path (overrides config)");
    cv->add_option("--markdown", cv_md, "Report Markdown path (overrides config)");
    cv->add_option("--jobs", cv_jobs, "Parallel folds (overrides config)");
    cv->add_flag("--deterministic", cv_deterministic, "Omit timestamps so reruns are byte-identical");

    // score
    auto* score = app.add_subcommand("score", "Grade a predictions CSV against a gold dataset");
    std::string score_predictions, score_gold, score_json;
    double score_beta = default_beta;
    bool score_by_app = false;
    score->add_option("predictions", score_predictions, "Predictions CSV")->required();
    score->add_option("gold", score_gold, "Canonical dataset CSV")->required();
    score->add_option("--beta", score_beta, "F-beta weight");
    score->add_flag("--by-app", score_by_app, "Report per app as well");
    score->add_option("--json", score_json, "Also write the report as JSON");

    // agreement
    auto* agree = app.add_subcommand("agreement", "Inter-annotator agreement from paired ratings");
    std::string agree_pairs;
    bool agree_json = false;
    agree->add_option("pairs", agree_pairs, "CSV with review_id,rater1,rater2")->required();
    agree->add_flag("--json", agree_json, "JSON output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (stats->parsed()) {
            LabeledDataset ds = load_dataset(stats_dataset, stats_name);
            if (!stats_apps.empty()) ds = filter_by_apps(ds, {stats_apps.begin(), stats_apps.end()});
            const DatasetStats s = dataset_stats(ds);
            if (stats_format == "json") out << stats_json(ds, s).dump(2) << "\n";
            else out << stats_table(ds, s);
            return 0;
        }

        if (detect->parsed()) {
            if (!detect_rule && detect_model.empty()) throw ValidationError("detect needs --rule-based or --model");
            const LabeledDataset ds = load_dataset(detect_dataset, detect_dataset);
            std::unique_ptr<FittedDetector> detector;
            if (detect_rule) detector = std::make_unique<FittedRule>();
            else detector = std::make_unique<FittedTextModel>(TextModel::load(detect_model));

            std::vector<PredictionRow> rows;
            for (const auto& r : ds) {
                const auto p = detector->predict(r);
                rows.push_back({r.review_id, p.label, p.score});
            }
            if (detect_out.empty()) {
                write_predictions(out, rows);
            } else {
                std::ofstream file(detect_out, std::ios::binary);
                if (!file) throw ValidationError("cannot write file: " + detect_out);
                write_predictions(file, rows);
            }
            std::ostream& summary = detect_out.empty() ? err : out;
            const auto reports = evaluate_holdout(*detector, ds, detect_beta, detect_by_app);
            summary << confusion_summary(reports.back().confusion) << to_markdown(reports);
            return 0;
        }

        if (train->parsed()) {
            Json spec_json;
            if (!train_spec_file.empty()) {
                try {
                    spec_json = Json::parse(expneed::detail::read_file(train_spec_file));
                } catch (const nlohmann::json::exception& e) {
                    throw ValidationError("spec file is not valid JSON: " + std::string(e.what()));
                }
            } else if (!train_algorithm.empty()) {
                spec_json = {{"algorithm", train_algorithm}, {"embedding", train_embedding}};
                Json hp = Json::object();
                for (const auto& kv : train_params) {
                    const auto eq = kv.find('=');
                    if (eq == std::string::npos) throw ValidationError("--param expects key=value, got '" + kv + "'");
                    const std::string value = kv.substr(eq + 1);
                    Json parsed = Json::parse(value, nullptr, false);
                    hp[kv.substr(0, eq)] = parsed.is_discarded() ? Json(value) : parsed;
                }
                spec_json["hyperparameters"] = hp;
            } else {
                throw ValidationError("train needs --spec or --algorithm");
            }
            const ClassifierSpec spec = [&] {
                try {
                    return ClassifierSpec::from_json(spec_json);
                } catch (const nlohmann::json::exception& e) {
                    throw ValidationError(std::string("malformed spec: ") + e.what());
                }
            }();
            LabeledDataset ds = load_dataset(train_dataset, train_dataset);
            if (train_undersample) ds = undersample(ds, train_seed);
            std::vector<std::size_t> all(ds.size());
            for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
            const TextModel model = train_text_model(spec, review_texts(ds, all), review_labels(ds, all), train_seed);
            model.save(train_out);
            if (!train_vocab_out.empty()) {
                std::ostringstream vocab;
                write_vocabulary_csv(vocab, model.vocabulary());
                write_text_file(train_vocab_out, vocab.str());
            }
            out << "trained " << spec.describe() << " on " << ds.size() << " reviews; vocabulary "
                << model.vocabulary().size() << " terms";
            if (auto c = model.model().converged()) out << "; converged=" << (*c ? "true" : "false");
            out << "\n";
            return 0;
        }

        if (cv->parsed()) {
            Json config_json;
            try {
                config_json = Json::parse(expneed::detail::read_file(cv_config));
            } catch (const nlohmann::json::exception& e) {
                throw ValidationError("config is not valid JSON: " + std::string(e.what()));
            }
            ExperimentConfig config =
                parse_config(config_json, std::filesystem::path(cv_config).parent_path().string());
            if (!cv_json.empty()) config.report_json = cv_json;
            if (!cv_md.empty()) config.report_markdown = cv_md;
            if (cv_jobs > 0) config.jobs = cv_jobs;

            ExperimentResult result = run_experiment(config, cv_deterministic);
            result.report.label = config.dataset_name;
            const std::string json_text = result.document.dump(2) + "\n";
            const std::string md = to_markdown({result.report});

            if (!config.report_json.empty()) write_text_file(config.report_json, json_text);
            if (!config.report_markdown.empty()) write_text_file(config.report_markdown, md);
            if (config.report_json.empty()) out << json_text;
            else out << md;
            return 0;
        }

        if (score->parsed()) {
            const LabeledDataset gold = load_dataset(score_gold, score_gold);
            const PredictionTable table(parse_predictions(expneed::detail::read_file(score_predictions)), gold);
            const auto reports = evaluate_holdout(table, gold, score_beta, score_by_app);
            out << to_markdown(reports);
            if (!score_json.empty()) {
                Json j{{"schema_version", report_schema_version}, {"reports", Json::array()}};
                for (const auto& r : reports) j["reports"].push_back(to_json(r));
                write_text_file(score_json, j.dump(2) + "\n");
            }
            return 0;
        }

        if (agree->parsed()) {
            const AgreementReport r = agreement_report(pair_annotations(agree_pairs));
            if (agree_json) {
                out << Json{{"n", r.table.n()},
                            {"table", {{"a", r.table.a}, {"b", r.table.b}, {"c", r.table.c}, {"d", r.table.d}}},
                            {"percent_agreement", r.percent_agreement},
                            {"cohens_kappa", r.cohens_kappa.value},
                            {"cohens_kappa_band", to_string(r.kappa_band)},
                            {"gwets_ac1", r.gwets_ac1.value},
                            {"gwets_ac1_band", to_string(r.ac1_band)}}
                           .dump(2)
                    << "\n";
            } else {
                out << agreement_text(r);
            }
            return 0;
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return e.exit_code();
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return static_cast<int>(ErrorKind::internal);
    }
    return static_cast<int>(ErrorKind::internal);
}

}  // namespace expneed::cli

#endif
