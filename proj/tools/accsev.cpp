// Pipeline driver: one subcommand per stage, file artifacts in between so any
// stage can be rerun or inspected on its own.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "accsev/config.hpp"
#include "accsev/digest.hpp"
#include "accsev/eval.hpp"
#include "accsev/forest.hpp"
#include "accsev/partition.hpp"
#include "accsev/prep.hpp"
#include "accsev/report.hpp"
#include "accsev/rng.hpp"
#include "accsev/screening.hpp"
#include "accsev/stats.hpp"
#include "accsev/table.hpp"
#include "accsev/version.hpp"

namespace fs = std::filesystem;
using accsev::report::json;

namespace {

using namespace accsev;

// files every stage writes / expects from its predecessor
constexpr const char* kCleanedCsv = "cleaned.csv";
constexpr const char* kTrainCsv = "train.csv";
constexpr const char* kTestCsv = "test.csv";
constexpr const char* kBalancedCsv = "balanced.csv";
constexpr const char* kModelFile = "model.rf";

struct StageIo {
    PipelineConfig cfg;
    std::vector<std::pair<std::string, std::string>> inputs;  // (path, sha256)
    std::vector<std::string> outputs;
    std::chrono::steady_clock::time_point started = std::chrono::steady_clock::now();

    std::string out_path(const std::string& name) const {
        return (fs::path(cfg.out_dir) / name).string();
    }

    ColumnTable read_input(const std::string& path, const char* upstream_command) {
        if (!fs::exists(path)) {
            std::string message = "missing input: " + path;
            if (upstream_command)
                message += " (run `accsev " + std::string(upstream_command) + "` first)";
            throw InputError(message);
        }
        inputs.emplace_back(path, sha256_file_hex(path));
        CsvOptions options;
        options.missing_markers = cfg.missing_markers;
        return read_csv(path, options);
    }

    void write_text(const std::string& name, const std::string& content) {
        fs::create_directories(cfg.out_dir);
        const std::string path = out_path(name);
        std::ofstream out(path, std::ios::binary);
        if (!out) throw InputError("cannot open file for writing: " + path);
        out << content;
        if (!out) throw InputError("write failed: " + path);
        outputs.push_back(path);
    }

    void write_json(const std::string& name, const json& value) {
        write_text(name, value.dump(2) + "\n");
    }

    void write_table(const std::string& name, const ColumnTable& table) {
        fs::create_directories(cfg.out_dir);
        write_csv(table, out_path(name));
        outputs.push_back(out_path(name));
    }
};

json config_snapshot(const PipelineConfig& cfg) {
    return {{"input", cfg.input},
            {"out", cfg.out_dir},
            {"seed", cfg.seed},
            {"target", cfg.target},
            {"positive", cfg.positive},
            {"alpha", cfg.alpha},
            {"ratio", cfg.ratio},
            {"stratify", cfg.stratify ? json(*cfg.stratify) : json(nullptr)},
            {"threshold", cfg.threshold},
            {"cv_folds", cfg.cv_folds},
            {"exclude_features", cfg.exclude_features},
            {"severity_threshold", cfg.cleaning.severity_threshold},
            {"state_filter", cfg.cleaning.state_filter ? json(*cfg.cleaning.state_filter) : json(nullptr)},
            {"balance_mode", rebalance_mode_name(cfg.rebalance.mode)},
            {"balance_ratio", cfg.rebalance.target_ratio},
            {"trees", cfg.forest.n_trees},
            {"mtry", cfg.forest.mtry},
            {"min_leaf", cfg.forest.min_leaf},
            {"max_depth", cfg.forest.max_depth},
            {"bootstrap", cfg.forest.bootstrap},
            {"threads", cfg.forest.n_threads}};
}

void append_manifest(const std::string& command, const StageIo& io) {
    const std::string path = io.out_path("manifest.json");
    json manifest = json::array();
    if (fs::exists(path)) {
        std::ifstream in(path);
        try {
            manifest = json::parse(in);
            if (!manifest.is_array()) manifest = json::array();
        } catch (...) {
            manifest = json::array();
        }
    }
    json inputs = json::array();
    for (const auto& [file, digest] : io.inputs)
        inputs.push_back({{"path", file}, {"sha256", digest}});
    const auto elapsed =
        std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - io.started);
    manifest.push_back({{"command", command},
                        {"tool_version", kToolVersion},
                        {"config", config_snapshot(io.cfg)},
                        {"inputs", inputs},
                        {"outputs", io.outputs},
                        {"elapsed_ms", elapsed.count()}});
    fs::create_directories(io.cfg.out_dir);
    std::ofstream out(path, std::ios::binary);
    out << manifest.dump(2) << "\n";
}

// ---------------------------------------------------------------------------

ColumnTable drop_excluded_features(const ColumnTable& t, const PipelineConfig& cfg) {
    std::vector<std::string> present;
    for (const auto& name : cfg.exclude_features)
        if (t.has_column(name) && name != cfg.target) present.push_back(name);
    return present.empty() ? t : t.drop_columns(present);
}

void cmd_clean(StageIo& io) {
    const auto raw = io.read_input(io.cfg.input, nullptr);
    CleanSummary summary;
    MissingnessReport mid;
    const auto cleaned = run_cleaning_pipeline(raw, io.cfg.cleaning, summary, &mid);

    io.write_table(kCleanedCsv, cleaned);
    io.write_json("clean_summary.json", report::clean_summary_json(summary));
    io.write_text("clean_log.txt", report::clean_summary_text(summary));
    io.write_text("missingness.tsv", report::missingness_tsv(mid));
    io.write_json("missingness.json", report::missingness_json(mid));
    std::cout << "clean: " << summary.rows_before << " -> " << summary.rows_after << " rows, "
              << summary.columns_before << " -> " << summary.columns_after << " columns\n";
}

void cmd_eda(StageIo& io, const std::string& input) {
    const auto t = io.read_input(input, "clean");
    const std::vector<std::string> wanted = {io.cfg.target, "Month", "Timezone", "Day", "State"};
    for (const auto& column : wanted) {
        if (!t.has_column(column)) {
            std::cerr << "eda: column absent, skipped: " << column << "\n";
            continue;
        }
        const auto freq = t.group_count(column);
        std::string stem = "eda_";
        for (char c : column) stem += std::isalnum(static_cast<unsigned char>(c)) ? c : '_';
        io.write_text(stem + ".tsv", report::frequency_tsv(freq));
        io.write_json(stem + ".json", report::frequency_json(freq));
    }
}

void cmd_screen(StageIo& io, const std::string& input) {
    const auto t = io.read_input(input, "clean");
    const auto rows = screen_all(t, io.cfg.target, io.cfg.alpha);
    io.write_text("screening.tsv", report::screening_tsv(rows));
    io.write_json("screening.json", report::screening_json(rows, io.cfg.alpha));
    size_t important = 0;
    for (const auto& row : rows) important += row.important ? 1 : 0;
    std::cout << "screen: " << important << " of " << rows.size() << " variables important at alpha "
              << io.cfg.alpha << "\n";
}

void cmd_split(StageIo& io, const std::string& input) {
    const auto t = io.read_input(input, "clean");
    const auto split = train_test_split(t, io.cfg.ratio, io.cfg.seed, io.cfg.stratify);
    io.write_table(kTrainCsv, split.train);
    io.write_table(kTestCsv, split.test);
    io.write_json("split.json", {{"seed", split.seed},
                                 {"ratio", split.ratio},
                                 {"stratify", io.cfg.stratify ? json(*io.cfg.stratify) : json(nullptr)},
                                 {"train_rows", split.train.row_count()},
                                 {"test_rows", split.test.row_count()}});
    std::cout << "split: " << split.train.row_count() << " train / " << split.test.row_count()
              << " test\n";
}

void cmd_balance(StageIo& io, const std::string& input) {
    const auto t = io.read_input(input, "split");
    const auto before = t.group_count(io.cfg.target);
    const auto balanced = rebalance(t, io.cfg.target, io.cfg.rebalance);
    const auto after = balanced.group_count(io.cfg.target);
    io.write_table(kBalancedCsv, balanced);
    json counts_before = json::object(), counts_after = json::object();
    for (const auto& e : before.entries) counts_before[e.key] = e.count;
    for (const auto& e : after.entries) counts_after[e.key] = e.count;
    io.write_json("balance.json", {{"seed", io.cfg.rebalance.seed},
                                   {"mode", rebalance_mode_name(io.cfg.rebalance.mode)},
                                   {"target_ratio", io.cfg.rebalance.target_ratio},
                                   {"before", counts_before},
                                   {"after", counts_after}});
    std::cout << "balance: " << t.row_count() << " -> " << balanced.row_count() << " rows\n";
}

void cmd_train(StageIo& io, const std::string& input) {
    std::string path = input;
    if (path.empty()) {
        // prefer the balanced table, fall back to the raw training partition
        path = fs::exists(io.out_path(kBalancedCsv)) ? io.out_path(kBalancedCsv)
                                                     : io.out_path(kTrainCsv);
    }
    const auto t = drop_excluded_features(io.read_input(path, "balance"), io.cfg);
    const auto model = train_forest(t, io.cfg.target, io.cfg.positive, io.cfg.forest);
    save_model(model, io.out_path(kModelFile));
    io.outputs.push_back(io.out_path(kModelFile));

    json train_report = {{"rows", t.row_count()},
                         {"features", model.encoder.feature_count()},
                         {"trees", model.config.n_trees},
                         {"mtry", model.config.mtry},
                         {"min_leaf", model.config.min_leaf},
                         {"max_depth", model.config.max_depth},
                         {"seed", model.config.seed},
                         {"bootstrap", model.config.bootstrap},
                         {"labels", {model.labels[0], model.labels[1]}}};
    if (model.oob_error) train_report["oob_error"] = *model.oob_error;
    io.write_json("train_report.json", train_report);
    std::cout << "train: " << model.config.n_trees << " trees over " << model.encoder.feature_count()
              << " features" << (model.oob_error ? " (oob error " + std::to_string(*model.oob_error) + ")" : "")
              << "\n";
}

std::vector<std::string> actual_labels(const ColumnTable& t, const std::string& target) {
    const Column& col = t.column(target);
    std::vector<std::string> out;
    out.reserve(t.row_count());
    for (size_t r = 0; r < t.row_count(); ++r) {
        if (col.is_missing(r)) throw InputError("target has missing cells");
        out.push_back(col.cell_text(r));
    }
    return out;
}

void cmd_evaluate(StageIo& io, const std::string& model_path, const std::string& input) {
    if (!fs::exists(model_path))
        throw InputError("missing model: " + model_path + " (run `accsev train` first)");
    io.inputs.emplace_back(model_path, sha256_file_hex(model_path));
    const auto model = load_model(model_path);
    const auto t = io.read_input(input, "split");

    const auto actual = actual_labels(t, model.target);
    const auto predicted = model.predict(t, io.cfg.threshold);
    const auto cm = confusion(actual, predicted, io.cfg.positive);
    const auto m = metrics(cm);
    io.write_text("metrics.tsv", report::metrics_tsv(m));
    json metrics_doc = report::metrics_json(m, cm);
    metrics_doc["seed"] = io.cfg.seed;
    metrics_doc["threshold"] = io.cfg.threshold;

    const auto scores = model.predict_proba(t);
    metrics_doc["auc"] = auc(scores, actual, io.cfg.positive);

    if (io.cfg.cv_folds >= 2 && t.row_count() >= io.cfg.cv_folds) {
        // deterministic seeded deal of the evaluation rows into k folds
        std::vector<size_t> order(t.row_count());
        for (size_t i = 0; i < order.size(); ++i) order[i] = i;
        Rng rng(io.cfg.seed, 0xC5);
        shuffle(order, rng);
        std::vector<ScoredFold> folds(io.cfg.cv_folds);
        for (size_t i = 0; i < order.size(); ++i) {
            auto& fold = folds[i % io.cfg.cv_folds];
            fold.scores.push_back(scores[order[i]]);
            fold.actual.push_back(actual[order[i]]);
        }
        try {
            const auto estimate = cv_auc(folds, io.cfg.positive, m.confidence);
            io.write_text("cvauc.tsv", report::cv_auc_tsv(estimate, m.confidence));
            io.write_json("cvauc.json", report::cv_auc_json(estimate));
            metrics_doc["cv_auc"] = estimate.value;
        } catch (const StatError& e) {
            metrics_doc["cv_auc_skipped"] = e.what();
        }
    }
    io.write_json("metrics.json", metrics_doc);
    std::cout << "evaluate: accuracy " << m.accuracy << ", auc " << metrics_doc["auc"].get<double>()
              << " on " << t.row_count() << " rows\n";
}

void cmd_roc(StageIo& io, const std::string& model_path, const std::string& input) {
    if (!fs::exists(model_path))
        throw InputError("missing model: " + model_path + " (run `accsev train` first)");
    io.inputs.emplace_back(model_path, sha256_file_hex(model_path));
    const auto model = load_model(model_path);
    const auto t = io.read_input(input, "split");

    const auto actual = actual_labels(t, model.target);
    const auto scores = model.predict_proba(t);
    const auto curve = roc_curve(scores, actual, io.cfg.positive);
    const double area = auc(scores, actual, io.cfg.positive);
    io.write_text("roc.tsv", report::roc_tsv(curve));
    io.write_text("roc.svg", report::roc_svg(curve, area));
    io.write_json("auc.json", {{"auc", area}, {"points", curve.points.size()}, {"seed", io.cfg.seed}});
    std::cout << "roc: auc " << area << " over " << curve.points.size() << " points\n";
}

void cmd_importance(StageIo& io, const std::string& model_path) {
    if (!fs::exists(model_path))
        throw InputError("missing model: " + model_path + " (run `accsev train` first)");
    io.inputs.emplace_back(model_path, sha256_file_hex(model_path));
    const auto model = load_model(model_path);
    const auto by_variable = importance_by_variable(model);
    const auto by_column = importance_mdg(model);
    io.write_text("importance.tsv", report::importance_tsv(by_variable));
    io.write_text("importance_columns.tsv", report::importance_tsv(by_column));
    io.write_json("importance.json", report::importance_json(by_variable, by_column));
    std::cout << "importance: " << by_variable.size() << " variables";
    if (!by_variable.empty()) std::cout << ", top " << by_variable.front().name;
    std::cout << "\n";
}

struct EvaluatedModel {
    MetricsReport metrics_report;
    double auc_value = 0.0;
};

EvaluatedModel evaluate_on(const ForestModel& model, const ColumnTable& test,
                           const PipelineConfig& cfg) {
    const auto actual = actual_labels(test, model.target);
    const auto predicted = model.predict(test, cfg.threshold);
    EvaluatedModel out;
    out.metrics_report = metrics(confusion(actual, predicted, cfg.positive));
    out.auc_value = auc(model.predict_proba(test), actual, cfg.positive);
    return out;
}

void cmd_compare(StageIo& io, std::string train_path, const std::string& test_path) {
    if (train_path.empty())
        train_path = fs::exists(io.out_path(kBalancedCsv)) ? io.out_path(kBalancedCsv)
                                                           : io.out_path(kTrainCsv);
    const auto train_table = drop_excluded_features(io.read_input(train_path, "balance"), io.cfg);
    const auto test_table = io.read_input(test_path, "split");

    const auto forest_model = train_forest(train_table, io.cfg.target, io.cfg.positive, io.cfg.forest);

    // single fully-grown CART tree on the identical split
    ForestConfig tree_config = io.cfg.forest;
    tree_config.n_trees = 1;
    tree_config.bootstrap = false;
    tree_config.max_depth = -1;
    tree_config.mtry = FeatureEncoder::fit(train_table, io.cfg.target).feature_count();
    const auto tree_model = train_forest(train_table, io.cfg.target, io.cfg.positive, tree_config);

    const auto rf = evaluate_on(forest_model, test_table, io.cfg);
    const auto dt = evaluate_on(tree_model, test_table, io.cfg);
    const auto rows = compare_models(dt.metrics_report, rf.metrics_report);
    io.write_text("table6.tsv", report::comparison_tsv(rows, "decision_tree", "random_forest"));
    json doc = report::comparison_json(rows, "decision_tree", "random_forest");
    doc["decision_tree_auc"] = dt.auc_value;
    doc["random_forest_auc"] = rf.auc_value;
    doc["seed"] = io.cfg.seed;
    io.write_json("table6.json", doc);
    std::cout << "compare: forest accuracy " << rf.metrics_report.accuracy << " vs tree "
              << dt.metrics_report.accuracy << "\n";
}

std::string canonical_variable(const std::string& name) {
    std::string out;
    for (char c : name)
        if (std::isalnum(static_cast<unsigned char>(c)))
            out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

void cmd_repro(StageIo& io) {
    if (io.cfg.input.empty() || !fs::exists(io.cfg.input))
        throw InputError(
            "reproduction needs the full US-Accidents CSV (about 3 GB, ~2.8M rows). It is never "
            "bundled; download it from Kaggle (dataset 'sobhanmoosavi/us-accidents') and pass the "
            "path via --input. Missing: " + io.cfg.input);

    if (!io.cfg.cleaning.state_filter) io.cfg.cleaning.state_filter = "CA";

    cmd_clean(io);
    cmd_screen(io, io.out_path(kCleanedCsv));
    cmd_split(io, io.out_path(kCleanedCsv));
    cmd_balance(io, io.out_path(kTrainCsv));
    cmd_train(io, io.out_path(kBalancedCsv));
    cmd_evaluate(io, io.out_path(kModelFile), io.out_path(kTestCsv));
    cmd_roc(io, io.out_path(kModelFile), io.out_path(kTestCsv));
    cmd_importance(io, io.out_path(kModelFile));
    cmd_compare(io, io.out_path(kBalancedCsv), io.out_path(kTestCsv));

    // divergence report against the published reference results
    const double reference_accuracy = 0.812;
    const double reference_auc = 0.800;
    const std::vector<std::string> reference_top6 = {"windspeed", "pressure", "humidity",
                                                     "clear",     "visibility", "cloud"};

    std::ifstream metrics_in(io.out_path("metrics.json"));
    const json metrics_doc = json::parse(metrics_in);
    const double accuracy = metrics_doc["accuracy"].get<double>();
    const double auc_value = metrics_doc["auc"].get<double>();

    std::ifstream importance_in(io.out_path("importance.json"));
    const json importance_doc = json::parse(importance_in);
    std::vector<std::string> top6;
    for (const auto& entry : importance_doc["by_variable"]) {
        top6.push_back(entry["variable"].get<std::string>());
        if (top6.size() == 6) break;
    }
    size_t overlap = 0;
    for (const auto& variable : top6) {
        const std::string canon = canonical_variable(variable);
        for (const auto& ref : reference_top6)
            if (canon.rfind(ref, 0) == 0) {
                ++overlap;
                break;
            }
    }

    json divergence = {
        {"accuracy", {{"computed", accuracy}, {"reference", reference_accuracy},
                      {"abs_diff", std::abs(accuracy - reference_accuracy)},
                      {"within_0.03", std::abs(accuracy - reference_accuracy) <= 0.03}}},
        {"auc", {{"computed", auc_value}, {"reference", reference_auc},
                 {"abs_diff", std::abs(auc_value - reference_auc)},
                 {"within_0.03", std::abs(auc_value - reference_auc) <= 0.03}}},
        {"top6", {{"computed", top6}, {"reference", reference_top6},
                  {"overlap", overlap}, {"at_least_4", overlap >= 4}}}};
    io.write_json("repro_report.json", divergence);

    std::string tsv = "Quantity\tComputed\tReference\tWithin tolerance\n";
    char buf[128];
    std::snprintf(buf, sizeof(buf), "accuracy\t%.3f\t%.3f\t%s\n", accuracy, reference_accuracy,
                  std::abs(accuracy - reference_accuracy) <= 0.03 ? "yes" : "no");
    tsv += buf;
    std::snprintf(buf, sizeof(buf), "auc\t%.3f\t%.3f\t%s\n", auc_value, reference_auc,
                  std::abs(auc_value - reference_auc) <= 0.03 ? "yes" : "no");
    tsv += buf;
    std::snprintf(buf, sizeof(buf), "top6_overlap\t%zu\t>=4\t%s\n", overlap, overlap >= 4 ? "yes" : "no");
    tsv += buf;
    io.write_text("repro_report.tsv", tsv);
    std::cout << "repro: accuracy " << accuracy << " (reference " << reference_accuracy << "), auc "
              << auc_value << " (reference " << reference_auc << "), top-6 overlap " << overlap << "/6\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Accident-severity modeling pipeline (cleaning, screening, random forest, evaluation)"};
    app.require_subcommand(1);
    app.set_version_flag("--version", accsev::kToolVersion);

    std::string config_path;
    std::optional<uint64_t> seed_flag;
    std::optional<std::string> out_flag, positive_flag;
    app.add_option("--config", config_path, "key = value configuration file")->expected(1);
    app.add_option("--seed", seed_flag, "seed for every stochastic stage");
    app.add_option("--out", out_flag, "output directory");
    app.add_option("--positive", positive_flag, "positive class label");

    std::string input, model_path, train_path, test_path;
    std::optional<std::string> target_flag, stratify_flag, state_flag;
    std::optional<double> ratio_flag, alpha_flag, threshold_flag, balance_ratio_flag;
    std::optional<std::string> balance_mode_flag;
    std::optional<size_t> trees_flag, mtry_flag, min_leaf_flag, threads_flag, cv_folds_flag;
    std::optional<int> max_depth_flag;
    bool oob_flag = false, no_bootstrap_flag = false;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--target", target_flag, "binary target column");
        return sub;
    };

    auto* clean = add_common(app.add_subcommand("clean", "run the cleaning pipeline on a raw CSV"));
    clean->add_option("--input", input, "raw CSV path");
    clean->add_option("--state", state_flag, "keep only this State code");

    auto* eda = add_common(app.add_subcommand("eda", "frequency reports for the standard groupings"));
    eda->add_option("--input", input, "cleaned CSV path");

    auto* screen = add_common(app.add_subcommand("screen", "per-variable statistical screening"));
    screen->add_option("--input", input, "cleaned CSV path");
    screen->add_option("--alpha", alpha_flag, "significance level");

    auto* split = add_common(app.add_subcommand("split", "seeded train/test partition"));
    split->add_option("--input", input, "cleaned CSV path");
    split->add_option("--ratio", ratio_flag, "training fraction (default 2/3)");
    split->add_option("--stratify", stratify_flag, "stratify on this column");

    auto* balance = add_common(app.add_subcommand("balance", "rebalance the training classes"));
    balance->add_option("--input", input, "training CSV path");
    balance->add_option("--mode", balance_mode_flag, "oversample | undersample | both");
    balance->add_option("--target-ratio", balance_ratio_flag, "minority:majority after resampling");

    auto* train = add_common(app.add_subcommand("train", "train the random forest"));
    train->add_option("--input", input, "training CSV path");
    train->add_option("--trees", trees_flag, "number of trees (default 500)");
    train->add_option("--mtry", mtry_flag, "candidate features per node (default sqrt(p))");
    train->add_option("--min-leaf", min_leaf_flag, "minimum rows per leaf");
    train->add_option("--max-depth", max_depth_flag, "depth bound (-1 = unbounded)");
    train->add_option("--threads", threads_flag, "worker threads (0 = hardware)");
    train->add_flag("--oob", oob_flag, "also compute the out-of-bag error");
    train->add_flag("--no-bootstrap", no_bootstrap_flag, "exact mode: every row once per tree");

    auto* evaluate = add_common(app.add_subcommand("evaluate", "confusion-matrix statistics on a test set"));
    evaluate->add_option("--model", model_path, "model file");
    evaluate->add_option("--input", input, "test CSV path");
    evaluate->add_option("--threshold", threshold_flag, "vote-fraction decision threshold");
    evaluate->add_option("--cv-folds", cv_folds_flag, "folds for the cross-validated AUC");

    auto* roc = add_common(app.add_subcommand("roc", "ROC curve as TSV and SVG"));
    roc->add_option("--model", model_path, "model file");
    roc->add_option("--input", input, "test CSV path");

    auto* importance = app.add_subcommand("importance", "Gini-decrease variable importance");
    importance->add_option("--model", model_path, "model file");

    auto* compare = add_common(app.add_subcommand("compare", "single CART tree vs the forest"));
    compare->add_option("--train", train_path, "training CSV path");
    compare->add_option("--test", test_path, "test CSV path");
    compare->add_option("--trees", trees_flag, "forest size");

    auto* repro = add_common(app.add_subcommand("repro", "full published-pipeline reproduction run"));
    repro->add_option("--input", input, "full US-Accidents CSV path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        StageIo io;
        io.cfg = config_path.empty() ? PipelineConfig{} : PipelineConfig::load(config_path);
        if (config_path.empty()) {
            io.cfg.rebalance.seed = io.cfg.seed;
            io.cfg.forest.seed = io.cfg.seed;
        }
        if (seed_flag) {
            io.cfg.seed = *seed_flag;
            io.cfg.rebalance.seed = *seed_flag;
            io.cfg.forest.seed = *seed_flag;
        }
        if (out_flag) io.cfg.out_dir = *out_flag;
        if (positive_flag) io.cfg.positive = *positive_flag;
        if (target_flag) io.cfg.target = *target_flag;
        if (alpha_flag) io.cfg.alpha = *alpha_flag;
        if (ratio_flag) io.cfg.ratio = *ratio_flag;
        if (stratify_flag) io.cfg.stratify = *stratify_flag;
        if (state_flag) io.cfg.cleaning.state_filter = *state_flag;
        if (threshold_flag) io.cfg.threshold = *threshold_flag;
        if (cv_folds_flag) io.cfg.cv_folds = *cv_folds_flag;
        if (balance_mode_flag) io.cfg.rebalance.mode = rebalance_mode_from_name(*balance_mode_flag);
        if (balance_ratio_flag) io.cfg.rebalance.target_ratio = *balance_ratio_flag;
        if (trees_flag) io.cfg.forest.n_trees = *trees_flag;
        if (mtry_flag) io.cfg.forest.mtry = *mtry_flag;
        if (min_leaf_flag) io.cfg.forest.min_leaf = *min_leaf_flag;
        if (max_depth_flag) io.cfg.forest.max_depth = *max_depth_flag;
        if (threads_flag) io.cfg.forest.n_threads = *threads_flag;
        if (oob_flag) io.cfg.forest.compute_oob = true;
        if (no_bootstrap_flag) io.cfg.forest.bootstrap = false;
        if (!input.empty() && (clean->parsed() || repro->parsed())) io.cfg.input = input;

        std::string command;
        if (clean->parsed()) {
            command = "clean";
            if (io.cfg.input.empty()) throw InputError("clean needs --input (or `input` in the config)");
            cmd_clean(io);
        } else if (eda->parsed()) {
            command = "eda";
            cmd_eda(io, input.empty() ? io.out_path(kCleanedCsv) : input);
        } else if (screen->parsed()) {
            command = "screen";
            cmd_screen(io, input.empty() ? io.out_path(kCleanedCsv) : input);
        } else if (split->parsed()) {
            command = "split";
            cmd_split(io, input.empty() ? io.out_path(kCleanedCsv) : input);
        } else if (balance->parsed()) {
            command = "balance";
            cmd_balance(io, input.empty() ? io.out_path(kTrainCsv) : input);
        } else if (train->parsed()) {
            command = "train";
            cmd_train(io, input);
        } else if (evaluate->parsed()) {
            command = "evaluate";
            cmd_evaluate(io, model_path.empty() ? io.out_path(kModelFile) : model_path,
                         input.empty() ? io.out_path(kTestCsv) : input);
        } else if (roc->parsed()) {
            command = "roc";
            cmd_roc(io, model_path.empty() ? io.out_path(kModelFile) : model_path,
                    input.empty() ? io.out_path(kTestCsv) : input);
        } else if (importance->parsed()) {
            command = "importance";
            cmd_importance(io, model_path.empty() ? io.out_path(kModelFile) : model_path);
        } else if (compare->parsed()) {
            command = "compare";
            cmd_compare(io, train_path, test_path.empty() ? io.out_path(kTestCsv) : test_path);
        } else if (repro->parsed()) {
            command = "repro";
            cmd_repro(io);
        }
        append_manifest(command, io);
        return 0;
    } catch (const accsev::InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const accsev::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
