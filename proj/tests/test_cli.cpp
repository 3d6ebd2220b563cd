#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "accsev/eval.hpp"
#include "accsev/forest.hpp"
#include "accsev/partition.hpp"
#include "accsev/prep.hpp"
#include "accsev/rng.hpp"
#include "accsev/table.hpp"

namespace fs = std::filesystem;
using namespace accsev;

namespace {

int run_cli(const std::string& args, const std::string& capture_stderr = "") {
    std::string command = std::string(ACCSEV_CLI_PATH) + " " + args + " >/dev/null";
    command += capture_stderr.empty() ? " 2>/dev/null" : " 2>" + capture_stderr;
    const int status = std::system(command.c_str());
    return WEXITSTATUS(status);
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("accsev_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("clean writes the expected artifacts and is rerun-stable") {
    const auto dir = fresh_dir("clean");
    const std::string base = "--out " + dir.string() + " --seed 7 ";
    REQUIRE(run_cli(base + "clean --input " + ACCSEV_FIXTURE_CSV) == 0);
    for (const char* name : {"cleaned.csv", "clean_summary.json", "clean_log.txt",
                             "missingness.tsv", "missingness.json", "manifest.json"})
        CHECK(fs::exists(dir / name));

    const std::string cleaned_first = slurp(dir / "cleaned.csv");
    const std::string summary_first = slurp(dir / "clean_summary.json");
    REQUIRE(run_cli(base + "clean --input " + ACCSEV_FIXTURE_CSV) == 0);
    CHECK(slurp(dir / "cleaned.csv") == cleaned_first);
    CHECK(slurp(dir / "clean_summary.json") == summary_first);

    // missingness report in the tabular layout
    CHECK(slurp(dir / "missingness.tsv").rfind("Col.num\tV.name\tMode\tN.level\tncom\tnmiss\tMiss.prop",
                                               0) == 0);

    // manifest carries a digest and grew by one entry per run
    const auto manifest = nlohmann::json::parse(slurp(dir / "manifest.json"));
    REQUIRE(manifest.is_array());
    CHECK(manifest.size() == 2);
    CHECK(manifest[0]["inputs"][0]["sha256"].get<std::string>().size() == 64);
}

TEST_CASE("missing input path exits 2 and names the path") {
    const auto dir = fresh_dir("missing_input");
    const auto err_file = (dir / "stderr.txt").string();
    const int code = run_cli("--out " + dir.string() + " clean --input /no/such/file.csv", err_file);
    CHECK(code == 2);
    CHECK(slurp(err_file).find("/no/such/file.csv") != std::string::npos);
}

TEST_CASE("upstream artifact errors name the prior command") {
    const auto dir = fresh_dir("no_upstream");
    const auto err_file = (dir / "stderr.txt").string();
    const int code = run_cli("--out " + dir.string() + " evaluate", err_file);
    CHECK(code == 2);
    CHECK(slurp(err_file).find("train") != std::string::npos);
}

TEST_CASE("repro without the dataset explains how to get it") {
    const auto dir = fresh_dir("repro");
    const auto err_file = (dir / "stderr.txt").string();
    const int code = run_cli("--out " + dir.string() + " repro --input /no/kaggle.csv", err_file);
    CHECK(code == 2);
    const std::string message = slurp(err_file);
    CHECK(message.find("Kaggle") != std::string::npos);
}

TEST_CASE("full pipeline chain on the bundled sample") {
    const auto dir = fresh_dir("chain");
    const std::string base = "--out " + dir.string() + " --seed 11 ";
    REQUIRE(run_cli(base + "clean --input " + ACCSEV_FIXTURE_CSV) == 0);
    REQUIRE(run_cli(base + "eda") == 0);
    REQUIRE(run_cli(base + "screen") == 0);
    REQUIRE(run_cli(base + "split") == 0);
    REQUIRE(run_cli(base + "balance") == 0);
    REQUIRE(run_cli(base + "train --trees 40") == 0);
    REQUIRE(run_cli(base + "evaluate") == 0);
    REQUIRE(run_cli(base + "roc") == 0);
    REQUIRE(run_cli(base + "importance") == 0);
    REQUIRE(run_cli(base + "compare --trees 40") == 0);

    for (const char* name :
         {"eda_Severity_Class.tsv", "eda_Month.tsv", "eda_Timezone.tsv", "eda_Day.tsv",
          "eda_State.tsv", "screening.tsv", "screening.json", "train.csv", "test.csv",
          "balanced.csv", "model.rf", "train_report.json", "metrics.tsv", "metrics.json",
          "cvauc.tsv", "roc.tsv", "roc.svg", "auc.json", "importance.tsv",
          "importance_columns.tsv", "table6.tsv", "table6.json"})
        CHECK_MESSAGE(fs::exists(dir / name), name);

    // metrics.json carries the full statistic set
    const auto metrics_doc = nlohmann::json::parse(slurp(dir / "metrics.json"));
    for (const char* key : {"accuracy", "accuracy_ci", "sensitivity", "specificity", "ppv", "npv",
                            "f1", "prevalence", "nir", "p_acc_gt_nir", "kappa",
                            "mcnemar_statistic", "mcnemar_p", "auc", "confusion", "seed"})
        CHECK_MESSAGE(metrics_doc.contains(key), key);
    CHECK(metrics_doc["accuracy"].get<double>() > 0.5);

    // screening covered every non-target cleaned column
    const auto cleaned = read_csv((dir / "cleaned.csv").string());
    const auto screening_doc = nlohmann::json::parse(slurp(dir / "screening.json"));
    CHECK(screening_doc["rows"].size() == cleaned.column_count() - 1);

    // Table-5-style text layout
    const std::string metrics_tsv = slurp(dir / "metrics.tsv");
    for (const char* row : {"ACCURACY", "SENSITIVITY/RECALL", "SPECIFICITY", "PREVALENCE",
                            "NO INFORMATION RATE", "KAPPA", "MCNEMAR", "NEG PRED VALUE"})
        CHECK_MESSAGE(metrics_tsv.find(row) != std::string::npos, row);

    // Table-6-style comparison with three metric rows
    const std::string table6 = slurp(dir / "table6.tsv");
    CHECK(table6.find("accuracy") != std::string::npos);
    CHECK(table6.find("sensitivity") != std::string::npos);
    CHECK(table6.find("specificity") != std::string::npos);

    // importance TSV in the Variable / MeanDecreaseGini layout
    CHECK(slurp(dir / "importance.tsv").rfind("Variable\tMeanDecreaseGini", 0) == 0);

    // ROC SVG is a self-contained image
    CHECK(slurp(dir / "roc.svg").rfind("<svg", 0) == 0);
}

TEST_CASE("identical seed gives byte-identical artifacts across runs and thread counts") {
    const auto dir_a = fresh_dir("det_a");
    const auto dir_b = fresh_dir("det_b");
    for (const auto& dir : {dir_a, dir_b}) {
        const std::string base = "--out " + dir.string() + " --seed 99 ";
        REQUIRE(run_cli(base + "clean --input " + ACCSEV_FIXTURE_CSV) == 0);
        REQUIRE(run_cli(base + "split") == 0);
        REQUIRE(run_cli(base + "balance") == 0);
        const std::string threads = dir == dir_a ? "1" : "4";
        REQUIRE(run_cli(base + "train --trees 30 --threads " + threads) == 0);
        REQUIRE(run_cli(base + "evaluate") == 0);
        REQUIRE(run_cli(base + "screen") == 0);
        REQUIRE(run_cli(base + "importance") == 0);
    }
    for (const char* name : {"cleaned.csv", "train.csv", "test.csv", "balanced.csv", "model.rf",
                             "metrics.tsv", "metrics.json", "screening.tsv", "importance.tsv"})
        CHECK_MESSAGE(slurp(dir_a / name) == slurp(dir_b / name), name);
}

TEST_CASE("exit code 1 for computation errors") {
    const auto dir = fresh_dir("compute_error");
    // a cleaned file whose target has three classes breaks screening
    {
        std::ofstream out(dir / "cleaned.csv");
        out << "v," << kSeverityClassColumn << "\n";
        for (int i = 0; i < 30; ++i)
            out << i << "," << (i % 3 == 0 ? "a" : i % 3 == 1 ? "b" : "c") << "\n";
    }
    const int code = run_cli("--out " + dir.string() + " screen");
    CHECK(code == 1);
}

TEST_CASE("forest beats a single tree on most seeds") {
    // simulation behind the comparison command: same training path, 20 seeds
    Rng meta(1234);
    int forest_wins = 0;
    const int n_seeds = 20;
    for (int s = 0; s < n_seeds; ++s) {
        const uint64_t seed = meta.next_u64();
        Rng rng(seed);
        Column x0({"x0", ColumnKind::numeric, false});
        Column x1({"x1", ColumnKind::numeric, false});
        Column x2({"x2", ColumnKind::numeric, false});
        Column target({"target", ColumnKind::categorical, false});
        for (int i = 0; i < 600; ++i) {
            const bool cls = rng.below(2) == 1;
            auto noisy = [&](double shift) {
                return rng.next_unit() + rng.next_unit() + (cls ? shift : 0.0);
            };
            x0.push_num(noisy(0.55));
            x1.push_num(noisy(0.4));
            x2.push_num(rng.next_unit());
            target.push_str(cls ? "pos" : "neg");
        }
        const auto table =
            ColumnTable::from_columns({std::move(x0), std::move(x1), std::move(x2), std::move(target)});
        const auto split = train_test_split(table, 2.0 / 3.0, seed);

        ForestConfig forest_cfg;
        forest_cfg.n_trees = 50;
        forest_cfg.seed = seed;
        const auto forest = train_forest(split.train, "target", "pos", forest_cfg);

        ForestConfig tree_cfg;
        tree_cfg.n_trees = 1;
        tree_cfg.bootstrap = false;
        tree_cfg.mtry = 3;
        tree_cfg.seed = seed;
        const auto tree = train_forest(split.train, "target", "pos", tree_cfg);

        std::vector<std::string> actual;
        for (size_t r = 0; r < split.test.row_count(); ++r)
            actual.push_back(split.test.column("target").str(r));
        const auto forest_acc =
            metrics(confusion(actual, forest.predict(split.test), "pos")).accuracy;
        const auto tree_acc = metrics(confusion(actual, tree.predict(split.test), "pos")).accuracy;
        if (forest_acc >= tree_acc) ++forest_wins;
    }
    CHECK(forest_wins >= 16);  // >= 80% of 20 seeds
}
