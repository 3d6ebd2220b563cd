// Acceptance suite: one line per criterion, nonzero exit if any fails.

#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "accsev/eval.hpp"
#include "accsev/forest.hpp"
#include "accsev/partition.hpp"
#include "accsev/prep.hpp"
#include "accsev/report.hpp"
#include "accsev/rng.hpp"
#include "accsev/screening.hpp"
#include "accsev/stats.hpp"
#include "accsev/table.hpp"
#include "oracles.hpp"

using namespace accsev;

namespace {

int failures = 0;

void report(int criterion, const char* name, bool pass, const std::string& detail = "") {
    std::printf("%s criterion %d: %s%s%s\n", pass ? "PASS" : "FAIL", criterion, name,
                detail.empty() ? "" : " -- ", detail.c_str());
    if (!pass) ++failures;
}

// gaussian from the counter rng (Box-Muller)
double gauss(Rng& rng) {
    const double u1 = 1.0 - rng.next_unit();
    const double u2 = rng.next_unit();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
}

// --- criterion 1 -------------------------------------------------------------

void criterion_1_metric_reconstruction() {
    const ConfusionMatrix cm{644, 19, 169, 168, "severe"};
    const auto m = metrics(cm);
    struct Check { const char* name; double got; double want; };
    const Check checks[] = {
        {"accuracy", m.accuracy, 0.812},
        {"sensitivity", m.sensitivity.value_or(-1), 0.792},
        {"specificity", m.specificity.value_or(-1), 0.898},
        {"ppv", m.ppv.value_or(-1), 0.971},
        {"npv", m.npv.value_or(-1), 0.499},
        {"f1", m.f1.value_or(-1), 0.873},
        {"prevalence", m.prevalence, 0.813},
        {"nir", m.nir, 0.813},
        {"kappa", m.kappa.value_or(-1), 0.528},
    };
    bool pass = true;
    std::string detail;
    for (const auto& check : checks) {
        if (std::abs(check.got - check.want) > 0.001) {
            pass = false;
            char buf[128];
            std::snprintf(buf, sizeof(buf), "%s=%.4f wanted %.3f; ", check.name, check.got, check.want);
            detail += buf;
        }
    }
    if (!m.mcnemar_p || *m.mcnemar_p >= 1e-12) {
        pass = false;
        detail += "mcnemar p not < 1e-12";
    }
    report(1, "Table 5 metric reconstruction (tp=644 fp=19 fn=169 tn=168, each +-0.001)", pass, detail);
}

// --- criterion 2 -------------------------------------------------------------

void criterion_2_auc_oracle() {
    Rng rng(2020);
    double worst = 0.0;
    for (int it = 0; it < 200; ++it) {
        const size_t n_pos = 1 + rng.below(25), n_neg = 1 + rng.below(25);
        std::vector<double> scores, pos, neg;
        std::vector<std::string> labels;
        for (size_t i = 0; i < n_pos + n_neg; ++i) {
            const double s = rng.below(2) ? std::floor(rng.next_unit() * 6.0) / 6.0  // ties
                                          : rng.next_unit();
            scores.push_back(s);
            if (i < n_pos) {
                labels.push_back("+");
                pos.push_back(s);
            } else {
                labels.push_back("-");
                neg.push_back(s);
            }
        }
        worst = std::max(worst, std::abs(auc(scores, labels, "+") - oracles::mann_whitney_auc(pos, neg)));
    }
    char buf[64];
    std::snprintf(buf, sizeof(buf), "max |trapezoid - pairs| = %.2e", worst);
    report(2, "AUC equals tie-corrected Mann-Whitney on 200 random score sets (1e-12)", worst <= 1e-12,
           buf);
}

// --- criterion 3 -------------------------------------------------------------

void criterion_3_test_oracles() {
    bool pass = true;
    std::string detail;

    // Fisher vs exact integer enumeration, all 2x2 tables with marginals <= 10
    double worst_fisher = 0.0;
    size_t tables = 0;
    for (uint64_t a = 0; a <= 10; ++a)
        for (uint64_t b = 0; b <= 10 - a && a + b <= 10; ++b)
            for (uint64_t c = 0; c <= 10; ++c)
                for (uint64_t d = 0; d <= 10 - c; ++d) {
                    if (a + b > 10 || c + d > 10 || a + c > 10 || b + d > 10) continue;
                    if (a + b == 0 || c + d == 0 || a + c == 0 || b + d == 0) continue;
                    ++tables;
                    const double got = fisher_exact_2x2(ContingencyTable({{a, b}, {c, d}})).p_value;
                    const double want = oracles::fisher_two_sided_exact(a, b, c, d);
                    worst_fisher = std::max(worst_fisher, std::abs(got - want));
                }
    if (worst_fisher > 1e-9) {
        pass = false;
        detail += "fisher off by " + std::to_string(worst_fisher) + "; ";
    }

    // exact Wilcoxon vs bitmask enumeration, tie-free, n_x + n_y <= 10
    Rng rng(303);
    double worst_wilcoxon = 0.0;
    for (size_t nx = 1; nx <= 9; ++nx) {
        for (size_t ny = 1; nx + ny <= 10; ++ny) {
            for (int rep = 0; rep < 5; ++rep) {
                std::vector<double> x, y, used;
                auto fresh = [&]() {
                    for (;;) {
                        const double v = std::floor(rng.next_unit() * 1e6);
                        if (std::find(used.begin(), used.end(), v) == used.end()) {
                            used.push_back(v);
                            return v;
                        }
                    }
                };
                for (size_t i = 0; i < nx; ++i) x.push_back(fresh());
                for (size_t i = 0; i < ny; ++i) y.push_back(fresh());
                const double got = wilcoxon_rank_sum(x, y, WilcoxonMethod::exact).p_value;
                const double want = oracles::wilcoxon_exact_two_sided(x, y);
                worst_wilcoxon = std::max(worst_wilcoxon, std::abs(got - want));
            }
        }
    }
    if (worst_wilcoxon > 1e-12) {
        pass = false;
        detail += "wilcoxon off by " + std::to_string(worst_wilcoxon) + "; ";
    }

    // chi-square with Yates vs the closed 2x2 formula, 100 random tables
    double worst_chi = 0.0;
    for (int it = 0; it < 100; ++it) {
        const uint64_t a = 1 + rng.below(80), b = 1 + rng.below(80);
        const uint64_t c = 1 + rng.below(80), d = 1 + rng.below(80);
        const double n = static_cast<double>(a + b + c + d);
        const double diff = std::abs(static_cast<double>(a * d) - static_cast<double>(b * c));
        const double adj = std::max(0.0, diff - n / 2.0);
        const double want = n * adj * adj /
                            (static_cast<double>(a + b) * static_cast<double>(c + d) *
                             static_cast<double>(a + c) * static_cast<double>(b + d));
        const double got = chi_square_test(ContingencyTable({{a, b}, {c, d}})).statistic;
        worst_chi = std::max(worst_chi, std::abs(got - want));
    }
    if (worst_chi > 1e-9) {
        pass = false;
        detail += "chi-square off by " + std::to_string(worst_chi);
    }

    char buf[160];
    std::snprintf(buf, sizeof(buf), "fisher %zu tables max %.1e; wilcoxon max %.1e; chi2 max %.1e",
                  tables, worst_fisher, worst_wilcoxon, worst_chi);
    report(3, "Fisher / exact Wilcoxon / Yates chi-square match their oracles", pass,
           detail.empty() ? buf : detail);
}

// --- criterion 4 -------------------------------------------------------------

void criterion_4_cart_oracle() {
    Rng rng(4040);
    bool pass = true;
    std::string detail;
    for (int it = 0; it < 100 && pass; ++it) {
        const size_t n = 2 + rng.below(11);
        const size_t p = 1 + rng.below(3);
        std::vector<std::vector<double>> X(p, std::vector<double>(n));
        std::vector<uint8_t> y(n);
        for (size_t f = 0; f < p; ++f)
            for (size_t i = 0; i < n; ++i)
                X[f][i] = rng.below(2) ? static_cast<double>(rng.below(5)) : rng.next_unit() * 4.0;
        for (size_t i = 0; i < n; ++i) y[i] = static_cast<uint8_t>(rng.below(2));

        FeatureMatrix m;
        m.n_features = p;
        m.n_rows = n;
        for (const auto& col : X) m.values.insert(m.values.end(), col.begin(), col.end());
        std::vector<uint32_t> candidates(p);
        for (uint32_t f = 0; f < p; ++f) candidates[f] = f;
        std::vector<size_t> rows(n);
        for (size_t i = 0; i < n; ++i) rows[i] = i;

        const auto got = best_split(m, y, rows, candidates, 1);
        const auto want = oracles::brute_force_best_split(X, y, 1);
        if (got.has_value() != want.has_value()) {
            pass = false;
            detail = "presence mismatch at iteration " + std::to_string(it);
        } else if (got && (got->feature != want->feature || got->threshold != want->threshold ||
                           got->decrease != want->decrease)) {
            pass = false;
            detail = "rule mismatch at iteration " + std::to_string(it);
        }
    }
    report(4, "best_split identical to exhaustive oracle on 100 random small datasets", pass, detail);
}

// --- criterion 5 -------------------------------------------------------------

void criterion_5_planted_signal() {
    const int n_seeds = 20;
    int top3_hits = 0;
    double accuracy_sum = 0.0, accuracy_min = 1.0;
    for (int s = 0; s < n_seeds; ++s) {
        Rng rng(9000 + static_cast<uint64_t>(s));
        const size_t n = 5000;
        std::vector<Column> cols;
        for (int f = 0; f < 13; ++f) cols.emplace_back(ColumnSpec{"x" + std::to_string(f), ColumnKind::numeric, false});
        Column target({"target", ColumnKind::categorical, false});

        for (size_t i = 0; i < n; ++i) {
            const bool positive = rng.next_unit() < 0.30;  // imbalanced so balancing matters
            for (int f = 0; f < 13; ++f) {
                const double shift = (f < 3 && positive) ? 2.0 : 0.0;  // 2-sigma planted signal
                cols[static_cast<size_t>(f)].push_num(gauss(rng) + shift);
            }
            target.push_str(positive ? "pos" : "neg");
        }
        cols.push_back(std::move(target));
        const auto table = ColumnTable::from_columns(std::move(cols));

        const auto split = train_test_split(table, 2.0 / 3.0, 9000 + static_cast<uint64_t>(s));
        RebalanceConfig balance_cfg;
        balance_cfg.mode = RebalanceMode::undersample;
        balance_cfg.seed = 9000 + static_cast<uint64_t>(s);
        const auto balanced = rebalance(split.train, "target", balance_cfg);

        ForestConfig forest_cfg;
        forest_cfg.n_trees = 100;
        forest_cfg.seed = 9000 + static_cast<uint64_t>(s);
        const auto model = train_forest(balanced, "target", "pos", forest_cfg);

        std::vector<std::string> actual;
        for (size_t r = 0; r < split.test.row_count(); ++r)
            actual.push_back(split.test.column("target").str(r));
        const double accuracy =
            metrics(confusion(actual, model.predict(split.test), "pos")).accuracy;
        accuracy_sum += accuracy;
        accuracy_min = std::min(accuracy_min, accuracy);

        const auto importance = importance_by_variable(model);
        std::set<std::string> top3;
        for (size_t k = 0; k < 3 && k < importance.size(); ++k) top3.insert(importance[k].name);
        if (top3 == std::set<std::string>{"x0", "x1", "x2"}) ++top3_hits;
    }
    const double mean_accuracy = accuracy_sum / n_seeds;
    char buf[160];
    std::snprintf(buf, sizeof(buf), "mean accuracy %.3f (min %.3f), top-3 ranks correct %d/20",
                  mean_accuracy, accuracy_min, top3_hits);
    report(5, "planted-signal end-to-end: accuracy >= 0.90 and top-3 MDG in >= 95% of seeds",
           mean_accuracy >= 0.90 && top3_hits >= 19, buf);
}

// --- criterion 6 -------------------------------------------------------------

void criterion_6_determinism() {
    const auto raw = read_csv(ACCSEV_FIXTURE_CSV);
    CleaningConfig cleaning = CleaningConfig::defaults();

    auto run_once = [&](size_t threads) {
        CleanSummary summary;
        const auto cleaned = run_cleaning_pipeline(raw, cleaning, summary);
        const auto split = train_test_split(cleaned, 2.0 / 3.0, 606);
        RebalanceConfig balance_cfg;
        balance_cfg.seed = 606;
        const auto balanced = rebalance(split.train, kSeverityClassColumn, balance_cfg);
        ForestConfig forest_cfg;
        forest_cfg.n_trees = 30;
        forest_cfg.seed = 606;
        forest_cfg.n_threads = threads;
        const auto model = train_forest(balanced, kSeverityClassColumn, kSevereLabel, forest_cfg);

        std::vector<std::string> actual;
        for (size_t r = 0; r < split.test.row_count(); ++r)
            actual.push_back(split.test.column(kSeverityClassColumn).str(r));
        const auto m = metrics(confusion(actual, model.predict(split.test), kSevereLabel));
        const auto screening = screen_all(cleaned, kSeverityClassColumn, 0.05);

        std::string artifacts = model_to_string(model);
        artifacts += report::metrics_tsv(m);
        artifacts += report::screening_tsv(screening);
        artifacts += report::importance_tsv(importance_by_variable(model));
        artifacts += write_csv_text(balanced);
        return artifacts;
    };

    const std::string serial_a = run_once(1);
    const std::string serial_b = run_once(1);
    const std::string threaded = run_once(4);
    const bool pass = serial_a == serial_b && serial_a == threaded;
    report(6, "byte-identical model and reports across runs and worker counts", pass,
           pass ? "" : "artifact bytes differ");
}

// --- criterion 7 -------------------------------------------------------------

void criterion_7_null_calibration() {
    const int n_sims = 1000;
    int flagged = 0;
    for (int sim = 0; sim < n_sims; ++sim) {
        Rng rng(70000 + static_cast<uint64_t>(sim));
        Column noise({"noise", ColumnKind::numeric, false});
        Column target({"target", ColumnKind::categorical, false});
        for (int i = 0; i < 500; ++i) {
            noise.push_num(gauss(rng));
            target.push_str(rng.below(2) ? "a" : "b");
        }
        const auto table = ColumnTable::from_columns({std::move(noise), std::move(target)});
        const auto rows = screen_all(table, "target", 0.05);
        if (rows.at(0).important) ++flagged;
    }
    const double rate = static_cast<double>(flagged) / n_sims;
    char buf[96];
    std::snprintf(buf, sizeof(buf), "important rate %.4f over %d simulations", rate, n_sims);
    report(7, "null screening calibration: rate 0.05 +- 0.02 at alpha 0.05", rate >= 0.03 && rate <= 0.07,
           buf);
}

}  // namespace

int main() {
    criterion_1_metric_reconstruction();
    criterion_2_auc_oracle();
    criterion_3_test_oracles();
    criterion_4_cart_oracle();
    criterion_5_planted_signal();
    criterion_6_determinism();
    criterion_7_null_calibration();
    std::printf("SKIP criterion 8: paper-scale reproduction is manual (needs the 2.8M-row Kaggle "
                "CSV; run `accsev repro --input <path>`), excluded from CI by design\n");
    if (failures) std::printf("%d criterion(s) failed\n", failures);
    else std::printf("all desk-scale criteria passed\n");
    return failures == 0 ? 0 : 1;
}
