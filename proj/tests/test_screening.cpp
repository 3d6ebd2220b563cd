#include <doctest.h>

#include <string>
#include <vector>

#include "accsev/prep.hpp"
#include "accsev/rng.hpp"
#include "accsev/screening.hpp"
#include "accsev/table.hpp"

using namespace accsev;

namespace {

ColumnTable binary_target_table(const std::vector<double>& values, const std::vector<int>& target) {
    Column v({"v", ColumnKind::numeric, false});
    Column t({"target", ColumnKind::categorical, false});
    for (size_t i = 0; i < values.size(); ++i) {
        v.push_num(values[i]);
        t.push_str(target[i] ? "yes" : "no");
    }
    return ColumnTable::from_columns({std::move(v), std::move(t)});
}

}  // namespace

TEST_CASE("choose_test routes continuous by normality") {
    TestResult rejected;
    rejected.p_value = 0.001;
    CHECK(choose_test(ColumnKind::numeric, rejected, nullptr) == ScreeningTest::wilcoxon);

    TestResult accepted;
    accepted.p_value = 0.4;
    CHECK(choose_test(ColumnKind::numeric, accepted, nullptr) == ScreeningTest::welch_t);
}

TEST_CASE("choose_test routes categorical by expected counts") {
    // balanced 2x2 with decent cells: min expected 8.25 > 5
    const ContingencyTable dense({{10, 7}, {9, 7}});
    CHECK(dense.min_expected_count() > 5.0);
    CHECK(choose_test(ColumnKind::boolean, TestResult{}, &dense) == ScreeningTest::chi_square);

    const ContingencyTable sparse({{2, 3}, {3, 2}});
    CHECK(sparse.min_expected_count() <= 5.0);
    CHECK(choose_test(ColumnKind::boolean, TestResult{}, &sparse) == ScreeningTest::fisher);

    // sparse but not 2x2 falls back to chi-square
    const ContingencyTable wide({{2, 3, 2}, {3, 2, 3}});
    CHECK(choose_test(ColumnKind::categorical, TestResult{}, &wide) == ScreeningTest::chi_square);

    CHECK_THROWS_AS(choose_test(ColumnKind::text, TestResult{}, nullptr), StatError);
}

TEST_CASE("crosstab builds lexicographic level order") {
    Column v({"v", ColumnKind::categorical, false});
    Column t({"t", ColumnKind::categorical, false});
    for (const char* s : {"b", "a", "b", "a", "c"}) v.push_str(s);
    for (const char* s : {"y", "n", "n", "y", "y"}) t.push_str(s);
    const auto table = ColumnTable::from_columns({std::move(v), std::move(t)});
    const auto grid = crosstab(table, "v", "t");
    CHECK(grid.rows() == 3);
    CHECK(grid.cols() == 2);
    CHECK(grid.row_labels() == std::vector<std::string>{"a", "b", "c"});
    CHECK(grid.col_labels() == std::vector<std::string>{"n", "y"});
    CHECK(grid.at(0, 0) == 1);  // a,n
    CHECK(grid.at(2, 1) == 1);  // c,y
    CHECK(grid.total() == 5);
}

TEST_CASE("planted dependence is flagged important") {
    Column x({"x", ColumnKind::boolean, false});
    Column t({"target", ColumnKind::categorical, false});
    Rng rng(1);
    for (int i = 0; i < 500; ++i) {
        const bool cls = rng.below(2) == 1;
        x.push_bool(cls);
        t.push_str(cls ? "pos" : "neg");
    }
    const auto table = ColumnTable::from_columns({std::move(x), std::move(t)});
    const auto rows = screen_all(table, "target", 0.05);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].variable == "x");
    CHECK(rows[0].important);
    CHECK(rows[0].p_value < 1e-10);
}

TEST_CASE("independent noise flags at roughly the alpha rate") {
    size_t flagged = 0;
    const int n_seeds = 100;
    for (int seed = 0; seed < n_seeds; ++seed) {
        Rng rng(static_cast<uint64_t>(seed) + 1000);
        std::vector<double> values(500);
        std::vector<int> target(500);
        for (int i = 0; i < 500; ++i) {
            values[i] = rng.next_unit();
            target[i] = rng.below(2) == 1;
        }
        const auto rows = screen_all(binary_target_table(values, target), "target", 0.05);
        REQUIRE(rows.size() == 1);
        if (rows[0].important) ++flagged;
    }
    const double rate = static_cast<double>(flagged) / n_seeds;
    CHECK(rate >= 0.0);
    CHECK(rate <= 0.10);  // alpha 0.05 +- 0.05 at 100 seeds
}

TEST_CASE("constant columns report degenerate") {
    Column c({"c", ColumnKind::categorical, false});
    Column t({"target", ColumnKind::categorical, false});
    for (int i = 0; i < 20; ++i) {
        c.push_str("same");
        t.push_str(i % 2 ? "a" : "b");
    }
    const auto table = ColumnTable::from_columns({std::move(c), std::move(t)});
    const auto rows = screen_all(table, "target", 0.05);
    REQUIRE(rows.size() == 1);
    CHECK(!rows[0].important);
    CHECK(rows[0].method_detail == "degenerate");
}

TEST_CASE("screen_all demands a binary target and complete columns") {
    Column v({"v", ColumnKind::numeric, false});
    Column t({"target", ColumnKind::categorical, false});
    for (int i = 0; i < 9; ++i) {
        v.push_num(i);
        t.push_str(i % 3 == 0 ? "a" : (i % 3 == 1 ? "b" : "c"));
    }
    const auto three = ColumnTable::from_columns({std::move(v), std::move(t)});
    CHECK_THROWS_AS(screen_all(three, "target", 0.05), StatError);

    Column v2({"v", ColumnKind::numeric, true});
    Column t2({"target", ColumnKind::categorical, false});
    for (int i = 0; i < 10; ++i) {
        if (i == 4) v2.push_missing();
        else v2.push_num(i);
        t2.push_str(i % 2 ? "a" : "b");
    }
    const auto holed = ColumnTable::from_columns({std::move(v2), std::move(t2)});
    CHECK_THROWS_AS(screen_all(holed, "target", 0.05), StatError);
}

TEST_CASE("screening is deterministic and leaves the table alone") {
    Rng rng(9);
    std::vector<double> values(200);
    std::vector<int> target(200);
    for (int i = 0; i < 200; ++i) {
        values[i] = rng.next_unit() * 10.0;
        target[i] = rng.below(2) == 1;
    }
    const auto table = binary_target_table(values, target);
    const std::string before = write_csv_text(table);
    const auto a = screen_all(table, "target", 0.05);
    const auto b = screen_all(table, "target", 0.05);
    REQUIRE(a.size() == b.size());
    for (size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].p_value == b[i].p_value);
        CHECK(a[i].statistic == b[i].statistic);
        CHECK(a[i].test_name == b[i].test_name);
    }
    CHECK(write_csv_text(table) == before);
}

TEST_CASE("decision matches the p-value/alpha rule") {
    Rng rng(77);
    std::vector<double> values(120);
    std::vector<int> target(120);
    for (int i = 0; i < 120; ++i) {
        values[i] = rng.next_unit() + (i % 2) * 0.2;
        target[i] = i % 2;
    }
    const auto table = binary_target_table(values, target);
    for (double alpha : {0.001, 0.05, 0.5, 0.999}) {
        const auto rows = screen_all(table, "target", alpha);
        for (const auto& row : rows) CHECK(row.important == (row.p_value < alpha));
    }
}

TEST_CASE("screening the cleaned sample covers every non-target column") {
    const auto raw = read_csv(ACCSEV_FIXTURE_CSV);
    CleaningConfig cfg = CleaningConfig::defaults();
    CleanSummary summary;
    const auto cleaned = run_cleaning_pipeline(raw, cfg, summary);
    const auto rows = screen_all(cleaned, kSeverityClassColumn, 0.05);
    CHECK(rows.size() == cleaned.column_count() - 1);

    // schema order preserved
    size_t idx = 0;
    for (size_t c = 0; c < cleaned.column_count(); ++c) {
        if (cleaned.column(c).name() == kSeverityClassColumn) continue;
        CHECK(rows[idx].variable == cleaned.column(c).name());
        ++idx;
    }

    // the planted weather signal shows up
    bool wind_important = false;
    for (const auto& row : rows)
        if (row.variable == "Wind_Speed(mph)") wind_important = row.important;
    CHECK(wind_important);
}
