#pragma once

#include <string>
#include <vector>

#include "accsev/stats.hpp"
#include "accsev/table.hpp"

namespace accsev {

enum class ScreeningTest { welch_t, wilcoxon, chi_square, fisher };

const char* screening_test_name(ScreeningTest test);

struct ScreeningRow {
    std::string variable;
    std::string test_name;
    double statistic = 0.0;
    double p_value = 1.0;
    bool important = false;
    std::string method_detail;
};

// Cross-tabulation of one column against the target; level order is
// lexicographic, missing cells are rejected.
ContingencyTable crosstab(const ColumnTable& t, const std::string& var, const std::string& target);

// Test-selection rule: continuous goes to Welch t unless normality is
// rejected at 0.05 (then rank-sum); categorical goes to chi-square unless
// some expected count is <= 5 (then Fisher for 2x2, chi-square with a
// warning otherwise).
ScreeningTest choose_test(ColumnKind kind, const TestResult& normality,
                          const ContingencyTable* expected_grid);

// One row per non-target column in schema order. Constant columns are
// reported as unimportant with method detail "degenerate".
std::vector<ScreeningRow> screen_all(const ColumnTable& t, const std::string& target, double alpha);

}  // namespace accsev
