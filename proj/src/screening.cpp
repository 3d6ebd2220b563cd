#include "accsev/screening.hpp"

#include <algorithm>
#include <map>

namespace accsev {

const char* screening_test_name(ScreeningTest test) {
    switch (test) {
        case ScreeningTest::welch_t: return "welch_t";
        case ScreeningTest::wilcoxon: return "wilcoxon_rank_sum";
        case ScreeningTest::chi_square: return "chi_square";
        case ScreeningTest::fisher: return "fisher_exact";
    }
    return "unknown";
}

ContingencyTable crosstab(const ColumnTable& t, const std::string& var, const std::string& target) {
    const Column& vcol = t.column(var);
    const Column& tcol = t.column(target);

    std::map<std::string, size_t> vlevels, tlevels;
    for (size_t r = 0; r < t.row_count(); ++r) {
        if (vcol.is_missing(r)) throw StatError("crosstab: missing cell in " + var);
        if (tcol.is_missing(r)) throw StatError("crosstab: missing cell in " + target);
        vlevels.emplace(vcol.cell_text(r), vlevels.size());
        tlevels.emplace(tcol.cell_text(r), tlevels.size());
    }
    // re-key lexicographically (std::map iterates sorted)
    size_t i = 0;
    for (auto& [key, index] : vlevels) index = i++;
    i = 0;
    for (auto& [key, index] : tlevels) index = i++;

    std::vector<std::vector<uint64_t>> counts(vlevels.size(), std::vector<uint64_t>(tlevels.size(), 0));
    for (size_t r = 0; r < t.row_count(); ++r)
        ++counts[vlevels.at(vcol.cell_text(r))][tlevels.at(tcol.cell_text(r))];

    std::vector<std::string> row_labels, col_labels;
    for (const auto& [key, index] : vlevels) row_labels.push_back(key);
    for (const auto& [key, index] : tlevels) col_labels.push_back(key);
    return ContingencyTable(std::move(counts), std::move(row_labels), std::move(col_labels));
}

ScreeningTest choose_test(ColumnKind kind, const TestResult& normality,
                          const ContingencyTable* expected_grid) {
    switch (kind) {
        case ColumnKind::numeric:
            return normality.p_value < 0.05 ? ScreeningTest::wilcoxon : ScreeningTest::welch_t;
        case ColumnKind::boolean:
        case ColumnKind::categorical: {
            if (!expected_grid) throw StatError("choose_test: expected-count grid required");
            if (expected_grid->min_expected_count() > 5.0) return ScreeningTest::chi_square;
            if (expected_grid->rows() == 2 && expected_grid->cols() == 2) return ScreeningTest::fisher;
            return ScreeningTest::chi_square;  // sparse r x c; caller records the warning
        }
        default:
            throw StatError("choose_test: unsupported column kind");
    }
}

namespace {

ScreeningRow degenerate_row(const std::string& variable, const std::string& detail) {
    ScreeningRow row;
    row.variable = variable;
    row.test_name = "none";
    row.statistic = 0.0;
    row.p_value = 1.0;
    row.important = false;
    row.method_detail = detail;
    return row;
}

ScreeningRow screen_numeric(const ColumnTable& t, const Column& col, const Column& target,
                            const std::string& class0, double alpha) {
    std::vector<double> x, y;
    for (size_t r = 0; r < t.row_count(); ++r) {
        if (col.is_missing(r)) throw StatError("screen_all: missing cell in " + col.name());
        (target.cell_text(r) == class0 ? x : y).push_back(col.num(r));
    }

    std::string branch_note;
    ScreeningTest chosen = ScreeningTest::wilcoxon;
    // normality on the pooled column values
    std::vector<double> pooled;
    pooled.reserve(x.size() + y.size());
    pooled.insert(pooled.end(), x.begin(), x.end());
    pooled.insert(pooled.end(), y.begin(), y.end());
    try {
        const TestResult normality = normality_check(pooled);
        chosen = choose_test(ColumnKind::numeric, normality, nullptr);
        branch_note = chosen == ScreeningTest::welch_t ? "normality not rejected" : "normality rejected";
    } catch (const StatError&) {
        chosen = ScreeningTest::wilcoxon;
        branch_note = "normality check unavailable, rank-sum fallback";
    }

    TestResult result;
    if (chosen == ScreeningTest::welch_t) {
        try {
            result = welch_t_test(x, y);
        } catch (const StatError&) {
            chosen = ScreeningTest::wilcoxon;
            branch_note += "; welch degenerate, rank-sum fallback";
        }
    }
    if (chosen == ScreeningTest::wilcoxon) result = wilcoxon_rank_sum(x, y);

    ScreeningRow row;
    row.variable = col.name();
    row.test_name = result.test_name;
    row.statistic = result.statistic;
    row.p_value = result.p_value;
    row.important = result.p_value < alpha;
    row.method_detail = branch_note + "; " + result.method_detail;
    return row;
}

ScreeningRow screen_categorical(const ColumnTable& t, const Column& col, const std::string& target,
                                double alpha) {
    const ContingencyTable grid = crosstab(t, col.name(), target);
    const ScreeningTest chosen = choose_test(col.kind(), TestResult{}, &grid);

    std::string note;
    TestResult result;
    if (chosen == ScreeningTest::fisher) {
        result = fisher_exact_2x2(grid);
        note = "min expected count <= 5";
    } else {
        result = chi_square_test(grid);
        if (grid.min_expected_count() <= 5.0)
            note = "sparse table larger than 2x2, chi-square retained (warning)";
        else
            note = "all expected counts > 5";
    }

    ScreeningRow row;
    row.variable = col.name();
    row.test_name = result.test_name;
    row.statistic = result.statistic;
    row.p_value = result.p_value;
    row.important = result.p_value < alpha;
    row.method_detail = note + "; " + result.method_detail;
    return row;
}

}  // namespace

std::vector<ScreeningRow> screen_all(const ColumnTable& t, const std::string& target, double alpha) {
    const Column& tcol = t.column(target);
    if (tcol.missing_count() > 0) throw StatError("screen_all: target has missing cells");
    std::map<std::string, size_t> classes;
    for (size_t r = 0; r < t.row_count(); ++r) classes.emplace(tcol.cell_text(r), 0);
    if (classes.size() != 2)
        throw StatError("screen_all: target must be binary, found " + std::to_string(classes.size()) +
                        " classes");
    const std::string class0 = classes.begin()->first;

    std::vector<ScreeningRow> rows;
    for (size_t c = 0; c < t.column_count(); ++c) {
        const Column& col = t.column(c);
        if (col.name() == target) continue;

        if (col.missing_count() > 0) throw StatError("screen_all: missing cells in " + col.name());
        if (col.distinct_count() <= 1) {
            rows.push_back(degenerate_row(col.name(), "degenerate"));
            continue;
        }

        switch (col.kind()) {
            case ColumnKind::numeric:
                rows.push_back(screen_numeric(t, col, tcol, class0, alpha));
                break;
            case ColumnKind::boolean:
            case ColumnKind::categorical:
                rows.push_back(screen_categorical(t, col, target, alpha));
                break;
            default:
                rows.push_back(degenerate_row(col.name(), std::string("unsupported kind (") +
                                                              kind_name(col.kind()) + ")"));
                break;
        }
    }
    return rows;
}

}  // namespace accsev
