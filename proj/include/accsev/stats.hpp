#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "accsev/error.hpp"

namespace accsev {

struct TestResult {
    std::string test_name;
    double statistic = 0.0;
    double p_value = 1.0;
    std::optional<double> df;
    std::string method_detail;
};

struct Interval {
    double lower = 0.0;
    double upper = 0.0;
};

// r x c grid of non-negative counts with optional axis labels.
class ContingencyTable {
public:
    ContingencyTable(std::vector<std::vector<uint64_t>> counts,
                     std::vector<std::string> row_labels = {},
                     std::vector<std::string> col_labels = {});

    size_t rows() const { return counts_.size(); }
    size_t cols() const { return counts_.empty() ? 0 : counts_[0].size(); }
    uint64_t at(size_t r, size_t c) const { return counts_[r][c]; }
    uint64_t row_total(size_t r) const;
    uint64_t col_total(size_t c) const;
    uint64_t total() const;
    double min_expected_count() const;

    const std::vector<std::string>& row_labels() const { return row_labels_; }
    const std::vector<std::string>& col_labels() const { return col_labels_; }

private:
    std::vector<std::vector<uint64_t>> counts_;
    std::vector<std::string> row_labels_;
    std::vector<std::string> col_labels_;
};

// --- distribution tails -----------------------------------------------------

// P(Z > z) for standard normal.
double normal_upper_tail(double z);
// P(X > x) for chi-square with df degrees of freedom.
double chi_square_upper_tail(double x, double df);
// P(T > t) for Student t with df degrees of freedom.
double student_t_upper_tail(double t, double df);
// Central quantile: z with P(Z <= z) = p.
double normal_quantile(double p);

// Regularized incomplete beta I_x(a, b); exposed because the binomial
// interval inverts it.
double reg_incomplete_beta(double a, double b, double x);
// Regularized lower incomplete gamma P(a, x).
double reg_incomplete_gamma_p(double a, double x);

// --- two-sample and contingency tests ---------------------------------------

enum class WilcoxonMethod { automatic, exact, normal_approx };

// Rank-sum test; statistic is the rank sum W of sample x over the pooled
// mid-rank ordering. Exact enumeration when n_x + n_y <= 12 and tie-free,
// otherwise a tie-corrected, continuity-corrected normal approximation.
TestResult wilcoxon_rank_sum(std::span<const double> x, std::span<const double> y,
                             WilcoxonMethod method = WilcoxonMethod::automatic);

TestResult welch_t_test(std::span<const double> x, std::span<const double> y);

// Jarque-Bera moment test; evaluated on a deterministic evenly-spaced
// subsample of at most 5000 values.
TestResult normality_check(std::span<const double> x);

// Pearson chi-square; Yates continuity correction on 2x2 tables.
TestResult chi_square_test(const ContingencyTable& table);

// Two-sided Fisher exact test by hypergeometric enumeration (probability-mass
// rule, relative slack 1e-7). Statistic is the observed-table probability.
TestResult fisher_exact_2x2(const ContingencyTable& table);

// One-sided exact binomial tail P(X >= successes) under Binomial(n, p0).
TestResult binomial_tail_test(uint64_t successes, uint64_t n, double p0);

// Exact Clopper-Pearson interval via beta-quantile inversion.
Interval clopper_pearson(uint64_t successes, uint64_t n, double confidence);

}  // namespace accsev
