#include "accsev/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace accsev {

namespace {

constexpr double kEps = 1e-16;
constexpr int kMaxIter = 1000000;

double clamp_p(double p) {
    if (p < 0.0) return 0.0;
    if (p > 1.0) return 1.0;
    return p;
}

// Lower incomplete gamma by series expansion, valid for x < a + 1.
double gamma_p_series(double a, double x) {
    double term = 1.0 / a;
    double sum = term;
    for (int n = 1; n < kMaxIter; ++n) {
        term *= x / (a + n);
        sum += term;
        if (std::abs(term) < std::abs(sum) * kEps) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Upper incomplete gamma by Lentz continued fraction, valid for x >= a + 1.
double gamma_q_cf(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < kMaxIter; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < kEps) break;
    }
    return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Continued fraction for the regularized incomplete beta (Lentz).
double beta_cf(double a, double b, double x) {
    const double tiny = 1e-300;
    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < tiny) d = tiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m < kMaxIter; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < kEps) break;
    }
    return h;
}

double log_choose(uint64_t n, uint64_t k) {
    return std::lgamma(static_cast<double>(n) + 1.0) - std::lgamma(static_cast<double>(k) + 1.0) -
           std::lgamma(static_cast<double>(n - k) + 1.0);
}

}  // namespace

double normal_upper_tail(double z) {
    return 0.5 * std::erfc(z / std::sqrt(2.0));
}

double reg_incomplete_gamma_p(double a, double x) {
    if (a <= 0.0) throw StatError("incomplete gamma: a must be positive");
    if (x < 0.0) throw StatError("incomplete gamma: x must be non-negative");
    if (x == 0.0) return 0.0;
    if (x < a + 1.0) return gamma_p_series(a, x);
    return 1.0 - gamma_q_cf(a, x);
}

double chi_square_upper_tail(double x, double df) {
    if (df <= 0.0) throw StatError("chi-square tail: df must be positive");
    if (x <= 0.0) return 1.0;
    if (x < df + 1.0) return clamp_p(1.0 - gamma_p_series(df / 2.0, x / 2.0));
    return clamp_p(gamma_q_cf(df / 2.0, x / 2.0));
}

double reg_incomplete_beta(double a, double b, double x) {
    if (a <= 0.0 || b <= 0.0) throw StatError("incomplete beta: a, b must be positive");
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double log_bt = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                          a * std::log(x) + b * std::log1p(-x);
    const double bt = std::exp(log_bt);
    if (x < (a + 1.0) / (a + b + 2.0)) return clamp_p(bt * beta_cf(a, b, x) / a);
    return clamp_p(1.0 - bt * beta_cf(b, a, 1.0 - x) / b);
}

double student_t_upper_tail(double t, double df) {
    if (df <= 0.0) throw StatError("t tail: df must be positive");
    const double x = df / (df + t * t);
    const double half = 0.5 * reg_incomplete_beta(df / 2.0, 0.5, x);
    return t >= 0.0 ? half : 1.0 - half;
}

double normal_quantile(double p) {
    if (p <= 0.0 || p >= 1.0) throw StatError("normal quantile: p must be in (0, 1)");
    double lo = -40.0, hi = 40.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (1.0 - normal_upper_tail(mid) < p)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

// ---------------------------------------------------------------------------

ContingencyTable::ContingencyTable(std::vector<std::vector<uint64_t>> counts,
                                   std::vector<std::string> row_labels,
                                   std::vector<std::string> col_labels)
    : counts_(std::move(counts)), row_labels_(std::move(row_labels)), col_labels_(std::move(col_labels)) {
    if (counts_.empty() || counts_[0].empty())
        throw StatError("contingency table must be non-empty");
    for (const auto& row : counts_)
        if (row.size() != counts_[0].size())
            throw StatError("contingency table rows must have equal length");
}

uint64_t ContingencyTable::row_total(size_t r) const {
    return std::accumulate(counts_[r].begin(), counts_[r].end(), uint64_t{0});
}

uint64_t ContingencyTable::col_total(size_t c) const {
    uint64_t sum = 0;
    for (const auto& row : counts_) sum += row[c];
    return sum;
}

uint64_t ContingencyTable::total() const {
    uint64_t sum = 0;
    for (size_t r = 0; r < rows(); ++r) sum += row_total(r);
    return sum;
}

double ContingencyTable::min_expected_count() const {
    const double n = static_cast<double>(total());
    if (n == 0.0) return 0.0;
    double best = std::numeric_limits<double>::infinity();
    for (size_t r = 0; r < rows(); ++r)
        for (size_t c = 0; c < cols(); ++c)
            best = std::min(best, static_cast<double>(row_total(r)) * static_cast<double>(col_total(c)) / n);
    return best;
}

// ---------------------------------------------------------------------------

namespace {

std::vector<double> midranks(std::vector<double> pooled) {
    // returns ranks aligned with the *sorted* order; caller maps back
    std::vector<double> ranks(pooled.size());
    size_t i = 0;
    while (i < pooled.size()) {
        size_t j = i;
        while (j + 1 < pooled.size() && pooled[j + 1] == pooled[i]) ++j;
        const double rank = 0.5 * (static_cast<double>(i + 1) + static_cast<double>(j + 1));
        for (size_t k = i; k <= j; ++k) ranks[k] = rank;
        i = j + 1;
    }
    return ranks;
}

// Count rank-sum outcomes over all C(N, nx) subsets of {1..N}.
void enumerate_rank_sums(int next, int remaining, int max_rank, int sum, int w,
                         uint64_t& count_le, uint64_t& count_ge, uint64_t& count_total) {
    if (remaining == 0) {
        ++count_total;
        if (sum <= w) ++count_le;
        if (sum >= w) ++count_ge;
        return;
    }
    if (max_rank - next + 1 < remaining) return;
    enumerate_rank_sums(next + 1, remaining - 1, max_rank, sum + next, w, count_le, count_ge, count_total);
    enumerate_rank_sums(next + 1, remaining, max_rank, sum, w, count_le, count_ge, count_total);
}

}  // namespace

TestResult wilcoxon_rank_sum(std::span<const double> x, std::span<const double> y, WilcoxonMethod method) {
    if (x.empty() || y.empty()) throw StatError("wilcoxon: both samples must be non-empty");
    const size_t nx = x.size(), ny = y.size();
    const size_t n = nx + ny;

    std::vector<std::pair<double, int>> pooled;  // (value, 0 for x / 1 for y)
    pooled.reserve(n);
    for (double v : x) pooled.push_back({v, 0});
    for (double v : y) pooled.push_back({v, 1});
    std::sort(pooled.begin(), pooled.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });

    std::vector<double> values(n);
    for (size_t i = 0; i < n; ++i) values[i] = pooled[i].first;
    const std::vector<double> ranks = midranks(values);

    bool has_ties = false;
    double tie_sum = 0.0;  // sum of t^3 - t over tie groups
    {
        size_t i = 0;
        while (i < n) {
            size_t j = i;
            while (j + 1 < n && values[j + 1] == values[i]) ++j;
            const double t = static_cast<double>(j - i + 1);
            if (t > 1.0) {
                has_ties = true;
                tie_sum += t * t * t - t;
            }
            i = j + 1;
        }
    }

    double w = 0.0;
    for (size_t i = 0; i < n; ++i)
        if (pooled[i].second == 0) w += ranks[i];

    TestResult result;
    result.test_name = "wilcoxon_rank_sum";
    result.statistic = w;

    const bool exact_allowed = !has_ties && n <= 12;
    bool use_exact = false;
    switch (method) {
        case WilcoxonMethod::automatic: use_exact = exact_allowed; break;
        case WilcoxonMethod::exact:
            if (!exact_allowed)
                throw StatError("wilcoxon: exact method requires tie-free samples with n_x + n_y <= 12");
            use_exact = true;
            break;
        case WilcoxonMethod::normal_approx: use_exact = false; break;
    }

    if (use_exact) {
        uint64_t count_le = 0, count_ge = 0, count_total = 0;
        enumerate_rank_sums(1, static_cast<int>(nx), static_cast<int>(n),
                            0, static_cast<int>(std::llround(w)), count_le, count_ge, count_total);
        const double tail = static_cast<double>(std::min(count_le, count_ge)) / static_cast<double>(count_total);
        result.p_value = clamp_p(2.0 * tail);
        result.method_detail = "exact enumeration";
        return result;
    }

    const double mean = static_cast<double>(nx) * (static_cast<double>(n) + 1.0) / 2.0;
    const double nn = static_cast<double>(n);
    double variance = static_cast<double>(nx) * static_cast<double>(ny) / 12.0 *
                      ((nn + 1.0) - tie_sum / (nn * (nn - 1.0)));
    if (variance <= 0.0) {
        result.p_value = 1.0;
        result.method_detail = "degenerate (all values tied)";
        return result;
    }
    double delta = w - mean;
    if (delta > 0.5)
        delta -= 0.5;
    else if (delta < -0.5)
        delta += 0.5;
    else
        delta = 0.0;
    const double z = delta / std::sqrt(variance);
    result.p_value = clamp_p(2.0 * normal_upper_tail(std::abs(z)));
    result.method_detail = "normal approximation with tie correction, continuity-corrected";
    return result;
}

TestResult welch_t_test(std::span<const double> x, std::span<const double> y) {
    const size_t nx = x.size(), ny = y.size();
    if (nx < 2 || ny < 2) throw StatError("welch t: each sample needs at least 2 values");
    auto moments = [](std::span<const double> v) {
        const double n = static_cast<double>(v.size());
        double mean = 0.0;
        for (double e : v) mean += e;
        mean /= n;
        double ss = 0.0;
        for (double e : v) ss += (e - mean) * (e - mean);
        return std::pair<double, double>{mean, ss / (n - 1.0)};
    };
    const auto [mx, s2x] = moments(x);
    const auto [my, s2y] = moments(y);
    if (s2x <= 0.0 || s2y <= 0.0) throw StatError("welch t: degenerate variance");

    const double ax = s2x / static_cast<double>(nx);
    const double ay = s2y / static_cast<double>(ny);
    const double se2 = ax + ay;
    const double t = (mx - my) / std::sqrt(se2);
    const double df = se2 * se2 / (ax * ax / (static_cast<double>(nx) - 1.0) +
                                   ay * ay / (static_cast<double>(ny) - 1.0));

    TestResult result;
    result.test_name = "welch_t";
    result.statistic = t;
    result.df = df;
    result.p_value = clamp_p(2.0 * student_t_upper_tail(std::abs(t), df));
    result.method_detail = "Welch-Satterthwaite";
    return result;
}

TestResult normality_check(std::span<const double> x) {
    constexpr size_t kSubsampleCap = 5000;
    if (x.size() < 8) throw StatError("normality check: need at least 8 values");

    std::vector<double> sample;
    if (x.size() > kSubsampleCap) {
        sample.reserve(kSubsampleCap);
        for (size_t i = 0; i < kSubsampleCap; ++i)
            sample.push_back(x[i * x.size() / kSubsampleCap]);
    } else {
        sample.assign(x.begin(), x.end());
    }

    const double n = static_cast<double>(sample.size());
    double mean = 0.0;
    for (double v : sample) mean += v;
    mean /= n;
    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (double v : sample) {
        const double d = v - mean;
        m2 += d * d;
        m3 += d * d * d;
        m4 += d * d * d * d;
    }
    m2 /= n;
    m3 /= n;
    m4 /= n;
    if (m2 <= 0.0) throw StatError("normality check: constant sample");

    const double skew = m3 / std::pow(m2, 1.5);
    const double kurt = m4 / (m2 * m2) - 3.0;
    const double jb = n / 6.0 * (skew * skew + kurt * kurt / 4.0);

    TestResult result;
    result.test_name = "jarque_bera";
    result.statistic = jb;
    result.df = 2.0;
    result.p_value = clamp_p(chi_square_upper_tail(jb, 2.0));
    result.method_detail = sample.size() < x.size()
                               ? "moment test on evenly-spaced subsample of " + std::to_string(sample.size())
                               : "moment test";
    return result;
}

TestResult chi_square_test(const ContingencyTable& table) {
    const size_t r = table.rows(), c = table.cols();
    if (r < 2 || c < 2) throw StatError("chi-square: need at least a 2x2 table");
    for (size_t i = 0; i < r; ++i)
        if (table.row_total(i) == 0) throw StatError("chi-square: zero row marginal");
    for (size_t j = 0; j < c; ++j)
        if (table.col_total(j) == 0) throw StatError("chi-square: zero column marginal");

    const double n = static_cast<double>(table.total());
    const bool yates = (r == 2 && c == 2);
    double stat = 0.0;
    for (size_t i = 0; i < r; ++i) {
        for (size_t j = 0; j < c; ++j) {
            const double expected =
                static_cast<double>(table.row_total(i)) * static_cast<double>(table.col_total(j)) / n;
            double dev = std::abs(static_cast<double>(table.at(i, j)) - expected);
            if (yates) dev = std::max(0.0, dev - 0.5);
            stat += dev * dev / expected;
        }
    }
    const double df = static_cast<double>(r - 1) * static_cast<double>(c - 1);

    TestResult result;
    result.test_name = "chi_square";
    result.statistic = stat;
    result.df = df;
    result.p_value = clamp_p(chi_square_upper_tail(stat, df));
    result.method_detail = yates ? "Pearson with Yates continuity correction" : "Pearson";
    return result;
}

TestResult fisher_exact_2x2(const ContingencyTable& table) {
    if (table.rows() != 2 || table.cols() != 2) throw StatError("fisher exact: table must be 2x2");
    const uint64_t a = table.at(0, 0);
    const uint64_t r1 = table.row_total(0), r2 = table.row_total(1);
    const uint64_t c1 = table.col_total(0), c2 = table.col_total(1);
    const uint64_t n = r1 + r2;

    TestResult result;
    result.test_name = "fisher_exact";
    result.method_detail = "two-sided, probability-mass rule";

    if (r1 == 0 || r2 == 0 || c1 == 0 || c2 == 0) {
        // Degenerate marginals admit exactly one table.
        result.statistic = 1.0;
        result.p_value = 1.0;
        return result;
    }

    const uint64_t k_lo = c1 > r2 ? c1 - r2 : 0;
    const uint64_t k_hi = std::min(r1, c1);
    const double log_denom = log_choose(n, c1);
    auto log_prob = [&](uint64_t k) {
        return log_choose(r1, k) + log_choose(r2, c1 - k) - log_denom;
    };

    const double p_obs = std::exp(log_prob(a));
    double p = 0.0;
    for (uint64_t k = k_lo; k <= k_hi; ++k) {
        const double pk = std::exp(log_prob(k));
        if (pk <= p_obs * (1.0 + 1e-7)) p += pk;
    }
    result.statistic = p_obs;
    result.p_value = clamp_p(p);
    return result;
}

TestResult binomial_tail_test(uint64_t successes, uint64_t n, double p0) {
    if (successes > n) throw StatError("binomial tail: successes exceed n");
    if (p0 < 0.0 || p0 > 1.0) throw StatError("binomial tail: p0 must lie in [0, 1]");

    TestResult result;
    result.test_name = "binomial_tail";
    result.statistic = static_cast<double>(successes);
    result.method_detail = "exact one-sided P(X >= successes)";

    if (p0 == 1.0) {
        result.p_value = 1.0;
        return result;
    }
    if (p0 == 0.0) {
        result.p_value = successes == 0 ? 1.0 : 0.0;
        return result;
    }
    if (successes == 0) {
        result.p_value = 1.0;
        return result;
    }

    // Walk the upper tail with the term recurrence, accumulating linearly.
    const double log_p = std::log(p0), log_q = std::log1p(-p0);
    double log_term = log_choose(n, successes) + static_cast<double>(successes) * log_p +
                      static_cast<double>(n - successes) * log_q;
    double sum = 0.0;
    for (uint64_t k = successes; k <= n; ++k) {
        sum += std::exp(log_term);
        if (k == n) break;
        log_term += std::log(static_cast<double>(n - k)) - std::log(static_cast<double>(k + 1)) + log_p - log_q;
    }
    result.p_value = clamp_p(sum);
    return result;
}

namespace {

// Smallest x with I_x(a, b) >= target, by bisection.
double beta_quantile(double target, double a, double b) {
    double lo = 0.0, hi = 1.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (reg_incomplete_beta(a, b, mid) < target)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

Interval clopper_pearson(uint64_t successes, uint64_t n, double confidence) {
    if (successes > n) throw StatError("clopper-pearson: successes exceed n");
    if (n == 0) throw StatError("clopper-pearson: n must be positive");
    if (confidence <= 0.0 || confidence >= 1.0)
        throw StatError("clopper-pearson: confidence must be in (0, 1)");
    const double alpha = 1.0 - confidence;
    Interval interval;
    interval.lower = successes == 0
                         ? 0.0
                         : beta_quantile(alpha / 2.0, static_cast<double>(successes),
                                         static_cast<double>(n - successes) + 1.0);
    interval.upper = successes == n
                         ? 1.0
                         : beta_quantile(1.0 - alpha / 2.0, static_cast<double>(successes) + 1.0,
                                         static_cast<double>(n - successes));
    return interval;
}

}  // namespace accsev
