#pragma once

// Test-side oracles, kept independent of the library implementations they
// check: brute-force split search, Mann-Whitney pair counting, exact
// integer hypergeometric enumeration, and subset enumeration for rank sums.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

namespace oracles {

// --- exhaustive CART split search -------------------------------------------

struct SplitPick {
    uint32_t feature = 0;
    double threshold = 0.0;
    double decrease = 0.0;
};

// X is feature-major: X[f][i] for row i. Scans every feature and every
// midpoint between consecutive distinct sorted values.
inline std::optional<SplitPick> brute_force_best_split(const std::vector<std::vector<double>>& X,
                                                       const std::vector<uint8_t>& y,
                                                       size_t min_leaf = 1) {
    const size_t n = y.size();
    auto gini = [](uint64_t c0, uint64_t c1) {
        const double total = static_cast<double>(c0 + c1);
        const double p0 = static_cast<double>(c0) / total;
        const double p1 = static_cast<double>(c1) / total;
        return 1.0 - p0 * p0 - p1 * p1;
    };
    uint64_t n0 = 0, n1 = 0;
    for (uint8_t label : y) (label ? n1 : n0)++;
    if (n0 == 0 || n1 == 0) return std::nullopt;
    const double node_term = static_cast<double>(n) * gini(n0, n1);

    std::optional<SplitPick> best;
    for (uint32_t f = 0; f < X.size(); ++f) {
        std::vector<double> distinct(X[f]);
        std::sort(distinct.begin(), distinct.end());
        distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
        for (size_t k = 0; k + 1 < distinct.size(); ++k) {
            double thr = 0.5 * (distinct[k] + distinct[k + 1]);
            if (!(thr > distinct[k])) thr = distinct[k + 1];
            uint64_t l0 = 0, l1 = 0, ln = 0;
            for (size_t i = 0; i < n; ++i) {
                if (X[f][i] < thr) {
                    ++ln;
                    (y[i] ? l1 : l0)++;
                }
            }
            if (ln < min_leaf || n - ln < min_leaf) continue;
            const double decrease = node_term - static_cast<double>(ln) * gini(l0, l1) -
                                    static_cast<double>(n - ln) * gini(n0 - l0, n1 - l1);
            if (decrease > 0.0 && (!best || decrease > best->decrease))
                best = SplitPick{f, thr, decrease};
        }
    }
    return best;
}

// --- Mann-Whitney pair count -------------------------------------------------

inline double mann_whitney_auc(const std::vector<double>& pos, const std::vector<double>& neg) {
    double wins = 0.0;
    for (double p : pos)
        for (double q : neg) {
            if (p > q) wins += 1.0;
            else if (p == q) wins += 0.5;
        }
    return wins / (static_cast<double>(pos.size()) * static_cast<double>(neg.size()));
}

// --- exact hypergeometric enumeration (integer arithmetic) -------------------

inline uint64_t binom_u64(uint64_t n, uint64_t k) {
    if (k > n) return 0;
    k = std::min(k, n - k);
    uint64_t result = 1;
    for (uint64_t i = 1; i <= k; ++i) result = result * (n - k + i) / i;
    return result;
}

// Two-sided Fisher p by the probability-mass rule, exact integer weights.
inline double fisher_two_sided_exact(uint64_t a, uint64_t b, uint64_t c, uint64_t d) {
    const uint64_t r1 = a + b, r2 = c + d, c1 = a + c;
    const uint64_t n = r1 + r2;
    const uint64_t denom = binom_u64(n, c1);
    const uint64_t k_lo = c1 > r2 ? c1 - r2 : 0;
    const uint64_t k_hi = std::min(r1, c1);
    const uint64_t obs_weight = binom_u64(r1, a) * binom_u64(r2, c1 - a);
    uint64_t mass = 0;
    for (uint64_t k = k_lo; k <= k_hi; ++k) {
        const uint64_t w = binom_u64(r1, k) * binom_u64(r2, c1 - k);
        if (w <= obs_weight) mass += w;
    }
    return static_cast<double>(mass) / static_cast<double>(denom);
}

// --- rank-sum enumeration -----------------------------------------------------

// Two-sided exact Wilcoxon p for tie-free samples by enumerating every
// C(n, nx) rank subset with a bitmask.
inline double wilcoxon_exact_two_sided(const std::vector<double>& x, const std::vector<double>& y) {
    const size_t nx = x.size();
    std::vector<double> pooled(x);
    pooled.insert(pooled.end(), y.begin(), y.end());
    const size_t n = pooled.size();
    std::vector<size_t> order(n);
    for (size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](size_t i, size_t j) { return pooled[i] < pooled[j]; });

    int w = 0;
    for (size_t rank = 0; rank < n; ++rank)
        if (order[rank] < nx) w += static_cast<int>(rank + 1);

    uint64_t count_le = 0, count_ge = 0, count_total = 0;
    for (uint32_t mask = 0; mask < (1u << n); ++mask) {
        if (static_cast<size_t>(__builtin_popcount(mask)) != nx) continue;
        int sum = 0;
        for (size_t rank = 0; rank < n; ++rank)
            if (mask & (1u << rank)) sum += static_cast<int>(rank + 1);
        ++count_total;
        if (sum <= w) ++count_le;
        if (sum >= w) ++count_ge;
    }
    const double tail = static_cast<double>(std::min(count_le, count_ge)) / static_cast<double>(count_total);
    return std::min(1.0, 2.0 * tail);
}

// Kolmogorov distance of a sample against U(0, 1).
inline double ks_distance_uniform(std::vector<double> sample) {
    std::sort(sample.begin(), sample.end());
    const double n = static_cast<double>(sample.size());
    double d = 0.0;
    for (size_t i = 0; i < sample.size(); ++i) {
        d = std::max(d, std::abs(sample[i] - static_cast<double>(i + 1) / n));
        d = std::max(d, std::abs(sample[i] - static_cast<double>(i) / n));
    }
    return d;
}

}  // namespace oracles
