#include "accsev/rng.hpp"

#include <stdexcept>
#include <unordered_set>

namespace accsev {

namespace {

constexpr uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

uint64_t mix64(uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace

Rng::Rng(uint64_t seed, uint64_t stream)
    : key_(mix64(seed + kGamma) ^ mix64(stream * kGamma + 0x2545F4914F6CDD1DULL)) {}

uint64_t Rng::next_u64() {
    return mix64(key_ + (++counter_) * kGamma);
}

double Rng::next_unit() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

uint64_t Rng::below(uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("Rng::below: bound must be positive");
    const uint64_t threshold = (0 - bound) % bound;  // 2^64 mod bound
    for (;;) {
        const uint64_t r = next_u64();
        if (r >= threshold) return r % bound;
    }
}

Rng Rng::substream(uint64_t index) const {
    Rng child(mix64(key_ + mix64(index + 1)), index);
    return child;
}

std::vector<size_t> sample_without_replacement(size_t n, size_t k, Rng& rng) {
    if (k > n) throw std::invalid_argument("sample_without_replacement: k > n");
    if (k * 3 >= n) {
        // Partial Fisher-Yates over an explicit index array.
        std::vector<size_t> idx(n);
        for (size_t i = 0; i < n; ++i) idx[i] = i;
        for (size_t i = 0; i < k; ++i) {
            size_t j = i + static_cast<size_t>(rng.below(n - i));
            std::swap(idx[i], idx[j]);
        }
        idx.resize(k);
        return idx;
    }
    // Sparse draw: rejection on a hash set.
    std::unordered_set<size_t> seen;
    std::vector<size_t> out;
    out.reserve(k);
    while (out.size() < k) {
        size_t v = static_cast<size_t>(rng.below(n));
        if (seen.insert(v).second) out.push_back(v);
    }
    return out;
}

}  // namespace accsev
