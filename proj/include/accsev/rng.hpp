#pragma once

#include <cstdint>
#include <vector>

namespace accsev {

// Counter-based 64-bit generator (splitmix64 finalizer over an advancing
// counter). Output depends only on (seed, stream, draw index), so any
// stochastic step can be replayed exactly and substreams handed to workers
// stay independent of scheduling.
class Rng {
public:
    explicit Rng(uint64_t seed, uint64_t stream = 0);

    uint64_t next_u64();

    // Uniform in [0, 1) with 53 random bits.
    double next_unit();

    // Unbiased uniform integer in [0, bound); bound must be > 0.
    uint64_t below(uint64_t bound);

    // Derive an independent generator keyed off this one's seed material.
    Rng substream(uint64_t index) const;

private:
    uint64_t key_;
    uint64_t counter_ = 0;
};

// In-place Fisher-Yates shuffle.
template <typename T>
void shuffle(std::vector<T>& values, Rng& rng) {
    for (size_t i = values.size(); i > 1; --i) {
        size_t j = static_cast<size_t>(rng.below(i));
        std::swap(values[i - 1], values[j]);
    }
}

// k distinct values drawn uniformly from {0, ..., n-1}, in draw order.
std::vector<size_t> sample_without_replacement(size_t n, size_t k, Rng& rng);

}  // namespace accsev
