#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "accsev/table.hpp"

namespace accsev {

struct SplitResult {
    ColumnTable train;
    ColumnTable test;
    uint64_t seed = 0;
    double ratio = 0.0;
};

// Seeded Fisher-Yates split; with stratify the split is applied per class of
// the named column and recombined in original row order.
SplitResult train_test_split(const ColumnTable& t, double ratio, uint64_t seed,
                             const std::optional<std::string>& stratify = {});

enum class RebalanceMode { oversample, undersample, both };

const char* rebalance_mode_name(RebalanceMode mode);
RebalanceMode rebalance_mode_from_name(const std::string& name);

struct RebalanceConfig {
    RebalanceMode mode = RebalanceMode::undersample;
    double target_ratio = 1.0;  // minority : majority after resampling
    uint64_t seed = 0;
};

// Undersampling draws without replacement from the majority class,
// oversampling draws with replacement from the minority; "both" meets the
// target at the geometric mean of the class sizes.
ColumnTable rebalance(const ColumnTable& t, const std::string& target, const RebalanceConfig& cfg);

}  // namespace accsev
