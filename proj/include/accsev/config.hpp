#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "accsev/forest.hpp"
#include "accsev/partition.hpp"
#include "accsev/prep.hpp"

namespace accsev {

// Everything the CLI pipeline needs; loadable from a key = value file and
// overridable per flag.
struct PipelineConfig {
    std::string input;
    std::string out_dir = "out";
    uint64_t seed = 42;
    std::string target = kSeverityClassColumn;
    std::string positive = kSevereLabel;
    double alpha = 0.05;
    double ratio = 2.0 / 3.0;
    std::optional<std::string> stratify;
    double threshold = 0.5;
    size_t cv_folds = 5;
    std::vector<std::string> missing_markers = {"", "NA"};
    // Columns excluded from model features (screening still sees them);
    // mirrors the model stage's effective feature space.
    std::vector<std::string> exclude_features = {"Start_Lat", "Start_Lng", "County", "State",
                                                 "Timezone",  "Year",      "Month",  "Day"};
    CleaningConfig cleaning = CleaningConfig::defaults();
    RebalanceConfig rebalance;
    ForestConfig forest;

    static PipelineConfig load(const std::string& path);
    // Applies one "key = value" assignment (the file loader's primitive).
    void assign(const std::string& key, const std::string& value);
};

}  // namespace accsev
