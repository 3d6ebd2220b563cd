#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "accsev/table.hpp"

namespace accsev {

enum class SplitKind : uint8_t { numeric_threshold, boolean };

const char* split_kind_name(SplitKind kind);

struct EncodedFeature {
    std::string column;     // source column
    ColumnKind source_kind = ColumnKind::numeric;
    SplitKind split_kind = SplitKind::numeric_threshold;
    std::string level;      // indicator level for one-hot features, else empty
    std::string name() const { return level.empty() ? column : column + "=" + level; }
};

// Dense column-major feature matrix.
struct FeatureMatrix {
    size_t n_rows = 0;
    size_t n_features = 0;
    std::vector<double> values;

    double at(size_t feature, size_t row) const { return values[feature * n_rows + row]; }
    double* feature_data(size_t feature) { return values.data() + feature * n_rows; }
    const double* feature_data(size_t feature) const { return values.data() + feature * n_rows; }
};

// Maps a complete table onto numeric features: numerics pass through,
// booleans become 0/1, two-level categoricals a single indicator and wider
// categoricals one indicator per level (level order lexicographic). Unseen
// levels at transform time produce all-zero indicators.
class FeatureEncoder {
public:
    static FeatureEncoder fit(const ColumnTable& t, const std::string& target);

    size_t feature_count() const { return features_.size(); }
    const std::vector<EncodedFeature>& features() const { return features_; }

    FeatureMatrix transform(const ColumnTable& t) const;

    void set_features(std::vector<EncodedFeature> features) { features_ = std::move(features); }

private:
    std::vector<EncodedFeature> features_;
};

}  // namespace accsev
