#include "accsev/encode.hpp"

#include <algorithm>
#include <set>

namespace accsev {

const char* split_kind_name(SplitKind kind) {
    return kind == SplitKind::numeric_threshold ? "numeric_threshold" : "boolean";
}

FeatureEncoder FeatureEncoder::fit(const ColumnTable& t, const std::string& target) {
    FeatureEncoder encoder;
    for (size_t c = 0; c < t.column_count(); ++c) {
        const Column& col = t.column(c);
        if (col.name() == target) continue;
        if (col.missing_count() > 0)
            throw InputError("encoder: column has missing cells (clean first): " + col.name());

        switch (col.kind()) {
            case ColumnKind::numeric:
                encoder.features_.push_back({col.name(), ColumnKind::numeric, SplitKind::numeric_threshold, ""});
                break;
            case ColumnKind::boolean:
                encoder.features_.push_back({col.name(), ColumnKind::boolean, SplitKind::boolean, ""});
                break;
            case ColumnKind::categorical: {
                std::set<std::string> levels;
                for (size_t r = 0; r < col.size(); ++r) levels.insert(col.str(r));
                if (levels.empty()) throw InputError("encoder: empty categorical column: " + col.name());
                if (levels.size() <= 2) {
                    // single indicator for the lexicographically larger level
                    encoder.features_.push_back(
                        {col.name(), ColumnKind::categorical, SplitKind::boolean, *levels.rbegin()});
                } else {
                    for (const auto& level : levels)
                        encoder.features_.push_back({col.name(), ColumnKind::categorical, SplitKind::boolean, level});
                }
                break;
            }
            default:
                throw InputError("encoder: cannot model " + std::string(kind_name(col.kind())) +
                                 " column: " + col.name());
        }
    }
    if (encoder.features_.empty()) throw InputError("encoder: no usable feature columns");
    return encoder;
}

FeatureMatrix FeatureEncoder::transform(const ColumnTable& t) const {
    FeatureMatrix m;
    m.n_rows = t.row_count();
    m.n_features = features_.size();
    m.values.assign(m.n_rows * m.n_features, 0.0);

    for (size_t f = 0; f < features_.size(); ++f) {
        const EncodedFeature& feature = features_[f];
        const int idx = t.find_column(feature.column);
        if (idx < 0) throw InputError("encoder: table lacks column " + feature.column);
        const Column& col = t.column(static_cast<size_t>(idx));
        double* out = m.feature_data(f);

        for (size_t r = 0; r < m.n_rows; ++r) {
            if (col.is_missing(r))
                throw InputError("encoder: missing cell in " + feature.column + " at row " +
                                 std::to_string(r + 1));
            switch (feature.source_kind) {
                case ColumnKind::numeric:
                    if (col.kind() != ColumnKind::numeric)
                        throw InputError("encoder: column kind changed for " + feature.column);
                    out[r] = col.num(r);
                    break;
                case ColumnKind::boolean:
                    if (col.kind() != ColumnKind::boolean)
                        throw InputError("encoder: column kind changed for " + feature.column);
                    out[r] = col.boolean(r) ? 1.0 : 0.0;
                    break;
                default:
                    out[r] = (col.kind() == ColumnKind::categorical || col.kind() == ColumnKind::text) &&
                                     col.str(r) == feature.level
                                 ? 1.0
                                 : 0.0;
                    break;
            }
        }
    }
    return m;
}

}  // namespace accsev
