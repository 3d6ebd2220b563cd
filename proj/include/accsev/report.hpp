#pragma once

#include <string>
#include <vector>

#include "accsev/eval.hpp"
#include "accsev/forest.hpp"
#include "accsev/prep.hpp"
#include "accsev/screening.hpp"
#include "accsev/table.hpp"

#include <json.hpp>

namespace accsev::report {

using json = nlohmann::ordered_json;

// Per-variable missingness in the conventional column layout
// (Col.num, V.name, Mode, N.level, ncom, nmiss, Miss.prop).
std::string missingness_tsv(const MissingnessReport& report);
json missingness_json(const MissingnessReport& report);

std::string frequency_tsv(const FrequencyTable& table);
json frequency_json(const FrequencyTable& table);

std::string clean_summary_text(const CleanSummary& summary);
json clean_summary_json(const CleanSummary& summary);

// Variable / Test / Test-Statistic / P-value / Decision rows.
std::string screening_tsv(const std::vector<ScreeningRow>& rows);
json screening_json(const std::vector<ScreeningRow>& rows, double alpha);

// Variable / MeanDecreaseGini, descending.
std::string importance_tsv(const std::vector<ImportanceEntry>& entries);
json importance_json(const std::vector<ImportanceEntry>& per_variable,
                     const std::vector<ImportanceEntry>& per_column);

std::string metrics_tsv(const MetricsReport& report);
json metrics_json(const MetricsReport& report, const ConfusionMatrix& cm);

std::string roc_tsv(const RocCurve& curve);
std::string roc_svg(const RocCurve& curve, double auc_value);

std::string cv_auc_tsv(const AucEstimate& estimate, double confidence);
json cv_auc_json(const AucEstimate& estimate);

std::string comparison_tsv(const std::vector<ComparisonRow>& rows, const std::string& name_a,
                           const std::string& name_b);
json comparison_json(const std::vector<ComparisonRow>& rows, const std::string& name_a,
                     const std::string& name_b);

}  // namespace accsev::report
