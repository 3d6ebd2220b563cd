#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "accsev/table.hpp"

namespace accsev {

// Name of the binary target column the cleaning pipeline produces.
inline constexpr const char* kSeverityClassColumn = "Severity_Class";
inline constexpr const char* kSevereLabel = "severe";
inline constexpr const char* kLessSevereLabel = "less severe";

struct WeatherRule {
    std::string flag;
    std::vector<std::string> keywords;  // case-insensitive substrings
};

struct CleaningConfig {
    std::vector<std::string> columns_to_drop;  // matched case-insensitively
    std::vector<std::pair<std::string, std::string>> wind_direction_map;
    std::vector<WeatherRule> weather_keyword_rules;  // evaluated in order, flags may co-fire
    std::vector<std::string> impute_median_columns;
    std::vector<std::string> drop_missing_row_columns;  // the single entry "*" means every column
    int severity_threshold = 3;
    std::optional<std::string> state_filter;

    static CleaningConfig defaults();
};

struct CleanAction {
    std::string action;
    std::string note;
    size_t rows_affected = 0;
};

struct CleanSummary {
    size_t rows_before = 0;
    size_t rows_after = 0;
    size_t columns_before = 0;
    size_t columns_after = 0;
    std::vector<CleanAction> log;

    void add(std::string action, std::string note, size_t rows_affected = 0) {
        log.push_back({std::move(action), std::move(note), rows_affected});
    }
    // Rows removed across all logged drop-style actions.
    size_t rows_dropped_total() const;
};

ColumnTable drop_irrelevant_columns(const ColumnTable& t, const CleaningConfig& cfg, CleanSummary& summary);
ColumnTable normalize_wind_direction(const ColumnTable& t, const CleaningConfig& cfg, CleanSummary& summary);
ColumnTable extract_weather_flags(const ColumnTable& t, const CleaningConfig& cfg, CleanSummary& summary);
// Adds Year / Month / Day (weekday) from Start_Time and removes the source
// column; rows whose timestamp does not parse are dropped and logged.
ColumnTable extract_time_parts(const ColumnTable& t, CleanSummary& summary);
ColumnTable impute_median(const ColumnTable& t, const std::string& column, CleanSummary& summary);
ColumnTable drop_missing_rows(const ColumnTable& t, const std::vector<std::string>& columns, CleanSummary& summary);
ColumnTable binarize_severity(const ColumnTable& t, int threshold, CleanSummary& summary);
ColumnTable filter_state(const ColumnTable& t, const std::string& code, CleanSummary& summary);

// Full pipeline in the fixed order: drop columns -> weather flags -> wind
// normalize -> time parts -> impute -> drop missing rows -> binarize ->
// optional state filter. When mid_missingness is given it receives the
// missingness report taken just before imputation (the point where the
// per-variable missingness table is conventionally reported).
ColumnTable run_cleaning_pipeline(const ColumnTable& t, const CleaningConfig& cfg, CleanSummary& summary,
                                  MissingnessReport* mid_missingness = nullptr);

}  // namespace accsev
