#include "accsev/prep.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>

namespace accsev {

namespace {

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

bool contains_ci(const std::string& haystack_lower, const std::string& needle_lower) {
    return haystack_lower.find(needle_lower) != std::string::npos;
}

// Days since 1970-01-01 (proleptic Gregorian), Howard Hinnant's algorithm.
int64_t days_from_civil(int y, int m, int d) {
    y -= m <= 2;
    const int era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153u * static_cast<unsigned>(m + (m > 2 ? -3 : 9)) + 2u) / 5u + static_cast<unsigned>(d) - 1u;
    const unsigned doe = yoe * 365u + yoe / 4u - yoe / 100u + doy;
    return static_cast<int64_t>(era) * 146097 + static_cast<int64_t>(doe) - 719468;
}

bool leap_year(int y) {
    return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
}

int days_in_month(int y, int m) {
    static const int kDays[12] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (m == 2 && leap_year(y)) return 29;
    return kDays[m - 1];
}

const char* kWeekdays[7] = {"Sunday", "Monday", "Tuesday", "Wednesday", "Thursday", "Friday", "Saturday"};

struct TimestampParts {
    int year, month, day;
};

bool parse_timestamp(const std::string& raw, TimestampParts& out) {
    if (raw.size() < 19) return false;
    auto num = [&](size_t pos, size_t len, int& value) {
        value = 0;
        for (size_t i = pos; i < pos + len; ++i) {
            if (raw[i] < '0' || raw[i] > '9') return false;
            value = value * 10 + (raw[i] - '0');
        }
        return true;
    };
    int year, month, day, hour, minute, second;
    if (!num(0, 4, year) || !num(5, 2, month) || !num(8, 2, day) ||
        !num(11, 2, hour) || !num(14, 2, minute) || !num(17, 2, second))
        return false;
    if (raw[4] != '-' || raw[7] != '-' || raw[10] != ' ' || raw[13] != ':' || raw[16] != ':') return false;
    if (raw.size() > 19) {
        if (raw[19] != '.' || raw.size() == 20) return false;
        for (size_t i = 20; i < raw.size(); ++i)
            if (raw[i] < '0' || raw[i] > '9') return false;
    }
    if (month < 1 || month > 12 || day < 1 || day > days_in_month(year, month)) return false;
    if (hour > 23 || minute > 59 || second > 59) return false;
    out = {year, month, day};
    return true;
}

}  // namespace

CleaningConfig CleaningConfig::defaults() {
    CleaningConfig cfg;
    // The stated irrelevant columns, plus the high-missingness wind chill
    // column and the header spellings the open dataset actually ships with.
    cfg.columns_to_drop = {
        "ID", "Description", "Distance(Mile)", "End_time", "End_Lat", "End_lng", "City",
        "Weather_Timestamp", "Airport_code", "Street_Number", "Side", "Country", "Zipcode",
        "Turning_loop",
        // spelling drift in the published CSV
        "Distance(mi)", "Number", "Street",
        // dropped for its 16.5% missingness
        "Wind_Chill(F)",
    };
    cfg.wind_direction_map = {
        {"Calm", "CALM"}, {"East", "E"}, {"North", "N"}, {"South", "S"},
        {"West", "W"},    {"Variable", "VAR"},
    };
    cfg.weather_keyword_rules = {
        {"Heavy_Snow", {"heavy snow", "blowing snow"}},
        {"Heavy_Rain", {"heavy rain", "thunderstorm", "t-storm"}},
        {"Snow", {"snow", "sleet", "wintry"}},
        {"Rain", {"rain", "drizzle", "shower"}},
        {"Fog", {"fog", "mist", "haze"}},
        {"Cloud", {"cloud", "overcast"}},
        {"Clear", {"clear", "fair"}},
    };
    cfg.impute_median_columns = {"Precipitation(in)"};
    cfg.drop_missing_row_columns = {"*"};
    cfg.severity_threshold = 3;
    return cfg;
}

size_t CleanSummary::rows_dropped_total() const {
    size_t total = 0;
    for (const auto& action : log)
        if (action.action == "drop_missing_rows" || action.action == "extract_time_parts" ||
            action.action == "filter_state" || action.action == "filter_rows")
            total += action.rows_affected;
    return total;
}

ColumnTable drop_irrelevant_columns(const ColumnTable& t, const CleaningConfig& cfg, CleanSummary& summary) {
    std::vector<std::string> found;
    for (const auto& wanted : cfg.columns_to_drop) {
        const std::string wanted_lower = lower(wanted);
        bool matched = false;
        for (size_t c = 0; c < t.column_count(); ++c) {
            if (lower(t.column(c).name()) == wanted_lower) {
                found.push_back(t.column(c).name());
                matched = true;
                break;
            }
        }
        if (!matched)
            summary.add("drop_irrelevant_columns", "listed column absent, skipped: " + wanted);
    }
    if (found.empty()) {
        summary.add("drop_irrelevant_columns", "no listed columns present");
        return t;
    }
    summary.add("drop_irrelevant_columns", "dropped " + std::to_string(found.size()) + " columns");
    return t.drop_columns(found);
}

ColumnTable normalize_wind_direction(const ColumnTable& t, const CleaningConfig& cfg, CleanSummary& summary) {
    const int idx = t.find_column("Wind_Direction");
    if (idx < 0) {
        summary.add("normalize_wind_direction", "Wind_Direction absent, skipped");
        return t;
    }
    const Column& src = t.column(static_cast<size_t>(idx));
    if (src.kind() != ColumnKind::categorical && src.kind() != ColumnKind::text)
        throw InputError("Wind_Direction must be categorical");

    Column out(src.spec());
    out.reserve(src.size());
    size_t mapped = 0;
    std::vector<std::string> novel;
    for (size_t r = 0; r < src.size(); ++r) {
        if (src.is_missing(r)) {
            out.push_missing();
            continue;
        }
        const std::string& value = src.str(r);
        auto it = std::find_if(cfg.wind_direction_map.begin(), cfg.wind_direction_map.end(),
                               [&](const auto& pair) { return pair.first == value; });
        if (it != cfg.wind_direction_map.end()) {
            out.push_str(it->second);
            ++mapped;
            continue;
        }
        const bool canonical =
            value == "CALM" || value == "VAR" ||
            (value.size() <= 3 && value.find_first_not_of("NESW") == std::string::npos && !value.empty());
        if (!canonical && std::find(novel.begin(), novel.end(), value) == novel.end())
            novel.push_back(value);
        out.push_str(value);
    }
    summary.add("normalize_wind_direction", "collapsed " + std::to_string(mapped) + " cells", 0);
    for (const auto& value : novel)
        summary.add("normalize_wind_direction", "unmapped level passed through: " + value);
    return t.with_column(std::move(out));
}

ColumnTable extract_weather_flags(const ColumnTable& t, const CleaningConfig& cfg, CleanSummary& summary) {
    const int idx = t.find_column("Weather_Condition");
    if (idx < 0) {
        bool flags_present = true;
        for (const auto& rule : cfg.weather_keyword_rules)
            flags_present = flags_present && t.has_column(rule.flag);
        if (flags_present) {
            summary.add("extract_weather_flags", "already applied, skipped");
            return t;
        }
        throw InputError("Weather_Condition column not found");
    }
    const Column& src = t.column(static_cast<size_t>(idx));

    ColumnTable result = t;
    for (const auto& rule : cfg.weather_keyword_rules) {
        Column flag({rule.flag, ColumnKind::boolean, false});
        flag.reserve(src.size());
        std::vector<std::string> needles;
        needles.reserve(rule.keywords.size());
        for (const auto& k : rule.keywords) needles.push_back(lower(k));
        for (size_t r = 0; r < src.size(); ++r) {
            if (src.is_missing(r)) {
                flag.push_bool(false);
                continue;
            }
            const std::string cell = lower(src.str(r));
            bool hit = false;
            for (const auto& needle : needles)
                if (contains_ci(cell, needle)) {
                    hit = true;
                    break;
                }
            flag.push_bool(hit);
        }
        result = result.with_column(std::move(flag));
    }
    result = result.without_column("Weather_Condition");
    summary.add("extract_weather_flags",
                "added " + std::to_string(cfg.weather_keyword_rules.size()) + " flags, removed Weather_Condition");
    return result;
}

ColumnTable extract_time_parts(const ColumnTable& t, CleanSummary& summary) {
    const int idx = t.find_column("Start_Time");
    if (idx < 0) {
        if (t.has_column("Year") && t.has_column("Month") && t.has_column("Day")) {
            summary.add("extract_time_parts", "already applied, skipped");
            return t;
        }
        throw InputError("Start_Time column not found");
    }
    const Column& src = t.column(static_cast<size_t>(idx));

    Column year({"Year", ColumnKind::numeric, false});
    Column month({"Month", ColumnKind::numeric, false});
    Column day({"Day", ColumnKind::categorical, false});
    std::vector<size_t> keep;
    size_t bad = 0;
    for (size_t r = 0; r < src.size(); ++r) {
        TimestampParts parts{};
        if (src.is_missing(r) || !parse_timestamp(src.str(r), parts)) {
            ++bad;
            if (bad <= 5)
                summary.add("extract_time_parts",
                            "unparseable Start_Time at row " + std::to_string(r + 1) +
                                (src.is_missing(r) ? " (missing)" : ": " + src.str(r)));
            continue;
        }
        keep.push_back(r);
        year.push_num(parts.year);
        month.push_num(parts.month);
        const int64_t z = days_from_civil(parts.year, parts.month, parts.day);
        day.push_str(kWeekdays[((z % 7) + 11) % 7]);  // 1970-01-01 is a Thursday
    }

    ColumnTable result = t;
    if (bad > 0) result = result.take_rows(keep);
    result = result.with_column(std::move(year));
    result = result.with_column(std::move(month));
    result = result.with_column(std::move(day));
    result = result.without_column("Start_Time");
    summary.add("extract_time_parts", "added Year/Month/Day, removed Start_Time", bad);
    return result;
}

ColumnTable impute_median(const ColumnTable& t, const std::string& column, CleanSummary& summary) {
    const Column& src = t.column(column);
    if (src.kind() != ColumnKind::numeric) throw InputError("impute_median: column must be numeric: " + column);

    std::vector<double> values;
    values.reserve(src.size());
    for (size_t r = 0; r < src.size(); ++r)
        if (!src.is_missing(r)) values.push_back(src.num(r));
    if (values.empty()) throw InputError("impute_median: all cells missing in " + column);

    std::sort(values.begin(), values.end());
    const size_t n = values.size();
    const double median = (n % 2 == 1) ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);

    size_t filled = 0;
    Column out(src.spec());
    out.reserve(src.size());
    for (size_t r = 0; r < src.size(); ++r) {
        if (src.is_missing(r)) {
            out.push_num(median);
            ++filled;
        } else {
            out.push_num(src.num(r));
        }
    }
    summary.add("impute_median", column + ": filled " + std::to_string(filled) + " cells with median");
    return t.with_column(std::move(out));
}

ColumnTable drop_missing_rows(const ColumnTable& t, const std::vector<std::string>& columns, CleanSummary& summary) {
    if (columns.empty()) {
        summary.add("drop_missing_rows", "no columns listed", 0);
        return t;
    }
    std::vector<size_t> col_indices;
    for (const auto& name : columns) {
        const int idx = t.find_column(name);
        if (idx < 0) throw InputError("unknown column: " + name);
        col_indices.push_back(static_cast<size_t>(idx));
    }
    std::vector<size_t> keep;
    for (size_t r = 0; r < t.row_count(); ++r) {
        bool any_missing = false;
        for (size_t c : col_indices)
            if (t.column(c).is_missing(r)) {
                any_missing = true;
                break;
            }
        if (!any_missing) keep.push_back(r);
    }
    const size_t dropped = t.row_count() - keep.size();
    summary.add("drop_missing_rows",
                "dropped rows with missing cells in " + std::to_string(columns.size()) + " columns", dropped);
    if (dropped == 0) return t;
    return t.take_rows(keep);
}

ColumnTable binarize_severity(const ColumnTable& t, int threshold, CleanSummary& summary) {
    if (threshold < 2 || threshold > 4) throw InputError("severity threshold must be 2, 3 or 4");
    const int idx = t.find_column("Severity");
    if (idx < 0) {
        if (t.has_column(kSeverityClassColumn)) {
            summary.add("binarize_severity", "already applied, skipped");
            return t;
        }
        throw InputError("Severity column not found");
    }
    const Column& src = t.column(static_cast<size_t>(idx));
    if (src.kind() != ColumnKind::numeric) throw InputError("Severity must be numeric");

    Column target({kSeverityClassColumn, ColumnKind::categorical, false});
    target.reserve(src.size());
    size_t severe = 0;
    for (size_t r = 0; r < src.size(); ++r) {
        if (src.is_missing(r))
            throw InputError("Severity missing at row " + std::to_string(r + 1));
        const double v = src.num(r);
        if (v != std::floor(v) || v < 1.0 || v > 4.0)
            throw InputError("Severity value out of domain {1,2,3,4} at row " + std::to_string(r + 1));
        if (v >= threshold) {
            target.push_str(kSevereLabel);
            ++severe;
        } else {
            target.push_str(kLessSevereLabel);
        }
    }
    ColumnTable result = t.without_column("Severity").with_column(std::move(target));
    summary.add("binarize_severity",
                "threshold " + std::to_string(threshold) + ": " + std::to_string(severe) + " severe / " +
                    std::to_string(t.row_count() - severe) + " less severe");
    return result;
}

ColumnTable filter_state(const ColumnTable& t, const std::string& code, CleanSummary& summary) {
    const Column& state = t.column("State");
    (void)state;
    ColumnTable result = t.filter_rows([&](const RowView& row) {
        return !row.is_missing("State") && row.str("State") == code;
    });
    summary.add("filter_state", "kept State = " + code, t.row_count() - result.row_count());
    return result;
}

ColumnTable run_cleaning_pipeline(const ColumnTable& t, const CleaningConfig& cfg, CleanSummary& summary,
                                  MissingnessReport* mid_missingness) {
    summary.rows_before = t.row_count();
    summary.columns_before = t.column_count();

    ColumnTable cur = drop_irrelevant_columns(t, cfg, summary);
    cur = extract_weather_flags(cur, cfg, summary);
    cur = normalize_wind_direction(cur, cfg, summary);
    cur = extract_time_parts(cur, summary);

    if (mid_missingness) *mid_missingness = cur.missingness_report();

    for (const auto& column : cfg.impute_median_columns) {
        if (!cur.has_column(column)) {
            summary.add("impute_median", "column absent, skipped: " + column);
            continue;
        }
        cur = impute_median(cur, column, summary);
    }

    std::vector<std::string> drop_cols = cfg.drop_missing_row_columns;
    if (drop_cols.size() == 1 && drop_cols[0] == "*") {
        drop_cols.clear();
        for (const auto& spec : cur.schema()) drop_cols.push_back(spec.name);
    }
    cur = drop_missing_rows(cur, drop_cols, summary);

    cur = binarize_severity(cur, cfg.severity_threshold, summary);

    if (cfg.state_filter) cur = filter_state(cur, *cfg.state_filter, summary);

    summary.rows_after = cur.row_count();
    summary.columns_after = cur.column_count();
    return cur;
}

}  // namespace accsev
