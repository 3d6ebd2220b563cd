#include "accsev/config.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>

namespace accsev {

namespace {

std::string trim(const std::string& s) {
    size_t begin = s.find_first_not_of(" \t\r");
    size_t end = s.find_last_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_list(const std::string& value, char sep = ',') {
    std::vector<std::string> out;
    size_t start = 0;
    for (;;) {
        const size_t pos = value.find(sep, start);
        if (pos == std::string::npos) {
            const std::string item = trim(value.substr(start));
            if (!item.empty()) out.push_back(item);
            return out;
        }
        const std::string item = trim(value.substr(start, pos - start));
        if (!item.empty()) out.push_back(item);
        start = pos + 1;
    }
}

double parse_num(const std::string& key, const std::string& value) {
    char* end = nullptr;
    const double v = std::strtod(value.c_str(), &end);
    if (value.empty() || end != value.c_str() + value.size())
        throw InputError("config: bad number for " + key + ": '" + value + "'");
    return v;
}

uint64_t parse_u64(const std::string& key, const std::string& value) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(value.c_str(), &end, 10);
    if (value.empty() || end != value.c_str() + value.size())
        throw InputError("config: bad integer for " + key + ": '" + value + "'");
    return v;
}

int64_t parse_i64(const std::string& key, const std::string& value) {
    char* end = nullptr;
    const long long v = std::strtoll(value.c_str(), &end, 10);
    if (value.empty() || end != value.c_str() + value.size())
        throw InputError("config: bad integer for " + key + ": '" + value + "'");
    return v;
}

}  // namespace

void PipelineConfig::assign(const std::string& key, const std::string& value) {
    if (key == "input") input = value;
    else if (key == "out") out_dir = value;
    else if (key == "seed") seed = parse_u64(key, value);
    else if (key == "target") target = value;
    else if (key == "positive") positive = value;
    else if (key == "alpha") alpha = parse_num(key, value);
    else if (key == "ratio") ratio = parse_num(key, value);
    else if (key == "stratify") stratify = value.empty() ? std::nullopt : std::optional<std::string>(value);
    else if (key == "threshold") threshold = parse_num(key, value);
    else if (key == "cv_folds") cv_folds = static_cast<size_t>(parse_u64(key, value));
    else if (key == "missing_markers") {
        // empty string is a legitimate marker, so keep empties here
        missing_markers.clear();
        size_t start = 0;
        for (;;) {
            const size_t pos = value.find(',', start);
            if (pos == std::string::npos) {
                missing_markers.push_back(trim(value.substr(start)));
                break;
            }
            missing_markers.push_back(trim(value.substr(start, pos - start)));
            start = pos + 1;
        }
    } else if (key == "exclude_features") exclude_features = split_list(value);
    else if (key == "columns_to_drop") cleaning.columns_to_drop = split_list(value);
    else if (key == "impute_median") cleaning.impute_median_columns = split_list(value);
    else if (key == "drop_missing_rows") cleaning.drop_missing_row_columns = split_list(value);
    else if (key == "severity_threshold") cleaning.severity_threshold = static_cast<int>(parse_i64(key, value));
    else if (key == "state_filter")
        cleaning.state_filter = value.empty() ? std::nullopt : std::optional<std::string>(value);
    else if (key == "wind_map") {
        cleaning.wind_direction_map.clear();
        for (const auto& pair : split_list(value)) {
            const size_t colon = pair.find(':');
            if (colon == std::string::npos)
                throw InputError("config: wind_map entries must look like From:TO, got '" + pair + "'");
            cleaning.wind_direction_map.emplace_back(trim(pair.substr(0, colon)), trim(pair.substr(colon + 1)));
        }
    } else if (key.rfind("weather_rule.", 0) == 0) {
        const std::string flag = key.substr(std::string("weather_rule.").size());
        auto it = std::find_if(cleaning.weather_keyword_rules.begin(), cleaning.weather_keyword_rules.end(),
                               [&](const WeatherRule& rule) { return rule.flag == flag; });
        WeatherRule rule{flag, split_list(value, '|')};
        if (it != cleaning.weather_keyword_rules.end())
            *it = std::move(rule);
        else
            cleaning.weather_keyword_rules.push_back(std::move(rule));
    } else if (key == "balance_mode") rebalance.mode = rebalance_mode_from_name(value);
    else if (key == "balance_ratio") rebalance.target_ratio = parse_num(key, value);
    else if (key == "trees") forest.n_trees = static_cast<size_t>(parse_u64(key, value));
    else if (key == "mtry") forest.mtry = static_cast<size_t>(parse_u64(key, value));
    else if (key == "min_leaf") forest.min_leaf = static_cast<size_t>(parse_u64(key, value));
    else if (key == "max_depth") forest.max_depth = static_cast<int>(parse_i64(key, value));
    else if (key == "bootstrap") forest.bootstrap = parse_i64(key, value) != 0;
    else if (key == "threads") forest.n_threads = static_cast<size_t>(parse_u64(key, value));
    else if (key == "oob") forest.compute_oob = parse_i64(key, value) != 0;
    else throw InputError("config: unknown key '" + key + "'");
}

PipelineConfig PipelineConfig::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open config file: " + path);

    PipelineConfig cfg;
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw InputError("config: line " + std::to_string(line_no) + " is not key = value");
        cfg.assign(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    // seeds fan out to every stochastic stage unless set explicitly later
    cfg.rebalance.seed = cfg.seed;
    cfg.forest.seed = cfg.seed;
    return cfg;
}

}  // namespace accsev
