#include "accsev/partition.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "accsev/rng.hpp"

namespace accsev {

namespace {

// Class key -> row indices, keyed deterministically (lexicographic).
std::map<std::string, std::vector<size_t>> rows_by_class(const ColumnTable& t, const std::string& column) {
    const Column& col = t.column(column);
    std::map<std::string, std::vector<size_t>> groups;
    for (size_t r = 0; r < t.row_count(); ++r)
        groups[col.is_missing(r) ? "missing" : col.cell_text(r)].push_back(r);
    return groups;
}

}  // namespace

SplitResult train_test_split(const ColumnTable& t, double ratio, uint64_t seed,
                             const std::optional<std::string>& stratify) {
    if (!(ratio > 0.0 && ratio < 1.0)) throw InputError("split ratio must lie strictly between 0 and 1");
    const size_t n = t.row_count();
    if (n < 3) throw InputError("need at least 3 rows to split");

    Rng rng(seed);
    std::vector<size_t> train_rows, test_rows;

    if (stratify) {
        auto groups = rows_by_class(t, *stratify);
        for (auto& [key, rows] : groups) {
            shuffle(rows, rng);
            const size_t k = static_cast<size_t>(std::llround(ratio * static_cast<double>(rows.size())));
            train_rows.insert(train_rows.end(), rows.begin(), rows.begin() + k);
            test_rows.insert(test_rows.end(), rows.begin() + k, rows.end());
        }
        std::sort(train_rows.begin(), train_rows.end());
        std::sort(test_rows.begin(), test_rows.end());
    } else {
        std::vector<size_t> order(n);
        for (size_t i = 0; i < n; ++i) order[i] = i;
        shuffle(order, rng);
        const size_t k = static_cast<size_t>(std::llround(ratio * static_cast<double>(n)));
        train_rows.assign(order.begin(), order.begin() + k);
        test_rows.assign(order.begin() + k, order.end());
    }

    SplitResult result;
    result.train = t.take_rows(train_rows);
    result.test = t.take_rows(test_rows);
    result.seed = seed;
    result.ratio = ratio;
    return result;
}

const char* rebalance_mode_name(RebalanceMode mode) {
    switch (mode) {
        case RebalanceMode::oversample: return "oversample";
        case RebalanceMode::undersample: return "undersample";
        case RebalanceMode::both: return "both";
    }
    return "unknown";
}

RebalanceMode rebalance_mode_from_name(const std::string& name) {
    if (name == "oversample") return RebalanceMode::oversample;
    if (name == "undersample") return RebalanceMode::undersample;
    if (name == "both") return RebalanceMode::both;
    throw InputError("unknown rebalance mode: " + name);
}

ColumnTable rebalance(const ColumnTable& t, const std::string& target, const RebalanceConfig& cfg) {
    if (cfg.target_ratio <= 0.0) throw InputError("rebalance target_ratio must be positive");
    auto groups = rows_by_class(t, target);
    if (groups.size() != 2)
        throw InputError("rebalance: target must have exactly 2 classes, found " +
                         std::to_string(groups.size()));

    auto it = groups.begin();
    auto& first = *it;
    auto& second = *std::next(it);
    auto& majority = first.second.size() >= second.second.size() ? first : second;
    auto& minority = first.second.size() >= second.second.size() ? second : first;
    const size_t n_maj = majority.second.size();
    const size_t n_min = minority.second.size();
    const double r = cfg.target_ratio;

    Rng rng(cfg.seed);
    std::vector<size_t> maj_rows, min_rows;

    auto draw_without_replacement = [&](const std::vector<size_t>& pool, size_t k) {
        auto picks = sample_without_replacement(pool.size(), k, rng);
        std::vector<size_t> out;
        out.reserve(k);
        for (size_t p : picks) out.push_back(pool[p]);
        std::sort(out.begin(), out.end());
        return out;
    };
    auto draw_with_replacement = [&](const std::vector<size_t>& pool, size_t k) {
        std::vector<size_t> out;
        out.reserve(k);
        for (size_t i = 0; i < k; ++i) out.push_back(pool[rng.below(pool.size())]);
        return out;
    };

    switch (cfg.mode) {
        case RebalanceMode::undersample: {
            size_t keep = static_cast<size_t>(std::llround(static_cast<double>(n_min) / r));
            keep = std::min(keep, n_maj);
            maj_rows = draw_without_replacement(majority.second, keep);
            min_rows = minority.second;
            break;
        }
        case RebalanceMode::oversample: {
            const size_t grow = static_cast<size_t>(std::llround(static_cast<double>(n_maj) * r));
            maj_rows = majority.second;
            min_rows = draw_with_replacement(minority.second, grow);
            break;
        }
        case RebalanceMode::both: {
            const double g = std::sqrt(static_cast<double>(n_maj) * static_cast<double>(n_min));
            size_t keep = static_cast<size_t>(std::llround(g / std::sqrt(r)));
            keep = std::min(std::max<size_t>(keep, 1), n_maj);
            const size_t grow = static_cast<size_t>(std::llround(static_cast<double>(keep) * r));
            maj_rows = draw_without_replacement(majority.second, keep);
            min_rows = draw_with_replacement(minority.second, grow);
            break;
        }
    }

    // Majority block first, then minority, each internally deterministic.
    std::vector<size_t> rows;
    rows.reserve(maj_rows.size() + min_rows.size());
    rows.insert(rows.end(), maj_rows.begin(), maj_rows.end());
    rows.insert(rows.end(), min_rows.begin(), min_rows.end());
    return t.take_rows(rows);
}

}  // namespace accsev
