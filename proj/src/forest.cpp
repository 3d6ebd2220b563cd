#include "accsev/forest.hpp"

#include <algorithm>
#include <atomic>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>

namespace accsev {

double gini_impurity(std::span<const uint64_t> class_counts) {
    uint64_t total = 0;
    for (uint64_t c : class_counts) total += c;
    if (total == 0) throw StatError("gini impurity: empty node");
    double g = 1.0;
    for (uint64_t c : class_counts) {
        const double p = static_cast<double>(c) / static_cast<double>(total);
        g -= p * p;
    }
    return g;
}

namespace {

double gini2(uint64_t n0, uint64_t n1) {
    const double n = static_cast<double>(n0 + n1);
    const double p0 = static_cast<double>(n0) / n;
    const double p1 = static_cast<double>(n1) / n;
    return 1.0 - p0 * p0 - p1 * p1;
}

}  // namespace

std::optional<SplitCandidate> best_split(const FeatureMatrix& X, std::span<const uint8_t> y,
                                         std::span<const size_t> rows,
                                         std::span<const uint32_t> candidates, size_t min_leaf) {
    const size_t n = rows.size();
    if (n < 2 * min_leaf) return std::nullopt;

    uint64_t n0 = 0, n1 = 0;
    for (size_t r : rows) (y[r] ? n1 : n0)++;
    if (n0 == 0 || n1 == 0) return std::nullopt;
    const double node_term = static_cast<double>(n) * gini2(n0, n1);

    std::optional<SplitCandidate> best;
    std::vector<std::pair<double, uint8_t>> sorted(n);

    for (uint32_t f : candidates) {
        const double* col = X.feature_data(f);
        for (size_t i = 0; i < n; ++i) sorted[i] = {col[rows[i]], y[rows[i]]};
        std::sort(sorted.begin(), sorted.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });

        uint64_t l0 = 0, l1 = 0;
        for (size_t i = 0; i + 1 < n; ++i) {
            (sorted[i].second ? l1 : l0)++;
            const double a = sorted[i].first, b = sorted[i + 1].first;
            if (!(a < b)) continue;
            const size_t n_left = i + 1, n_right = n - n_left;
            if (n_left < min_leaf || n_right < min_leaf) continue;

            double thr = 0.5 * (a + b);
            if (!(thr > a)) thr = b;  // adjacent representables; compare is value < thr

            const uint64_t r0 = n0 - l0, r1 = n1 - l1;
            const double decrease = node_term - static_cast<double>(n_left) * gini2(l0, l1) -
                                    static_cast<double>(n_right) * gini2(r0, r1);
            if (decrease > 0.0 && (!best || decrease > best->decrease))
                best = SplitCandidate{f, thr, decrease};
        }
    }
    return best;
}

int Tree::predict_class(const FeatureMatrix& X, size_t row) const {
    size_t node = 0;
    while (!nodes[node].is_leaf()) {
        const TreeNode& nd = nodes[node];
        node = X.at(static_cast<size_t>(nd.feature), row) < nd.threshold
                   ? static_cast<size_t>(nd.left)
                   : static_cast<size_t>(nd.right);
    }
    const TreeNode& leaf = nodes[node];
    return leaf.n1 > leaf.n0 ? 1 : 0;
}

namespace {

size_t resolve_mtry(size_t mtry, size_t p) {
    if (mtry == 0) return std::max<size_t>(1, static_cast<size_t>(std::floor(std::sqrt(static_cast<double>(p)))));
    if (mtry > p) throw InputError("mtry exceeds feature count");
    return mtry;
}

struct TreeBuilder {
    const FeatureMatrix& X;
    std::span<const uint8_t> y;
    const ForestConfig& config;
    size_t mtry;
    Rng& rng;
    std::vector<double>* decreases;
    Tree tree;

    int32_t build(std::vector<size_t> rows, int depth) {
        const int32_t index = static_cast<int32_t>(tree.nodes.size());
        tree.nodes.emplace_back();

        uint64_t n0 = 0, n1 = 0;
        for (size_t r : rows) (y[r] ? n1 : n0)++;
        {
            TreeNode& node = tree.nodes[static_cast<size_t>(index)];
            node.n0 = n0;
            node.n1 = n1;
            node.impurity = gini2(n0, n1);
        }

        const bool depth_capped = config.max_depth >= 0 && depth >= config.max_depth;
        if (n0 == 0 || n1 == 0 || rows.size() < 2 * config.min_leaf || depth_capped)
            return index;

        std::vector<size_t> picks = sample_without_replacement(X.n_features, mtry, rng);
        std::sort(picks.begin(), picks.end());
        std::vector<uint32_t> candidates(picks.begin(), picks.end());

        const auto split = best_split(X, y, rows, candidates, config.min_leaf);
        if (!split) return index;

        std::vector<size_t> left_rows, right_rows;
        left_rows.reserve(rows.size());
        right_rows.reserve(rows.size());
        const double* col = X.feature_data(split->feature);
        for (size_t r : rows)
            (col[r] < split->threshold ? left_rows : right_rows).push_back(r);
        rows.clear();
        rows.shrink_to_fit();

        if (decreases) (*decreases)[split->feature] += split->decrease;

        const int32_t left = build(std::move(left_rows), depth + 1);
        const int32_t right = build(std::move(right_rows), depth + 1);
        TreeNode& node = tree.nodes[static_cast<size_t>(index)];
        node.left = left;
        node.right = right;
        node.feature = static_cast<int32_t>(split->feature);
        node.threshold = split->threshold;
        node.decrease = split->decrease;
        return index;
    }
};

}  // namespace

Tree grow_tree(const FeatureMatrix& X, std::span<const uint8_t> y, std::span<const size_t> rows,
               const ForestConfig& config, Rng& rng, std::vector<double>* per_feature_decrease) {
    if (rows.empty()) throw InputError("grow_tree: empty sample");
    if (config.min_leaf < 1) throw InputError("min_leaf must be at least 1");
    TreeBuilder builder{X, y, config, resolve_mtry(config.mtry, X.n_features), rng, per_feature_decrease, {}};
    builder.build(std::vector<size_t>(rows.begin(), rows.end()), 0);
    return std::move(builder.tree);
}

ForestModel train_forest(const ColumnTable& t, const std::string& target, const std::string& positive,
                         const ForestConfig& config) {
    if (config.n_trees < 1) throw InputError("n_trees must be at least 1");
    if (config.min_leaf < 1) throw InputError("min_leaf must be at least 1");

    const Column& tcol = t.column(target);
    std::map<std::string, uint64_t> classes;
    for (size_t r = 0; r < t.row_count(); ++r) {
        if (tcol.is_missing(r)) throw InputError("target has missing cells");
        ++classes[tcol.cell_text(r)];
    }
    if (classes.size() != 2)
        throw InputError("target must be binary, found " + std::to_string(classes.size()) + " classes");
    if (!classes.count(positive))
        throw InputError("positive label '" + positive + "' not present in target");
    std::string negative;
    for (const auto& [label, count] : classes)
        if (label != positive) negative = label;

    ForestModel model;
    model.encoder = FeatureEncoder::fit(t, target);
    model.target = target;
    model.labels = {negative, positive};
    model.config = config;
    model.config.mtry = resolve_mtry(config.mtry, model.encoder.feature_count());

    const FeatureMatrix X = model.encoder.transform(t);
    const size_t n = X.n_rows;
    std::vector<uint8_t> y(n);
    for (size_t r = 0; r < n; ++r) y[r] = tcol.cell_text(r) == positive ? 1 : 0;

    const size_t n_trees = config.n_trees;
    model.trees.resize(n_trees);
    std::vector<std::vector<double>> decreases(n_trees);
    std::vector<std::vector<uint8_t>> inbag;
    if (config.compute_oob) inbag.assign(n_trees, {});

    auto build_one = [&](size_t i) {
        Rng rng(config.seed, i);
        std::vector<size_t> rows(n);
        if (config.bootstrap) {
            for (size_t j = 0; j < n; ++j) rows[j] = static_cast<size_t>(rng.below(n));
        } else {
            for (size_t j = 0; j < n; ++j) rows[j] = j;
        }
        if (config.compute_oob) {
            inbag[i].assign(n, 0);
            for (size_t r : rows) inbag[i][r] = 1;
        }
        decreases[i].assign(X.n_features, 0.0);
        ForestConfig tree_config = model.config;
        model.trees[i] = grow_tree(X, y, rows, tree_config, rng, &decreases[i]);
    };

    size_t workers = config.n_threads == 0
                         ? std::max<size_t>(1, std::thread::hardware_concurrency())
                         : config.n_threads;
    workers = std::min(workers, n_trees);
    if (workers <= 1) {
        for (size_t i = 0; i < n_trees; ++i) build_one(i);
    } else {
        std::atomic<size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (size_t w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (;;) {
                    const size_t i = next.fetch_add(1);
                    if (i >= n_trees) break;
                    build_one(i);
                }
            });
        for (auto& th : pool) th.join();
    }

    // Merge per-tree decreases in tree order so float summation is fixed.
    model.mdg.assign(X.n_features, 0.0);
    for (size_t i = 0; i < n_trees; ++i)
        for (size_t f = 0; f < X.n_features; ++f) model.mdg[f] += decreases[i][f];
    for (double& v : model.mdg) v /= static_cast<double>(n_trees);

    if (config.compute_oob) {
        size_t voted = 0, wrong = 0;
        for (size_t r = 0; r < n; ++r) {
            uint64_t votes1 = 0, votes = 0;
            for (size_t i = 0; i < n_trees; ++i) {
                if (inbag[i][r]) continue;
                ++votes;
                votes1 += static_cast<uint64_t>(model.trees[i].predict_class(X, r));
            }
            if (votes == 0) continue;
            ++voted;
            const int pred = votes1 * 2 > votes ? 1 : 0;  // tie goes to class 0
            if (pred != y[r]) ++wrong;
        }
        if (voted > 0)
            model.oob_error = static_cast<double>(wrong) / static_cast<double>(voted);
    }
    return model;
}

std::vector<double> ForestModel::predict_proba(const ColumnTable& t) const {
    const FeatureMatrix X = encoder.transform(t);
    std::vector<double> scores(X.n_rows, 0.0);
    for (size_t r = 0; r < X.n_rows; ++r) {
        uint64_t votes = 0;
        for (const Tree& tree : trees) votes += static_cast<uint64_t>(tree.predict_class(X, r));
        scores[r] = static_cast<double>(votes) / static_cast<double>(trees.size());
    }
    return scores;
}

std::vector<std::string> ForestModel::predict(const ColumnTable& t, double threshold) const {
    const std::vector<double> scores = predict_proba(t);
    std::vector<std::string> out;
    out.reserve(scores.size());
    for (double s : scores) out.push_back(s >= threshold ? labels[1] : labels[0]);
    return out;
}

std::vector<ImportanceEntry> importance_mdg(const ForestModel& model) {
    std::vector<ImportanceEntry> entries;
    entries.reserve(model.mdg.size());
    for (size_t f = 0; f < model.mdg.size(); ++f)
        entries.push_back({model.encoder.features()[f].name(), model.mdg[f]});
    std::stable_sort(entries.begin(), entries.end(),
                     [](const ImportanceEntry& a, const ImportanceEntry& b) { return a.mdg > b.mdg; });
    return entries;
}

std::vector<ImportanceEntry> importance_by_variable(const ForestModel& model) {
    std::vector<std::string> order;
    std::map<std::string, double> sums;
    for (size_t f = 0; f < model.mdg.size(); ++f) {
        const std::string& column = model.encoder.features()[f].column;
        if (!sums.count(column)) order.push_back(column);
        sums[column] += model.mdg[f];
    }
    std::vector<ImportanceEntry> entries;
    entries.reserve(order.size());
    for (const auto& column : order) entries.push_back({column, sums.at(column)});
    std::stable_sort(entries.begin(), entries.end(),
                     [](const ImportanceEntry& a, const ImportanceEntry& b) { return a.mdg > b.mdg; });
    return entries;
}

// ---------------------------------------------------------------------------
// Serialization: versioned line-oriented text, tab-separated fields, doubles
// as %.17g (exact round-trip). Format documented in docs/model_format.md.
// ---------------------------------------------------------------------------

namespace {

constexpr const char* kMagic = "accsev-forest v1";

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void check_text_field(const std::string& value, const char* what) {
    if (value.find_first_of("\t\n\r") != std::string::npos)
        throw InputError(std::string(what) + " may not contain tabs or newlines: " + value);
}

std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> out;
    size_t start = 0;
    for (;;) {
        const size_t pos = line.find('\t', start);
        if (pos == std::string::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

double parse_double_strict(const std::string& s) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size() || s.empty())
        throw ModelFormatError("corrupt model file: bad number '" + s + "'");
    return v;
}

int64_t parse_int_strict(const std::string& s) {
    char* end = nullptr;
    const long long v = std::strtoll(s.c_str(), &end, 10);
    if (end != s.c_str() + s.size() || s.empty())
        throw ModelFormatError("corrupt model file: bad integer '" + s + "'");
    return v;
}

}  // namespace

std::string model_to_string(const ForestModel& model) {
    check_text_field(model.target, "target name");
    check_text_field(model.labels[0], "label");
    check_text_field(model.labels[1], "label");

    std::string out;
    out += kMagic;
    out += '\n';
    out += "target\t" + model.target + "\n";
    out += "labels\t" + model.labels[0] + "\t" + model.labels[1] + "\n";
    out += "config\tn_trees=" + std::to_string(model.config.n_trees) +
           "\tmtry=" + std::to_string(model.config.mtry) +
           "\tmin_leaf=" + std::to_string(model.config.min_leaf) +
           "\tmax_depth=" + std::to_string(model.config.max_depth) +
           "\tseed=" + std::to_string(model.config.seed) +
           "\tbootstrap=" + (model.config.bootstrap ? "1" : "0") + "\n";

    out += "features\t" + std::to_string(model.encoder.feature_count()) + "\n";
    for (size_t f = 0; f < model.encoder.feature_count(); ++f) {
        const EncodedFeature& feature = model.encoder.features()[f];
        check_text_field(feature.column, "column name");
        check_text_field(feature.level, "level");
        out += "feature\t" + std::to_string(f) + "\t" + kind_name(feature.source_kind) + "\t" +
               split_kind_name(feature.split_kind) + "\t" + fmt_double(model.mdg[f]) + "\t" +
               feature.column + "\t" + feature.level + "\n";
    }

    out += "trees\t" + std::to_string(model.trees.size()) + "\n";
    for (size_t i = 0; i < model.trees.size(); ++i) {
        const Tree& tree = model.trees[i];
        out += "tree\t" + std::to_string(i) + "\t" + std::to_string(tree.nodes.size()) + "\n";
        for (const TreeNode& node : tree.nodes) {
            out += "node\t" + std::to_string(node.left) + "\t" + std::to_string(node.right) + "\t" +
                   std::to_string(node.feature) + "\t" + fmt_double(node.threshold) + "\t" +
                   std::to_string(node.n0) + "\t" + std::to_string(node.n1) + "\t" +
                   fmt_double(node.impurity) + "\t" + fmt_double(node.decrease) + "\n";
        }
    }
    out += "end\n";
    return out;
}

ForestModel model_from_string(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    auto next_line = [&](const char* context) {
        if (!std::getline(in, line))
            throw ModelFormatError(std::string("corrupt model file: truncated before ") + context);
        return split_tabs(line);
    };

    if (!std::getline(in, line)) throw ModelFormatError("corrupt model file: empty");
    if (line != kMagic) throw ModelFormatError("unsupported model version tag: '" + line + "'");

    ForestModel model;

    auto target_fields = next_line("target");
    if (target_fields.size() != 2 || target_fields[0] != "target")
        throw ModelFormatError("corrupt model file: expected target line");
    model.target = target_fields[1];

    auto label_fields = next_line("labels");
    if (label_fields.size() != 3 || label_fields[0] != "labels")
        throw ModelFormatError("corrupt model file: expected labels line");
    model.labels = {label_fields[1], label_fields[2]};

    auto config_fields = next_line("config");
    if (config_fields.empty() || config_fields[0] != "config")
        throw ModelFormatError("corrupt model file: expected config line");
    for (size_t i = 1; i < config_fields.size(); ++i) {
        const size_t eq = config_fields[i].find('=');
        if (eq == std::string::npos)
            throw ModelFormatError("corrupt model file: bad config entry '" + config_fields[i] + "'");
        const std::string key = config_fields[i].substr(0, eq);
        const std::string value = config_fields[i].substr(eq + 1);
        if (key == "n_trees") model.config.n_trees = static_cast<size_t>(parse_int_strict(value));
        else if (key == "mtry") model.config.mtry = static_cast<size_t>(parse_int_strict(value));
        else if (key == "min_leaf") model.config.min_leaf = static_cast<size_t>(parse_int_strict(value));
        else if (key == "max_depth") model.config.max_depth = static_cast<int>(parse_int_strict(value));
        else if (key == "seed") model.config.seed = static_cast<uint64_t>(parse_int_strict(value));
        else if (key == "bootstrap") model.config.bootstrap = parse_int_strict(value) != 0;
        else throw ModelFormatError("corrupt model file: unknown config key '" + key + "'");
    }

    auto feature_header = next_line("features header");
    if (feature_header.size() != 2 || feature_header[0] != "features")
        throw ModelFormatError("corrupt model file: expected features header");
    const size_t n_features = static_cast<size_t>(parse_int_strict(feature_header[1]));

    std::vector<EncodedFeature> features;
    features.reserve(n_features);
    model.mdg.assign(n_features, 0.0);
    for (size_t f = 0; f < n_features; ++f) {
        auto fields = next_line("feature line");
        if (fields.size() != 7 || fields[0] != "feature")
            throw ModelFormatError("corrupt model file: bad feature line");
        if (static_cast<size_t>(parse_int_strict(fields[1])) != f)
            throw ModelFormatError("corrupt model file: feature index out of order");
        EncodedFeature feature;
        feature.source_kind = kind_from_name(fields[2]);
        feature.split_kind = fields[3] == "boolean" ? SplitKind::boolean : SplitKind::numeric_threshold;
        if (fields[3] != "boolean" && fields[3] != "numeric_threshold")
            throw ModelFormatError("corrupt model file: bad split kind '" + fields[3] + "'");
        model.mdg[f] = parse_double_strict(fields[4]);
        feature.column = fields[5];
        feature.level = fields[6];
        features.push_back(std::move(feature));
    }
    model.encoder.set_features(std::move(features));

    auto trees_header = next_line("trees header");
    if (trees_header.size() != 2 || trees_header[0] != "trees")
        throw ModelFormatError("corrupt model file: expected trees header");
    const size_t n_trees = static_cast<size_t>(parse_int_strict(trees_header[1]));

    model.trees.resize(n_trees);
    for (size_t i = 0; i < n_trees; ++i) {
        auto header = next_line("tree header");
        if (header.size() != 3 || header[0] != "tree" ||
            static_cast<size_t>(parse_int_strict(header[1])) != i)
            throw ModelFormatError("corrupt model file: bad tree header");
        const size_t n_nodes = static_cast<size_t>(parse_int_strict(header[2]));
        if (n_nodes == 0) throw ModelFormatError("corrupt model file: empty tree");
        Tree& tree = model.trees[i];
        tree.nodes.resize(n_nodes);
        for (size_t k = 0; k < n_nodes; ++k) {
            auto fields = next_line("node line");
            if (fields.size() != 9 || fields[0] != "node")
                throw ModelFormatError("corrupt model file: bad node line");
            TreeNode& node = tree.nodes[k];
            node.left = static_cast<int32_t>(parse_int_strict(fields[1]));
            node.right = static_cast<int32_t>(parse_int_strict(fields[2]));
            node.feature = static_cast<int32_t>(parse_int_strict(fields[3]));
            node.threshold = parse_double_strict(fields[4]);
            node.n0 = static_cast<uint64_t>(parse_int_strict(fields[5]));
            node.n1 = static_cast<uint64_t>(parse_int_strict(fields[6]));
            node.impurity = parse_double_strict(fields[7]);
            node.decrease = parse_double_strict(fields[8]);
            const int64_t limit = static_cast<int64_t>(n_nodes);
            if (node.left >= limit || node.right >= limit ||
                (node.left < 0) != (node.right < 0) ||
                (!node.is_leaf() && (node.feature < 0 ||
                                     static_cast<size_t>(node.feature) >= n_features)))
                throw ModelFormatError("corrupt model file: inconsistent node");
        }
    }

    auto end_fields = next_line("end marker");
    if (end_fields.size() != 1 || end_fields[0] != "end")
        throw ModelFormatError("corrupt model file: missing end marker");
    return model;
}

void save_model(const ForestModel& model, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot open file for writing: " + path);
    out << model_to_string(model);
    if (!out) throw InputError("write failed: " + path);
}

ForestModel load_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return model_from_string(buf.str());
}

}  // namespace accsev
