#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "accsev/encode.hpp"
#include "accsev/rng.hpp"
#include "accsev/table.hpp"

namespace accsev {

struct ForestConfig {
    size_t n_trees = 500;
    size_t mtry = 0;      // 0 = floor(sqrt(p))
    size_t min_leaf = 1;
    int max_depth = -1;   // -1 = unbounded
    uint64_t seed = 0;
    bool bootstrap = true;  // off = exact mode (every row once, for oracle tests)
    size_t n_threads = 0;   // 0 = hardware concurrency
    bool compute_oob = false;
};

// 1 - sum((n_i / n)^2)
double gini_impurity(std::span<const uint64_t> class_counts);

struct SplitCandidate {
    uint32_t feature = 0;
    double threshold = 0.0;
    double decrease = 0.0;  // n*G(node) - nL*G(L) - nR*G(R)
};

// Exhaustive search over the candidate features (which must be in ascending
// index order) and all midpoints between consecutive distinct values; ties
// resolve to the lower feature index, then the lower threshold. Absent result
// means no admissible split improves impurity.
std::optional<SplitCandidate> best_split(const FeatureMatrix& X, std::span<const uint8_t> y,
                                         std::span<const size_t> rows,
                                         std::span<const uint32_t> candidates, size_t min_leaf);

struct TreeNode {
    int32_t left = -1;   // -1 marks a leaf
    int32_t right = -1;
    int32_t feature = -1;
    double threshold = 0.0;
    uint64_t n0 = 0;  // in-bag counts, class order [negative, positive]
    uint64_t n1 = 0;
    double impurity = 0.0;
    double decrease = 0.0;

    bool is_leaf() const { return left < 0; }
};

struct Tree {
    std::vector<TreeNode> nodes;  // preorder, root first

    // Majority-vote class at the reached leaf; ties break to class 0.
    int predict_class(const FeatureMatrix& X, size_t row) const;
};

// Grows one CART tree over the given in-bag rows, drawing mtry candidate
// features per node from the supplied stream. per_feature_decrease (when
// non-null, sized n_features) accumulates each split's impurity decrease.
Tree grow_tree(const FeatureMatrix& X, std::span<const uint8_t> y, std::span<const size_t> rows,
               const ForestConfig& config, Rng& rng, std::vector<double>* per_feature_decrease = nullptr);

class ForestModel {
public:
    FeatureEncoder encoder;
    ForestConfig config;                 // mtry stored resolved
    std::string target;
    std::array<std::string, 2> labels;   // [negative, positive]
    std::vector<Tree> trees;
    std::vector<double> mdg;             // per encoded feature, summed decrease / n_trees
    std::optional<double> oob_error;

    // Fraction of trees voting the positive class, per row.
    std::vector<double> predict_proba(const ColumnTable& t) const;
    // Positive label iff score >= threshold.
    std::vector<std::string> predict(const ColumnTable& t, double threshold = 0.5) const;
};

ForestModel train_forest(const ColumnTable& t, const std::string& target, const std::string& positive,
                         const ForestConfig& config);

struct ImportanceEntry {
    std::string name;
    double mdg = 0.0;
};

// Per encoded column, descending MDG (ties keep feature order).
std::vector<ImportanceEntry> importance_mdg(const ForestModel& model);
// Aggregated per source variable (one-hot indicator columns summed).
std::vector<ImportanceEntry> importance_by_variable(const ForestModel& model);

std::string model_to_string(const ForestModel& model);
ForestModel model_from_string(const std::string& text);
void save_model(const ForestModel& model, const std::string& path);
ForestModel load_model(const std::string& path);

}  // namespace accsev
