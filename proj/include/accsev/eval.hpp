#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "accsev/stats.hpp"

namespace accsev {

struct ConfusionMatrix {
    uint64_t tp = 0, fp = 0, fn = 0, tn = 0;
    std::string positive_label;

    uint64_t total() const { return tp + fp + fn + tn; }
};

ConfusionMatrix confusion(std::span<const std::string> actual, std::span<const std::string> predicted,
                          const std::string& positive);

// The full confusion-matrix statistic set. Ratios with a zero denominator
// are reported as absent, never silently zero.
struct MetricsReport {
    double accuracy = 0.0;
    Interval accuracy_ci;
    double confidence = 0.95;
    double prevalence = 0.0;
    double nir = 0.0;
    double p_acc_gt_nir = 1.0;
    std::optional<double> sensitivity;
    std::optional<double> specificity;
    std::optional<double> ppv;
    std::optional<double> npv;
    std::optional<double> f1;
    std::optional<double> kappa;
    std::optional<double> mcnemar_statistic;
    std::optional<double> mcnemar_p;
};

MetricsReport metrics(const ConfusionMatrix& cm, double confidence = 0.95);

struct RocPoint {
    double threshold = 0.0;
    double fpr = 0.0;
    double tpr = 0.0;
};

// Points run from threshold +inf (0,0) down to the smallest score (1,1);
// tied scores advance both rates jointly.
struct RocCurve {
    std::vector<RocPoint> points;
};

RocCurve roc_curve(std::span<const double> scores, std::span<const std::string> actual,
                   const std::string& positive);

// Trapezoidal area under roc_curve; equals the tie-corrected Mann-Whitney
// pair statistic.
double auc(std::span<const double> scores, std::span<const std::string> actual,
           const std::string& positive);

struct AucEstimate {
    double value = 0.0;
    double se = 0.0;
    Interval ci;
    std::string method;
    size_t folds = 0;
};

struct ScoredFold {
    std::vector<double> scores;
    std::vector<std::string> actual;
};

AucEstimate cv_auc(const std::vector<ScoredFold>& folds, const std::string& positive,
                   double confidence = 0.95);

struct ComparisonRow {
    std::string metric;
    std::optional<double> a;
    std::optional<double> b;
    std::optional<double> delta;  // b - a, absent when either side is undefined
    std::string note;
};

// Side-by-side accuracy / sensitivity / specificity.
std::vector<ComparisonRow> compare_models(const MetricsReport& a, const MetricsReport& b);

}  // namespace accsev
