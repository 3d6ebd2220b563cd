#include "accsev/eval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace accsev {

ConfusionMatrix confusion(std::span<const std::string> actual, std::span<const std::string> predicted,
                          const std::string& positive) {
    if (actual.size() != predicted.size())
        throw StatError("confusion: actual and predicted lengths differ");

    std::set<std::string> negatives;
    for (const auto& label : actual)
        if (label != positive) negatives.insert(label);
    for (const auto& label : predicted)
        if (label != positive) negatives.insert(label);
    if (negatives.size() > 1)
        throw StatError("confusion: labels are not binary (" + std::to_string(negatives.size() + 1) +
                        " distinct labels)");

    ConfusionMatrix cm;
    cm.positive_label = positive;
    for (size_t i = 0; i < actual.size(); ++i) {
        const bool a = actual[i] == positive;
        const bool p = predicted[i] == positive;
        if (a && p) ++cm.tp;
        else if (!a && p) ++cm.fp;
        else if (a && !p) ++cm.fn;
        else ++cm.tn;
    }
    return cm;
}

namespace {

std::optional<double> ratio(uint64_t num, uint64_t den) {
    if (den == 0) return std::nullopt;
    return static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

MetricsReport metrics(const ConfusionMatrix& cm, double confidence) {
    const uint64_t total = cm.total();
    if (total == 0) throw StatError("metrics: empty confusion matrix");
    const double n = static_cast<double>(total);

    MetricsReport report;
    report.confidence = confidence;
    report.accuracy = static_cast<double>(cm.tp + cm.tn) / n;
    report.accuracy_ci = clopper_pearson(cm.tp + cm.tn, total, confidence);
    report.prevalence = static_cast<double>(cm.tp + cm.fn) / n;
    report.nir = std::max(report.prevalence, 1.0 - report.prevalence);
    report.p_acc_gt_nir = binomial_tail_test(cm.tp + cm.tn, total, report.nir).p_value;

    report.sensitivity = ratio(cm.tp, cm.tp + cm.fn);
    report.specificity = ratio(cm.tn, cm.tn + cm.fp);
    report.ppv = ratio(cm.tp, cm.tp + cm.fp);
    report.npv = ratio(cm.tn, cm.tn + cm.fn);

    if (report.ppv && report.sensitivity && (*report.ppv + *report.sensitivity) > 0.0)
        report.f1 = 2.0 * *report.ppv * *report.sensitivity / (*report.ppv + *report.sensitivity);

    const double p_yes = static_cast<double>(cm.tp + cm.fp) / n * static_cast<double>(cm.tp + cm.fn) / n;
    const double p_no = static_cast<double>(cm.fn + cm.tn) / n * static_cast<double>(cm.fp + cm.tn) / n;
    const double p_e = p_yes + p_no;
    if (1.0 - p_e != 0.0) report.kappa = (report.accuracy - p_e) / (1.0 - p_e);

    if (cm.fp + cm.fn > 0) {
        const double diff = std::abs(static_cast<double>(cm.fp) - static_cast<double>(cm.fn)) - 1.0;
        const double stat = diff * diff / static_cast<double>(cm.fp + cm.fn);
        report.mcnemar_statistic = stat;
        report.mcnemar_p = chi_square_upper_tail(stat, 1.0);
    }
    return report;
}

RocCurve roc_curve(std::span<const double> scores, std::span<const std::string> actual,
                   const std::string& positive) {
    if (scores.size() != actual.size()) throw StatError("roc: scores and labels lengths differ");
    uint64_t n_pos = 0, n_neg = 0;
    for (const auto& label : actual) (label == positive ? n_pos : n_neg)++;
    if (n_pos == 0 || n_neg == 0) throw StatError("roc: need both classes present");

    std::vector<std::pair<double, bool>> order(scores.size());
    for (size_t i = 0; i < scores.size(); ++i) order[i] = {scores[i], actual[i] == positive};
    std::sort(order.begin(), order.end(), [](const auto& a, const auto& b) { return a.first > b.first; });

    RocCurve curve;
    curve.points.push_back({std::numeric_limits<double>::infinity(), 0.0, 0.0});
    uint64_t tp = 0, fp = 0;
    size_t i = 0;
    while (i < order.size()) {
        const double s = order[i].first;
        while (i < order.size() && order[i].first == s) {
            (order[i].second ? tp : fp)++;
            ++i;
        }
        curve.points.push_back({s, static_cast<double>(fp) / static_cast<double>(n_neg),
                                static_cast<double>(tp) / static_cast<double>(n_pos)});
    }
    return curve;
}

double auc(std::span<const double> scores, std::span<const std::string> actual,
           const std::string& positive) {
    const RocCurve curve = roc_curve(scores, actual, positive);
    double area = 0.0;
    for (size_t i = 0; i + 1 < curve.points.size(); ++i) {
        const RocPoint& a = curve.points[i];
        const RocPoint& b = curve.points[i + 1];
        area += (b.fpr - a.fpr) * (a.tpr + b.tpr) / 2.0;
    }
    return area;
}

AucEstimate cv_auc(const std::vector<ScoredFold>& folds, const std::string& positive,
                   double confidence) {
    if (folds.size() < 2) throw StatError("cv_auc: need at least 2 folds");
    std::vector<double> values;
    values.reserve(folds.size());
    for (size_t k = 0; k < folds.size(); ++k) {
        try {
            values.push_back(auc(folds[k].scores, folds[k].actual, positive));
        } catch (const StatError& e) {
            throw StatError("cv_auc: fold " + std::to_string(k + 1) + ": " + e.what());
        }
    }

    const double k = static_cast<double>(values.size());
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= k;
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    const double sd = std::sqrt(ss / (k - 1.0));

    AucEstimate estimate;
    estimate.value = mean;
    estimate.se = sd / std::sqrt(k);
    estimate.folds = values.size();
    estimate.method = "fold-mean normal approximation";
    const double z = normal_quantile(1.0 - (1.0 - confidence) / 2.0);
    estimate.ci.lower = std::max(0.0, mean - z * estimate.se);
    estimate.ci.upper = std::min(1.0, mean + z * estimate.se);
    return estimate;
}

std::vector<ComparisonRow> compare_models(const MetricsReport& a, const MetricsReport& b) {
    std::vector<ComparisonRow> rows;
    auto add = [&](const std::string& metric, std::optional<double> va, std::optional<double> vb) {
        ComparisonRow row;
        row.metric = metric;
        row.a = va;
        row.b = vb;
        if (va && vb)
            row.delta = *vb - *va;
        else
            row.note = "undefined on one side, comparison skipped";
        rows.push_back(std::move(row));
    };
    add("accuracy", a.accuracy, b.accuracy);
    add("sensitivity", a.sensitivity, b.sensitivity);
    add("specificity", a.specificity, b.specificity);
    return rows;
}

}  // namespace accsev
