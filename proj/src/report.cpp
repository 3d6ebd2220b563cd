#include "accsev/report.hpp"

#include <cmath>
#include <cstdio>

namespace accsev::report {

namespace {

std::string fmt(double v, int precision) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", precision, v);
    return buf;
}

std::string fmt_g(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

std::string fmt_p(double p) {
    if (p > 0.0 && p < 1e-15) return "<1e-15";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.3g", p);
    return buf;
}

std::string opt_fmt(const std::optional<double>& v, int precision) {
    return v ? fmt(*v, precision) : "NA";
}

json opt_json(const std::optional<double>& v) {
    if (v) return *v;
    return nullptr;
}

}  // namespace

std::string missingness_tsv(const MissingnessReport& report) {
    std::string out = "Col.num\tV.name\tMode\tN.level\tncom\tnmiss\tMiss.prop\n";
    size_t index = 1;
    for (const auto& row : report.rows) {
        out += std::to_string(index++) + "\t" + row.name + "\t" + kind_name(row.kind) + "\t" +
               std::to_string(row.distinct_levels) + "\t" + std::to_string(row.n_complete) + "\t" +
               std::to_string(row.n_miss) + "\t" + fmt(row.miss_prop_display(), 3) + "\n";
    }
    return out;
}

json missingness_json(const MissingnessReport& report) {
    json rows = json::array();
    for (const auto& row : report.rows) {
        rows.push_back({{"name", row.name},
                        {"kind", kind_name(row.kind)},
                        {"distinct_levels", row.distinct_levels},
                        {"n_complete", row.n_complete},
                        {"n_miss", row.n_miss},
                        {"miss_prop", row.miss_prop()}});
    }
    return {{"row_count", report.row_count}, {"columns", rows}};
}

std::string frequency_tsv(const FrequencyTable& table) {
    std::string out = "Value\tCount\tProportion\n";
    for (const auto& entry : table.entries)
        out += entry.key + "\t" + std::to_string(entry.count) + "\t" + fmt(entry.proportion, 4) + "\n";
    return out;
}

json frequency_json(const FrequencyTable& table) {
    json entries = json::array();
    for (const auto& entry : table.entries)
        entries.push_back({{"value", entry.key}, {"count", entry.count}, {"proportion", entry.proportion}});
    return {{"column", table.column}, {"row_count", table.row_count}, {"groups", entries}};
}

std::string clean_summary_text(const CleanSummary& summary) {
    std::string out;
    out += "rows: " + std::to_string(summary.rows_before) + " -> " + std::to_string(summary.rows_after) + "\n";
    out += "columns: " + std::to_string(summary.columns_before) + " -> " +
           std::to_string(summary.columns_after) + "\n";
    for (const auto& action : summary.log) {
        out += action.action + ": " + action.note;
        if (action.rows_affected > 0) out += " (" + std::to_string(action.rows_affected) + " rows)";
        out += "\n";
    }
    return out;
}

json clean_summary_json(const CleanSummary& summary) {
    json log = json::array();
    for (const auto& action : summary.log)
        log.push_back({{"action", action.action}, {"note", action.note}, {"rows_affected", action.rows_affected}});
    return {{"rows_before", summary.rows_before},
            {"rows_after", summary.rows_after},
            {"columns_before", summary.columns_before},
            {"columns_after", summary.columns_after},
            {"log", log}};
}

std::string screening_tsv(const std::vector<ScreeningRow>& rows) {
    std::string out = "Variable\tTest\tTest-Statistic\tP-value\tDecision\n";
    for (const auto& row : rows)
        out += row.variable + "\t" + row.test_name + "\t" + fmt_g(row.statistic) + "\t" +
               fmt_p(row.p_value) + "\t" + (row.important ? "important" : "unimportant") + "\n";
    return out;
}

json screening_json(const std::vector<ScreeningRow>& rows, double alpha) {
    json out_rows = json::array();
    for (const auto& row : rows)
        out_rows.push_back({{"variable", row.variable},
                            {"test", row.test_name},
                            {"statistic", row.statistic},
                            {"p_value", row.p_value},
                            {"decision", row.important ? "important" : "unimportant"},
                            {"method_detail", row.method_detail}});
    return {{"alpha", alpha}, {"rows", out_rows}};
}

std::string importance_tsv(const std::vector<ImportanceEntry>& entries) {
    std::string out = "Variable\tMeanDecreaseGini\n";
    for (const auto& entry : entries) out += entry.name + "\t" + fmt(entry.mdg, 2) + "\n";
    return out;
}

json importance_json(const std::vector<ImportanceEntry>& per_variable,
                     const std::vector<ImportanceEntry>& per_column) {
    json vars = json::array(), cols = json::array();
    for (const auto& entry : per_variable) vars.push_back({{"variable", entry.name}, {"mdg", entry.mdg}});
    for (const auto& entry : per_column) cols.push_back({{"column", entry.name}, {"mdg", entry.mdg}});
    return {{"by_variable", vars}, {"by_encoded_column", cols}};
}

std::string metrics_tsv(const MetricsReport& report) {
    std::string out;
    const int ci_pct = static_cast<int>(std::lround(report.confidence * 100.0));
    out += "ACCURACY\t" + fmt(report.accuracy, 3) + "\n";
    out += std::to_string(ci_pct) + "%CI\t(" + fmt(report.accuracy_ci.lower, 3) + "," +
           fmt(report.accuracy_ci.upper, 3) + ")\n";
    out += "SENSITIVITY/RECALL\t" + opt_fmt(report.sensitivity, 3) + "\n";
    out += "SPECIFICITY(TNR)\t" + opt_fmt(report.specificity, 3) + "\n";
    out += "POS PRED VALUE/PRECISION\t" + opt_fmt(report.ppv, 3) + "\n";
    out += "F1 SCORE\t" + opt_fmt(report.f1, 3) + "\n";
    out += "NO INFORMATION RATE\t" + fmt(report.nir, 3) + "\n";
    out += "P-VALUE [ACC > NIR]\t" + fmt_p(report.p_acc_gt_nir) + "\n";
    out += "KAPPA\t" + opt_fmt(report.kappa, 3) + "\n";
    out += "MCNEMAR'S TEST P-VALUE\t" +
           (report.mcnemar_p ? fmt_p(*report.mcnemar_p) : std::string("NA")) + "\n";
    out += "PREVALENCE\t" + fmt(report.prevalence, 3) + "\n";
    out += "NEG PRED VALUE\t" + opt_fmt(report.npv, 3) + "\n";
    return out;
}

json metrics_json(const MetricsReport& report, const ConfusionMatrix& cm) {
    return {{"confusion",
             {{"tp", cm.tp}, {"fp", cm.fp}, {"fn", cm.fn}, {"tn", cm.tn}, {"positive", cm.positive_label}}},
            {"accuracy", report.accuracy},
            {"accuracy_ci", {report.accuracy_ci.lower, report.accuracy_ci.upper}},
            {"confidence", report.confidence},
            {"sensitivity", opt_json(report.sensitivity)},
            {"specificity", opt_json(report.specificity)},
            {"ppv", opt_json(report.ppv)},
            {"npv", opt_json(report.npv)},
            {"f1", opt_json(report.f1)},
            {"prevalence", report.prevalence},
            {"nir", report.nir},
            {"p_acc_gt_nir", report.p_acc_gt_nir},
            {"kappa", opt_json(report.kappa)},
            {"mcnemar_statistic", opt_json(report.mcnemar_statistic)},
            {"mcnemar_p", opt_json(report.mcnemar_p)}};
}

std::string roc_tsv(const RocCurve& curve) {
    std::string out = "threshold\tfpr\ttpr\n";
    for (const auto& point : curve.points) {
        out += (std::isinf(point.threshold) ? std::string("inf") : fmt_g(point.threshold)) + "\t" +
               fmt(point.fpr, 6) + "\t" + fmt(point.tpr, 6) + "\n";
    }
    return out;
}

std::string roc_svg(const RocCurve& curve, double auc_value) {
    const int size = 440, margin = 50, plot = size - 2 * margin;
    auto px = [&](double fpr) { return margin + fpr * plot; };
    auto py = [&](double tpr) { return size - margin - tpr * plot; };

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(size) + "\" height=\"" +
           std::to_string(size) + "\" viewBox=\"0 0 " + std::to_string(size) + " " + std::to_string(size) +
           "\">\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg += "<line x1=\"" + fmt(px(0), 1) + "\" y1=\"" + fmt(py(0), 1) + "\" x2=\"" + fmt(px(1), 1) +
           "\" y2=\"" + fmt(py(0), 1) + "\" stroke=\"black\"/>\n";
    svg += "<line x1=\"" + fmt(px(0), 1) + "\" y1=\"" + fmt(py(0), 1) + "\" x2=\"" + fmt(px(0), 1) +
           "\" y2=\"" + fmt(py(1), 1) + "\" stroke=\"black\"/>\n";
    svg += "<line x1=\"" + fmt(px(0), 1) + "\" y1=\"" + fmt(py(0), 1) + "\" x2=\"" + fmt(px(1), 1) +
           "\" y2=\"" + fmt(py(1), 1) + "\" stroke=\"grey\" stroke-dasharray=\"4 4\"/>\n";
    svg += "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"2\" points=\"";
    for (const auto& point : curve.points)
        svg += fmt(px(point.fpr), 2) + "," + fmt(py(point.tpr), 2) + " ";
    svg += "\"/>\n";
    svg += "<text x=\"" + fmt(size / 2.0, 1) + "\" y=\"" + fmt(size - 12.0, 1) +
           "\" text-anchor=\"middle\" font-size=\"13\">False Positive Rate</text>\n";
    svg += "<text x=\"14\" y=\"" + fmt(size / 2.0, 1) +
           "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 14 " + fmt(size / 2.0, 1) +
           ")\">True Positive Rate (Hit Rate)</text>\n";
    svg += "<text x=\"" + fmt(px(0.62), 1) + "\" y=\"" + fmt(py(0.08), 1) +
           "\" font-size=\"13\">AUC = " + fmt(auc_value, 3) + "</text>\n";
    svg += "</svg>\n";
    return svg;
}

std::string cv_auc_tsv(const AucEstimate& estimate, double confidence) {
    std::string out = "cvAUC\tse\tci\tconfidence\tfolds\tmethod\n";
    out += fmt(estimate.value, 3) + "\t" + fmt(estimate.se, 4) + "\t(" + fmt(estimate.ci.lower, 3) + "," +
           fmt(estimate.ci.upper, 3) + ")\t" + fmt_g(confidence) + "\t" + std::to_string(estimate.folds) + "\t" +
           estimate.method + "\n";
    return out;
}

json cv_auc_json(const AucEstimate& estimate) {
    return {{"cv_auc", estimate.value},
            {"se", estimate.se},
            {"ci", {estimate.ci.lower, estimate.ci.upper}},
            {"folds", estimate.folds},
            {"method", estimate.method}};
}

std::string comparison_tsv(const std::vector<ComparisonRow>& rows, const std::string& name_a,
                           const std::string& name_b) {
    std::string out = "Metric\t" + name_a + "\t" + name_b + "\tDelta\n";
    for (const auto& row : rows) {
        out += row.metric + "\t" + opt_fmt(row.a, 3) + "\t" + opt_fmt(row.b, 3) + "\t";
        out += row.delta ? fmt(*row.delta, 3) : "NA (" + row.note + ")";
        out += "\n";
    }
    return out;
}

json comparison_json(const std::vector<ComparisonRow>& rows, const std::string& name_a,
                     const std::string& name_b) {
    json out_rows = json::array();
    for (const auto& row : rows)
        out_rows.push_back({{"metric", row.metric},
                            {name_a, opt_json(row.a)},
                            {name_b, opt_json(row.b)},
                            {"delta", opt_json(row.delta)},
                            {"note", row.note}});
    return {{"models", {name_a, name_b}}, {"rows", out_rows}};
}

}  // namespace accsev::report
