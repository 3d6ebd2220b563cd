// Python bindings over the main pipeline operations. Tables cross the
// boundary as thin handles; reports and summaries as plain dicts/lists.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "accsev/config.hpp"
#include "accsev/eval.hpp"
#include "accsev/forest.hpp"
#include "accsev/partition.hpp"
#include "accsev/prep.hpp"
#include "accsev/screening.hpp"
#include "accsev/stats.hpp"
#include "accsev/table.hpp"
#include "accsev/version.hpp"

namespace py = pybind11;
using namespace accsev;

namespace {

py::object cell_to_python(const Column& col, size_t row) {
    if (col.is_missing(row)) return py::none();
    switch (col.kind()) {
        case ColumnKind::numeric: return py::float_(col.num(row));
        case ColumnKind::boolean: return py::bool_(col.boolean(row));
        default: return py::str(col.str(row));
    }
}

py::dict summary_to_dict(const CleanSummary& summary) {
    py::dict out;
    out["rows_before"] = summary.rows_before;
    out["rows_after"] = summary.rows_after;
    out["columns_before"] = summary.columns_before;
    out["columns_after"] = summary.columns_after;
    py::list log;
    for (const auto& action : summary.log) {
        py::dict entry;
        entry["action"] = action.action;
        entry["note"] = action.note;
        entry["rows_affected"] = action.rows_affected;
        log.append(entry);
    }
    out["log"] = log;
    return out;
}

py::dict metrics_to_dict(const MetricsReport& m) {
    py::dict out;
    auto opt = [](const std::optional<double>& v) -> py::object {
        return v ? py::object(py::float_(*v)) : py::none();
    };
    out["accuracy"] = m.accuracy;
    out["accuracy_ci"] = py::make_tuple(m.accuracy_ci.lower, m.accuracy_ci.upper);
    out["prevalence"] = m.prevalence;
    out["nir"] = m.nir;
    out["p_acc_gt_nir"] = m.p_acc_gt_nir;
    out["sensitivity"] = opt(m.sensitivity);
    out["specificity"] = opt(m.specificity);
    out["ppv"] = opt(m.ppv);
    out["npv"] = opt(m.npv);
    out["f1"] = opt(m.f1);
    out["kappa"] = opt(m.kappa);
    out["mcnemar_statistic"] = opt(m.mcnemar_statistic);
    out["mcnemar_p"] = opt(m.mcnemar_p);
    return out;
}

std::vector<std::string> column_labels(const ColumnTable& t, const std::string& target) {
    const Column& col = t.column(target);
    std::vector<std::string> out;
    out.reserve(t.row_count());
    for (size_t r = 0; r < t.row_count(); ++r) {
        if (col.is_missing(r)) throw InputError("target has missing cells");
        out.push_back(col.cell_text(r));
    }
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Accident-severity pipeline: cleaning, screening, random forest, evaluation";
    m.attr("__version__") = kToolVersion;

    py::register_exception<Error>(m, "AccsevError");

    py::class_<ColumnTable>(m, "Table")
        .def_property_readonly("row_count", &ColumnTable::row_count)
        .def_property_readonly("column_count", &ColumnTable::column_count)
        .def_property_readonly("columns",
                               [](const ColumnTable& t) {
                                   std::vector<std::string> names;
                                   for (size_t c = 0; c < t.column_count(); ++c)
                                       names.push_back(t.column(c).name());
                                   return names;
                               })
        .def("column",
             [](const ColumnTable& t, const std::string& name) {
                 const Column& col = t.column(name);
                 py::list values;
                 for (size_t r = 0; r < col.size(); ++r) values.append(cell_to_python(col, r));
                 return values;
             },
             py::arg("name"))
        .def("select_columns", &ColumnTable::select_columns, py::arg("names"))
        .def("drop_columns", &ColumnTable::drop_columns, py::arg("names"))
        .def("group_count",
             [](const ColumnTable& t, const std::string& column) {
                 py::dict out;
                 for (const auto& entry : t.group_count(column).entries)
                     out[py::str(entry.key)] = py::make_tuple(entry.count, entry.proportion);
                 return out;
             },
             py::arg("column"))
        .def("missingness_report",
             [](const ColumnTable& t) {
                 py::list out;
                 for (const auto& row : t.missingness_report().rows) {
                     py::dict entry;
                     entry["name"] = row.name;
                     entry["kind"] = kind_name(row.kind);
                     entry["distinct_levels"] = row.distinct_levels;
                     entry["n_complete"] = row.n_complete;
                     entry["n_miss"] = row.n_miss;
                     entry["miss_prop"] = row.miss_prop();
                     out.append(entry);
                 }
                 return out;
             })
        .def("__len__", &ColumnTable::row_count)
        .def("__repr__", [](const ColumnTable& t) {
            return "<Table " + std::to_string(t.row_count()) + " rows x " +
                   std::to_string(t.column_count()) + " columns>";
        });

    m.def("read_csv",
          [](const std::string& path, const std::vector<std::string>& missing_markers) {
              CsvOptions options;
              options.missing_markers = missing_markers;
              return read_csv(path, options);
          },
          py::arg("path"), py::arg("missing_markers") = std::vector<std::string>{"", "NA"});
    m.def("write_csv", &write_csv, py::arg("table"), py::arg("path"));

    m.def("clean",
          [](const ColumnTable& t, std::optional<std::string> state_filter, int severity_threshold) {
              CleaningConfig cfg = CleaningConfig::defaults();
              cfg.state_filter = std::move(state_filter);
              cfg.severity_threshold = severity_threshold;
              CleanSummary summary;
              const auto cleaned = run_cleaning_pipeline(t, cfg, summary);
              return py::make_tuple(cleaned, summary_to_dict(summary));
          },
          py::arg("table"), py::arg("state_filter") = py::none(), py::arg("severity_threshold") = 3,
          "Run the full cleaning pipeline; returns (table, summary dict)");

    m.def("screen_all",
          [](const ColumnTable& t, const std::string& target, double alpha) {
              py::list out;
              for (const auto& row : screen_all(t, target, alpha)) {
                  py::dict entry;
                  entry["variable"] = row.variable;
                  entry["test"] = row.test_name;
                  entry["statistic"] = row.statistic;
                  entry["p_value"] = row.p_value;
                  entry["important"] = row.important;
                  entry["method_detail"] = row.method_detail;
                  out.append(entry);
              }
              return out;
          },
          py::arg("table"), py::arg("target"), py::arg("alpha") = 0.05);

    m.def("train_test_split",
          [](const ColumnTable& t, double ratio, uint64_t seed, std::optional<std::string> stratify) {
              const auto split = train_test_split(t, ratio, seed, stratify);
              return py::make_tuple(split.train, split.test);
          },
          py::arg("table"), py::arg("ratio") = 2.0 / 3.0, py::arg("seed") = 42,
          py::arg("stratify") = py::none());

    m.def("rebalance",
          [](const ColumnTable& t, const std::string& target, const std::string& mode, double target_ratio,
             uint64_t seed) {
              RebalanceConfig cfg;
              cfg.mode = rebalance_mode_from_name(mode);
              cfg.target_ratio = target_ratio;
              cfg.seed = seed;
              return rebalance(t, target, cfg);
          },
          py::arg("table"), py::arg("target"), py::arg("mode") = "undersample",
          py::arg("target_ratio") = 1.0, py::arg("seed") = 42);

    py::class_<ForestModel>(m, "Forest")
        .def_property_readonly("n_trees", [](const ForestModel& model) { return model.trees.size(); })
        .def_property_readonly("labels",
                               [](const ForestModel& model) {
                                   return py::make_tuple(model.labels[0], model.labels[1]);
                               })
        .def_property_readonly("target", [](const ForestModel& model) { return model.target; })
        .def_property_readonly("oob_error",
                               [](const ForestModel& model) -> py::object {
                                   return model.oob_error ? py::object(py::float_(*model.oob_error))
                                                          : py::none();
                               })
        .def("predict_proba", [](const ForestModel& model, const ColumnTable& t) { return model.predict_proba(t); },
             py::arg("table"))
        .def("predict", &ForestModel::predict, py::arg("table"), py::arg("threshold") = 0.5)
        .def("importance",
             [](const ForestModel& model, bool by_variable) {
                 py::list out;
                 for (const auto& entry :
                      by_variable ? importance_by_variable(model) : importance_mdg(model))
                     out.append(py::make_tuple(entry.name, entry.mdg));
                 return out;
             },
             py::arg("by_variable") = true)
        .def("save", [](const ForestModel& model, const std::string& path) { save_model(model, path); },
             py::arg("path"))
        .def("__repr__", [](const ForestModel& model) {
            return "<Forest " + std::to_string(model.trees.size()) + " trees, " +
                   std::to_string(model.encoder.feature_count()) + " features>";
        });

    m.def("train_forest",
          [](const ColumnTable& t, const std::string& target, const std::string& positive, size_t n_trees,
             size_t mtry, size_t min_leaf, int max_depth, uint64_t seed, bool bootstrap, size_t threads,
             bool oob) {
              ForestConfig cfg;
              cfg.n_trees = n_trees;
              cfg.mtry = mtry;
              cfg.min_leaf = min_leaf;
              cfg.max_depth = max_depth;
              cfg.seed = seed;
              cfg.bootstrap = bootstrap;
              cfg.n_threads = threads;
              cfg.compute_oob = oob;
              return train_forest(t, target, positive, cfg);
          },
          py::arg("table"), py::arg("target"), py::arg("positive"), py::arg("n_trees") = 500,
          py::arg("mtry") = 0, py::arg("min_leaf") = 1, py::arg("max_depth") = -1, py::arg("seed") = 42,
          py::arg("bootstrap") = true, py::arg("threads") = 0, py::arg("oob") = false);

    m.def("load_forest", &load_model, py::arg("path"));

    m.def("metrics",
          [](const std::vector<std::string>& actual, const std::vector<std::string>& predicted,
             const std::string& positive) {
              const auto cm = confusion(actual, predicted, positive);
              py::dict out = metrics_to_dict(metrics(cm));
              out["confusion"] = py::make_tuple(cm.tp, cm.fp, cm.fn, cm.tn);
              return out;
          },
          py::arg("actual"), py::arg("predicted"), py::arg("positive"));

    m.def("auc",
          [](const std::vector<double>& scores, const std::vector<std::string>& actual,
             const std::string& positive) { return auc(scores, actual, positive); },
          py::arg("scores"), py::arg("actual"), py::arg("positive"));

    m.def("roc_curve",
          [](const std::vector<double>& scores, const std::vector<std::string>& actual,
             const std::string& positive) {
              py::list out;
              for (const auto& point : roc_curve(scores, actual, positive).points)
                  out.append(py::make_tuple(point.threshold, point.fpr, point.tpr));
              return out;
          },
          py::arg("scores"), py::arg("actual"), py::arg("positive"));

    m.def("labels", &column_labels, py::arg("table"), py::arg("column"),
          "Cell texts of a column, for feeding metrics()/auc()");

    m.attr("SEVERITY_CLASS_COLUMN") = kSeverityClassColumn;
    m.attr("SEVERE") = kSevereLabel;
    m.attr("LESS_SEVERE") = kLessSevereLabel;
}
