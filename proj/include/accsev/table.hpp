#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "accsev/error.hpp"

namespace accsev {

enum class ColumnKind { numeric, boolean, categorical, text, timestamp };

const char* kind_name(ColumnKind kind);
ColumnKind kind_from_name(const std::string& name);

struct ColumnSpec {
    std::string name;
    ColumnKind kind = ColumnKind::categorical;
    bool nullable = true;
};

// One typed column with an explicit presence mask. Exactly one of the value
// vectors is populated, matching the declared kind; categorical, text and
// timestamp cells all live in `strs`.
class Column {
public:
    Column() = default;
    explicit Column(ColumnSpec spec) : spec_(std::move(spec)) {}

    const ColumnSpec& spec() const { return spec_; }
    const std::string& name() const { return spec_.name; }
    ColumnKind kind() const { return spec_.kind; }
    size_t size() const { return present_.size(); }

    bool is_missing(size_t row) const { return present_[row] == 0; }
    double num(size_t row) const { return nums_[row]; }
    bool boolean(size_t row) const { return bools_[row] != 0; }
    const std::string& str(size_t row) const { return strs_[row]; }

    // Canonical text form of a non-missing cell (used for CSV output and
    // group keys). Numeric cells print with the shortest round-trip form.
    std::string cell_text(size_t row) const;

    void push_missing();
    void push_num(double v);
    void push_bool(bool v);
    void push_str(std::string v);

    size_t missing_count() const;
    size_t distinct_count() const;

    void reserve(size_t n);

private:
    ColumnSpec spec_;
    std::vector<double> nums_;
    std::vector<uint8_t> bools_;
    std::vector<std::string> strs_;
    std::vector<uint8_t> present_;
};

class ColumnTable;

// Cell access for one row, handed to filter predicates.
class RowView {
public:
    RowView(const ColumnTable& table, size_t row) : table_(&table), row_(row) {}

    size_t row() const { return row_; }
    bool is_missing(const std::string& column) const;
    bool is_missing(size_t column) const;
    double num(const std::string& column) const;
    bool boolean(const std::string& column) const;
    const std::string& str(const std::string& column) const;

private:
    const ColumnTable* table_;
    size_t row_;
};

struct MissingnessRow {
    std::string name;
    ColumnKind kind;
    size_t distinct_levels = 0;
    size_t n_complete = 0;
    size_t n_miss = 0;

    double miss_prop() const {
        const size_t total = n_complete + n_miss;
        return total == 0 ? 0.0 : static_cast<double>(n_miss) / static_cast<double>(total);
    }
    // Table-style display value, rounded to 3 decimals.
    double miss_prop_display() const;
};

struct MissingnessReport {
    size_t row_count = 0;
    std::vector<MissingnessRow> rows;
};

struct FrequencyEntry {
    std::string key;  // "missing" collects absent cells
    size_t count = 0;
    double proportion = 0.0;
};

struct FrequencyTable {
    std::string column;
    size_t row_count = 0;
    std::vector<FrequencyEntry> entries;  // descending by count, ties by key
};

// Immutable columnar dataset. Every operation returns a new table.
class ColumnTable {
public:
    ColumnTable() = default;
    static ColumnTable from_columns(std::vector<Column> columns);

    size_t row_count() const { return row_count_; }
    size_t column_count() const { return columns_.size(); }

    const Column& column(size_t index) const { return columns_[index]; }
    const Column& column(const std::string& name) const;
    // Index of a named column, or -1.
    int find_column(const std::string& name) const;
    bool has_column(const std::string& name) const { return find_column(name) >= 0; }

    std::vector<ColumnSpec> schema() const;

    ColumnTable select_columns(const std::vector<std::string>& names) const;
    ColumnTable drop_columns(const std::vector<std::string>& names) const;
    ColumnTable filter_rows(const std::function<bool(const RowView&)>& pred) const;
    ColumnTable take_rows(const std::vector<size_t>& rows) const;

    // Schema edits used by the cleaning stage.
    ColumnTable with_column(Column column) const;          // append or replace by name
    ColumnTable without_column(const std::string& name) const;

    MissingnessReport missingness_report() const;
    FrequencyTable group_count(const std::string& column) const;

private:
    std::vector<Column> columns_;
    size_t row_count_ = 0;
};

struct CsvOptions {
    std::vector<std::string> missing_markers = {"", "NA"};
    std::optional<std::vector<ColumnSpec>> schema;  // by name; unlisted columns are inferred
};

ColumnTable read_csv(const std::string& path, const CsvOptions& options = {});
ColumnTable read_csv_text(const std::string& text, const CsvOptions& options = {});
void write_csv(const ColumnTable& table, const std::string& path);
std::string write_csv_text(const ColumnTable& table);

}  // namespace accsev
