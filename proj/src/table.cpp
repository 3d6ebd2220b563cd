#include "accsev/table.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace accsev {

const char* kind_name(ColumnKind kind) {
    switch (kind) {
        case ColumnKind::numeric: return "numeric";
        case ColumnKind::boolean: return "boolean";
        case ColumnKind::categorical: return "categorical";
        case ColumnKind::text: return "text";
        case ColumnKind::timestamp: return "timestamp";
    }
    return "unknown";
}

ColumnKind kind_from_name(const std::string& name) {
    if (name == "numeric") return ColumnKind::numeric;
    if (name == "boolean") return ColumnKind::boolean;
    if (name == "categorical") return ColumnKind::categorical;
    if (name == "text") return ColumnKind::text;
    if (name == "timestamp") return ColumnKind::timestamp;
    throw InputError("unknown column kind: " + name);
}

namespace {

std::string format_double(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr);
}

bool parse_double(const std::string& raw, double& out) {
    size_t begin = 0, end = raw.size();
    while (begin < end && (raw[begin] == ' ' || raw[begin] == '\t')) ++begin;
    while (end > begin && (raw[end - 1] == ' ' || raw[end - 1] == '\t' || raw[end - 1] == '\r')) --end;
    if (begin == end) return false;
    if (raw[begin] == '+') ++begin;  // from_chars rejects a leading plus
    if (begin == end) return false;
    double value = 0.0;
    auto result = std::from_chars(raw.data() + begin, raw.data() + end, value);
    if (result.ec != std::errc() || result.ptr != raw.data() + end) return false;
    if (!std::isfinite(value)) return false;
    out = value;
    return true;
}

bool parse_bool(const std::string& raw, bool& out) {
    if (raw == "true" || raw == "True") { out = true; return true; }
    if (raw == "false" || raw == "False") { out = false; return true; }
    return false;
}

bool timestamp_shape_ok(const std::string& raw) {
    // "YYYY-MM-DD HH:MM:SS" with optional fractional seconds.
    if (raw.size() < 19) return false;
    auto digit = [&](size_t i) { return raw[i] >= '0' && raw[i] <= '9'; };
    for (size_t i : {0u, 1u, 2u, 3u, 5u, 6u, 8u, 9u, 11u, 12u, 14u, 15u, 17u, 18u})
        if (!digit(i)) return false;
    if (raw[4] != '-' || raw[7] != '-' || raw[10] != ' ' || raw[13] != ':' || raw[16] != ':') return false;
    if (raw.size() == 19) return true;
    if (raw[19] != '.') return false;
    for (size_t i = 20; i < raw.size(); ++i)
        if (!digit(i)) return false;
    return raw.size() > 20;
}

}  // namespace

std::string Column::cell_text(size_t row) const {
    switch (spec_.kind) {
        case ColumnKind::numeric: return format_double(nums_[row]);
        case ColumnKind::boolean: return bools_[row] ? "True" : "False";
        default: return strs_[row];
    }
}

void Column::push_missing() {
    present_.push_back(0);
    switch (spec_.kind) {
        case ColumnKind::numeric: nums_.push_back(0.0); break;
        case ColumnKind::boolean: bools_.push_back(0); break;
        default: strs_.emplace_back(); break;
    }
}

void Column::push_num(double v) {
    present_.push_back(1);
    nums_.push_back(v);
}

void Column::push_bool(bool v) {
    present_.push_back(1);
    bools_.push_back(v ? 1 : 0);
}

void Column::push_str(std::string v) {
    present_.push_back(1);
    strs_.push_back(std::move(v));
}

size_t Column::missing_count() const {
    size_t n = 0;
    for (uint8_t p : present_)
        if (!p) ++n;
    return n;
}

size_t Column::distinct_count() const {
    switch (spec_.kind) {
        case ColumnKind::numeric: {
            std::set<double> seen;
            for (size_t i = 0; i < size(); ++i)
                if (present_[i]) seen.insert(nums_[i]);
            return seen.size();
        }
        case ColumnKind::boolean: {
            bool has_true = false, has_false = false;
            for (size_t i = 0; i < size(); ++i) {
                if (!present_[i]) continue;
                (bools_[i] ? has_true : has_false) = true;
            }
            return (has_true ? 1u : 0u) + (has_false ? 1u : 0u);
        }
        default: {
            std::unordered_set<std::string> seen;
            for (size_t i = 0; i < size(); ++i)
                if (present_[i]) seen.insert(strs_[i]);
            return seen.size();
        }
    }
}

void Column::reserve(size_t n) {
    present_.reserve(n);
    switch (spec_.kind) {
        case ColumnKind::numeric: nums_.reserve(n); break;
        case ColumnKind::boolean: bools_.reserve(n); break;
        default: strs_.reserve(n); break;
    }
}

bool RowView::is_missing(const std::string& column) const {
    return table_->column(column).is_missing(row_);
}

bool RowView::is_missing(size_t column) const {
    return table_->column(column).is_missing(row_);
}

double RowView::num(const std::string& column) const {
    return table_->column(column).num(row_);
}

bool RowView::boolean(const std::string& column) const {
    return table_->column(column).boolean(row_);
}

const std::string& RowView::str(const std::string& column) const {
    return table_->column(column).str(row_);
}

double MissingnessRow::miss_prop_display() const {
    return std::round(miss_prop() * 1000.0) / 1000.0;
}

ColumnTable ColumnTable::from_columns(std::vector<Column> columns) {
    ColumnTable t;
    std::unordered_set<std::string> names;
    for (const auto& col : columns) {
        if (col.name().empty()) throw InputError("column name must be non-empty");
        if (!names.insert(col.name()).second)
            throw InputError("duplicate column name: " + col.name());
    }
    if (!columns.empty()) {
        t.row_count_ = columns.front().size();
        for (const auto& col : columns)
            if (col.size() != t.row_count_)
                throw InputError("column " + col.name() + " has mismatched length");
    }
    t.columns_ = std::move(columns);
    return t;
}

const Column& ColumnTable::column(const std::string& name) const {
    int idx = find_column(name);
    if (idx < 0) throw InputError("unknown column: " + name);
    return columns_[static_cast<size_t>(idx)];
}

int ColumnTable::find_column(const std::string& name) const {
    for (size_t i = 0; i < columns_.size(); ++i)
        if (columns_[i].name() == name) return static_cast<int>(i);
    return -1;
}

std::vector<ColumnSpec> ColumnTable::schema() const {
    std::vector<ColumnSpec> out;
    out.reserve(columns_.size());
    for (const auto& col : columns_) out.push_back(col.spec());
    return out;
}

ColumnTable ColumnTable::select_columns(const std::vector<std::string>& names) const {
    std::vector<Column> cols;
    cols.reserve(names.size());
    for (const auto& name : names) cols.push_back(column(name));
    return from_columns(std::move(cols));
}

ColumnTable ColumnTable::drop_columns(const std::vector<std::string>& names) const {
    for (const auto& name : names)
        if (!has_column(name)) throw InputError("unknown column: " + name);
    std::vector<Column> cols;
    for (const auto& col : columns_)
        if (std::find(names.begin(), names.end(), col.name()) == names.end())
            cols.push_back(col);
    ColumnTable t;
    t.columns_ = std::move(cols);
    t.row_count_ = t.columns_.empty() ? 0 : row_count_;
    return t;
}

ColumnTable ColumnTable::filter_rows(const std::function<bool(const RowView&)>& pred) const {
    std::vector<size_t> keep;
    for (size_t r = 0; r < row_count_; ++r)
        if (pred(RowView(*this, r))) keep.push_back(r);
    return take_rows(keep);
}

ColumnTable ColumnTable::take_rows(const std::vector<size_t>& rows) const {
    std::vector<Column> cols;
    cols.reserve(columns_.size());
    for (const auto& col : columns_) {
        Column out(col.spec());
        out.reserve(rows.size());
        for (size_t r : rows) {
            if (r >= row_count_) throw InputError("row index out of range");
            if (col.is_missing(r)) {
                out.push_missing();
                continue;
            }
            switch (col.kind()) {
                case ColumnKind::numeric: out.push_num(col.num(r)); break;
                case ColumnKind::boolean: out.push_bool(col.boolean(r)); break;
                default: out.push_str(col.str(r)); break;
            }
        }
        cols.push_back(std::move(out));
    }
    ColumnTable t;
    t.columns_ = std::move(cols);
    t.row_count_ = rows.size();
    return t;
}

ColumnTable ColumnTable::with_column(Column column) const {
    if (!columns_.empty() && column.size() != row_count_)
        throw InputError("column " + column.name() + " has mismatched length");
    std::vector<Column> cols = columns_;
    int idx = find_column(column.name());
    if (idx >= 0)
        cols[static_cast<size_t>(idx)] = std::move(column);
    else
        cols.push_back(std::move(column));
    ColumnTable t;
    t.row_count_ = cols.front().size();
    t.columns_ = std::move(cols);
    return t;
}

ColumnTable ColumnTable::without_column(const std::string& name) const {
    return drop_columns({name});
}

MissingnessReport ColumnTable::missingness_report() const {
    MissingnessReport report;
    report.row_count = row_count_;
    for (const auto& col : columns_) {
        MissingnessRow row;
        row.name = col.name();
        row.kind = col.kind();
        row.n_miss = col.missing_count();
        row.n_complete = row_count_ - row.n_miss;
        row.distinct_levels = col.distinct_count();
        report.rows.push_back(std::move(row));
    }
    return report;
}

FrequencyTable ColumnTable::group_count(const std::string& name) const {
    const Column& col = column(name);
    std::map<std::string, size_t> counts;
    for (size_t r = 0; r < row_count_; ++r) {
        if (col.is_missing(r))
            ++counts["missing"];
        else
            ++counts[col.cell_text(r)];
    }
    FrequencyTable table;
    table.column = name;
    table.row_count = row_count_;
    for (auto& [key, count] : counts)
        table.entries.push_back({key, count, row_count_ == 0 ? 0.0 : static_cast<double>(count) / static_cast<double>(row_count_)});
    std::stable_sort(table.entries.begin(), table.entries.end(), [](const FrequencyEntry& a, const FrequencyEntry& b) {
        if (a.count != b.count) return a.count > b.count;
        return a.key < b.key;
    });
    return table;
}

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

namespace {

// RFC-4180-flavoured record reader: quoted fields may contain commas,
// escaped quotes ("") and newlines.
class CsvParser {
public:
    explicit CsvParser(const std::string& text) : text_(text) {}

    bool next_record(std::vector<std::string>& fields) {
        fields.clear();
        if (pos_ >= text_.size()) return false;
        std::string field;
        bool in_quotes = false;
        bool any = false;
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (in_quotes) {
                if (c == '"') {
                    if (pos_ + 1 < text_.size() && text_[pos_ + 1] == '"') {
                        field.push_back('"');
                        pos_ += 2;
                    } else {
                        in_quotes = false;
                        ++pos_;
                    }
                } else {
                    field.push_back(c);
                    ++pos_;
                }
                continue;
            }
            if (c == '"' && field.empty()) {
                in_quotes = true;
                any = true;
                ++pos_;
            } else if (c == ',') {
                fields.push_back(std::move(field));
                field.clear();
                any = true;
                ++pos_;
            } else if (c == '\n' || c == '\r') {
                if (c == '\r' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '\n') ++pos_;
                ++pos_;
                fields.push_back(std::move(field));
                return true;
            } else {
                field.push_back(c);
                any = true;
                ++pos_;
            }
        }
        if (in_quotes) throw InputError("unterminated quoted field at end of input");
        if (!any && fields.empty()) return false;
        fields.push_back(std::move(field));
        return true;
    }

private:
    const std::string& text_;
    size_t pos_ = 0;
};

bool is_missing_token(const std::string& raw, const std::vector<std::string>& markers) {
    return std::find(markers.begin(), markers.end(), raw) != markers.end();
}

ColumnKind infer_kind(const std::vector<std::vector<std::string>>& records, size_t col,
                      const std::vector<std::string>& markers) {
    bool all_numeric = true;
    bool all_boolean = true;
    bool saw_value = false;
    for (const auto& rec : records) {
        const std::string& raw = rec[col];
        if (is_missing_token(raw, markers)) continue;
        saw_value = true;
        double d;
        bool b;
        if (all_numeric && !parse_double(raw, d)) all_numeric = false;
        if (all_boolean && !parse_bool(raw, b)) all_boolean = false;
        if (!all_numeric && !all_boolean) break;
    }
    if (!saw_value) return ColumnKind::categorical;
    if (all_numeric) return ColumnKind::numeric;
    if (all_boolean) return ColumnKind::boolean;
    return ColumnKind::categorical;
}

ColumnTable build_table(const std::vector<std::string>& header,
                        const std::vector<std::vector<std::string>>& records,
                        const CsvOptions& options) {
    const size_t n_cols = header.size();

    std::vector<ColumnSpec> specs(n_cols);
    std::vector<bool> declared(n_cols, false);
    for (size_t c = 0; c < n_cols; ++c) specs[c] = {header[c], ColumnKind::categorical, true};
    if (options.schema) {
        for (const auto& want : *options.schema) {
            auto it = std::find(header.begin(), header.end(), want.name);
            if (it == header.end())
                throw InputError("schema column not present in file: " + want.name);
            size_t c = static_cast<size_t>(it - header.begin());
            specs[c] = want;
            declared[c] = true;
        }
    }
    for (size_t c = 0; c < n_cols; ++c)
        if (!declared[c]) specs[c].kind = infer_kind(records, c, options.missing_markers);

    std::vector<Column> columns;
    columns.reserve(n_cols);
    for (size_t c = 0; c < n_cols; ++c) {
        Column col(specs[c]);
        col.reserve(records.size());
        columns.push_back(std::move(col));
    }

    for (size_t r = 0; r < records.size(); ++r) {
        for (size_t c = 0; c < n_cols; ++c) {
            const std::string& raw = records[r][c];
            if (is_missing_token(raw, options.missing_markers)) {
                columns[c].push_missing();
                continue;
            }
            switch (specs[c].kind) {
                case ColumnKind::numeric: {
                    double d;
                    if (!parse_double(raw, d))
                        throw InputError("column " + specs[c].name + ", row " + std::to_string(r + 1) +
                                         ": cannot parse '" + raw + "' as numeric");
                    columns[c].push_num(d);
                    break;
                }
                case ColumnKind::boolean: {
                    bool b;
                    if (!parse_bool(raw, b))
                        throw InputError("column " + specs[c].name + ", row " + std::to_string(r + 1) +
                                         ": cannot parse '" + raw + "' as boolean");
                    columns[c].push_bool(b);
                    break;
                }
                case ColumnKind::timestamp: {
                    if (!timestamp_shape_ok(raw))
                        throw InputError("column " + specs[c].name + ", row " + std::to_string(r + 1) +
                                         ": cannot parse '" + raw + "' as timestamp");
                    columns[c].push_str(raw);
                    break;
                }
                default:
                    columns[c].push_str(raw);
                    break;
            }
        }
    }
    return ColumnTable::from_columns(std::move(columns));
}

}  // namespace

ColumnTable read_csv_text(const std::string& text, const CsvOptions& options) {
    CsvParser parser(text);
    std::vector<std::string> header;
    if (!parser.next_record(header)) throw InputError("CSV input is empty (header row required)");

    std::vector<std::vector<std::string>> records;
    std::vector<std::string> fields;
    size_t record_no = 0;
    while (parser.next_record(fields)) {
        ++record_no;
        if (fields.size() == 1 && fields[0].empty() && header.size() > 1) continue;  // blank line
        if (fields.size() != header.size())
            throw InputError("row " + std::to_string(record_no) + ": expected " +
                             std::to_string(header.size()) + " fields, got " +
                             std::to_string(fields.size()));
        records.push_back(fields);
    }
    return build_table(header, records, options);
}

ColumnTable read_csv(const std::string& path, const CsvOptions& options) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return read_csv_text(buf.str(), options);
}

namespace {

void write_field(std::string& out, const std::string& value) {
    const bool needs_quotes = value.find_first_of(",\"\n\r") != std::string::npos;
    if (!needs_quotes) {
        out += value;
        return;
    }
    out.push_back('"');
    for (char c : value) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
}

}  // namespace

std::string write_csv_text(const ColumnTable& table) {
    std::string out;
    for (size_t c = 0; c < table.column_count(); ++c) {
        if (c) out.push_back(',');
        write_field(out, table.column(c).name());
    }
    out.push_back('\n');
    for (size_t r = 0; r < table.row_count(); ++r) {
        for (size_t c = 0; c < table.column_count(); ++c) {
            if (c) out.push_back(',');
            const Column& col = table.column(c);
            if (!col.is_missing(r)) write_field(out, col.cell_text(r));
        }
        out.push_back('\n');
    }
    return out;
}

void write_csv(const ColumnTable& table, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot open file for writing: " + path);
    out << write_csv_text(table);
    if (!out) throw InputError("write failed: " + path);
}

}  // namespace accsev
