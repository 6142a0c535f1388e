// Delimited-text input/output.
//
// Dataset files are comma-separated with a header row. The column names
// `time` (non-negative real) and `event` (0/1) are reserved; all other
// columns are features. Missing values are encoded as empty fields.
// Stacked datasets use the reserved columns `stack_time` and `label`.
#pragma once

#include <charconv>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "survstack/dataset.hpp"
#include "survstack/step_function.hpp"

namespace survstack {

// Shortest round-trip formatting; keeps emitted files byte-stable.
inline std::string format_double(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

struct RawTable {
    std::vector<std::string> column_names;
    std::vector<std::vector<std::string>> rows;  // cells as text; "" = missing

    std::size_t n_columns() const { return column_names.size(); }
    std::size_t n_rows() const { return rows.size(); }

    std::optional<std::size_t> column_index(const std::string& name) const {
        for (std::size_t j = 0; j < column_names.size(); ++j)
            if (column_names[j] == name) return j;
        return std::nullopt;
    }
};

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

inline std::optional<double> parse_double(const std::string& s) {
    if (s.empty()) return std::nullopt;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    double v = 0.0;
    auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc() || res.ptr != last) return std::nullopt;
    return v;
}

}  // namespace detail

inline RawTable read_csv(std::istream& in) {
    RawTable table;
    std::string line;
    if (!std::getline(in, line))
        throw std::runtime_error("csv: empty input, header row required");
    table.column_names = detail::split_csv_line(line);
    std::size_t row_no = 1;
    while (std::getline(in, line)) {
        ++row_no;
        if (line.empty()) continue;
        auto cells = detail::split_csv_line(line);
        if (cells.size() != table.column_names.size())
            throw std::runtime_error("csv: ragged row at line " +
                                     std::to_string(row_no) + " (expected " +
                                     std::to_string(table.column_names.size()) +
                                     " fields, got " + std::to_string(cells.size()) + ")");
        table.rows.push_back(std::move(cells));
    }
    return table;
}

inline RawTable read_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    return read_csv(in);
}

// Validate a fully numeric raw table (post-preprocessing schema) into a
// SurvivalDataset. Reserved columns: `time`, `event`.
inline SurvivalDataset validate_dataset(const RawTable& raw) {
    auto time_col = raw.column_index("time");
    auto event_col = raw.column_index("event");
    if (!time_col || !event_col)
        throw std::runtime_error("dataset requires `time` and `event` columns");

    std::vector<std::string> feature_names;
    std::vector<std::size_t> feature_cols;
    for (std::size_t j = 0; j < raw.n_columns(); ++j) {
        if (j == *time_col || j == *event_col) continue;
        feature_names.push_back(raw.column_names[j]);
        feature_cols.push_back(j);
    }

    const std::size_t n = raw.n_rows();
    const std::size_t d = feature_cols.size();
    std::vector<double> x;
    x.reserve(n * d);
    std::vector<double> times(n);
    std::vector<char> events(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& row = raw.rows[i];
        auto t = detail::parse_double(row[*time_col]);
        if (!t || !(*t >= 0.0) || !std::isfinite(*t))
            throw std::runtime_error("invalid time at data row " + std::to_string(i) +
                                     ": '" + row[*time_col] + "'");
        auto e = detail::parse_double(row[*event_col]);
        if (!e || (*e != 0.0 && *e != 1.0))
            throw std::runtime_error("invalid event indicator at data row " +
                                     std::to_string(i) + ": '" + row[*event_col] + "'");
        times[i] = *t;
        events[i] = (*e == 1.0);
        for (std::size_t j : feature_cols) {
            auto v = detail::parse_double(row[j]);
            if (!v || !std::isfinite(*v))
                throw std::runtime_error("non-numeric feature value at data row " +
                                         std::to_string(i) + ", column " +
                                         raw.column_names[j]);
            x.push_back(*v);
        }
    }
    SurvivalDataset data(std::move(x), d, std::move(times), std::move(events),
                         std::move(feature_names));
    data.require_events();
    return data;
}

inline void write_dataset_csv(std::ostream& out, const SurvivalDataset& data) {
    out << "time,event";
    for (const auto& name : data.feature_names()) out << ',' << name;
    out << '\n';
    for (std::size_t i = 0; i < data.size(); ++i) {
        out << format_double(data.time(i)) << ',' << (data.event(i) ? 1 : 0);
        for (double v : data.row(i)) out << ',' << format_double(v);
        out << '\n';
    }
}

inline void write_curves_csv(std::ostream& out,
                             const std::vector<SurvivalCurve>& curves) {
    out << "patient_id,time,survival_prob\n";
    for (std::size_t i = 0; i < curves.size(); ++i)
        for (std::size_t k = 0; k < curves[i].times.size(); ++k)
            out << i << ',' << format_double(curves[i].times[k]) << ','
                << format_double(curves[i].probabilities[k]) << '\n';
}

}  // namespace survstack
