#pragma once

/**
 * @file trace_io.hpp
 * @brief CSV writing and reading for simulation traces.
 *
 * The canonical trace has a fixed 12-column layout; the extended layout
 * appends the delayed measurement and prediction-model diagnostics. Values
 * are printed with %.9g so traces round-trip to within float noise and stay
 * diff-friendly.
 */

#include <array>
#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "dtcsim/simulation.hpp"

namespace dtcsim {

inline std::string format_g9(double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", value);
    return buf;
}

inline constexpr std::array<const char*, 12> kTraceColumns = {
    "t_s",       "x_m",         "y_m",         "psi_rad",  "v_mps",    "e_m",
    "s_star_m",  "delta_cmd_rad", "delta_act_rad", "yhat_x_m", "yhat_y_m", "yhat_psi_rad"};

inline constexpr std::array<const char*, 9> kTraceExtraColumns = {
    "ydel_x_m",  "ydel_y_m",  "ydel_psi_rad", "model_shift_x_m", "model_shift_y_m",
    "model_x_m", "model_y_m", "model_psi_rad", "pp_fallback"};

inline void write_trace_csv(const SimTrace& trace, std::ostream& out, bool extended = false) {
    std::string header;
    for (const char* column : kTraceColumns) {
        if (!header.empty()) {
            header += ',';
        }
        header += column;
    }
    if (extended) {
        for (const char* column : kTraceExtraColumns) {
            header += ',';
            header += column;
        }
    }
    out << header << '\n';

    for (const auto& row : trace.rows) {
        std::string line;
        const auto append = [&line](double value) {
            if (!line.empty()) {
                line += ',';
            }
            line += format_g9(value);
        };
        append(row.t);
        append(row.pose.p.x);
        append(row.pose.p.y);
        append(row.pose.psi);
        append(row.v);
        append(row.e);
        append(row.s_star);
        append(row.delta_cmd);
        append(row.delta_act);
        append(row.y_hat.p.x);
        append(row.y_hat.p.y);
        append(row.y_hat.psi);
        if (extended) {
            append(row.y_del.p.x);
            append(row.y_del.p.y);
            append(row.y_del.psi);
            append(row.model_shift.x);
            append(row.model_shift.y);
            append(row.model_pose.p.x);
            append(row.model_pose.p.y);
            append(row.model_pose.psi);
            append(row.pp_fallback ? 1.0 : 0.0);
        }
        out << line << '\n';
    }
}

inline void write_trace_csv(const SimTrace& trace, const std::string& file_path,
                            bool extended = false) {
    std::ofstream out(file_path);
    if (!out) {
        throw std::runtime_error("cannot open trace file for writing: " + file_path);
    }
    write_trace_csv(trace, out, extended);
}

/// Row-major numeric table with named columns, as loaded from a trace CSV.
struct TraceTable {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    std::optional<std::size_t> index_of(const std::string& name) const {
        for (std::size_t i = 0; i < columns.size(); ++i) {
            if (columns[i] == name) {
                return i;
            }
        }
        return std::nullopt;
    }

    std::vector<double> column(const std::string& name) const {
        const auto idx = index_of(name);
        if (!idx) {
            throw std::runtime_error("trace is missing column: " + name);
        }
        std::vector<double> values;
        values.reserve(rows.size());
        for (const auto& row : rows) {
            values.push_back(row[*idx]);
        }
        return values;
    }
};

inline TraceTable read_trace_csv(std::istream& in) {
    TraceTable table;
    std::string line;
    if (!std::getline(in, line)) {
        throw std::runtime_error("trace file is empty");
    }
    {
        std::stringstream header(line);
        std::string cell;
        while (std::getline(header, cell, ',')) {
            table.columns.push_back(cell);
        }
    }
    if (table.columns.empty()) {
        throw std::runtime_error("trace header has no columns");
    }

    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        std::vector<double> row;
        row.reserve(table.columns.size());
        std::stringstream cells(line);
        std::string cell;
        while (std::getline(cells, cell, ',')) {
            try {
                row.push_back(std::stod(cell));
            } catch (const std::exception&) {
                throw std::runtime_error("trace line " + std::to_string(line_no) +
                                         ": cannot parse '" + cell + "'");
            }
        }
        if (row.size() != table.columns.size()) {
            throw std::runtime_error("trace line " + std::to_string(line_no) +
                                     ": expected " + std::to_string(table.columns.size()) +
                                     " cells, got " + std::to_string(row.size()));
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

inline TraceTable read_trace_csv(const std::string& file_path) {
    std::ifstream in(file_path);
    if (!in) {
        throw std::runtime_error("cannot open trace file: " + file_path);
    }
    return read_trace_csv(in);
}

}  // namespace dtcsim
