#include "report_table.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>

namespace cshor::cli {

namespace {

std::optional<double> parse_number(const std::string& s) {
    if (s.empty()) {
        return std::nullopt;
    }
    double v = 0.0;
    const char* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc{} || ptr != end) {
        return std::nullopt;
    }
    return v;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, ',')) {
        cells.push_back(cell);
    }
    if (!line.empty() && line.back() == ',') {
        cells.emplace_back();
    }
    return cells;
}

}  // namespace

std::string format_number(double v) {
    if (v == 0.0) {
        return "0";  // avoids "-0"
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

std::string ReportTable::to_csv() const {
    std::ostringstream out;
    auto emit = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            out << (i ? "," : "") << cells[i];
        }
        out << '\n';
    };
    emit(header);
    for (const auto& r : rows) {
        emit(r);
    }
    return out.str();
}

nlohmann::json ReportTable::to_json() const {
    nlohmann::json out_rows = nlohmann::json::array();
    for (const auto& r : rows) {
        nlohmann::json row = nlohmann::json::array();
        for (const auto& cell : r) {
            if (auto v = parse_number(cell)) {
                row.push_back(*v);
            } else {
                row.push_back(cell);
            }
        }
        out_rows.push_back(row);
    }
    return {{"table", name}, {"columns", header}, {"rows", out_rows}};
}

std::string ReportTable::to_text() const {
    std::vector<std::size_t> width(header.size(), 0);
    for (std::size_t c = 0; c < header.size(); ++c) {
        width[c] = header[c].size();
        for (const auto& r : rows) {
            width[c] = std::max(width[c], r.at(c).size());
        }
    }
    std::ostringstream out;
    auto emit = [&](const std::vector<std::string>& cells) {
        for (std::size_t c = 0; c < cells.size(); ++c) {
            out << (c ? "  " : "") << cells[c] << std::string(width[c] - cells[c].size(), ' ');
        }
        out << '\n';
    };
    emit(header);
    for (const auto& r : rows) {
        emit(r);
    }
    return out.str();
}

ReportTable read_golden_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::invalid_argument("cannot open golden file " + path);
    }
    ReportTable t;
    std::string line;
    if (!std::getline(in, line)) {
        throw std::invalid_argument("golden file " + path + " is empty");
    }
    t.header = split_csv_line(line);
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        auto cells = split_csv_line(line);
        if (cells.size() != t.header.size()) {
            throw std::invalid_argument("golden file " + path + ": ragged row '" + line + "'");
        }
        t.rows.push_back(std::move(cells));
    }
    return t;
}

std::vector<Erratum> read_errata(const std::string& golden_dir) {
    std::string path = golden_dir + "/errata.csv";
    std::vector<Erratum> out;
    if (!std::ifstream(path)) {
        return out;
    }
    ReportTable t = read_golden_csv(path);
    auto col = [&](const std::string& name) {
        auto it = std::find(t.header.begin(), t.header.end(), name);
        if (it == t.header.end()) {
            throw std::invalid_argument(path + ": missing column " + name);
        }
        return static_cast<std::size_t>(it - t.header.begin());
    };
    for (const auto& r : t.rows) {
        Erratum e;
        e.table = r[col("table")];
        e.row = static_cast<std::size_t>(std::stoul(r[col("row")]));
        e.column = r[col("column")];
        e.printed = r[col("printed")];
        e.corrected = r[col("corrected")];
        e.tolerance = parse_number(r[col("tolerance")]).value_or(0.0);
        e.note = r[col("note")];
        out.push_back(std::move(e));
    }
    return out;
}

DiffResult diff_against_golden(const ReportTable& actual, const ReportTable& golden,
                               const std::vector<Erratum>& errata) {
    DiffResult d;
    if (actual.rows.size() != golden.rows.size()) {
        d.ok = false;
        d.message = "row count " + std::to_string(actual.rows.size()) + " != golden " +
                    std::to_string(golden.rows.size());
        return d;
    }
    auto tol_col = std::find(golden.header.begin(), golden.header.end(), "tolerance");
    for (std::size_t gc = 0; gc < golden.header.size(); ++gc) {
        const auto& column = golden.header[gc];
        if (column == "tolerance") {
            continue;
        }
        auto it = std::find(actual.header.begin(), actual.header.end(), column);
        if (it == actual.header.end()) {
            d.ok = false;
            d.message = "column '" + column + "' missing from output";
            return d;
        }
        auto ac = static_cast<std::size_t>(it - actual.header.begin());
        for (std::size_t r = 0; r < golden.rows.size(); ++r) {
            const auto& want = golden.rows[r][gc];
            const auto& got = actual.rows[r][ac];
            double tol = 0.0;
            if (tol_col != golden.header.end()) {
                tol = parse_number(golden.rows[r][static_cast<std::size_t>(tol_col - golden.header.begin())])
                          .value_or(0.0);
            }
            auto w = parse_number(want);
            auto g = parse_number(got);
            bool same = (w && g) ? std::abs(*w - *g) <= tol + 1e-9 : want == got;
            if (same) {
                continue;
            }
            auto known = std::find_if(errata.begin(), errata.end(), [&](const Erratum& e) {
                return e.table == actual.name && e.row == r && e.column == column && e.printed == want;
            });
            if (known != errata.end()) {
                auto c = parse_number(known->corrected);
                if (c && g && std::abs(*c - *g) <= known->tolerance + 1e-9) {
                    d.errata.push_back({*known, got});
                    continue;
                }
            }
            d.ok = false;
            d.cells.push_back({r, column, want, got});
        }
    }
    return d;
}

}  // namespace cshor::cli
