#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace cshor::cli {

/// Rows of string cells under a header, as the tables command emits them.
struct ReportTable {
    std::string name;
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::string to_csv() const;
    /// Cells that parse as numbers become JSON numbers.
    nlohmann::json to_json() const;
    /// Space-padded columns.
    std::string to_text() const;
};

struct CellDiff {
    std::size_t row;
    std::string column;
    std::string expected;
    std::string actual;
};

/// Known-bad golden cell: the published value and the value it must have.
struct Erratum {
    std::string table;
    std::size_t row = 0;
    std::string column;
    std::string printed;
    std::string corrected;
    double tolerance = 0.0;
    std::string note;
};

struct ErratumHit {
    Erratum erratum;
    std::string actual;
};

struct DiffResult {
    bool ok = true;
    std::string message;  // row-count or header problems
    std::vector<CellDiff> cells;
    // Cells that disagree with the golden value but match a listed correction.
    std::vector<ErratumHit> errata;
};

/// errata.csv next to the golden tables; empty when the file is absent.
std::vector<Erratum> read_errata(const std::string& golden_dir);

/// Reads a golden CSV: header line, then rows. The "tolerance" column, when
/// present, gives the per-row absolute tolerance for numeric cells.
ReportTable read_golden_csv(const std::string& path);

/// Compares `actual` against a golden table on the golden table's columns.
/// A mismatching cell listed in `errata` for this table counts as an erratum
/// hit, not a failure, when the actual value matches the correction.
DiffResult diff_against_golden(const ReportTable& actual, const ReportTable& golden,
                               const std::vector<Erratum>& errata = {});

std::string format_number(double v);

}  // namespace cshor::cli
