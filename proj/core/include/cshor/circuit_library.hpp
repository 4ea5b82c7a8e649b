#pragma once

#include <array>
#include <optional>
#include <string>

#include "cshor/circuit.hpp"
#include "cshor/truth_table.hpp"

namespace cshor {

/// Hand-built compiled modular-exponentiation circuits.
enum class FigureId {
    F2_15,         // f_{2,15}
    F2_15Full,     // log_2 f_{2,15}
    F4_15,         // f_{4,15}
    F4_15Full,     // log_4 f_{4,15}
    F4_21,         // f_{4,21}, three input bits
    F4_21Partial,  // log_4 f_{4,21}, three input bits
    F4_21Full,     // log_4 f_{4,21}, one period
    F4_33Full,     // (f_{4,33} - 1) / 3, one period
};

inline constexpr std::array<FigureId, 8> kAllFigures = {
    FigureId::F2_15, FigureId::F2_15Full,    FigureId::F4_15,     FigureId::F4_15Full,
    FigureId::F4_21, FigureId::F4_21Partial, FigureId::F4_21Full, FigureId::F4_33Full,
};

/// "f2_15", "f2_15_full", ..., "f4_21_partial", "f4_33_full".
std::string figure_name(FigureId id);
FigureId parse_figure(const std::string& name);

struct FigureInfo {
    FigureId id;
    std::uint64_t a;
    std::uint64_t n;
    GKind g;
    CompileLevel level;
    // Caption gate counts.
    unsigned n_toffoli;
    unsigned n_cnot;
};

FigureInfo figure_info(FigureId id);

/// Figure with any known misdrawing corrected; this is what the library uses.
Circuit figure_circuit(FigureId id);

/// Gate list exactly as drawn. Differs from figure_circuit for F4_21Full
/// (one CNOT lands on the wrong output) and F4_33Full (three gates out of order).
Circuit drawn_circuit(FigureId id);

/// The table figure_circuit computes: definition-derived for all figures
/// except F4_33Full, whose circuit realizes alternate_f4_33_table().
TruthTable reference_table(FigureId id);

/// Table rebuilt from (a, N, g, level) alone.
TruthTable definition_table(FigureId id);

/// Figure whose (a, N, strategy) matches, if any.
std::optional<FigureId> find_figure(std::uint64_t a, std::uint64_t n, GKind g, CompileLevel level);

}  // namespace cshor
