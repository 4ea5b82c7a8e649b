#include "cshor/circuit_library.hpp"

#include <stdexcept>

namespace cshor {

namespace {

Control pos(unsigned line) { return {line, Polarity::Positive}; }
Control neg(unsigned line) { return {line, Polarity::Negative}; }

Gate cx(unsigned c, unsigned t) { return Gate::cnot(pos(c), t); }
Gate ccx(Control a, Control b, unsigned t) { return Gate::toffoli(a, b, t); }
Gate x(unsigned t) { return Gate::not_gate(t); }

// Lines are numbered top to bottom as drawn: inputs x_n..x_1 then outputs y_m..y_1.
Circuit drawn(FigureId id) {
    switch (id) {
        case FigureId::F2_15:
            // x2 x1 | y4 y3 y2 y1
            return Circuit::with_registers(
                2, 4,
                {ccx(pos(0), pos(1), 2), x(5), cx(0, 5), cx(1, 5), cx(2, 5), cx(2, 4), cx(2, 3), cx(1, 4), cx(0, 3)});
        case FigureId::F2_15Full:
            return Circuit::with_registers(2, 2, {cx(0, 2), cx(1, 3)});
        case FigureId::F4_15:
            // x1 | y3 y2 y1
            return Circuit::with_registers(1, 3, {cx(0, 1), x(3), cx(0, 3)});
        case FigureId::F4_15Full:
            return Circuit::with_registers(1, 1, {cx(0, 1)});
        case FigureId::F4_21:
            // x3 x2 x1 | y5 y4 y3 y2 y1
            return Circuit::with_registers(3, 5,
                                           {cx(1, 5), cx(2, 5), cx(1, 7), cx(0, 7), ccx(pos(5), pos(7), 3), cx(0, 7),
                                            cx(1, 7), ccx(pos(0), pos(3), 7), cx(3, 5), cx(7, 5), cx(0, 5), x(7),
                                            cx(2, 7), cx(1, 7), cx(0, 7)});
        case FigureId::F4_21Partial:
            // x3 x2 x1 | y2 y1; x3 and x1 are borrowed and restored.
            return Circuit::with_registers(3, 2,
                                           {cx(1, 0), cx(1, 2), ccx(pos(0), pos(2), 3), cx(1, 0),
                                            ccx(neg(0), pos(3), 4), cx(2, 4), cx(0, 4), cx(1, 2)});
        case FigureId::F4_21Full:
            // x2 x1 | y2 y1
            return Circuit::with_registers(2, 2, {cx(0, 2), cx(1, 3), ccx(pos(0), pos(3), 2), cx(2, 3)});
        case FigureId::F4_33Full:
            // x3 x2 x1 | y4 y3 y2 y1
            return Circuit::with_registers(3, 4,
                                           {cx(2, 1), cx(2, 0), ccx(pos(0), pos(1), 3), cx(2, 0), cx(2, 1),
                                            ccx(pos(1), pos(3), 4), ccx(neg(0), pos(2), 6), cx(0, 3), cx(1, 4),
                                            cx(1, 6)});
    }
    throw std::invalid_argument("unknown figure");
}

}  // namespace

std::string figure_name(FigureId id) {
    switch (id) {
        case FigureId::F2_15:
            return "f2_15";
        case FigureId::F2_15Full:
            return "f2_15_full";
        case FigureId::F4_15:
            return "f4_15";
        case FigureId::F4_15Full:
            return "f4_15_full";
        case FigureId::F4_21:
            return "f4_21";
        case FigureId::F4_21Partial:
            return "f4_21_partial";
        case FigureId::F4_21Full:
            return "f4_21_full";
        case FigureId::F4_33Full:
            return "f4_33_full";
    }
    throw std::invalid_argument("unknown figure");
}

FigureId parse_figure(const std::string& name) {
    for (FigureId id : kAllFigures) {
        if (figure_name(id) == name) {
            return id;
        }
    }
    throw std::invalid_argument("unknown figure id '" + name + "'");
}

FigureInfo figure_info(FigureId id) {
    switch (id) {
        case FigureId::F2_15:
            return {id, 2, 15, GKind::None, CompileLevel::Uncompiled, 1, 7};
        case FigureId::F2_15Full:
            return {id, 2, 15, GKind::Log, CompileLevel::Full, 0, 2};
        case FigureId::F4_15:
            return {id, 4, 15, GKind::None, CompileLevel::Uncompiled, 0, 2};
        case FigureId::F4_15Full:
            return {id, 4, 15, GKind::Log, CompileLevel::Full, 0, 1};
        case FigureId::F4_21:
            return {id, 4, 21, GKind::None, CompileLevel::Uncompiled, 2, 12};
        case FigureId::F4_21Partial:
            return {id, 4, 21, GKind::Log, CompileLevel::Partial, 2, 6};
        case FigureId::F4_21Full:
            return {id, 4, 21, GKind::Log, CompileLevel::Full, 1, 3};
        case FigureId::F4_33Full:
            return {id, 4, 33, GKind::Affine, CompileLevel::Full, 3, 7};
    }
    throw std::invalid_argument("unknown figure");
}

Circuit drawn_circuit(FigureId id) { return drawn(id); }

Circuit figure_circuit(FigureId id) {
    Circuit c = drawn(id);
    if (id == FigureId::F4_21Full) {
        // Drawn with the first CNOT on y2; on y1 the circuit yields the table.
        std::vector<Gate> gates = c.gates();
        gates[0] = cx(0, 3);
        return Circuit::with_registers(2, 2, std::move(gates));
    }
    if (id == FigureId::F4_33Full) {
        // y4 needs x3 ^ x1, so the copy from x3 runs before x3 is restored.
        const auto& g = c.gates();
        return Circuit::with_registers(3, 4, {g[0], g[1], g[2], g[4], g[5], g[7], g[3], g[6], g[8], g[9]});
    }
    return c;
}

TruthTable definition_table(FigureId id) {
    FigureInfo info = figure_info(id);
    switch (info.level) {
        case CompileLevel::Uncompiled:
        case CompileLevel::Partial: {
            unsigned n_in = id == FigureId::F4_15 ? 1 : (info.n == 15 ? 2 : 3);
            TruthTable raw = build_modexp_table(info.a, info.n, n_in);
            return classical_compile(raw, info.a, info.n, info.g).table;
        }
        case CompileLevel::Full:
            return full_compile(info.a, info.n).table;
    }
    throw std::invalid_argument("unknown figure");
}

TruthTable reference_table(FigureId id) {
    if (id == FigureId::F4_33Full) {
        return alternate_f4_33_table();
    }
    return definition_table(id);
}

std::optional<FigureId> find_figure(std::uint64_t a, std::uint64_t n, GKind g, CompileLevel level) {
    for (FigureId id : kAllFigures) {
        FigureInfo info = figure_info(id);
        if (info.a == a && info.n == n && info.g == g && info.level == level) {
            return id;
        }
    }
    return std::nullopt;
}

}  // namespace cshor
