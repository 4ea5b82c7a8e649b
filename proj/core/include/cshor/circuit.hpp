#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cshor/truth_table.hpp"

namespace cshor {

enum class Polarity : std::uint8_t { Positive, Negative };

struct Control {
    unsigned line;
    Polarity polarity = Polarity::Positive;

    bool active(std::uint64_t state) const {
        bool bit = (state >> line) & 1;
        return polarity == Polarity::Positive ? bit : !bit;
    }
    bool operator==(const Control&) const = default;
};

enum class GateKind : std::uint8_t { Not, Cnot, Toffoli };

std::string to_string(GateKind kind);

/// NOT, CNOT or Toffoli; the kind is implied by the control count.
struct Gate {
    std::vector<Control> controls;
    unsigned target;

    static Gate not_gate(unsigned target);
    static Gate cnot(Control control, unsigned target);
    static Gate toffoli(Control c1, Control c2, unsigned target);

    GateKind kind() const;
    /// Throws if the target repeats a control or a control line repeats.
    void validate(unsigned width) const;

    std::uint64_t apply(std::uint64_t state) const {
        for (const auto& c : controls) {
            if (!c.active(state)) {
                return state;
            }
        }
        return state ^ (std::uint64_t{1} << target);
    }

    bool operator==(const Gate&) const = default;
};

/// Bit-vector form of Gate::apply.
std::vector<bool> apply_gate(std::vector<bool> bits, const Gate& gate);

/// Gates over `width` lines. Line 0 is the top line of a drawing; register
/// significance comes from the line lists, whose last element is x1 / y1.
class Circuit {
   public:
    Circuit() = default;
    Circuit(unsigned width, std::vector<unsigned> input_lines, std::vector<unsigned> output_lines,
            std::vector<Gate> gates = {});

    /// Inputs on lines 0..n_in-1 (x_n first), outputs after them (y_m first).
    static Circuit with_registers(unsigned n_in, unsigned n_out, std::vector<Gate> gates = {});

    unsigned width() const { return width_; }
    const std::vector<unsigned>& input_lines() const { return input_lines_; }
    const std::vector<unsigned>& output_lines() const { return output_lines_; }
    const std::vector<Gate>& gates() const { return gates_; }

    void append(Gate gate);
    void append(const std::vector<Gate>& gates);

    /// Reversed gate list; every gate is self-inverse.
    Circuit inverse() const;

    /// "x3", "y1", or "a0" for lines outside both registers.
    std::string line_name(unsigned line) const;

    /// Places register values onto lines; bit 0 goes to the last listed line.
    std::uint64_t load(std::uint64_t x, std::uint64_t y = 0) const;
    std::uint64_t read_inputs(std::uint64_t state) const;
    std::uint64_t read_outputs(std::uint64_t state) const;

    std::uint64_t run(std::uint64_t state) const;

    bool operator==(const Circuit&) const = default;

   private:
    unsigned width_ = 0;
    std::vector<unsigned> input_lines_;
    std::vector<unsigned> output_lines_;
    std::vector<Gate> gates_;
};

struct EvalResult {
    std::uint64_t y;
    std::uint64_t input_after;
};

EvalResult evaluate(const Circuit& circuit, std::uint64_t x);

struct Mismatch {
    std::uint64_t x;
    std::uint64_t expected;
    std::uint64_t actual;
    std::uint64_t input_after;

    bool operator==(const Mismatch&) const = default;
};

/// Every x whose output differs from the table or whose inputs are not
/// restored. Throws std::invalid_argument on register width mismatch.
std::vector<Mismatch> verify(const Circuit& circuit, const TruthTable& table);

struct CostReport {
    unsigned n_toffoli = 0;
    unsigned n_cnot = 0;
    unsigned n_not = 0;
    // 6 per Toffoli, 1 per CNOT; NOT gates are free, as in the gate counts.
    unsigned quantum_cost = 0;
    // quantum_cost plus one per NOT.
    unsigned inclusive_cost = 0;

    bool operator==(const CostReport&) const = default;
};

inline constexpr unsigned kToffoliCost = 6;

CostReport cost(const Circuit& circuit);

/// Basis-state permutation over all 2^width line assignments (width <= 20).
std::vector<std::uint32_t> to_permutation(const Circuit& circuit);

nlohmann::json to_json(const Gate& gate);
Gate gate_from_json(const nlohmann::json& j);
nlohmann::json to_json(const Circuit& circuit);
Circuit circuit_from_json(const nlohmann::json& j);

/// One gate per line, e.g. "TOF x3 !x1 -> y2".
std::string render_gates(const Circuit& circuit);

}  // namespace cshor
