#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cshor/circuit.hpp"
#include "cshor/truth_table.hpp"

namespace cshor {

/// Boolean function of the input register as a 2^n_in-bit mask (n_in <= 6).
using BoolFn = std::uint64_t;

/// XOR of the input bits in `mask` (bit i is x_{i+1}), plus `constant`.
struct AffineForm {
    std::uint32_t mask = 0;
    bool constant = false;

    unsigned terms() const;
    bool is_constant() const { return mask == 0; }
    BoolFn eval(unsigned n_in) const;
    std::string describe() const;

    auto operator<=>(const AffineForm&) const = default;
};

/// All points x in [0, 2^n_in).
BoolFn all_points(unsigned n_in);

/// Hamming distance from f to the nearest affine function.
unsigned affine_distance(BoolFn f, unsigned n_in);

/// Nearest affine form, ties to fewer terms then lexicographic (mask, constant).
AffineForm nearest_affine(BoolFn f, unsigned n_in);

struct BitFit {
    AffineForm form;
    BoolFn mismatches = 0;
};

struct LinearFit {
    unsigned n_in = 0;
    // Index 0 is y1.
    std::vector<BitFit> bits;
    // GF(2) rank of the linear parts of the chosen forms.
    unsigned rank = 0;

    unsigned total_mismatches() const;
};

/// Best affine form per output bit, found by scoring all 2^(n_in+1) forms.
LinearFit fit_linear(const TruthTable& table);

/// Either an affine form of the inputs or the current contents of an output line.
struct ControlSource {
    enum class Kind { Affine, OutputLine };
    Kind kind = Kind::Affine;
    AffineForm form;
    unsigned output = 0;  // output bit index, when kind == OutputLine

    static ControlSource affine(AffineForm f) { return {Kind::Affine, f, 0}; }
    static ControlSource line(unsigned output_bit) { return {Kind::OutputLine, {}, output_bit}; }
    bool operator==(const ControlSource&) const = default;
};

struct PlanStep {
    enum class Kind { Toffoli, Copy };
    Kind kind = Kind::Toffoli;
    ControlSource c1;
    ControlSource c2;
    unsigned source = 0;  // Copy: output bit copied from
    unsigned target = 0;  // output bit
    BoolFn flips = 0;     // points whose target bit this step flips
    int cascade = -1;     // Toffoli: cascade id, -1 for a copy
    unsigned level = 0;   // Toffoli: 1 for the first gate of a cascade
};

struct CascadePlan {
    unsigned n_in = 0;
    unsigned n_out = 0;
    std::vector<PlanStep> steps;
    // False when greedy cover stalled; `residual` then holds what is left.
    bool complete = true;
    // Per output bit: content-vs-target difference left after the steps,
    // modulo the affine part the emitter adds at the end.
    std::vector<unsigned> residual_distance;
};

struct SynthesisBudget {
    unsigned max_quantum_cost = 4096;
    unsigned max_gates = 1024;
    bool allow_negative_controls = true;
    bool exhaustive_fallback = true;
    // Cost ceiling for the iterative-deepening search.
    unsigned search_cost_cap = 64;
    std::uint64_t search_node_limit = 2'000'000;
};

/// Greedy Toffoli-cascade cover of the mismatches left by `fit`.
CascadePlan plan_cascades(const LinearFit& fit, const TruthTable& table,
                          const SynthesisBudget& budget = SynthesisBudget{});

/// Gates for a plan on the standard register layout, including the final
/// affine CNOT/NOT stage. Only valid for complete plans.
Circuit emit_plan(const CascadePlan& plan, const TruthTable& table);

/// Multi-controlled NOT built from Toffolis using dirty ancilla lines, which
/// are restored. Empty when there are not enough spare lines.
std::optional<std::vector<Gate>> multi_controlled_not(const std::vector<Control>& controls, unsigned target,
                                                      unsigned width);

/// XORs `fn` into output line `line` using the cheapest fixed-polarity
/// Reed-Muller expansion. Empty when a cube cannot be built without ancillas.
std::optional<std::vector<Gate>> xor_function_into(BoolFn fn, unsigned n_in, unsigned line, unsigned width,
                                                   bool allow_negative_controls);

/// Iterative-deepening search on inclusive cost for the line-content goal.
std::optional<Circuit> search_circuit(const TruthTable& table, const SynthesisBudget& budget);

enum class SynthesisRoute { Cascade, CascadeWithCubes, Cubes, Search };

std::string to_string(SynthesisRoute route);

struct SynthesisResult {
    Circuit circuit;
    CostReport cost;
    LinearFit fit;
    CascadePlan plan;
    SynthesisRoute route;
};

class SynthesisBudgetExceeded : public std::runtime_error {
   public:
    SynthesisBudgetExceeded(const std::string& what, std::optional<CostReport> best)
        : std::runtime_error(what), best_(best) {}
    const std::optional<CostReport>& best() const { return best_; }

   private:
    std::optional<CostReport> best_;
};

/// Verified circuit for `table` (n_in, n_out <= 6). Throws
/// SynthesisBudgetExceeded when nothing fits the budget.
SynthesisResult synthesize_detailed(const TruthTable& table, const SynthesisBudget& budget = SynthesisBudget{});
Circuit synthesize(const TruthTable& table, const SynthesisBudget& budget = SynthesisBudget{});

/// quantum_cost(circuit) - quantum_cost(reference); both must implement `table`.
long compare_cost(const Circuit& circuit, const Circuit& reference, const TruthTable& table);
long compare_cost(const CostReport& circuit, const CostReport& reference);

}  // namespace cshor
