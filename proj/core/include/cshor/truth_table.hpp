#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace cshor {

/// Number of bits needed to write v (0 for v == 0).
unsigned bit_width_of(std::uint64_t v);

/// Smallest b with 2^b >= v.
unsigned ceil_log2(std::uint64_t v);

/// Total map from n_in-bit inputs to n_out-bit outputs. rows[x] is the
/// output for input x; bit 0 of either value is x1 / y1.
class TruthTable {
   public:
    TruthTable() = default;
    TruthTable(unsigned n_in, unsigned n_out, std::vector<std::uint64_t> rows);

    unsigned n_in() const { return n_in_; }
    unsigned n_out() const { return n_out_; }
    std::size_t size() const { return rows_.size(); }
    const std::vector<std::uint64_t>& rows() const { return rows_; }
    std::uint64_t operator()(std::uint64_t x) const { return rows_.at(x); }

    /// Truth table of output bit `bit` as a mask over inputs (n_in <= 6).
    std::uint64_t output_bit_mask(unsigned bit) const;

    bool operator==(const TruthTable&) const = default;

   private:
    unsigned n_in_ = 0;
    unsigned n_out_ = 0;
    std::vector<std::uint64_t> rows_;
};

enum class GKind { None, Log, Affine, Rank };

std::string to_string(GKind kind);
GKind parse_g_kind(const std::string& text);

/// Output remapping applied after modular exponentiation.
struct GDescriptor {
    GKind kind = GKind::None;
    std::uint64_t base = 0;  // Log
    std::uint64_t c = 0;     // Affine: (y - c) / d
    std::uint64_t d = 1;
    std::vector<std::uint64_t> rank_values;  // Rank: sorted raw outputs

    std::uint64_t apply(std::uint64_t y) const;
    std::uint64_t invert(std::uint64_t v) const;
    /// Rank is a lookup table rather than a closed-form map.
    bool is_simple() const { return kind != GKind::Rank; }
    std::string describe() const;
};

enum class CompileLevel { Uncompiled, Partial, Full };

std::string to_string(CompileLevel level);

struct CompiledFunction {
    std::uint64_t a;
    std::uint64_t n;
    std::uint64_t r;
    GDescriptor g;
    TruthTable table;
    CompileLevel level;
};

/// x -> a^x mod N for x in [0, 2^n_in). n_out defaults to the width of the
/// largest value the table actually contains.
TruthTable build_modexp_table(std::uint64_t a, std::uint64_t n, unsigned n_in);
TruthTable build_modexp_table(std::uint64_t a, std::uint64_t n, unsigned n_in, unsigned n_out);

/// Remaps every output of a modexp table through g of the requested kind.
/// Throws std::invalid_argument when the kind cannot represent the outputs.
CompiledFunction classical_compile(const TruthTable& table, std::uint64_t a, std::uint64_t n, GKind kind);

/// Fits g of the requested kind to a set of raw residues.
GDescriptor fit_g(const std::vector<std::uint64_t>& raw_values, std::uint64_t a, std::uint64_t n, GKind kind);

/// One period of g(a^x mod N) on ceil(log2 r) input bits, x wrapped mod r.
/// g is the first valid of Log, Affine, Rank.
CompiledFunction full_compile(std::uint64_t a, std::uint64_t n);

/// Smallest r with rows(x) == rows(x + r) wherever both exist.
std::uint64_t period_of(const TruthTable& table);

/// Alternative f~_{4,33} table realized by the stored circuit; it differs from
/// the definition at x = 3.
TruthTable alternate_f4_33_table();

nlohmann::json to_json(const TruthTable& table);
TruthTable table_from_json(const nlohmann::json& j);

/// Bit columns x_n..x_1 | y_m..y_1, one row per input.
std::string render_table(const TruthTable& table);

}  // namespace cshor
