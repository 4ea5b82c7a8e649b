#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cshor/circuit.hpp"

namespace cshor {

using cplx = std::complex<double>;

inline constexpr unsigned kMaxQubits = 20;

/// Dense two-register state; basis index = input * 2^k + output.
class StateVector {
   public:
    StateVector(unsigned m, unsigned k);
    StateVector(unsigned m, unsigned k, std::vector<cplx> amplitudes);

    unsigned m() const { return m_; }
    unsigned k() const { return k_; }
    std::size_t dim() const { return amps_.size(); }
    std::size_t input_dim() const { return std::size_t{1} << m_; }
    std::size_t output_dim() const { return std::size_t{1} << k_; }

    std::size_t index(std::uint64_t input, std::uint64_t output) const { return (input << k_) | output; }
    const cplx& amplitude(std::uint64_t input, std::uint64_t output) const { return amps_[index(input, output)]; }
    const std::vector<cplx>& amplitudes() const { return amps_; }
    std::vector<cplx>& amplitudes() { return amps_; }

    double norm_squared() const;

   private:
    unsigned m_;
    unsigned k_;
    std::vector<cplx> amps_;
};

/// Reduced state of the input register, 2^m x 2^m, row-major.
class DensityMatrix {
   public:
    explicit DensityMatrix(unsigned m);
    DensityMatrix(unsigned m, std::vector<cplx> entries);

    unsigned m() const { return m_; }
    std::size_t dim() const { return std::size_t{1} << m_; }
    const cplx& operator()(std::size_t r, std::size_t c) const { return entries_[r * dim() + c]; }
    cplx& operator()(std::size_t r, std::size_t c) { return entries_[r * dim() + c]; }
    const std::vector<cplx>& entries() const { return entries_; }

    cplx trace() const;
    double hermitian_deviation() const;
    /// Eigenvalues in ascending order.
    std::vector<double> spectrum() const;
    double purity() const;

   private:
    unsigned m_;
    std::vector<cplx> entries_;
};

struct ProbDist {
    std::vector<double> p;

    /// Throws when an entry leaves [0, 1] or the sum is off by more than tol.
    void validate(double tol = 1e-12) const;
    std::size_t size() const { return p.size(); }
    double operator[](std::size_t i) const { return p[i]; }
};

struct NoiseParams {
    // 1 leaves the state unchanged, 0 gives the maximally mixed state.
    double epsilon = 1.0;

    void validate() const;
};

StateVector uniform_input_state(unsigned m, unsigned k);

/// |j>|y> -> |j>|y xor (j mod p)>; needs p <= 2^m and p - 1 < 2^k.
StateVector apply_period_map(const StateVector& state, std::uint64_t p);

/// |x>|y> -> |x>|y xor (a^x mod n)>.
StateVector apply_modexp_map(const StateVector& state, std::uint64_t a, std::uint64_t n);

/// Permutes amplitudes as the circuit maps (input, output) register values.
/// The circuit must have exactly m input lines, k output lines and no others.
StateVector apply_circuit(const StateVector& state, const Circuit& circuit);

enum class QftDirection { Forward, Inverse };

std::string to_string(QftDirection direction);
QftDirection parse_qft_direction(const std::string& text);

/// QFT on the input register with omega = exp(+2 pi i / 2^m) for Forward.
StateVector qft_input(const StateVector& state, QftDirection direction = QftDirection::Forward);

/// Partial trace over the output register.
DensityMatrix reduce_to_input(const StateVector& state);

ProbDist input_probabilities(const StateVector& state);
ProbDist input_probabilities(const DensityMatrix& rho);

ProbDist depolarize(const ProbDist& dist, const NoiseParams& noise);
DensityMatrix depolarize(const DensityMatrix& rho, const NoiseParams& noise);

/// Sum of squared probabilities.
double separability_index(const ProbDist& dist);

/// Separability index of depolarize(dist) given S = separability_index(dist):
/// eps^2 S + (1 - eps^2) / 2^m.
double noisy_separability(double s, const NoiseParams& noise, unsigned m);

/// eps^2 S + (1 - eps)(1 + 15 eps) / 64. Kept for comparison; it does not
/// reduce to the uniform value 1/8 at eps = 0.
double alternative_noisy_separability(double s, const NoiseParams& noise);

struct EpsilonEstimate {
    double epsilon = 0.0;
    // S_observed was outside [1/2^m, S_theory] and got clamped.
    bool clamped = false;
};

EpsilonEstimate estimate_epsilon(double s_theory, double s_observed, unsigned m);

/// Seeded multinomial draw (mt19937_64, 53-bit uniforms, inverse CDF).
std::vector<std::uint64_t> sample_outcomes(const ProbDist& dist, std::uint64_t shots, std::uint64_t seed);
std::vector<std::uint64_t> sample_counts(const ProbDist& dist, std::uint64_t shots, std::uint64_t seed);
/// Empirical distribution counts / shots.
ProbDist sample(const ProbDist& dist, std::uint64_t shots, std::uint64_t seed);

struct OrderFindingResult {
    unsigned m = 0;
    unsigned k = 0;
    std::vector<std::uint64_t> samples;
    std::optional<std::uint64_t> order;
    // Number of samples consumed before the order was confirmed.
    std::size_t samples_used = 0;
};

/// Smallest m with 2^m >= n^2.
unsigned order_finding_input_qubits(std::uint64_t n);

OrderFindingResult order_finding_run(std::uint64_t a, std::uint64_t n, std::uint64_t shots, std::uint64_t seed,
                                     QftDirection direction = QftDirection::Forward);

nlohmann::json to_json(const ProbDist& dist);
nlohmann::json to_json(const DensityMatrix& rho);
ProbDist prob_dist_from_json(const nlohmann::json& j);
DensityMatrix density_matrix_from_json(const nlohmann::json& j);
/// "k,p" header then one row per outcome.
std::string to_csv(const ProbDist& dist);

}  // namespace cshor
