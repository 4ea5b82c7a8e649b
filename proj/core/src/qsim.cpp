#include "cshor/qsim.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

#include <Eigen/Dense>

#include "cshor/numtheory.hpp"
#include "cshor/truth_table.hpp"

namespace cshor {

namespace {

void check_register(unsigned m, unsigned k) {
    if (m + k > kMaxQubits) {
        throw std::invalid_argument("register of " + std::to_string(m + k) + " qubits exceeds the limit of " +
                                    std::to_string(kMaxQubits));
    }
}

// In-place radix-2 transform, unnormalized: a[k] <- sum_j w^{sign * jk} a[j].
void fft(std::vector<cplx>& a, int sign) {
    const std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) {
            j ^= bit;
        }
        j ^= bit;
        if (i < j) {
            std::swap(a[i], a[j]);
        }
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const std::size_t half = len / 2;
        std::vector<cplx> tw(half);
        for (std::size_t t = 0; t < half; ++t) {
            tw[t] = std::polar(1.0, sign * 2.0 * std::numbers::pi * static_cast<double>(t) / static_cast<double>(len));
        }
        for (std::size_t start = 0; start < n; start += len) {
            for (std::size_t t = 0; t < half; ++t) {
                cplx u = a[start + t];
                cplx v = a[start + t + half] * tw[t];
                a[start + t] = u + v;
                a[start + t + half] = u - v;
            }
        }
    }
}

Eigen::MatrixXcd to_eigen(const DensityMatrix& rho) {
    const auto d = static_cast<Eigen::Index>(rho.dim());
    Eigen::MatrixXcd mat(d, d);
    for (Eigen::Index r = 0; r < d; ++r) {
        for (Eigen::Index c = 0; c < d; ++c) {
            mat(r, c) = rho(static_cast<std::size_t>(r), static_cast<std::size_t>(c));
        }
    }
    return mat;
}

}  // namespace

StateVector::StateVector(unsigned m, unsigned k) : m_(m), k_(k) {
    check_register(m, k);
    amps_.assign(std::size_t{1} << (m + k), cplx{0.0, 0.0});
}

StateVector::StateVector(unsigned m, unsigned k, std::vector<cplx> amplitudes)
    : m_(m), k_(k), amps_(std::move(amplitudes)) {
    check_register(m, k);
    if (amps_.size() != (std::size_t{1} << (m + k))) {
        throw std::invalid_argument("amplitude count does not match 2^(m+k)");
    }
}

double StateVector::norm_squared() const {
    double s = 0.0;
    for (const auto& a : amps_) {
        s += std::norm(a);
    }
    return s;
}

DensityMatrix::DensityMatrix(unsigned m) : m_(m) {
    check_register(m, m);
    entries_.assign(dim() * dim(), cplx{0.0, 0.0});
}

DensityMatrix::DensityMatrix(unsigned m, std::vector<cplx> entries) : m_(m), entries_(std::move(entries)) {
    check_register(m, m);
    if (entries_.size() != dim() * dim()) {
        throw std::invalid_argument("density matrix needs 4^m entries");
    }
}

cplx DensityMatrix::trace() const {
    cplx t{0.0, 0.0};
    for (std::size_t i = 0; i < dim(); ++i) {
        t += (*this)(i, i);
    }
    return t;
}

double DensityMatrix::hermitian_deviation() const {
    double worst = 0.0;
    for (std::size_t r = 0; r < dim(); ++r) {
        for (std::size_t c = r; c < dim(); ++c) {
            worst = std::max(worst, std::abs((*this)(r, c) - std::conj((*this)(c, r))));
        }
    }
    return worst;
}

std::vector<double> DensityMatrix::spectrum() const {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(to_eigen(*this), Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("eigenvalue solver did not converge");
    }
    const auto& ev = solver.eigenvalues();
    return {ev.data(), ev.data() + ev.size()};
}

double DensityMatrix::purity() const {
    double s = 0.0;
    for (const auto& e : entries_) {
        s += std::norm(e);
    }
    return s;
}

void ProbDist::validate(double tol) const {
    double sum = 0.0;
    for (double v : p) {
        if (!(v >= -tol && v <= 1.0 + tol)) {
            throw std::invalid_argument("probability outside [0, 1]");
        }
        sum += v;
    }
    if (std::abs(sum - 1.0) > tol) {
        throw std::invalid_argument("probabilities do not sum to 1");
    }
}

void NoiseParams::validate() const {
    if (!(epsilon >= 0.0 && epsilon <= 1.0)) {
        throw std::invalid_argument("epsilon must lie in [0, 1]");
    }
}

StateVector uniform_input_state(unsigned m, unsigned k) {
    StateVector s(m, k);
    const double amp = 1.0 / std::sqrt(static_cast<double>(s.input_dim()));
    for (std::uint64_t x = 0; x < s.input_dim(); ++x) {
        s.amplitudes()[s.index(x, 0)] = amp;
    }
    return s;
}

namespace {

template <typename F>
StateVector permute_outputs(const StateVector& state, F&& value_of) {
    StateVector out(state.m(), state.k());
    for (std::uint64_t x = 0; x < state.input_dim(); ++x) {
        std::uint64_t v = value_of(x);
        for (std::uint64_t y = 0; y < state.output_dim(); ++y) {
            out.amplitudes()[out.index(x, y ^ v)] = state.amplitude(x, y);
        }
    }
    return out;
}

}  // namespace

StateVector apply_period_map(const StateVector& state, std::uint64_t p) {
    if (p == 0 || p > state.input_dim()) {
        throw std::invalid_argument("period must lie in 1..2^m");
    }
    if (p - 1 >= state.output_dim()) {
        throw std::invalid_argument("output register too small for period " + std::to_string(p));
    }
    return permute_outputs(state, [p](std::uint64_t x) { return x % p; });
}

StateVector apply_modexp_map(const StateVector& state, std::uint64_t a, std::uint64_t n) {
    if (n < 2 || n - 1 >= state.output_dim()) {
        throw std::invalid_argument("output register too small for residues mod " + std::to_string(n));
    }
    std::uint64_t value = 1 % n;
    const std::uint64_t base = a % n;
    std::vector<std::uint64_t> powers(state.input_dim());
    for (auto& v : powers) {
        v = value;
        value = value * base % n;  // n < 2^20 here, no overflow
    }
    return permute_outputs(state, [&](std::uint64_t x) { return powers[x]; });
}

StateVector apply_circuit(const StateVector& state, const Circuit& circuit) {
    if (circuit.input_lines().size() != state.m() || circuit.output_lines().size() != state.k() ||
        circuit.width() != state.m() + state.k()) {
        throw std::invalid_argument("circuit registers do not match the state (" + std::to_string(state.m()) + "+" +
                                    std::to_string(state.k()) + " qubits)");
    }
    StateVector out(state.m(), state.k());
    for (std::uint64_t x = 0; x < state.input_dim(); ++x) {
        for (std::uint64_t y = 0; y < state.output_dim(); ++y) {
            std::uint64_t after = circuit.run(circuit.load(x, y));
            out.amplitudes()[out.index(circuit.read_inputs(after), circuit.read_outputs(after))] =
                state.amplitude(x, y);
        }
    }
    return out;
}

std::string to_string(QftDirection direction) {
    return direction == QftDirection::Forward ? "forward" : "inverse";
}

QftDirection parse_qft_direction(const std::string& text) {
    if (text == "forward") return QftDirection::Forward;
    if (text == "inverse") return QftDirection::Inverse;
    throw std::invalid_argument("unknown QFT direction '" + text + "'");
}

StateVector qft_input(const StateVector& state, QftDirection direction) {
    StateVector out = state;
    const std::size_t big_m = state.input_dim();
    const double scale = 1.0 / std::sqrt(static_cast<double>(big_m));
    const int sign = direction == QftDirection::Forward ? +1 : -1;
    std::vector<cplx> column(big_m);
    for (std::uint64_t y = 0; y < state.output_dim(); ++y) {
        bool any = false;
        for (std::uint64_t x = 0; x < big_m; ++x) {
            column[x] = state.amplitude(x, y);
            any = any || column[x] != cplx{0.0, 0.0};
        }
        if (!any) {
            continue;
        }
        fft(column, sign);
        for (std::uint64_t x = 0; x < big_m; ++x) {
            out.amplitudes()[out.index(x, y)] = column[x] * scale;
        }
    }
    return out;
}

DensityMatrix reduce_to_input(const StateVector& state) {
    DensityMatrix rho(state.m());
    const std::size_t d = state.input_dim();
    for (std::size_t r = 0; r < d; ++r) {
        for (std::size_t c = r; c < d; ++c) {
            cplx s{0.0, 0.0};
            for (std::uint64_t y = 0; y < state.output_dim(); ++y) {
                s += state.amplitude(r, y) * std::conj(state.amplitude(c, y));
            }
            rho(r, c) = s;
            rho(c, r) = std::conj(s);
        }
    }
    return rho;
}

ProbDist input_probabilities(const StateVector& state) {
    ProbDist dist;
    dist.p.assign(state.input_dim(), 0.0);
    for (std::uint64_t x = 0; x < state.input_dim(); ++x) {
        for (std::uint64_t y = 0; y < state.output_dim(); ++y) {
            dist.p[x] += std::norm(state.amplitude(x, y));
        }
    }
    return dist;
}

ProbDist input_probabilities(const DensityMatrix& rho) {
    ProbDist dist;
    for (std::size_t i = 0; i < rho.dim(); ++i) {
        dist.p.push_back(rho(i, i).real());
    }
    return dist;
}

ProbDist depolarize(const ProbDist& dist, const NoiseParams& noise) {
    noise.validate();
    if (dist.p.empty()) {
        throw std::invalid_argument("empty distribution");
    }
    const double uniform = 1.0 / static_cast<double>(dist.size());
    ProbDist out;
    for (double v : dist.p) {
        out.p.push_back((1.0 - noise.epsilon) * uniform + noise.epsilon * v);
    }
    return out;
}

DensityMatrix depolarize(const DensityMatrix& rho, const NoiseParams& noise) {
    noise.validate();
    DensityMatrix out = rho;
    const double uniform = 1.0 / static_cast<double>(rho.dim());
    for (std::size_t r = 0; r < rho.dim(); ++r) {
        for (std::size_t c = 0; c < rho.dim(); ++c) {
            out(r, c) = noise.epsilon * rho(r, c) + (r == c ? (1.0 - noise.epsilon) * uniform : 0.0);
        }
    }
    return out;
}

double separability_index(const ProbDist& dist) {
    double s = 0.0;
    for (double v : dist.p) {
        s += v * v;
    }
    return s;
}

double noisy_separability(double s, const NoiseParams& noise, unsigned m) {
    noise.validate();
    const double floor = std::ldexp(1.0, -static_cast<int>(m));
    if (s < floor - 1e-12 || s > 1.0 + 1e-12) {
        throw std::invalid_argument("S must lie in [1/2^m, 1]");
    }
    const double e2 = noise.epsilon * noise.epsilon;
    return e2 * s + (1.0 - e2) * floor;
}

double alternative_noisy_separability(double s, const NoiseParams& noise) {
    noise.validate();
    const double e = noise.epsilon;
    return e * e * s + (1.0 - e) * (1.0 + 15.0 * e) / 64.0;
}

EpsilonEstimate estimate_epsilon(double s_theory, double s_observed, unsigned m) {
    const double floor = std::ldexp(1.0, -static_cast<int>(m));
    if (!(s_theory > floor + 1e-15)) {
        throw std::invalid_argument("S_theory equals the uniform value; the period carries no noise signal");
    }
    EpsilonEstimate est;
    double ratio = (s_observed - floor) / (s_theory - floor);
    if (ratio < 0.0) {
        ratio = 0.0;
        est.clamped = true;
    } else if (ratio > 1.0) {
        ratio = 1.0;
        est.clamped = true;
    }
    est.epsilon = std::sqrt(ratio);
    return est;
}

std::vector<std::uint64_t> sample_outcomes(const ProbDist& dist, std::uint64_t shots, std::uint64_t seed) {
    if (dist.p.empty()) {
        throw std::invalid_argument("empty distribution");
    }
    std::vector<double> cdf(dist.size());
    double acc = 0.0;
    std::size_t last_nonzero = 0;
    for (std::size_t i = 0; i < dist.size(); ++i) {
        if (dist.p[i] < 0.0) {
            throw std::invalid_argument("negative probability");
        }
        acc += dist.p[i];
        cdf[i] = acc;
        if (dist.p[i] > 0.0) {
            last_nonzero = i;
        }
    }
    if (!(acc > 0.0)) {
        throw std::invalid_argument("distribution has no mass");
    }
    std::mt19937_64 rng(seed);
    std::vector<std::uint64_t> out;
    out.reserve(shots);
    for (std::uint64_t s = 0; s < shots; ++s) {
        double u = static_cast<double>(rng() >> 11) * 0x1.0p-53 * acc;
        auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        std::size_t idx = std::min(static_cast<std::size_t>(it - cdf.begin()), last_nonzero);
        out.push_back(idx);
    }
    return out;
}

std::vector<std::uint64_t> sample_counts(const ProbDist& dist, std::uint64_t shots, std::uint64_t seed) {
    std::vector<std::uint64_t> counts(dist.size(), 0);
    for (auto k : sample_outcomes(dist, shots, seed)) {
        ++counts[k];
    }
    return counts;
}

ProbDist sample(const ProbDist& dist, std::uint64_t shots, std::uint64_t seed) {
    if (shots == 0) {
        throw std::invalid_argument("shots must be positive");
    }
    ProbDist out;
    for (auto c : sample_counts(dist, shots, seed)) {
        out.p.push_back(static_cast<double>(c) / static_cast<double>(shots));
    }
    return out;
}

unsigned order_finding_input_qubits(std::uint64_t n) {
    unsigned m = 0;
    while ((std::uint64_t{1} << m) < n * n) {
        ++m;
    }
    return m;
}

OrderFindingResult order_finding_run(std::uint64_t a, std::uint64_t n, std::uint64_t shots, std::uint64_t seed,
                                     QftDirection direction) {
    if (n < 3 || a < 2 || a >= n || gcd(a, n) != 1) {
        throw std::invalid_argument("order finding needs 1 < a < N with gcd(a, N) = 1");
    }
    OrderFindingResult result;
    result.m = order_finding_input_qubits(n);
    result.k = ceil_log2(n);
    check_register(result.m, result.k);

    StateVector state = uniform_input_state(result.m, result.k);
    state = apply_modexp_map(state, a, n);
    state = qft_input(state, direction);
    result.samples = sample_outcomes(input_probabilities(state), shots, seed);

    const std::uint64_t big_m = std::uint64_t{1} << result.m;
    // Every convergent denominator below N is a candidate, alone or combined
    // with one seen earlier (samples j/r with gcd(j, r) > 1 give divisors of r).
    std::vector<std::uint64_t> seen;
    auto confirms = [&](std::uint64_t d) { return d > 1 && d < n && mod_pow(a, d, n) == 1; };
    for (std::size_t i = 0; i < result.samples.size() && !result.order; ++i) {
        if (result.samples[i] == 0) {
            continue;
        }
        for (std::uint64_t d : convergent_denominators(result.samples[i], big_m)) {
            if (d <= 1 || d >= n) {
                continue;
            }
            std::optional<std::uint64_t> hit;
            if (confirms(d)) {
                hit = d;
            }
            for (std::size_t j = 0; j < seen.size() && !hit; ++j) {
                if (std::uint64_t l = lcm(seen[j], d); confirms(l)) {
                    hit = l;
                }
            }
            if (hit) {
                // Strip prime factors while a^(r/q) is still 1.
                std::uint64_t r = *hit;
                for (std::uint64_t q = 2; q <= r; ++q) {
                    while (r % q == 0 && mod_pow(a, r / q, n) == 1) {
                        r /= q;
                    }
                }
                result.order = r;
                result.samples_used = i + 1;
                break;
            }
            if (std::find(seen.begin(), seen.end(), d) == seen.end()) {
                seen.push_back(d);
            }
        }
    }
    if (!result.order) {
        result.samples_used = result.samples.size();
    }
    return result;
}

nlohmann::json to_json(const ProbDist& dist) { return nlohmann::json{{"probabilities", dist.p}}; }

nlohmann::json to_json(const DensityMatrix& rho) {
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t r = 0; r < rho.dim(); ++r) {
        nlohmann::json row = nlohmann::json::array();
        for (std::size_t c = 0; c < rho.dim(); ++c) {
            row.push_back({rho(r, c).real(), rho(r, c).imag()});
        }
        rows.push_back(row);
    }
    return nlohmann::json{{"m", rho.m()}, {"entries", rows}};
}

ProbDist prob_dist_from_json(const nlohmann::json& j) {
    ProbDist d;
    d.p = j.at("probabilities").get<std::vector<double>>();
    d.validate(1e-9);
    return d;
}

DensityMatrix density_matrix_from_json(const nlohmann::json& j) {
    auto m = j.at("m").get<unsigned>();
    const auto& rows = j.at("entries");
    std::vector<cplx> entries;
    for (const auto& row : rows) {
        for (const auto& e : row) {
            entries.emplace_back(e.at(0).get<double>(), e.at(1).get<double>());
        }
    }
    return DensityMatrix(m, std::move(entries));
}

std::string to_csv(const ProbDist& dist) {
    std::ostringstream out;
    out.precision(17);
    out << "k,p\n";
    for (std::size_t i = 0; i < dist.size(); ++i) {
        out << i << ',' << dist.p[i] << '\n';
    }
    return out.str();
}

}  // namespace cshor
