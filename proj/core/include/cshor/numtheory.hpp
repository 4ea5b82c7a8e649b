#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

namespace cshor {

/// N = p * q with p, q distinct odd primes.
struct Semiprime {
    std::uint64_t n;
    std::uint64_t p;
    std::uint64_t q;

    /// Validates primality and distinctness; throws std::invalid_argument.
    static Semiprime from_factors(std::uint64_t p, std::uint64_t q);
    /// Splits n by trial division; throws if n is not a product of two distinct odd primes.
    static Semiprime from_n(std::uint64_t n);
};

struct OrderRecord {
    std::uint64_t a;
    std::uint64_t r;

    bool operator==(const OrderRecord&) const = default;
};

enum class PostProcessStatus {
    Factors,
    OddOrderNoSquareRoot,
    MinusOneCongruence,
    // gcd(s +- 1, N) came out as 1 or N.
    TrivialFactors,
};

std::string_view to_string(PostProcessStatus status);

struct PostProcessOutcome {
    PostProcessStatus status;
    std::optional<std::pair<std::uint64_t, std::uint64_t>> factors;
    // a^{r/2} mod N, or (sqrt a)^r mod N for odd r; unset when no root exists.
    std::optional<std::uint64_t> half_power;
};

std::uint64_t gcd(std::uint64_t a, std::uint64_t b);
std::uint64_t lcm(std::uint64_t a, std::uint64_t b);

/// a^x mod n by square-and-multiply; n >= 2.
std::uint64_t mod_pow(std::uint64_t a, std::uint64_t x, std::uint64_t n);

bool is_prime(std::uint64_t n);

/// Floor of the k-th root of n.
std::uint64_t integer_root(std::uint64_t n, unsigned k);

std::uint64_t multiplicative_order(std::uint64_t a, std::uint64_t n);

/// lcm(p - 1, q - 1).
std::uint64_t carmichael(std::uint64_t p, std::uint64_t q);

/// Divisors of the Carmichael value greater than one, ascending.
std::vector<std::uint64_t> allowed_periods(std::uint64_t p, std::uint64_t q);

/// One record per a in (1, n) coprime to n, ascending in a.
std::vector<OrderRecord> coprime_order_table(std::uint64_t n);

/// (p, k) with p prime and p^k == n, if any. Checks every k <= log_3 n.
std::optional<std::pair<std::uint64_t, unsigned>> is_prime_power(std::uint64_t n);

/// Every semiprime p * q < max_n with 3 <= p < q, ordered by N.
std::vector<Semiprime> odd_semiprimes_below(std::uint64_t max_n);

/// Classical tail of Shor's algorithm. Throws if r is not the order of a.
PostProcessOutcome shor_postprocess(std::uint64_t n, std::uint64_t a, std::uint64_t r);

/// Denominators of the continued-fraction convergents of k/m, in order.
std::vector<std::uint64_t> convergent_denominators(std::uint64_t k, std::uint64_t m);

/// Denominator of the last convergent of k/m with 1 < d < n.
std::optional<std::uint64_t> continued_fraction_order(std::uint64_t k, std::uint64_t m, std::uint64_t n);

}  // namespace cshor
