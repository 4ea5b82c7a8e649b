#include "cshor/numtheory.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace cshor {

namespace {

__extension__ typedef unsigned __int128 u128;

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t n) {
    return static_cast<std::uint64_t>(static_cast<u128>(a) * b % n);
}

// base^k, saturating at limit + 1.
std::uint64_t pow_capped(std::uint64_t base, unsigned k, std::uint64_t limit) {
    u128 acc = 1;
    for (unsigned i = 0; i < k; ++i) {
        acc *= base;
        if (acc > limit) {
            return limit + 1;
        }
    }
    return static_cast<std::uint64_t>(acc);
}

void require_odd_prime(std::uint64_t p, const char* name) {
    if (p < 3 || !is_prime(p)) {
        throw std::invalid_argument(std::string(name) + "=" + std::to_string(p) + " is not an odd prime");
    }
}

}  // namespace

std::string_view to_string(PostProcessStatus status) {
    switch (status) {
        case PostProcessStatus::Factors:
            return "Factors";
        case PostProcessStatus::OddOrderNoSquareRoot:
            return "OddOrderNoSquareRoot";
        case PostProcessStatus::MinusOneCongruence:
            return "MinusOneCongruence";
        case PostProcessStatus::TrivialFactors:
            return "TrivialFactors";
    }
    return "?";
}

Semiprime Semiprime::from_factors(std::uint64_t p, std::uint64_t q) {
    require_odd_prime(p, "p");
    require_odd_prime(q, "q");
    if (p == q) {
        throw std::invalid_argument("p and q must be distinct");
    }
    if (p > q) {
        std::swap(p, q);
    }
    return Semiprime{p * q, p, q};
}

Semiprime Semiprime::from_n(std::uint64_t n) {
    if (n < 15 || n % 2 == 0) {
        throw std::invalid_argument("N=" + std::to_string(n) + " is not an odd semiprime");
    }
    for (std::uint64_t p = 3; p * p <= n; p += 2) {
        if (n % p == 0) {
            std::uint64_t q = n / p;
            if (q == p || !is_prime(p) || !is_prime(q)) {
                break;
            }
            return Semiprime{n, p, q};
        }
    }
    throw std::invalid_argument("N=" + std::to_string(n) + " is not a product of two distinct odd primes");
}

std::uint64_t gcd(std::uint64_t a, std::uint64_t b) {
    if (a == 0 && b == 0) {
        throw std::invalid_argument("gcd(0, 0) is undefined");
    }
    while (b != 0) {
        std::uint64_t t = a % b;
        a = b;
        b = t;
    }
    return a;
}

std::uint64_t lcm(std::uint64_t a, std::uint64_t b) {
    if (a == 0 || b == 0) {
        return 0;
    }
    return a / gcd(a, b) * b;
}

std::uint64_t mod_pow(std::uint64_t a, std::uint64_t x, std::uint64_t n) {
    if (n < 2) {
        throw std::invalid_argument("mod_pow modulus must be >= 2");
    }
    std::uint64_t result = 1;
    std::uint64_t base = a % n;
    while (x > 0) {
        if (x & 1) {
            result = mul_mod(result, base, n);
        }
        base = mul_mod(base, base, n);
        x >>= 1;
    }
    return result;
}

bool is_prime(std::uint64_t n) {
    if (n < 2) {
        return false;
    }
    if (n < 4) {
        return true;
    }
    if (n % 2 == 0) {
        return false;
    }
    for (std::uint64_t d = 3; d <= n / d; d += 2) {
        if (n % d == 0) {
            return false;
        }
    }
    return true;
}

std::uint64_t integer_root(std::uint64_t n, unsigned k) {
    if (k == 0) {
        throw std::invalid_argument("integer_root: k must be positive");
    }
    if (k == 1 || n < 2) {
        return n;
    }
    auto guess = static_cast<std::uint64_t>(std::pow(static_cast<double>(n), 1.0 / k));
    while (guess > 0 && pow_capped(guess, k, n) > n) {
        --guess;
    }
    while (pow_capped(guess + 1, k, n) <= n) {
        ++guess;
    }
    return guess;
}

std::uint64_t multiplicative_order(std::uint64_t a, std::uint64_t n) {
    if (n < 2 || a <= 1 || a >= n) {
        throw std::invalid_argument("multiplicative_order requires 1 < a < N");
    }
    if (gcd(a, n) != 1) {
        throw std::invalid_argument("a=" + std::to_string(a) + " is not coprime to N=" + std::to_string(n));
    }
    std::uint64_t value = a;
    for (std::uint64_t r = 1; r <= n; ++r) {
        if (value == 1) {
            return r;
        }
        value = mul_mod(value, a, n);
    }
    throw std::logic_error("order search exceeded N");
}

std::uint64_t carmichael(std::uint64_t p, std::uint64_t q) {
    Semiprime sp = Semiprime::from_factors(p, q);
    return lcm(sp.p - 1, sp.q - 1);
}

std::vector<std::uint64_t> allowed_periods(std::uint64_t p, std::uint64_t q) {
    std::uint64_t lambda = carmichael(p, q);
    std::vector<std::uint64_t> out;
    for (std::uint64_t d = 2; d <= lambda; ++d) {
        if (lambda % d == 0) {
            out.push_back(d);
        }
    }
    return out;
}

std::vector<OrderRecord> coprime_order_table(std::uint64_t n) {
    if (n < 3) {
        throw std::invalid_argument("coprime_order_table requires N >= 3");
    }
    std::vector<OrderRecord> out;
    for (std::uint64_t a = 2; a < n; ++a) {
        if (gcd(a, n) == 1) {
            out.push_back({a, multiplicative_order(a, n)});
        }
    }
    return out;
}

std::optional<std::pair<std::uint64_t, unsigned>> is_prime_power(std::uint64_t n) {
    if (n < 2) {
        throw std::invalid_argument("is_prime_power requires N >= 2");
    }
    if (is_prime(n)) {
        return std::pair{n, 1u};
    }
    for (unsigned k = 2; pow_capped(3, k, n) <= n; ++k) {
        std::uint64_t root = integer_root(n, k);
        if (pow_capped(root, k, n) == n && is_prime(root)) {
            return std::pair{root, k};
        }
    }
    return std::nullopt;
}

std::vector<Semiprime> odd_semiprimes_below(std::uint64_t max_n) {
    std::vector<Semiprime> out;
    for (std::uint64_t n = 15; n < max_n; n += 2) {
        try {
            out.push_back(Semiprime::from_n(n));
        } catch (const std::invalid_argument&) {
        }
    }
    return out;
}

PostProcessOutcome shor_postprocess(std::uint64_t n, std::uint64_t a, std::uint64_t r) {
    if (r == 0 || multiplicative_order(a, n) != r) {
        throw std::invalid_argument("r=" + std::to_string(r) + " is not the order of " + std::to_string(a) +
                                    " mod " + std::to_string(n));
    }
    std::uint64_t s;
    if (r % 2 == 0) {
        s = mod_pow(a, r / 2, n);
    } else {
        std::uint64_t root = integer_root(a, 2);
        if (root * root != a) {
            return {PostProcessStatus::OddOrderNoSquareRoot, std::nullopt, std::nullopt};
        }
        s = mod_pow(root, r, n);
    }
    if (s == n - 1) {
        return {PostProcessStatus::MinusOneCongruence, std::nullopt, s};
    }
    std::uint64_t f1 = gcd(s + 1, n);
    std::uint64_t f2 = gcd((s + n - 1) % n, n);
    if (f1 == 1 || f1 == n || f2 == 1 || f2 == n) {
        return {PostProcessStatus::TrivialFactors, std::nullopt, s};
    }
    if (f1 > f2) {
        std::swap(f1, f2);
    }
    return {PostProcessStatus::Factors, std::pair{f1, f2}, s};
}

std::vector<std::uint64_t> convergent_denominators(std::uint64_t k, std::uint64_t m) {
    if (m == 0 || k >= m) {
        throw std::invalid_argument("convergent_denominators requires 0 <= k < m");
    }
    std::vector<std::uint64_t> out;
    // h_{-1}=1, h_{-2}=0 for numerators; k_{-1}=0, k_{-2}=1 for denominators.
    std::uint64_t den_prev = 0;
    std::uint64_t den_prev2 = 1;
    std::uint64_t num = k;
    std::uint64_t den = m;
    // Leading term of k/m is 0, giving convergent 0/1.
    std::uint64_t term = num / den;
    std::uint64_t d = term * den_prev + den_prev2;
    out.push_back(d);
    den_prev2 = den_prev;
    den_prev = d;
    std::uint64_t rem = num % den;
    num = den;
    den = rem;
    while (den != 0) {
        term = num / den;
        d = term * den_prev + den_prev2;
        out.push_back(d);
        den_prev2 = den_prev;
        den_prev = d;
        rem = num % den;
        num = den;
        den = rem;
    }
    return out;
}

std::optional<std::uint64_t> continued_fraction_order(std::uint64_t k, std::uint64_t m, std::uint64_t n) {
    if (m == 0 || (m & (m - 1)) != 0) {
        throw std::invalid_argument("continued_fraction_order requires M to be a power of two");
    }
    std::optional<std::uint64_t> best;
    for (std::uint64_t d : convergent_denominators(k, m)) {
        if (d >= n) {
            break;
        }
        if (d > 1) {
            best = d;
        }
    }
    return best;
}

}  // namespace cshor
