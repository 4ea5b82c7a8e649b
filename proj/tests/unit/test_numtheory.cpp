#include <gtest/gtest.h>

#include <algorithm>

#include "cshor/numtheory.hpp"
#include "reference_data.hpp"

namespace cshor {
namespace {

std::uint64_t brute_order(std::uint64_t a, std::uint64_t n) {
    std::uint64_t v = a % n;
    for (std::uint64_t r = 1;; ++r) {
        if (v == 1) {
            return r;
        }
        v = v * a % n;
    }
}

std::uint64_t brute_gcd(std::uint64_t a, std::uint64_t b) {
    for (std::uint64_t d = std::max(a, b); d > 0; --d) {
        if (a % d == 0 && b % d == 0) {
            return d;
        }
    }
    return 0;
}

TEST(Gcd, Examples) {
    EXPECT_EQ(gcd(4, 21), 1u);
    EXPECT_EQ(gcd(0, 15), 15u);
    EXPECT_EQ(gcd(5, 15), 5u);
    EXPECT_THROW(gcd(0, 0), std::invalid_argument);
}

TEST(Gcd, AgreesWithBruteForce) {
    for (std::uint64_t a = 0; a < 60; ++a) {
        for (std::uint64_t b = 1; b < 60; ++b) {
            ASSERT_EQ(gcd(a, b), brute_gcd(a, b)) << a << "," << b;
        }
    }
}

TEST(ModPow, Examples) {
    EXPECT_EQ(mod_pow(4, 0, 21), 1u);
    EXPECT_EQ(mod_pow(4, 2, 21), 16u);
    EXPECT_EQ(mod_pow(4, 3, 33), 31u);
    EXPECT_THROW(mod_pow(2, 3, 1), std::invalid_argument);
}

TEST(ModPow, LargeModulusDoesNotOverflow) {
    std::uint64_t n = (std::uint64_t{1} << 61) - 1;  // prime
    EXPECT_EQ(mod_pow(3, n - 1, n), 1u);
}

TEST(ModPow, PeriodicInExponent) {
    for (std::uint64_t n = 15; n < 100; n += 2) {
        for (std::uint64_t a = 2; a < n; ++a) {
            if (gcd(a, n) != 1) {
                continue;
            }
            std::uint64_t r = multiplicative_order(a, n);
            for (std::uint64_t x = 0; x < 12; ++x) {
                ASSERT_EQ(mod_pow(a, x + r, n), mod_pow(a, x, n));
            }
        }
    }
}

TEST(MultiplicativeOrder, Examples) {
    EXPECT_EQ(multiplicative_order(4, 21), 3u);
    EXPECT_EQ(multiplicative_order(2, 21), 6u);
    EXPECT_EQ(multiplicative_order(4, 33), 5u);
    EXPECT_THROW(multiplicative_order(3, 21), std::invalid_argument);
    EXPECT_THROW(multiplicative_order(1, 21), std::invalid_argument);
    EXPECT_THROW(multiplicative_order(21, 21), std::invalid_argument);
}

TEST(Carmichael, Examples) {
    EXPECT_EQ(carmichael(3, 7), 6u);
    EXPECT_EQ(carmichael(3, 5), 4u);
    EXPECT_EQ(carmichael(7, 11), 30u);
    EXPECT_THROW(carmichael(3, 3), std::invalid_argument);
    EXPECT_THROW(carmichael(2, 7), std::invalid_argument);
    EXPECT_THROW(carmichael(9, 7), std::invalid_argument);
}

TEST(AllowedPeriods, Examples) {
    EXPECT_EQ(allowed_periods(3, 7), (std::vector<std::uint64_t>{2, 3, 6}));
    EXPECT_EQ(allowed_periods(3, 23), (std::vector<std::uint64_t>{2, 11, 22}));
    EXPECT_EQ(allowed_periods(5, 13), (std::vector<std::uint64_t>{2, 3, 4, 6, 12}));
}

TEST(AllowedPeriods, PublishedTableBelow90) {
    auto semiprimes = odd_semiprimes_below(90);
    ASSERT_EQ(semiprimes.size(), refdata::kAllowedPeriods.size());
    for (std::size_t i = 0; i < semiprimes.size(); ++i) {
        const auto& ref = refdata::kAllowedPeriods[i];
        EXPECT_EQ(semiprimes[i].n, ref.n);
        EXPECT_EQ(semiprimes[i].p, ref.p);
        EXPECT_EQ(semiprimes[i].q, ref.q);
        EXPECT_EQ(carmichael(ref.p, ref.q), ref.lambda);
        EXPECT_EQ(allowed_periods(ref.p, ref.q), ref.periods) << "N=" << ref.n;
    }
}

TEST(AllowedPeriods, EveryOrderDividesLambda) {
    for (const auto& sp : odd_semiprimes_below(100)) {
        std::uint64_t lambda = carmichael(sp.p, sp.q);
        auto allowed = allowed_periods(sp.p, sp.q);
        for (const auto& rec : coprime_order_table(sp.n)) {
            EXPECT_EQ(lambda % rec.r, 0u);
            if (rec.r > 1) {
                EXPECT_TRUE(std::binary_search(allowed.begin(), allowed.end(), rec.r));
            }
        }
    }
}

void expect_order_table(std::uint64_t n, const std::vector<refdata::OrderRow>& ref) {
    auto table = coprime_order_table(n);
    ASSERT_EQ(table.size(), ref.size());
    for (std::size_t i = 0; i < ref.size(); ++i) {
        EXPECT_EQ(table[i].a, ref[i].a);
        EXPECT_EQ(table[i].r, ref[i].r) << "a=" << ref[i].a;
    }
}

TEST(CoprimeOrderTable, PublishedN21) { expect_order_table(21, refdata::kOrders21); }
TEST(CoprimeOrderTable, PublishedN33) { expect_order_table(33, refdata::kOrders33); }

TEST(CoprimeOrderTable, N15ContainsBasesTwoAndFour) {
    auto table = coprime_order_table(15);
    EXPECT_NE(std::find(table.begin(), table.end(), OrderRecord{2, 4}), table.end());
    EXPECT_NE(std::find(table.begin(), table.end(), OrderRecord{4, 2}), table.end());
}

TEST(CoprimeOrderTable, AgreesWithBruteForceBelow100) {
    for (std::uint64_t n = 3; n < 100; ++n) {
        for (const auto& rec : coprime_order_table(n)) {
            ASSERT_EQ(rec.r, brute_order(rec.a, n)) << rec.a << " mod " << n;
        }
    }
}

TEST(IsPrimePower, Examples) {
    EXPECT_EQ(is_prime_power(27), (std::pair<std::uint64_t, unsigned>{3, 3}));
    EXPECT_FALSE(is_prime_power(15).has_value());
    EXPECT_EQ(is_prime_power(121), (std::pair<std::uint64_t, unsigned>{11, 2}));
    EXPECT_EQ(is_prime_power(7), (std::pair<std::uint64_t, unsigned>{7, 1}));
    EXPECT_FALSE(is_prime_power(36).has_value());
}

TEST(Semiprime, Validation) {
    EXPECT_EQ(Semiprime::from_n(21).p, 3u);
    EXPECT_EQ(Semiprime::from_n(21).q, 7u);
    EXPECT_THROW(Semiprime::from_n(25), std::invalid_argument);
    EXPECT_THROW(Semiprime::from_n(22), std::invalid_argument);
    EXPECT_THROW(Semiprime::from_n(105), std::invalid_argument);
    EXPECT_EQ(Semiprime::from_factors(7, 3).p, 3u);
}

TEST(ShorPostprocess, Examples) {
    auto r15 = shor_postprocess(15, 2, 4);
    EXPECT_EQ(r15.status, PostProcessStatus::Factors);
    EXPECT_EQ(r15.factors, (std::pair<std::uint64_t, std::uint64_t>{3, 5}));

    auto r21 = shor_postprocess(21, 4, 3);
    EXPECT_EQ(r21.status, PostProcessStatus::Factors);
    EXPECT_EQ(r21.factors, (std::pair<std::uint64_t, std::uint64_t>{3, 7}));

    auto r33 = shor_postprocess(33, 4, 5);
    EXPECT_EQ(r33.status, PostProcessStatus::MinusOneCongruence);
    EXPECT_EQ(r33.half_power, 32u);
    EXPECT_FALSE(r33.factors.has_value());
}

TEST(ShorPostprocess, RejectsWrongOrder) {
    EXPECT_THROW(shor_postprocess(15, 2, 2), std::invalid_argument);
    EXPECT_THROW(shor_postprocess(15, 2, 0), std::invalid_argument);
}

TEST(ShorPostprocess, OddOrderWithoutRoot) {
    for (std::uint64_t n : {21u, 33u, 35u, 39u}) {
        for (const auto& rec : coprime_order_table(n)) {
            auto out = shor_postprocess(n, rec.a, rec.r);
            std::uint64_t root = integer_root(rec.a, 2);
            if (rec.r % 2 == 1 && root * root != rec.a) {
                EXPECT_EQ(out.status, PostProcessStatus::OddOrderNoSquareRoot);
            }
        }
    }
}

TEST(ShorPostprocess, FactorsAreNontrivialBelow100) {
    for (const auto& sp : odd_semiprimes_below(100)) {
        for (const auto& rec : coprime_order_table(sp.n)) {
            auto out = shor_postprocess(sp.n, rec.a, rec.r);
            if (out.status == PostProcessStatus::Factors) {
                ASSERT_TRUE(out.factors.has_value());
                auto [f1, f2] = *out.factors;
                EXPECT_EQ(f1 * f2, sp.n);
                EXPECT_GT(f1, 1u);
                EXPECT_GT(f2, 1u);
            }
        }
    }
}

TEST(ContinuedFraction, Examples) {
    EXPECT_FALSE(continued_fraction_order(0, 256, 15).has_value());
    EXPECT_EQ(continued_fraction_order(85, 256, 15), 3u);
    EXPECT_EQ(continued_fraction_order(64, 256, 15), 4u);
    EXPECT_THROW(continued_fraction_order(1, 100, 15), std::invalid_argument);
}

TEST(ContinuedFraction, RecoversExactMultiples) {
    // k = j M / r with gcd(j, r) = 1 gives r back.
    std::uint64_t m = 1024;
    for (std::uint64_t r : {2u, 4u, 8u, 16u}) {
        for (std::uint64_t j = 1; j < r; j += 2) {
            EXPECT_EQ(continued_fraction_order(j * m / r, m, 31), r);
        }
    }
}

TEST(ConvergentDenominators, KnownExpansion) {
    // 85/256 = [0; 3, 85] -> denominators 1, 3, 256.
    EXPECT_EQ(convergent_denominators(85, 256), (std::vector<std::uint64_t>{1, 3, 256}));
}

}  // namespace
}  // namespace cshor
