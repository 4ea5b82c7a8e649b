#include <gtest/gtest.h>

#include <bit>
#include <random>

#include "cshor/circuit_library.hpp"
#include "cshor/synth.hpp"
#include "random_tables.hpp"

namespace cshor {
namespace {

// Pointwise scan of all 2^(n+1) affine functions.
unsigned brute_affine_distance(BoolFn f, unsigned n_in) {
    unsigned best = ~0u;
    for (std::uint32_t mask = 0; mask < (1u << n_in); ++mask) {
        for (int c = 0; c < 2; ++c) {
            unsigned d = 0;
            for (std::uint64_t x = 0; x < (std::uint64_t{1} << n_in); ++x) {
                bool v = (std::popcount(static_cast<std::uint64_t>(mask & x)) & 1) ^ c;
                d += v != ((f >> x) & 1);
            }
            best = std::min(best, d);
        }
    }
    return best;
}

Control pos(unsigned line) { return {line, Polarity::Positive}; }

TEST(AffineForm, EvalAndDescribe) {
    AffineForm f{0b101, true};
    EXPECT_EQ(f.terms(), 2u);
    EXPECT_EQ(f.describe(), "x3^x1^1");
    // x3 ^ x1 ^ 1 over x = 0..7.
    BoolFn expected = 0;
    for (unsigned x = 0; x < 8; ++x) {
        if ((((x >> 2) ^ x) & 1) == 0) {
            expected |= BoolFn{1} << x;
        }
    }
    EXPECT_EQ(f.eval(3), expected);
    EXPECT_EQ(AffineForm{}.describe(), "0");
    EXPECT_EQ(all_points(2), 0xFu);
    EXPECT_EQ(all_points(6), ~BoolFn{0});
}

TEST(AffineDistance, MatchesBruteForce) {
    std::mt19937_64 rng(3);
    for (unsigned n = 1; n <= 6; ++n) {
        for (int i = 0; i < (n <= 4 ? 300 : 40); ++i) {
            BoolFn f = rng() & all_points(n);
            ASSERT_EQ(affine_distance(f, n), brute_affine_distance(f, n)) << "n=" << n;
            AffineForm form = nearest_affine(f, n);
            ASSERT_EQ(static_cast<unsigned>(std::popcount(form.eval(n) ^ f)), affine_distance(f, n));
        }
    }
    EXPECT_THROW(affine_distance(0, 7), std::invalid_argument);
}

TEST(AffineDistance, ExhaustiveForThreeInputs) {
    for (BoolFn f = 0; f < 256; ++f) {
        ASSERT_EQ(affine_distance(f, 3), brute_affine_distance(f, 3));
    }
}

TEST(FitLinear, IdentityTableHasFullRankAndNoMismatches) {
    auto fit = fit_linear(TruthTable(2, 2, {0, 1, 2, 3}));
    EXPECT_EQ(fit.total_mismatches(), 0u);
    EXPECT_EQ(fit.rank, 2u);
    EXPECT_EQ(fit.bits[0].form.mask, 0b01u);
    EXPECT_EQ(fit.bits[1].form.mask, 0b10u);
}

TEST(FitLinear, PeriodThreeNeedsNonlinearFlips) {
    auto fit = fit_linear(definition_table(FigureId::F4_21Full));
    EXPECT_GT(fit.total_mismatches(), 0u);
}

TEST(MultiControlledNot, MatchesTruthOfConjunction) {
    for (unsigned k = 1; k <= 5; ++k) {
        for (unsigned width = k + 1; width <= k + 1 + (k > 2 ? k - 2 : 0); ++width) {
            std::vector<Control> controls;
            for (unsigned i = 0; i < k; ++i) {
                controls.push_back({i, i % 2 ? Polarity::Negative : Polarity::Positive});
            }
            unsigned target = k;
            auto gates = multi_controlled_not(controls, target, width);
            if (k > 2 && width == k + 1) {
                EXPECT_FALSE(gates.has_value());
                continue;
            }
            ASSERT_TRUE(gates.has_value()) << "k=" << k << " width=" << width;
            Circuit c(width, {}, {}, *gates);
            for (std::uint64_t s = 0; s < (std::uint64_t{1} << width); ++s) {
                bool fire = true;
                for (const auto& ctl : controls) {
                    fire = fire && ctl.active(s);
                }
                std::uint64_t expected = fire ? s ^ (std::uint64_t{1} << target) : s;
                ASSERT_EQ(c.run(s), expected) << "k=" << k << " width=" << width << " s=" << s;
            }
        }
    }
}

TEST(MultiControlledNot, OneDirtyAncillaSplit) {
    std::vector<Control> controls = {pos(0), pos(1), pos(2), pos(3)};
    auto gates = multi_controlled_not(controls, 4, 6);
    ASSERT_TRUE(gates.has_value());
    Circuit c(6, {}, {}, *gates);
    for (std::uint64_t s = 0; s < 64; ++s) {
        std::uint64_t expected = (s & 0xF) == 0xF ? s ^ 0x10 : s;
        ASSERT_EQ(c.run(s), expected);
    }
}

TEST(XorFunctionInto, RealizesRandomFunctions) {
    std::mt19937_64 rng(9);
    for (unsigned n = 1; n <= 4; ++n) {
        for (int i = 0; i < 40; ++i) {
            BoolFn fn = rng() & all_points(n);
            unsigned width = n + 2;  // one spare line for cubes of degree > 2
            for (bool allow_neg : {true, false}) {
                auto gates = xor_function_into(fn, n, n, width, allow_neg);
                ASSERT_TRUE(gates.has_value());
                Circuit c(width, {}, {}, *gates);
                for (std::uint64_t x = 0; x < (std::uint64_t{1} << n); ++x) {
                    // Input x occupies lines 0..n-1 with x_n on line 0.
                    std::uint64_t s = 0;
                    for (unsigned b = 0; b < n; ++b) {
                        s |= ((x >> b) & 1) << (n - 1 - b);
                    }
                    std::uint64_t out = c.run(s);
                    ASSERT_EQ((out >> n) & 1, (fn >> x) & 1) << "n=" << n << " x=" << x;
                    ASSERT_EQ(out & ~(std::uint64_t{1} << n), s);
                }
                if (!allow_neg) {
                    for (const auto& g : *gates) {
                        for (const auto& ctl : g.controls) {
                            EXPECT_EQ(ctl.polarity, Polarity::Positive);
                        }
                    }
                }
            }
        }
    }
}

TEST(PlanCascades, RejectsForeignFit) {
    auto fit = fit_linear(TruthTable(2, 2, {0, 1, 2, 0}));
    EXPECT_THROW(plan_cascades(fit, TruthTable(3, 2, {0, 1, 2, 0, 1, 2, 0, 1})), std::invalid_argument);
}

TEST(PlanCascades, EmittedPlanVerifies) {
    for (FigureId id : kAllFigures) {
        auto table = reference_table(id);
        auto plan = plan_cascades(fit_linear(table), table);
        if (!plan.complete) {
            continue;
        }
        Circuit c = emit_plan(plan, table);
        EXPECT_TRUE(verify(c, table).empty()) << figure_name(id);
    }
}

TEST(PlanCascades, FirstToffoliOfPeriodThreeFlipsAQuarter) {
    auto table = definition_table(FigureId::F4_21Full);
    auto plan = plan_cascades(fit_linear(table), table);
    bool saw_first = false;
    for (const auto& step : plan.steps) {
        if (step.kind == PlanStep::Kind::Toffoli && step.level == 1) {
            EXPECT_EQ(std::popcount(step.flips), 1);  // 2^(2-2) entries
            saw_first = true;
        }
    }
    EXPECT_TRUE(saw_first);
}

TEST(Synthesize, LibraryTablesVerifyWithinTwiceReference) {
    for (FigureId id : kAllFigures) {
        auto table = reference_table(id);
        auto result = synthesize_detailed(table);
        EXPECT_TRUE(verify(result.circuit, table).empty()) << figure_name(id);
        auto ref = cost(figure_circuit(id));
        EXPECT_LE(result.cost.quantum_cost, 2 * ref.quantum_cost) << figure_name(id);
        EXPECT_EQ(result.cost, cost(result.circuit));
    }
}

TEST(Synthesize, MatchesReferenceCostOnF4_21) {
    auto table = reference_table(FigureId::F4_21);
    EXPECT_EQ(compare_cost(synthesize(table), figure_circuit(FigureId::F4_21), table), 0);
}

TEST(Synthesize, DefinitionTableOfF4_33) {
    auto table = definition_table(FigureId::F4_33Full);
    EXPECT_TRUE(verify(synthesize(table), table).empty());
}

TEST(Synthesize, RandomPeriodicTables) {
    std::mt19937_64 rng(2024);
    for (int i = 0; i < 200; ++i) {
        auto table = testing::random_periodic_table(rng, 4);
        Circuit c = synthesize(table);
        ASSERT_TRUE(verify(c, table).empty()) << "case " << i;
        ASSERT_EQ(c.input_lines().size(), table.n_in());
    }
}

TEST(Synthesize, RespectsNegativeControlBan) {
    SynthesisBudget budget;
    budget.allow_negative_controls = false;
    for (FigureId id : kAllFigures) {
        auto table = reference_table(id);
        Circuit c = synthesize(table, budget);
        EXPECT_TRUE(verify(c, table).empty());
        for (const auto& g : c.gates()) {
            for (const auto& ctl : g.controls) {
                EXPECT_EQ(ctl.polarity, Polarity::Positive) << figure_name(id);
            }
        }
    }
}

TEST(Synthesize, BudgetExceededCarriesBestCost) {
    SynthesisBudget budget;
    budget.max_quantum_cost = 3;
    budget.exhaustive_fallback = false;
    try {
        synthesize(reference_table(FigureId::F4_21), budget);
        FAIL() << "expected SynthesisBudgetExceeded";
    } catch (const SynthesisBudgetExceeded& e) {
        ASSERT_TRUE(e.best().has_value());
        EXPECT_GT(e.best()->quantum_cost, 3u);
    }
}

TEST(Synthesize, SearchFallbackFindsSmallCircuits) {
    SynthesisBudget budget;
    budget.search_cost_cap = 8;
    budget.search_node_limit = 200'000;
    TruthTable nor(2, 1, {1, 0, 0, 0});
    auto found = search_circuit(nor, budget);
    ASSERT_TRUE(found.has_value());
    EXPECT_TRUE(verify(*found, nor).empty());
    EXPECT_EQ(cost(*found).quantum_cost, 6u);
    EXPECT_EQ(found->gates().size(), 1u);
}

TEST(Synthesize, RejectsWideTables) {
    EXPECT_THROW(synthesize(TruthTable(7, 1, std::vector<std::uint64_t>(128, 0))), std::invalid_argument);
}

TEST(CompareCost, RequiresSameFunction) {
    auto t = reference_table(FigureId::F2_15);
    EXPECT_THROW(compare_cost(figure_circuit(FigureId::F2_15Full), figure_circuit(FigureId::F2_15), t),
                 std::invalid_argument);
    CostReport a{1, 2, 0, 8, 8};
    CostReport b{0, 3, 0, 3, 3};
    EXPECT_EQ(compare_cost(a, b), 5);
}

}  // namespace
}  // namespace cshor
