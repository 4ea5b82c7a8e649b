#include <gtest/gtest.h>

#include <random>
#include <set>

#include "cshor/circuit.hpp"
#include "cshor/circuit_library.hpp"
#include "reference_data.hpp"

namespace cshor {
namespace {

Control pos(unsigned line) { return {line, Polarity::Positive}; }
Control neg(unsigned line) { return {line, Polarity::Negative}; }

// Independent evaluator over an explicit bit vector.
EvalResult evaluate_bits(const Circuit& c, std::uint64_t x) {
    std::vector<bool> bits(c.width(), false);
    const auto& in = c.input_lines();
    for (std::size_t i = 0; i < in.size(); ++i) {
        bits[in[in.size() - 1 - i]] = (x >> i) & 1;
    }
    for (const auto& g : c.gates()) {
        bits = apply_gate(bits, g);
    }
    EvalResult r{0, 0};
    const auto& out = c.output_lines();
    for (std::size_t i = 0; i < out.size(); ++i) {
        r.y |= std::uint64_t{bits[out[out.size() - 1 - i]]} << i;
    }
    for (std::size_t i = 0; i < in.size(); ++i) {
        r.input_after |= std::uint64_t{bits[in[in.size() - 1 - i]]} << i;
    }
    return r;
}

TEST(ApplyGate, Examples) {
    auto tof = apply_gate({false, true, true}, Gate::toffoli(pos(1), pos(2), 0));
    EXPECT_EQ(tof, (std::vector<bool>{true, true, true}));
    auto cn = apply_gate({false, true}, Gate::cnot(neg(1), 0));
    EXPECT_EQ(cn, (std::vector<bool>{false, true}));
    auto nt = apply_gate({false, false, false}, Gate::not_gate(2));
    EXPECT_EQ(nt, (std::vector<bool>{false, false, true}));
}

TEST(Gate, Validation) {
    EXPECT_THROW(Gate::cnot(pos(1), 1).validate(2), std::invalid_argument);
    EXPECT_THROW(Gate::toffoli(pos(1), neg(1), 0).validate(3), std::invalid_argument);
    EXPECT_THROW(Gate::not_gate(4).validate(3), std::invalid_argument);
    EXPECT_THROW(Gate::cnot(pos(5), 0).validate(3), std::invalid_argument);
    EXPECT_NO_THROW(Gate::toffoli(pos(1), neg(2), 0).validate(3));
    EXPECT_EQ(Gate::toffoli(pos(1), neg(2), 0).kind(), GateKind::Toffoli);
}

TEST(Circuit, RejectsBadRegisters) {
    EXPECT_THROW(Circuit(2, {0}, {0}), std::invalid_argument);
    EXPECT_THROW(Circuit(2, {0}, {2}), std::invalid_argument);
    Circuit c = Circuit::with_registers(1, 1);
    EXPECT_THROW(c.append(Gate::not_gate(2)), std::invalid_argument);
}

TEST(Circuit, LineNamesFollowSignificance) {
    Circuit c = Circuit::with_registers(2, 3);
    EXPECT_EQ(c.line_name(0), "x2");
    EXPECT_EQ(c.line_name(1), "x1");
    EXPECT_EQ(c.line_name(2), "y3");
    EXPECT_EQ(c.line_name(4), "y1");
}

TEST(Evaluate, FigureExamples) {
    auto r = evaluate(figure_circuit(FigureId::F2_15), 3);
    EXPECT_EQ(r.y, 8u);
    EXPECT_EQ(r.input_after, 3u);
    auto p = evaluate(figure_circuit(FigureId::F4_21Partial), 5);
    EXPECT_EQ(p.y, 2u);
    EXPECT_EQ(p.input_after, 5u);
    EXPECT_THROW(evaluate(figure_circuit(FigureId::F2_15), 4), std::invalid_argument);
}

TEST(Evaluate, AgreesWithBitVectorOracle) {
    for (FigureId id : kAllFigures) {
        Circuit c = figure_circuit(id);
        for (std::uint64_t x = 0; x < (std::uint64_t{1} << c.input_lines().size()); ++x) {
            auto a = evaluate(c, x);
            auto b = evaluate_bits(c, x);
            EXPECT_EQ(a.y, b.y) << figure_name(id) << " x=" << x;
            EXPECT_EQ(a.input_after, b.input_after);
        }
    }
}

TEST(Circuit, ForwardThenInverseIsIdentity) {
    std::mt19937_64 rng(5);
    for (FigureId id : kAllFigures) {
        Circuit c = figure_circuit(id);
        Circuit inv = c.inverse();
        for (std::uint64_t s = 0; s < (std::uint64_t{1} << c.width()); ++s) {
            ASSERT_EQ(inv.run(c.run(s)), s);
        }
    }
    // Random circuits too.
    for (int i = 0; i < 50; ++i) {
        Circuit c = Circuit::with_registers(3, 3);
        for (int g = 0; g < 20; ++g) {
            unsigned t = rng() % 6;
            unsigned a = (t + 1 + rng() % 5) % 6;
            unsigned b = (t + 1 + rng() % 5) % 6;
            if (b == a) {
                c.append(Gate::cnot({a, rng() % 2 ? Polarity::Positive : Polarity::Negative}, t));
            } else {
                c.append(Gate::toffoli(pos(a), {b, rng() % 2 ? Polarity::Positive : Polarity::Negative}, t));
            }
        }
        for (std::uint64_t s = 0; s < 64; ++s) {
            ASSERT_EQ(c.inverse().run(c.run(s)), s);
        }
    }
}

TEST(Verify, Examples) {
    EXPECT_TRUE(verify(figure_circuit(FigureId::F2_15), definition_table(FigureId::F2_15)).empty());
    EXPECT_TRUE(verify(figure_circuit(FigureId::F4_21), definition_table(FigureId::F4_21)).empty());
    // Register shapes differ: 2 in / 4 out against 1 in / 3 out.
    EXPECT_THROW(verify(figure_circuit(FigureId::F2_15), definition_table(FigureId::F4_15)), std::invalid_argument);
    // Same shape, wrong function.
    TruthTable wrong(2, 4, {1, 2, 4, 9});
    auto mismatches = verify(figure_circuit(FigureId::F2_15), wrong);
    ASSERT_EQ(mismatches.size(), 1u);
    EXPECT_EQ(mismatches[0].x, 3u);
    EXPECT_EQ(mismatches[0].actual, 8u);
}

TEST(Verify, ReportsUnrestoredInputs) {
    Circuit c = Circuit::with_registers(1, 1, {Gate::cnot(pos(0), 1), Gate::not_gate(0)});
    auto mismatches = verify(c, TruthTable(1, 1, {0, 1}));
    EXPECT_EQ(mismatches.size(), 2u);
}

TEST(Cost, Examples) {
    auto c5 = cost(figure_circuit(FigureId::F4_21));
    EXPECT_EQ(c5.n_toffoli, 2u);
    EXPECT_EQ(c5.n_cnot, 12u);
    EXPECT_EQ(c5.quantum_cost, 24u);
    EXPECT_EQ(c5.inclusive_cost, 24u + c5.n_not);

    auto c6 = cost(figure_circuit(FigureId::F4_21Partial));
    EXPECT_EQ(c6.n_toffoli, 2u);
    EXPECT_EQ(c6.n_cnot, 6u);
    EXPECT_EQ(c6.quantum_cost, 18u);

    EXPECT_EQ(cost(Circuit::with_registers(1, 1)), CostReport{});
}

TEST(Cost, ToffoliWeightFromPublishedTotals) {
    // 2T + 12 = 24, 8T + 5 = 53, 2T + 6 = 18.
    EXPECT_EQ(2 * kToffoliCost + 12, 24u);
    EXPECT_EQ(8 * kToffoliCost + 5, 53u);
    EXPECT_EQ(2 * kToffoliCost + 6, 18u);
}

TEST(Library, CaptionCountsMatch) {
    ASSERT_EQ(refdata::kCaptions.size(), kAllFigures.size());
    for (const auto& cap : refdata::kCaptions) {
        FigureId id = parse_figure(cap.figure);
        auto rep = cost(figure_circuit(id));
        EXPECT_EQ(rep.n_toffoli, cap.n_toffoli) << cap.figure;
        EXPECT_EQ(rep.n_cnot, cap.n_cnot) << cap.figure;
        EXPECT_EQ(figure_info(id).n_toffoli, cap.n_toffoli);
        EXPECT_EQ(figure_info(id).n_cnot, cap.n_cnot);
        EXPECT_EQ(cost(drawn_circuit(id)).n_toffoli, cap.n_toffoli);
        EXPECT_EQ(cost(drawn_circuit(id)).n_cnot, cap.n_cnot);
    }
}

TEST(Library, EveryFigureVerifiesAgainstItsTable) {
    for (FigureId id : kAllFigures) {
        EXPECT_TRUE(verify(figure_circuit(id), reference_table(id)).empty()) << figure_name(id);
    }
}

TEST(Library, ReferenceTablesMatchDefinitionExceptF4_33) {
    for (FigureId id : kAllFigures) {
        if (id == FigureId::F4_33Full) {
            EXPECT_NE(reference_table(id), definition_table(id));
            EXPECT_EQ(reference_table(id), alternate_f4_33_table());
        } else {
            EXPECT_EQ(reference_table(id), definition_table(id)) << figure_name(id);
        }
    }
}

TEST(Library, F4_33CircuitMissesDefinitionOnlyAtThree) {
    auto mismatches = verify(figure_circuit(FigureId::F4_33Full), definition_table(FigureId::F4_33Full));
    std::set<std::uint64_t> xs;
    for (const auto& m : mismatches) {
        xs.insert(m.x);
        EXPECT_EQ(m.actual, 12u);
        EXPECT_EQ(m.expected, 10u);
    }
    // Its repeat at x = 8 lies outside the 3-bit domain.
    EXPECT_EQ(xs, (std::set<std::uint64_t>{3}));
}

TEST(Library, DrawnCircuitsDifferOnlyWhereCorrected) {
    for (FigureId id : kAllFigures) {
        bool corrected = id == FigureId::F4_21Full || id == FigureId::F4_33Full;
        EXPECT_EQ(drawn_circuit(id) != figure_circuit(id), corrected) << figure_name(id);
        EXPECT_EQ(verify(drawn_circuit(id), reference_table(id)).empty(), !corrected) << figure_name(id);
    }
}

TEST(Library, NamesRoundTrip) {
    for (FigureId id : kAllFigures) {
        EXPECT_EQ(parse_figure(figure_name(id)), id);
    }
    EXPECT_THROW(parse_figure("f9_99"), std::invalid_argument);
    EXPECT_EQ(find_figure(4, 21, GKind::Log, CompileLevel::Full), FigureId::F4_21Full);
    EXPECT_FALSE(find_figure(2, 21, GKind::Log, CompileLevel::Full).has_value());
}

TEST(ToPermutation, Examples) {
    auto id = to_permutation(Circuit::with_registers(1, 1));
    EXPECT_EQ(id, (std::vector<std::uint32_t>{0, 1, 2, 3}));

    Circuit one(1, {0}, {});
    one.append(Gate::not_gate(0));
    EXPECT_EQ(to_permutation(one), (std::vector<std::uint32_t>{1, 0}));

    Circuit f4 = figure_circuit(FigureId::F4_15Full);
    auto perm = to_permutation(f4);
    EXPECT_EQ(perm[f4.load(1, 0)], f4.load(1, 1));
    EXPECT_EQ(perm[f4.load(0, 0)], f4.load(0, 0));
}

TEST(ToPermutation, LibraryCircuitsAreBijections) {
    for (FigureId id : kAllFigures) {
        auto perm = to_permutation(figure_circuit(id));
        std::set<std::uint32_t> image(perm.begin(), perm.end());
        EXPECT_EQ(image.size(), perm.size()) << figure_name(id);
    }
    EXPECT_THROW(to_permutation(Circuit::with_registers(11, 10)), std::invalid_argument);
}

TEST(Serialization, CircuitJsonRoundTrip) {
    for (FigureId id : kAllFigures) {
        Circuit c = figure_circuit(id);
        EXPECT_EQ(circuit_from_json(nlohmann::json::parse(to_json(c).dump())), c);
    }
    auto j = to_json(Gate::toffoli(pos(1), neg(2), 4));
    EXPECT_EQ(j.at("kind"), "toffoli");
    EXPECT_EQ(j.at("controls")[1].at("neg"), true);
    j["kind"] = "cnot";
    EXPECT_THROW(gate_from_json(j), std::invalid_argument);
}

TEST(Serialization, RenderGates) {
    Circuit c = Circuit::with_registers(2, 1, {Gate::toffoli(pos(0), neg(1), 2), Gate::not_gate(2)});
    EXPECT_EQ(render_gates(c), "TOF x2 !x1 -> y1\nNOT y1\n");
}

}  // namespace
}  // namespace cshor
