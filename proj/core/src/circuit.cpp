#include "cshor/circuit.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace cshor {

std::string to_string(GateKind kind) {
    switch (kind) {
        case GateKind::Not:
            return "not";
        case GateKind::Cnot:
            return "cnot";
        case GateKind::Toffoli:
            return "toffoli";
    }
    return "?";
}

Gate Gate::not_gate(unsigned target) { return Gate{{}, target}; }

Gate Gate::cnot(Control control, unsigned target) { return Gate{{control}, target}; }

Gate Gate::toffoli(Control c1, Control c2, unsigned target) { return Gate{{c1, c2}, target}; }

GateKind Gate::kind() const {
    switch (controls.size()) {
        case 0:
            return GateKind::Not;
        case 1:
            return GateKind::Cnot;
        case 2:
            return GateKind::Toffoli;
        default:
            throw std::invalid_argument("gates carry at most two controls");
    }
}

void Gate::validate(unsigned width) const {
    kind();
    if (target >= width) {
        throw std::invalid_argument("gate target outside circuit");
    }
    for (std::size_t i = 0; i < controls.size(); ++i) {
        if (controls[i].line >= width) {
            throw std::invalid_argument("gate control outside circuit");
        }
        if (controls[i].line == target) {
            throw std::invalid_argument("gate target coincides with a control");
        }
        for (std::size_t j = 0; j < i; ++j) {
            if (controls[j].line == controls[i].line) {
                throw std::invalid_argument("gate repeats a control line");
            }
        }
    }
}

std::vector<bool> apply_gate(std::vector<bool> bits, const Gate& gate) {
    for (const auto& c : gate.controls) {
        bool bit = bits.at(c.line);
        if (bit != (c.polarity == Polarity::Positive)) {
            return bits;
        }
    }
    bits.at(gate.target) = !bits.at(gate.target);
    return bits;
}

Circuit::Circuit(unsigned width, std::vector<unsigned> input_lines, std::vector<unsigned> output_lines,
                 std::vector<Gate> gates)
    : width_(width), input_lines_(std::move(input_lines)), output_lines_(std::move(output_lines)) {
    if (width > 63) {
        throw std::invalid_argument("circuit wider than 63 lines");
    }
    std::vector<bool> used(width, false);
    for (const auto* lines : {&input_lines_, &output_lines_}) {
        for (unsigned line : *lines) {
            if (line >= width) {
                throw std::invalid_argument("register line outside circuit");
            }
            if (used[line]) {
                throw std::invalid_argument("register lines must be distinct");
            }
            used[line] = true;
        }
    }
    append(gates);
}

Circuit Circuit::with_registers(unsigned n_in, unsigned n_out, std::vector<Gate> gates) {
    std::vector<unsigned> inputs(n_in);
    std::vector<unsigned> outputs(n_out);
    for (unsigned i = 0; i < n_in; ++i) {
        inputs[i] = i;
    }
    for (unsigned i = 0; i < n_out; ++i) {
        outputs[i] = n_in + i;
    }
    return Circuit(n_in + n_out, std::move(inputs), std::move(outputs), std::move(gates));
}

void Circuit::append(Gate gate) {
    gate.validate(width_);
    gates_.push_back(std::move(gate));
}

void Circuit::append(const std::vector<Gate>& gates) {
    for (const auto& g : gates) {
        append(g);
    }
}

Circuit Circuit::inverse() const {
    Circuit out = *this;
    std::reverse(out.gates_.begin(), out.gates_.end());
    return out;
}

std::string Circuit::line_name(unsigned line) const {
    for (std::size_t i = 0; i < input_lines_.size(); ++i) {
        if (input_lines_[i] == line) {
            return "x" + std::to_string(input_lines_.size() - i);
        }
    }
    for (std::size_t i = 0; i < output_lines_.size(); ++i) {
        if (output_lines_[i] == line) {
            return "y" + std::to_string(output_lines_.size() - i);
        }
    }
    return "a" + std::to_string(line);
}

namespace {

std::uint64_t scatter(const std::vector<unsigned>& lines, std::uint64_t value) {
    std::uint64_t state = 0;
    const std::size_t n = lines.size();
    for (std::size_t i = 0; i < n; ++i) {
        if ((value >> (n - 1 - i)) & 1) {
            state |= std::uint64_t{1} << lines[i];
        }
    }
    return state;
}

std::uint64_t gather(const std::vector<unsigned>& lines, std::uint64_t state) {
    std::uint64_t value = 0;
    for (unsigned line : lines) {
        value = (value << 1) | ((state >> line) & 1);
    }
    return value;
}

}  // namespace

std::uint64_t Circuit::load(std::uint64_t x, std::uint64_t y) const {
    return scatter(input_lines_, x) | scatter(output_lines_, y);
}

std::uint64_t Circuit::read_inputs(std::uint64_t state) const { return gather(input_lines_, state); }

std::uint64_t Circuit::read_outputs(std::uint64_t state) const { return gather(output_lines_, state); }

std::uint64_t Circuit::run(std::uint64_t state) const {
    for (const auto& g : gates_) {
        state = g.apply(state);
    }
    return state;
}

EvalResult evaluate(const Circuit& circuit, std::uint64_t x) {
    if (x >> circuit.input_lines().size()) {
        throw std::invalid_argument("input value wider than the input register");
    }
    std::uint64_t state = circuit.run(circuit.load(x));
    return {circuit.read_outputs(state), circuit.read_inputs(state)};
}

std::vector<Mismatch> verify(const Circuit& circuit, const TruthTable& table) {
    if (circuit.input_lines().size() != table.n_in() || circuit.output_lines().size() != table.n_out()) {
        throw std::invalid_argument("circuit registers (" + std::to_string(circuit.input_lines().size()) + " in, " +
                                    std::to_string(circuit.output_lines().size()) + " out) do not match table (" +
                                    std::to_string(table.n_in()) + " in, " + std::to_string(table.n_out()) +
                                    " out)");
    }
    std::vector<Mismatch> out;
    for (std::uint64_t x = 0; x < table.size(); ++x) {
        EvalResult r = evaluate(circuit, x);
        if (r.y != table(x) || r.input_after != x) {
            out.push_back({x, table(x), r.y, r.input_after});
        }
    }
    return out;
}

CostReport cost(const Circuit& circuit) {
    CostReport report;
    for (const auto& g : circuit.gates()) {
        switch (g.kind()) {
            case GateKind::Not:
                ++report.n_not;
                break;
            case GateKind::Cnot:
                ++report.n_cnot;
                break;
            case GateKind::Toffoli:
                ++report.n_toffoli;
                break;
        }
    }
    report.quantum_cost = kToffoliCost * report.n_toffoli + report.n_cnot;
    report.inclusive_cost = report.quantum_cost + report.n_not;
    return report;
}

std::vector<std::uint32_t> to_permutation(const Circuit& circuit) {
    if (circuit.width() > 20) {
        throw std::invalid_argument("to_permutation supports at most 20 lines");
    }
    std::vector<std::uint32_t> perm(std::size_t{1} << circuit.width());
    for (std::size_t s = 0; s < perm.size(); ++s) {
        perm[s] = static_cast<std::uint32_t>(circuit.run(s));
    }
    return perm;
}

nlohmann::json to_json(const Gate& gate) {
    nlohmann::json controls = nlohmann::json::array();
    for (const auto& c : gate.controls) {
        controls.push_back({{"line", c.line}, {"neg", c.polarity == Polarity::Negative}});
    }
    return {{"kind", to_string(gate.kind())}, {"controls", controls}, {"target", gate.target}};
}

Gate gate_from_json(const nlohmann::json& j) {
    Gate g;
    g.target = j.at("target").get<unsigned>();
    for (const auto& c : j.at("controls")) {
        g.controls.push_back(
            {c.at("line").get<unsigned>(), c.value("neg", false) ? Polarity::Negative : Polarity::Positive});
    }
    if (j.contains("kind") && j.at("kind").get<std::string>() != to_string(g.kind())) {
        throw std::invalid_argument("gate kind '" + j.at("kind").get<std::string>() +
                                    "' does not match its control count");
    }
    return g;
}

nlohmann::json to_json(const Circuit& circuit) {
    nlohmann::json gates = nlohmann::json::array();
    for (const auto& g : circuit.gates()) {
        gates.push_back(to_json(g));
    }
    return {{"width", circuit.width()},
            {"input_lines", circuit.input_lines()},
            {"output_lines", circuit.output_lines()},
            {"gates", gates}};
}

Circuit circuit_from_json(const nlohmann::json& j) {
    std::vector<Gate> gates;
    for (const auto& g : j.at("gates")) {
        gates.push_back(gate_from_json(g));
    }
    return Circuit(j.at("width").get<unsigned>(), j.at("input_lines").get<std::vector<unsigned>>(),
                   j.at("output_lines").get<std::vector<unsigned>>(), std::move(gates));
}

std::string render_gates(const Circuit& circuit) {
    std::ostringstream out;
    for (const auto& g : circuit.gates()) {
        switch (g.kind()) {
            case GateKind::Not:
                out << "NOT";
                break;
            case GateKind::Cnot:
                out << "CNOT";
                break;
            case GateKind::Toffoli:
                out << "TOF";
                break;
        }
        for (const auto& c : g.controls) {
            out << ' ' << (c.polarity == Polarity::Negative ? "!" : "") << circuit.line_name(c.line);
        }
        out << (g.controls.empty() ? " " : " -> ") << circuit.line_name(g.target) << '\n';
    }
    return out.str();
}

}  // namespace cshor
