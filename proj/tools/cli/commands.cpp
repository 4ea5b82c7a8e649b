#include "commands.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include <nlohmann/json.hpp>

#include "cshor/circuit.hpp"
#include "cshor/circuit_library.hpp"
#include "cshor/numtheory.hpp"
#include "cshor/qsim.hpp"
#include "cshor/synth.hpp"
#include "cshor/truth_table.hpp"
#include "cshor/version.hpp"
#include "report_table.hpp"

#ifndef CSHOR_DEFAULT_GOLDEN_DIR
#define CSHOR_DEFAULT_GOLDEN_DIR "golden"
#endif

namespace cshor::cli {

namespace {

using nlohmann::json;

struct Output {
    std::string format = "text";
    std::string path;
};

std::string fnv1a64(const std::string& data) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    std::ostringstream s;
    s << "fnv1a64:" << std::hex << std::setw(16) << std::setfill('0') << h;
    return s.str();
}

// Attaches the run manifest; the checksum covers the payload without it.
json with_manifest(json payload, const std::string& command, json params, std::optional<std::uint64_t> seed) {
    std::string checksum = fnv1a64(payload.dump());
    payload["manifest"] = {
        {"command", command},
        {"params", std::move(params)},
        {"seed", seed ? json(*seed) : json(nullptr)},
        {"version", kVersion},
        {"checksums", {{"payload", checksum}}},
    };
    return payload;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        throw CliError(kInvalidInput, "cannot write " + path);
    }
    f << content;
}

// Writes the rendering selected by --format to --output or to `out`.
void emit(std::ostream& out, const Output& o, const json& payload, const std::string& text,
          const std::string& csv) {
    std::string body;
    if (o.format == "json") {
        body = payload.dump(2) + "\n";
    } else if (o.format == "csv") {
        if (csv.empty()) {
            throw CliError(kInvalidInput, "this command has no CSV rendering");
        }
        body = csv;
    } else {
        body = text;
    }
    if (o.path.empty()) {
        out << body;
    } else {
        write_text_file(o.path, body);
    }
}

json read_json_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) {
        throw CliError(kInvalidInput, "cannot open " + path);
    }
    try {
        return json::parse(f);
    } catch (const json::parse_error& e) {
        throw CliError(kInvalidInput, path + ": " + e.what());
    }
}

std::string fixed3(double v) {
    std::ostringstream s;
    s << std::fixed << std::setprecision(3) << (std::abs(v) < 5e-4 ? 0.0 : v);
    return s.str();
}

std::string fixed_complex(const cplx& z) {
    std::ostringstream s;
    double re = std::abs(z.real()) < 5e-4 ? 0.0 : z.real();
    double im = std::abs(z.imag()) < 5e-4 ? 0.0 : z.imag();
    s << std::fixed << std::setprecision(3) << std::showpos << re << im << "i";
    return s.str();
}

// --- tables --------------------------------------------------------------

struct TablesArgs {
    std::string kind;
    std::uint64_t n = 21;
    std::uint64_t max_n = 90;
    unsigned m = 3;
    unsigned k = 3;
    std::string direction = "forward";
    bool diff_paper = false;
    std::string golden_dir = CSHOR_DEFAULT_GOLDEN_DIR;
    std::string out_dir;
};

ProbDist period_distribution(unsigned m, unsigned k, std::uint64_t p, QftDirection dir) {
    return input_probabilities(qft_input(apply_period_map(uniform_input_state(m, k), p), dir));
}

void check_period_registers(unsigned m, unsigned k) {
    if (m == 0 || k < m) {
        throw CliError(kInvalidInput, "period tables need m >= 1 and k >= m");
    }
    if (m + k > kMaxQubits) {
        throw CliError(kInvalidInput, "m + k exceeds " + std::to_string(kMaxQubits) + " qubits");
    }
}

ReportTable build_report_table(const TablesArgs& a) {
    ReportTable t;
    if (a.kind == "orders") {
        try {
            Semiprime::from_n(a.n);
        } catch (const std::invalid_argument& e) {
            throw CliError(kInvalidInput, "N=" + std::to_string(a.n) + " is not an odd semiprime of distinct primes");
        }
        t.name = "orders_" + std::to_string(a.n);
        t.header = {"a", "r"};
        for (const auto& rec : coprime_order_table(a.n)) {
            t.rows.push_back({std::to_string(rec.a), std::to_string(rec.r)});
        }
    } else if (a.kind == "allowed-periods") {
        t.name = "allowed_periods";
        t.header = {"p", "q", "N", "lambda", "allowed_r"};
        for (const auto& s : odd_semiprimes_below(a.max_n)) {
            std::string periods;
            for (auto r : allowed_periods(s.p, s.q)) {
                periods += (periods.empty() ? "" : " ") + std::to_string(r);
            }
            t.rows.push_back({std::to_string(s.p), std::to_string(s.q), std::to_string(s.n),
                              std::to_string(carmichael(s.p, s.q)), periods});
        }
    } else {
        check_period_registers(a.m, a.k);
        auto dir = parse_qft_direction(a.direction);
        std::string suffix = (a.m == 3 && a.k == 3) ? "" : "_m" + std::to_string(a.m) + "_k" + std::to_string(a.k);
        const std::uint64_t periods = std::uint64_t{1} << a.m;
        if (a.kind == "probabilities") {
            t.name = "probabilities" + suffix;
            t.header = {"p"};
            for (std::uint64_t k = 0; k < periods; ++k) {
                t.header.push_back("k" + std::to_string(k));
            }
        } else {
            t.name = "separability" + suffix;
            t.header = {"p", "S"};
        }
        for (std::uint64_t p = 1; p <= periods; ++p) {
            auto dist = period_distribution(a.m, a.k, p, dir);
            std::vector<std::string> row{std::to_string(p)};
            if (a.kind == "probabilities") {
                for (double v : dist.p) {
                    row.push_back(format_number(v));
                }
            } else {
                row.push_back(format_number(separability_index(dist)));
            }
            t.rows.push_back(std::move(row));
        }
    }
    return t;
}

int cmd_tables(const TablesArgs& a, const Output& o, std::ostream& out) {
    ReportTable t = build_report_table(a);
    json params = {{"kind", a.kind},           {"N", a.n},
                   {"max_N", a.max_n},         {"m", a.m},
                   {"k", a.k},                 {"qft_direction", a.direction},
                   {"diff_paper", a.diff_paper}};
    json payload = t.to_json();
    std::string text = "# " + t.name + " (" + std::to_string(t.rows.size()) + " rows)\n" + t.to_text();
    int code = kOk;
    if (a.diff_paper) {
        std::string path = a.golden_dir + "/" + t.name + ".csv";
        if (!std::filesystem::exists(path)) {
            throw CliError(kInvalidInput, "no golden table " + path);
        }
        DiffResult d = diff_against_golden(t, read_golden_csv(path), read_errata(a.golden_dir));
        json mism = json::array();
        std::ostringstream dt;
        dt << "diff-paper " << t.name << ": " << (d.ok ? "ok" : "MISMATCH") << " against " << path;
        if (!d.errata.empty()) {
            dt << " (" << d.errata.size() << " listed erratum cell" << (d.errata.size() == 1 ? "" : "s") << ")";
        }
        dt << "\n";
        if (!d.message.empty()) {
            dt << "  " << d.message << "\n";
        }
        for (const auto& c : d.cells) {
            mism.push_back({{"row", c.row}, {"column", c.column}, {"expected", c.expected}, {"actual", c.actual}});
            dt << "  row " << c.row << " " << c.column << ": expected " << c.expected << ", got " << c.actual
               << "\n";
        }
        json errata = json::array();
        for (const auto& h : d.errata) {
            errata.push_back({{"row", h.erratum.row},
                              {"column", h.erratum.column},
                              {"printed", h.erratum.printed},
                              {"corrected", h.erratum.corrected},
                              {"actual", h.actual},
                              {"note", h.erratum.note}});
            dt << "  erratum row " << h.erratum.row << " " << h.erratum.column << ": golden " << h.erratum.printed
               << ", computed " << h.actual << " (" << h.erratum.note << ")\n";
        }
        payload["diff"] = {{"ok", d.ok},
                           {"golden", path},
                           {"message", d.message},
                           {"mismatches", mism},
                           {"errata", errata}};
        text += dt.str();
        code = d.ok ? kOk : kVerifyFailed;
    }
    payload = with_manifest(payload, "tables", params, std::nullopt);
    if (!a.out_dir.empty()) {
        std::filesystem::create_directories(a.out_dir);
        write_text_file(a.out_dir + "/" + t.name + ".csv", t.to_csv());
        write_text_file(a.out_dir + "/" + t.name + ".json", payload.dump(2) + "\n");
    }
    emit(out, o, payload, text, t.to_csv());
    return code;
}

// --- circuit -------------------------------------------------------------

struct CircuitArgs {
    std::string action;
    std::string id;
    std::string file;
    std::string table;
    bool drawn = false;
    bool diff_paper = false;
};

struct LoadedCircuit {
    Circuit circuit;
    std::optional<FigureId> id;
    std::string label;
};

LoadedCircuit load_circuit(const std::string& id, const std::string& file, bool drawn) {
    if (id.empty() == file.empty()) {
        throw CliError(kInvalidInput, "give exactly one of --id and --file");
    }
    if (!id.empty()) {
        FigureId fid;
        try {
            fid = parse_figure(id);
        } catch (const std::invalid_argument&) {
            throw CliError(kInvalidInput, "unknown circuit id '" + id + "'");
        }
        return {drawn ? drawn_circuit(fid) : figure_circuit(fid), fid, id};
    }
    try {
        return {circuit_from_json(read_json_file(file)), std::nullopt, file};
    } catch (const json::exception& e) {
        throw CliError(kInvalidInput, file + ": " + e.what());
    }
}

json cost_json(const CostReport& c) {
    return {{"n_toffoli", c.n_toffoli},       {"n_cnot", c.n_cnot},
            {"n_not", c.n_not},               {"quantum_cost", c.quantum_cost},
            {"inclusive_cost", c.inclusive_cost}};
}

std::string cost_line(const CostReport& c) {
    return "N_T=" + std::to_string(c.n_toffoli) + " N_CN=" + std::to_string(c.n_cnot) +
           " qcost=" + std::to_string(c.quantum_cost);
}

std::string table_csv(const TruthTable& t) {
    std::string s = "x,y\n";
    for (std::size_t x = 0; x < t.size(); ++x) {
        s += std::to_string(x) + "," + std::to_string(t(x)) + "\n";
    }
    return s;
}

std::string register_summary(const Circuit& c) {
    std::string s;
    for (auto l : c.input_lines()) s += c.line_name(l) + " ";
    s += "|";
    for (auto l : c.output_lines()) s += " " + c.line_name(l);
    return s;
}

int cmd_circuit(const CircuitArgs& a, const Output& o, std::ostream& out) {
    LoadedCircuit lc = load_circuit(a.id, a.file, a.drawn);
    json params = {{"action", a.action}, {"id", a.id},       {"file", a.file},
                   {"table", a.table},   {"drawn", a.drawn}, {"diff_paper", a.diff_paper}};
    CostReport c = cost(lc.circuit);

    if (a.diff_paper) {
        // Caption gate counts plus a full verify against the figure's table.
        if (!lc.id) {
            throw CliError(kInvalidInput, "--diff-paper needs a library --id");
        }
        auto info = figure_info(*lc.id);
        bool counts_ok = c.n_toffoli == info.n_toffoli && c.n_cnot == info.n_cnot;
        auto mism = verify(lc.circuit, reference_table(*lc.id));
        bool ok = counts_ok && mism.empty();
        json payload = {{"circuit", lc.label},
                        {"ok", ok},
                        {"cost", cost_json(c)},
                        {"caption", {{"n_toffoli", info.n_toffoli}, {"n_cnot", info.n_cnot}}},
                        {"mismatching_inputs", mism.size()}};
        std::ostringstream text;
        text << "diff-paper " << lc.label << ": " << (ok ? "ok" : "MISMATCH") << "\n";
        text << "  gate counts " << cost_line(c) << ", caption N_T=" << info.n_toffoli << " N_CN=" << info.n_cnot
             << (counts_ok ? "" : " (differs)") << "\n";
        text << "  truth table: " << (mism.empty() ? "all inputs match" : std::to_string(mism.size()) + " inputs wrong")
             << "\n";
        emit(out, o, with_manifest(payload, "circuit", params, std::nullopt), text.str(), "");
        return ok ? kOk : kVerifyFailed;
    }

    if (a.action == "cost") {
        json payload = {{"circuit", lc.label}, {"cost", cost_json(c)}};
        if (lc.id) {
            auto info = figure_info(*lc.id);
            payload["caption"] = {{"n_toffoli", info.n_toffoli}, {"n_cnot", info.n_cnot}};
        }
        emit(out, o, with_manifest(payload, "circuit", params, std::nullopt), cost_line(c) + "\n",
             "n_toffoli,n_cnot,n_not,quantum_cost\n" + std::to_string(c.n_toffoli) + "," +
                 std::to_string(c.n_cnot) + "," + std::to_string(c.n_not) + "," + std::to_string(c.quantum_cost) +
                 "\n");
        return kOk;
    }

    std::optional<TruthTable> table;
    if (!a.table.empty()) {
        try {
            table = table_from_json(read_json_file(a.table));
        } catch (const json::exception& e) {
            throw CliError(kInvalidInput, a.table + ": " + e.what());
        }
    } else if (lc.id) {
        table = reference_table(*lc.id);
    }

    if (a.action == "show" || a.action == "table") {
        if (a.action == "table" && !table) {
            throw CliError(kInvalidInput, "no table for a circuit file; pass --table");
        }
        json payload = {{"circuit", lc.label}};
        std::string text;
        if (a.action == "show") {
            payload["gates"] = to_json(lc.circuit);
            payload["cost"] = cost_json(c);
            text = lc.label + ": " + std::to_string(lc.circuit.width()) + " lines (" +
                   register_summary(lc.circuit) + ")\n" + render_gates(lc.circuit) + cost_line(c) + "\n";
        }
        if (table) {
            payload["n_in"] = table->n_in();
            payload["n_out"] = table->n_out();
            payload["rows"] = table->rows();
            text += render_table(*table);
        }
        emit(out, o, with_manifest(payload, "circuit", params, std::nullopt), text,
             table ? table_csv(*table) : "");
        return kOk;
    }

    // verify
    if (!table) {
        throw CliError(kInvalidInput, "verify needs --table for a circuit file");
    }
    json payload = {{"circuit", lc.label}};
    std::ostringstream text;
    int code = kOk;
    if (lc.circuit.input_lines().size() != table->n_in() || lc.circuit.output_lines().size() != table->n_out()) {
        std::string msg = "register mismatch: circuit has " + std::to_string(lc.circuit.input_lines().size()) +
                          " inputs / " + std::to_string(lc.circuit.output_lines().size()) +
                          " outputs, table has " + std::to_string(table->n_in()) + " / " +
                          std::to_string(table->n_out());
        payload["ok"] = false;
        payload["error"] = msg;
        text << "verify " << lc.label << ": FAILED\n  " << msg << "\n";
        code = kVerifyFailed;
    } else {
        auto mism = verify(lc.circuit, *table);
        json list = json::array();
        for (const auto& m : mism) {
            list.push_back(
                {{"x", m.x}, {"expected", m.expected}, {"actual", m.actual}, {"input_after", m.input_after}});
        }
        payload["ok"] = mism.empty();
        payload["inputs_checked"] = table->size();
        payload["mismatches"] = list;
        if (mism.empty()) {
            text << "verify " << lc.label << ": ok (" << table->size() << " inputs, inputs restored)\n";
        } else {
            text << "verify " << lc.label << ": FAILED, " << mism.size() << " of " << table->size()
                 << " inputs wrong\n";
            for (const auto& m : mism) {
                text << "  x=" << m.x << " expected=" << m.expected << " actual=" << m.actual
                     << " input_after=" << m.input_after << "\n";
            }
            code = kVerifyFailed;
        }
    }
    std::string csv = "x,expected,actual,input_after\n";
    if (payload.contains("mismatches")) {
        for (const auto& m : payload["mismatches"]) {
            csv += std::to_string(m["x"].get<std::uint64_t>()) + "," +
                   std::to_string(m["expected"].get<std::uint64_t>()) + "," +
                   std::to_string(m["actual"].get<std::uint64_t>()) + "," +
                   std::to_string(m["input_after"].get<std::uint64_t>()) + "\n";
        }
    }
    emit(out, o, with_manifest(payload, "circuit", params, std::nullopt), text.str(), csv);
    return code;
}

// --- synth ---------------------------------------------------------------

struct SynthArgs {
    std::uint64_t a = 0;
    std::uint64_t n = 0;
    std::string compile = "none";
    unsigned n_in = 0;
    unsigned max_cost = SynthesisBudget{}.max_quantum_cost;
    unsigned max_gates = SynthesisBudget{}.max_gates;
    bool no_negative = false;
    bool no_search = false;
    unsigned search_cap = SynthesisBudget{}.search_cost_cap;
    std::uint64_t search_nodes = SynthesisBudget{}.search_node_limit;
};

void check_coprime_base(std::uint64_t a, std::uint64_t n) {
    if (n < 3) {
        throw CliError(kInvalidInput, "N must be at least 3");
    }
    if (a < 2 || a >= n) {
        throw CliError(kInvalidInput, "a must satisfy 1 < a < N");
    }
    if (gcd(a, n) != 1) {
        throw CliError(kInvalidInput, "gcd(a, N) = " + std::to_string(gcd(a, n)) + ", not 1");
    }
}

int cmd_synth(const SynthArgs& a, const Output& o, std::ostream& out) {
    check_coprime_base(a.a, a.n);
    const std::uint64_t r = multiplicative_order(a.a, a.n);
    CompiledFunction cf;
    // Library figure with the same (a, N, strategy), if any. Kept as a flag
    // plus value: GCC 11 misreports optional<enum> reads as uninitialized.
    bool has_figure = false;
    FigureId fig = FigureId::F2_15;
    auto set_figure = [&](std::optional<FigureId> f) {
        has_figure = f.has_value();
        fig = f.value_or(FigureId::F2_15);
    };
    if (a.compile == "full") {
        cf = full_compile(a.a, a.n);
        set_figure(find_figure(a.a, a.n, cf.g.kind, CompileLevel::Full));
    } else {
        GKind kind = parse_g_kind(a.compile);
        CompileLevel level = kind == GKind::None ? CompileLevel::Uncompiled : CompileLevel::Partial;
        set_figure(find_figure(a.a, a.n, kind, level));
        unsigned n_in = a.n_in;
        if (n_in == 0) {
            n_in = has_figure ? definition_table(fig).n_in() : std::max(1u, ceil_log2(r));
        }
        if (n_in > 6) {
            throw CliError(kInvalidInput, "synthesis supports at most 6 input bits");
        }
        try {
            cf = classical_compile(build_modexp_table(a.a, a.n, n_in), a.a, a.n, kind);
        } catch (const std::invalid_argument& e) {
            throw CliError(kInvalidInput, std::string("compile strategy failed: ") + e.what());
        }
        if (a.n_in != 0 && has_figure && definition_table(fig).n_in() != n_in) {
            has_figure = false;
        }
    }

    SynthesisBudget budget;
    budget.max_quantum_cost = a.max_cost;
    budget.max_gates = a.max_gates;
    budget.allow_negative_controls = !a.no_negative;
    budget.exhaustive_fallback = !a.no_search;
    budget.search_cost_cap = a.search_cap;
    budget.search_node_limit = a.search_nodes;
    if (budget.max_quantum_cost == 0 || budget.max_gates == 0) {
        throw CliError(kInvalidInput, "budget bounds must be positive");
    }

    json params = {{"a", a.a},
                   {"N", a.n},
                   {"compile", a.compile},
                   {"n_in", a.n_in},
                   {"max_cost", a.max_cost},
                   {"max_gates", a.max_gates},
                   {"allow_negative_controls", !a.no_negative},
                   {"exhaustive_fallback", !a.no_search},
                   {"search_cost_cap", a.search_cap},
                   {"search_node_limit", a.search_nodes}};

    SynthesisResult res;
    try {
        res = synthesize_detailed(cf.table, budget);
    } catch (const SynthesisBudgetExceeded& e) {
        std::string msg = e.what();
        if (e.best()) {
            msg += " [best: " + cost_line(*e.best()) + "]";
        }
        throw CliError(kBudgetExhausted, msg);
    }
    // Never hand out an unverified circuit.
    if (!verify(res.circuit, cf.table).empty()) {
        throw CliError(kVerifyFailed, "synthesized circuit failed verification");
    }

    json payload = {{"a", a.a},
                    {"N", a.n},
                    {"order", r},
                    {"compile", a.compile},
                    {"level", to_string(cf.level)},
                    {"g", cf.g.describe()},
                    {"table", to_json(cf.table)},
                    {"route", to_string(res.route)},
                    {"verified", true},
                    {"cost", cost_json(res.cost)},
                    {"circuit", to_json(res.circuit)}};
    std::ostringstream text;
    text << "f_{" << a.a << "," << a.n << "}: order " << r << ", compile " << a.compile << " ("
         << to_string(cf.level) << "), g: " << cf.g.describe() << "\n";
    text << "table " << cf.table.n_in() << "-in/" << cf.table.n_out() << "-out:";
    for (auto v : cf.table.rows()) text << " " << v;
    text << "\n" << render_gates(res.circuit);
    text << "route " << to_string(res.route) << ", verified over " << cf.table.size() << " inputs\n";
    text << cost_line(res.cost) << "\n";
    if (has_figure) {
        Circuit ref = figure_circuit(fig);
        CostReport rc = cost(ref);
        long delta = compare_cost(res.cost, rc);
        bool same_table = reference_table(fig) == cf.table;
        payload["reference"] = {{"id", figure_name(fig)},
                                {"cost", cost_json(rc)},
                                {"delta_quantum_cost", delta},
                                {"same_table", same_table}};
        text << "reference " << figure_name(fig) << ": " << cost_line(rc) << ", delta " << std::showpos << delta
             << std::noshowpos << (same_table ? "" : " (reference realizes the alternate table)") << "\n";
    }
    emit(out, o, with_manifest(payload, "synth", params, std::nullopt), text.str(), "");
    return kOk;
}

// --- simulate ------------------------------------------------------------

struct SimulateArgs {
    std::uint64_t p = 3;
    unsigned m = 3;
    unsigned k = 3;
    std::string circuit_id;
    std::string circuit_file;
    double epsilon = 1.0;
    std::uint64_t shots = 0;
    std::uint64_t seed = 0;
    bool rho = false;
    std::string direction = "forward";
};

int cmd_simulate(const SimulateArgs& a, const Output& o, std::ostream& out) {
    NoiseParams noise{a.epsilon};
    try {
        noise.validate();
    } catch (const std::invalid_argument& e) {
        throw CliError(kInvalidInput, e.what());
    }
    auto dir = parse_qft_direction(a.direction);
    StateVector state(0, 0);
    std::string source;
    json params = {{"p", a.p},
                   {"m", a.m},
                   {"k", a.k},
                   {"circuit_id", a.circuit_id},
                   {"circuit_file", a.circuit_file},
                   {"epsilon", a.epsilon},
                   {"shots", a.shots},
                   {"rho", a.rho},
                   {"qft_direction", a.direction}};
    if (!a.circuit_id.empty() || !a.circuit_file.empty()) {
        LoadedCircuit lc = load_circuit(a.circuit_id, a.circuit_file, false);
        const auto& c = lc.circuit;
        unsigned m = static_cast<unsigned>(c.input_lines().size());
        unsigned k = static_cast<unsigned>(c.output_lines().size());
        if (c.width() != m + k || m + k > kMaxQubits) {
            throw CliError(kInvalidInput, "circuit must use only its input and output lines, at most 20 in total");
        }
        state = qft_input(apply_circuit(uniform_input_state(m, k), c), dir);
        source = "circuit " + lc.label;
    } else {
        check_period_registers(a.m, a.k);
        if (a.p == 0 || a.p > (std::uint64_t{1} << a.m)) {
            throw CliError(kInvalidInput, "period must lie in 1..2^m");
        }
        state = qft_input(apply_period_map(uniform_input_state(a.m, a.k), a.p), dir);
        source = "period " + std::to_string(a.p);
    }
    const unsigned m = state.m();
    DensityMatrix rho = reduce_to_input(state);
    ProbDist theory = input_probabilities(rho);
    ProbDist noisy = depolarize(theory, noise);
    const double s_theory = separability_index(theory);
    const double s_noisy = noisy_separability(std::max(s_theory, std::ldexp(1.0, -static_cast<int>(m))), noise, m);

    json payload = {{"source", source},
                    {"m", m},
                    {"k", state.k()},
                    {"qft_direction", a.direction},
                    {"epsilon", a.epsilon},
                    {"theory", theory.p},
                    {"noisy", noisy.p},
                    {"S_theory", s_theory},
                    {"S_noisy", s_noisy}};
    std::optional<ProbDist> sampled;
    std::optional<EpsilonEstimate> est;
    bool no_signal = !(s_theory > std::ldexp(1.0, -static_cast<int>(m)) + 1e-12);
    if (a.shots > 0) {
        sampled = sample(noisy, a.shots, a.seed);
        double s_obs = separability_index(*sampled);
        payload["sampled"] = sampled->p;
        payload["shots"] = a.shots;
        payload["S_observed"] = s_obs;
        if (!no_signal) {
            est = estimate_epsilon(s_theory, s_obs, m);
            payload["epsilon_estimate"] = {{"value", est->epsilon}, {"clamped", est->clamped}};
        } else {
            payload["epsilon_estimate"] = nullptr;
        }
    }
    if (a.rho) {
        payload["rho"] = to_json(depolarize(rho, noise));
    }

    std::ostringstream text;
    text << source << ", m=" << m << " k=" << state.k() << ", qft " << a.direction << ", epsilon " << a.epsilon
         << "\n";
    text << "k  theory  noisy" << (sampled ? "  sampled" : "") << "\n";
    std::ostringstream csv;
    csv << "k,theory,noisy" << (sampled ? ",sampled" : "") << "\n";
    for (std::size_t i = 0; i < theory.size(); ++i) {
        text << i << "  " << fixed3(theory[i]) << "   " << fixed3(noisy[i]);
        csv << i << "," << format_number(theory[i]) << "," << format_number(noisy[i]);
        if (sampled) {
            text << "   " << fixed3((*sampled)[i]);
            csv << "," << format_number((*sampled)[i]);
        }
        text << "\n";
        csv << "\n";
    }
    text << "S_theory=" << format_number(s_theory) << " S_noisy=" << format_number(s_noisy) << "\n";
    if (sampled) {
        text << "S_observed=" << format_number(payload["S_observed"].get<double>()) << " (" << a.shots
             << " shots, seed " << a.seed << ")\n";
        if (est) {
            text << "epsilon_est=" << format_number(est->epsilon) << (est->clamped ? " (clamped)" : "") << "\n";
        } else {
            text << "epsilon_est unavailable: S_theory equals the uniform value\n";
        }
    }
    if (a.rho) {
        DensityMatrix shown = depolarize(rho, noise);
        text << "rho (input register):\n";
        for (std::size_t r = 0; r < shown.dim(); ++r) {
            for (std::size_t c = 0; c < shown.dim(); ++c) {
                text << (c ? " " : "") << fixed_complex(shown(r, c));
            }
            text << "\n";
        }
    }
    emit(out, o, with_manifest(payload, "simulate", params, a.seed), text.str(), csv.str());
    return kOk;
}

// --- factor --------------------------------------------------------------

struct FactorArgs {
    std::uint64_t n = 0;
    std::uint64_t a = 0;
    std::uint64_t shots = 500;
    std::uint64_t seed = 0;
    std::string direction = "forward";
};

struct Attempt {
    std::uint64_t a;
    std::uint64_t seed;
    std::string status;
    std::optional<std::uint64_t> order;
    std::optional<std::pair<std::uint64_t, std::uint64_t>> factors;
    std::optional<std::uint64_t> half_power;
    std::size_t samples_used = 0;
};

Attempt attempt_factor(std::uint64_t n, std::uint64_t a, std::uint64_t shots, std::uint64_t seed, QftDirection dir) {
    Attempt at{a, seed, "", std::nullopt, std::nullopt, std::nullopt, 0};
    if (std::uint64_t g = gcd(a, n); g != 1) {
        at.status = "ClassicalGcd";
        at.factors = std::make_pair(std::min(g, n / g), std::max(g, n / g));
        return at;
    }
    auto run = order_finding_run(a, n, shots, seed, dir);
    at.samples_used = run.samples_used;
    if (!run.order) {
        at.status = "OrderNotRecovered";
        return at;
    }
    at.order = run.order;
    auto pp = shor_postprocess(n, a, *run.order);
    at.status = std::string(to_string(pp.status));
    at.factors = pp.factors;
    at.half_power = pp.half_power;
    return at;
}

json attempt_json(const Attempt& at) {
    json j = {{"a", at.a}, {"seed", at.seed}, {"status", at.status}, {"samples_used", at.samples_used}};
    j["order"] = at.order ? json(*at.order) : json(nullptr);
    j["factors"] = at.factors ? json({at.factors->first, at.factors->second}) : json(nullptr);
    j["half_power"] = at.half_power ? json(*at.half_power) : json(nullptr);
    return j;
}

int cmd_factor(const FactorArgs& a, const Output& o, std::ostream& out) {
    const std::uint64_t n = a.n;
    if (n < 3 || n % 2 == 0) {
        throw CliError(kInvalidInput, "N must be odd and at least 3");
    }
    if (is_prime(n)) {
        throw CliError(kInvalidInput, "N=" + std::to_string(n) + " is prime");
    }
    if (auto pp = is_prime_power(n)) {
        throw CliError(kInvalidInput, "N=" + std::to_string(n) + " is a prime power (" + std::to_string(pp->first) +
                                          "^" + std::to_string(pp->second) + ")");
    }
    if (a.shots == 0) {
        throw CliError(kInvalidInput, "shots must be positive");
    }
    const unsigned m = order_finding_input_qubits(n);
    const unsigned k = ceil_log2(n);
    if (m + k > kMaxQubits) {
        throw CliError(kBudgetExhausted, "order finding for N=" + std::to_string(n) + " needs " +
                                             std::to_string(m + k) + " qubits, limit is " +
                                             std::to_string(kMaxQubits));
    }
    auto dir = parse_qft_direction(a.direction);
    std::vector<Attempt> attempts;
    if (a.a != 0) {
        if (a.a < 2 || a.a >= n) {
            throw CliError(kInvalidInput, "a must satisfy 1 < a < N");
        }
        attempts.push_back(attempt_factor(n, a.a, a.shots, a.seed, dir));
    } else {
        // Scan coprime bases in order; each gets its own derived seed.
        for (std::uint64_t base = 2; base < n; ++base) {
            if (gcd(base, n) != 1) {
                continue;
            }
            attempts.push_back(attempt_factor(n, base, a.shots, a.seed + base, dir));
            if (attempts.back().status == "Factors") {
                break;
            }
        }
    }
    const Attempt& last = attempts.back();
    json params = {{"N", n}, {"a", a.a}, {"shots", a.shots}, {"qft_direction", a.direction}};
    json list = json::array();
    for (const auto& at : attempts) {
        list.push_back(attempt_json(at));
    }
    json payload = {{"N", n}, {"m", m}, {"k", k}, {"attempts", list}, {"outcome", attempt_json(last)}};

    std::ostringstream text;
    text << "N=" << n << " registers m=" << m << " k=" << k << ", " << a.shots << " shots\n";
    for (const auto& at : attempts) {
        text << "a=" << at.a << ": ";
        if (at.order) {
            text << "order " << *at.order << " (" << at.samples_used << " samples), ";
        }
        text << at.status;
        if (at.factors) {
            text << " " << at.factors->first << " x " << at.factors->second;
        }
        if (at.status == "MinusOneCongruence" && at.half_power) {
            text << " (half power " << *at.half_power << " = -1 mod " << n << ")";
        }
        text << "\n";
    }
    emit(out, o, with_manifest(payload, "factor", params, a.seed), text.str(), "");
    return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Compiled Shor circuits: tables, circuits, synthesis, simulation, factoring", "cshor"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kVersion));
    Output output;
    app.add_option("--format", output.format, "Output format")
        ->check(CLI::IsMember({"text", "json", "csv"}))
        ->capture_default_str();
    app.add_option("--output", output.path, "Write the output to this file instead of stdout");

    TablesArgs ta;
    auto* tables = app.add_subcommand("tables", "Reproduce the numeric tables");
    tables->fallthrough();
    tables->add_option("kind", ta.kind, "orders | allowed-periods | probabilities | separability")
        ->required()
        ->check(CLI::IsMember({"orders", "allowed-periods", "probabilities", "separability"}));
    tables->add_option("--N", ta.n, "Modulus for the orders table")->capture_default_str();
    tables->add_option("--max-N", ta.max_n, "Exclusive bound for allowed-periods")->capture_default_str();
    tables->add_option("--m", ta.m, "Input qubits")->capture_default_str();
    tables->add_option("--k", ta.k, "Output qubits")->capture_default_str();
    tables->add_option("--qft-direction", ta.direction)
        ->check(CLI::IsMember({"forward", "inverse"}))
        ->capture_default_str();
    tables->add_flag("--diff-paper", ta.diff_paper, "Compare against the golden file; exit 1 on mismatch");
    tables->add_option("--golden-dir", ta.golden_dir)->capture_default_str();
    tables->add_option("--out-dir", ta.out_dir, "Also write <table>.csv and <table>.json here");

    CircuitArgs ca;
    auto* circuit = app.add_subcommand("circuit", "Inspect, verify or cost a circuit");
    circuit->fallthrough();
    circuit->add_option("action", ca.action, "show | verify | cost | table")
        ->required()
        ->check(CLI::IsMember({"show", "verify", "cost", "table"}));
    circuit->add_option("--id", ca.id, "Library circuit id, e.g. f4_21");
    circuit->add_option("--file", ca.file, "Circuit JSON file");
    circuit->add_option("--table", ca.table, "Truth-table JSON file to verify against");
    circuit->add_flag("--drawn", ca.drawn, "Use the gate list as drawn, before corrections");
    circuit->add_flag("--diff-paper", ca.diff_paper, "Check caption gate counts and the reference truth table");

    SynthArgs sa;
    auto* synth = app.add_subcommand("synth", "Synthesize a compiled modular-exponentiation circuit");
    synth->fallthrough();
    synth->add_option("--a", sa.a, "Base")->required();
    synth->add_option("--N", sa.n, "Modulus")->required();
    synth->add_option("--compile", sa.compile, "none | log | affine | rank | full")
        ->check(CLI::IsMember({"none", "log", "affine", "rank", "full"}))
        ->capture_default_str();
    synth->add_option("--n-in", sa.n_in, "Input bits (default: library figure size, else ceil(log2 r))");
    synth->add_option("--max-cost", sa.max_cost)->capture_default_str();
    synth->add_option("--max-gates", sa.max_gates)->capture_default_str();
    synth->add_flag("--no-negative-controls", sa.no_negative);
    synth->add_flag("--no-search", sa.no_search, "Disable the exhaustive fallback");
    synth->add_option("--search-cap", sa.search_cap)->capture_default_str();
    synth->add_option("--search-nodes", sa.search_nodes)->capture_default_str();

    SimulateArgs sm;
    auto* simulate = app.add_subcommand("simulate", "Simulate the period circuit, QFT and measurement");
    simulate->fallthrough();
    auto* p_opt = simulate->add_option("--p", sm.p, "Period")->capture_default_str();
    simulate->add_option("--m", sm.m)->capture_default_str();
    simulate->add_option("--k", sm.k)->capture_default_str();
    auto* cid = simulate->add_option("--circuit-id", sm.circuit_id, "Use a library circuit instead of a period map");
    auto* cfile = simulate->add_option("--circuit-file", sm.circuit_file);
    cid->excludes(p_opt);
    cfile->excludes(p_opt);
    cid->excludes(cfile);
    simulate->add_option("--epsilon", sm.epsilon, "Depolarizing parameter, 1 = noiseless")->capture_default_str();
    simulate->add_option("--shots", sm.shots)->capture_default_str();
    simulate->add_option("--seed", sm.seed)->capture_default_str();
    simulate->add_flag("--rho", sm.rho, "Also print the reduced density matrix");
    simulate->add_option("--qft-direction", sm.direction)
        ->check(CLI::IsMember({"forward", "inverse"}))
        ->capture_default_str();

    FactorArgs fa;
    auto* factor = app.add_subcommand("factor", "Factor N with simulated order finding");
    factor->fallthrough();
    factor->add_option("--N", fa.n)->required();
    factor->add_option("--a", fa.a, "Base; omitted scans coprime bases in order");
    factor->add_option("--shots", fa.shots)->capture_default_str();
    factor->add_option("--seed", fa.seed)->capture_default_str();
    factor->add_option("--qft-direction", fa.direction)
        ->check(CLI::IsMember({"forward", "inverse"}))
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? kOk : kInvalidInput;
    }

    try {
        if (tables->parsed()) return cmd_tables(ta, output, out);
        if (circuit->parsed()) return cmd_circuit(ca, output, out);
        if (synth->parsed()) return cmd_synth(sa, output, out);
        if (simulate->parsed()) return cmd_simulate(sm, output, out);
        if (factor->parsed()) return cmd_factor(fa, output, out);
    } catch (const CliError& e) {
        err << "error: " << e.what() << "\n";
        return e.code();
    } catch (const SynthesisBudgetExceeded& e) {
        err << "error: " << e.what() << "\n";
        return kBudgetExhausted;
    } catch (const json::exception& e) {
        err << "error: " << e.what() << "\n";
        return kInvalidInput;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return kInvalidInput;
    } catch (const std::out_of_range& e) {
        err << "error: " << e.what() << "\n";
        return kInvalidInput;
    } catch (const std::logic_error& e) {
        err << "internal error: " << e.what() << "\n";
        return kVerifyFailed;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kInvalidInput;
    }
    return kInvalidInput;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    std::vector<const char*> argv{"cshor"};
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }
    return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace cshor::cli
