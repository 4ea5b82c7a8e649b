#include "cshor/synth.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <limits>
#include <map>
#include <tuple>

namespace cshor {

namespace {

constexpr unsigned kMaxInputs = 6;

BoolFn var_fn(unsigned i, unsigned n_in) {
    BoolFn f = 0;
    for (std::uint64_t x = 0; x < (std::uint64_t{1} << n_in); ++x) {
        if ((x >> i) & 1) {
            f |= BoolFn{1} << x;
        }
    }
    return f;
}

struct AffineFit {
    AffineForm form;
    unsigned distance = 0;
};

// Walsh spectrum of f gives every affine distance at once:
// d(f, a.x) = (2^n - W(a)) / 2 and d(f, a.x ^ 1) = (2^n + W(a)) / 2.
AffineFit affine_fit_direct(BoolFn f, unsigned n_in) {
    const unsigned points = 1u << n_in;
    std::array<int, 64> w{};
    for (unsigned x = 0; x < points; ++x) {
        w[x] = ((f >> x) & 1) ? -1 : 1;
    }
    for (unsigned len = 1; len < points; len <<= 1) {
        for (unsigned i = 0; i < points; i += 2 * len) {
            for (unsigned j = i; j < i + len; ++j) {
                int u = w[j];
                int v = w[j + len];
                w[j] = u + v;
                w[j + len] = u - v;
            }
        }
    }
    AffineFit best;
    auto key = std::make_tuple(std::numeric_limits<unsigned>::max(), 0u, 0u, false);
    for (std::uint32_t mask = 0; mask < points; ++mask) {
        for (bool constant : {false, true}) {
            int signed_w = constant ? -w[mask] : w[mask];
            auto dist = static_cast<unsigned>((static_cast<int>(points) - signed_w) / 2);
            auto k = std::make_tuple(dist, static_cast<unsigned>(std::popcount(mask)) + unsigned(constant), mask,
                                     constant);
            if (k < key) {
                key = k;
                best = {AffineForm{mask, constant}, dist};
            }
        }
    }
    return best;
}

// Exhaustive table for n_in <= 4, where every function fits in 16 bits.
AffineFit affine_fit(BoolFn f, unsigned n_in) {
    constexpr unsigned kTabulated = 4;
    if (n_in > kTabulated) {
        return affine_fit_direct(f, n_in);
    }
    static const auto tables = [] {
        std::array<std::vector<AffineFit>, kTabulated + 1> out;
        for (unsigned n = 0; n <= kTabulated; ++n) {
            const std::uint64_t count = std::uint64_t{1} << (1u << n);
            out[n].reserve(count);
            for (std::uint64_t g = 0; g < count; ++g) {
                out[n].push_back(affine_fit_direct(g, n));
            }
        }
        return out;
    }();
    return tables[n_in][f];
}

unsigned popcount(BoolFn f) { return static_cast<unsigned>(std::popcount(f)); }

unsigned input_line(unsigned var, unsigned n_in) { return n_in - 1 - var; }

unsigned output_line(unsigned bit, unsigned n_in, unsigned n_out) { return n_in + (n_out - 1 - bit); }

Control control_for(unsigned line, bool negated) { return {line, negated ? Polarity::Negative : Polarity::Positive}; }

bool gates_commute(const Gate& a, const Gate& b) {
    for (const auto& c : a.controls) {
        if (c.line == b.target) {
            return false;
        }
    }
    for (const auto& c : b.controls) {
        if (c.line == a.target) {
            return false;
        }
    }
    return true;
}

// Removes pairs of identical gates separated only by gates commuting with them.
std::vector<Gate> cancel_pairs(std::vector<Gate> gates) {
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t i = 0; i < gates.size() && !changed; ++i) {
            for (std::size_t j = i + 1; j < gates.size(); ++j) {
                if (gates[j] == gates[i]) {
                    gates.erase(gates.begin() + static_cast<std::ptrdiff_t>(j));
                    gates.erase(gates.begin() + static_cast<std::ptrdiff_t>(i));
                    changed = true;
                    break;
                }
                if (!gates_commute(gates[i], gates[j])) {
                    break;
                }
            }
        }
    }
    return gates;
}

// CNOTs that leave `form` on one of its own input lines, and the undo list.
struct Borrow {
    unsigned line = 0;
    bool negated = false;
    std::vector<Gate> compute;
};

Borrow borrow_on(const AffineForm& form, unsigned var, unsigned n_in) {
    Borrow b;
    b.line = input_line(var, n_in);
    b.negated = form.constant;
    for (unsigned v = n_in; v-- > 0;) {
        if (v != var && ((form.mask >> v) & 1)) {
            b.compute.push_back(Gate::cnot({input_line(v, n_in), Polarity::Positive}, b.line));
        }
    }
    return b;
}

unsigned lowest_var(std::uint32_t mask) { return static_cast<unsigned>(std::countr_zero(mask)); }

// Places two affine forms on distinct input lines, or reports that the
// chosen lines clash. Returns the pair with `first_built` telling which
// compute list runs first.
struct PairPlacement {
    Borrow a;
    Borrow b;
    bool a_first = true;
};

std::optional<PairPlacement> place_pair(const AffineForm& fa, const AffineForm& fb, unsigned n_in) {
    for (unsigned i = 0; i < n_in; ++i) {
        if (!((fa.mask >> i) & 1)) {
            continue;
        }
        for (unsigned k = 0; k < n_in; ++k) {
            if (k == i || !((fb.mask >> k) & 1)) {
                continue;
            }
            bool a_first_ok = fa.terms() == 1 || !((fb.mask >> i) & 1);
            bool b_first_ok = fb.terms() == 1 || !((fa.mask >> k) & 1);
            if (a_first_ok || b_first_ok) {
                return PairPlacement{borrow_on(fa, i, n_in), borrow_on(fb, k, n_in), a_first_ok};
            }
        }
    }
    return std::nullopt;
}

unsigned borrow_cost(const AffineForm& f) { return 2 * (f.terms() - 1); }

// --- planner -------------------------------------------------------------

struct Level1Entry {
    BoolFn flips;
    AffineForm a;
    AffineForm b;
    unsigned cost;
    unsigned negs;
};

// Cheapest realization for every flip set reachable by a Toffoli on two
// affine controls. Independent of the table, so built once per n.
std::vector<Level1Entry> level1_catalog(unsigned n_in, bool allow_negative) {
    std::vector<AffineForm> pool;
    for (std::uint32_t mask = 1; mask < (1u << n_in); ++mask) {
        pool.push_back({mask, false});
        if (allow_negative) {
            pool.push_back({mask, true});
        }
    }
    std::map<BoolFn, Level1Entry> best;
    for (std::size_t i = 0; i < pool.size(); ++i) {
        for (std::size_t j = i + 1; j < pool.size(); ++j) {
            const auto& fa = pool[i];
            const auto& fb = pool[j];
            if (fa.mask == fb.mask || !place_pair(fa, fb, n_in)) {
                continue;
            }
            BoolFn flips = fa.eval(n_in) & fb.eval(n_in);
            Level1Entry e{flips, fa, fb, kToffoliCost + borrow_cost(fa) + borrow_cost(fb),
                          unsigned(fa.constant) + unsigned(fb.constant)};
            auto it = best.find(flips);
            if (it == best.end() || std::tie(e.cost, e.negs) < std::tie(it->second.cost, it->second.negs)) {
                best[flips] = e;
            }
        }
    }
    std::vector<Level1Entry> out;
    out.reserve(best.size());
    for (auto& [flips, e] : best) {
        out.push_back(e);
    }
    return out;
}

const std::vector<Level1Entry>& cached_catalog(unsigned n_in, bool allow_negative) {
    static const auto catalogs = [] {
        std::array<std::array<std::vector<Level1Entry>, 2>, kMaxInputs + 1> out;
        for (unsigned n = 2; n <= kMaxInputs; ++n) {
            out[n][0] = level1_catalog(n, false);
            out[n][1] = level1_catalog(n, true);
        }
        return out;
    }();
    return catalogs.at(n_in).at(allow_negative ? 1 : 0);
}

struct Tip {
    unsigned line;
    BoolFn flips;
    unsigned level;
    int cascade;
};

struct PlannerState {
    std::vector<BoolFn> content;
    std::vector<unsigned> distance;
    // CNOT/NOT count of the closing affine stage per output.
    std::vector<unsigned> tail;
    std::optional<Tip> tip;
    int next_cascade = 0;
};

struct Move {
    PlanStep step;
    unsigned cost = 0;
    unsigned negs = 0;
};

class Planner {
   public:
    Planner(const TruthTable& table, const SynthesisBudget& budget)
        : n_in_(table.n_in()), n_out_(table.n_out()), allow_negative_(budget.allow_negative_controls) {
        for (unsigned j = 0; j < n_out_; ++j) {
            target_.push_back(table.output_bit_mask(j));
        }
        for (std::uint32_t mask = 1; mask < (1u << n_in_); ++mask) {
            pool_.push_back({mask, false});
            if (allow_negative_) {
                pool_.push_back({mask, true});
            }
        }
    }

    PlannerState initial() const {
        PlannerState s;
        s.content.assign(n_out_, 0);
        for (unsigned j = 0; j < n_out_; ++j) {
            s.distance.push_back(affine_distance(target_[j], n_in_));
            s.tail.push_back(tail_cost(target_[j]));
        }
        return s;
    }

    unsigned tail_cost(BoolFn residual) const {
        AffineForm f = nearest_affine(residual, n_in_);
        return f.terms() + unsigned(f.constant);
    }

    unsigned finish(const PlannerState& s) const {
        unsigned t = 0;
        for (auto c : s.tail) {
            t += c;
        }
        return t;
    }

    unsigned total(const PlannerState& s) const {
        unsigned t = 0;
        for (auto d : s.distance) {
            t += d;
        }
        return t;
    }

    std::vector<Move> moves(const PlannerState& s) const {
        std::vector<Move> out;
        if (n_in_ >= 2) {
            for (const auto& e : cached_catalog(n_in_, allow_negative_)) {
                for (unsigned j = 0; j < n_out_; ++j) {
                    Move m;
                    m.step.kind = PlanStep::Kind::Toffoli;
                    m.step.c1 = ControlSource::affine(e.a);
                    m.step.c2 = ControlSource::affine(e.b);
                    m.step.target = j;
                    m.step.flips = e.flips;
                    m.step.level = 1;
                    m.cost = e.cost;
                    m.negs = e.negs;
                    out.push_back(m);
                }
            }
        }
        append_continuations(s, out);
        append_copies(s, std::nullopt, out);
        return out;
    }

    void append_continuations(const PlannerState& s, std::vector<Move>& out) const {
        if (!s.tip || s.tip->level + 1 > n_in_ - 1) {
            return;
        }
        BoolFn tip_content = s.content[s.tip->line];
        unsigned want = popcount(s.tip->flips) / 2;
        if (want == 0) {
            return;
        }
        std::map<BoolFn, std::pair<AffineForm, unsigned>> best;
        for (const auto& f : pool_) {
            BoolFn flips = tip_content & f.eval(n_in_);
            if (popcount(flips) != want) {
                continue;
            }
            unsigned c = kToffoliCost + borrow_cost(f);
            auto it = best.find(flips);
            if (it == best.end() || c < it->second.second ||
                (c == it->second.second && f.constant < it->second.first.constant)) {
                best[flips] = {f, c};
            }
        }
        for (auto& [flips, fc] : best) {
            for (unsigned j = 0; j < n_out_; ++j) {
                if (j == s.tip->line) {
                    continue;
                }
                Move m;
                m.step.kind = PlanStep::Kind::Toffoli;
                m.step.c1 = ControlSource::line(s.tip->line);
                m.step.c2 = ControlSource::affine(fc.first);
                m.step.target = j;
                m.step.flips = flips;
                m.step.level = s.tip->level + 1;
                m.cost = fc.second;
                m.negs = unsigned(fc.first.constant);
                out.push_back(m);
            }
        }
    }

    void append_copies(const PlannerState& s, std::optional<unsigned> only_source, std::vector<Move>& out) const {
        for (unsigned k = 0; k < n_out_; ++k) {
            if (only_source && *only_source != k) {
                continue;
            }
            if (s.content[k] == 0 || affine_distance(s.content[k], n_in_) == 0) {
                continue;
            }
            for (unsigned j = 0; j < n_out_; ++j) {
                if (j == k) {
                    continue;
                }
                Move m;
                m.step.kind = PlanStep::Kind::Copy;
                m.step.source = k;
                m.step.target = j;
                m.step.flips = s.content[k];
                m.cost = 1;
                out.push_back(m);
            }
        }
    }

    void append_copies_into(const PlannerState& s, unsigned target, std::vector<Move>& out) const {
        std::vector<Move> all;
        append_copies(s, std::nullopt, all);
        for (auto& m : all) {
            if (m.step.target == target) {
                out.push_back(m);
            }
        }
    }

    PlannerState apply(const PlannerState& s, Move& m) const {
        PlannerState n = s;
        unsigned j = m.step.target;
        n.content[j] ^= m.step.flips;
        AffineFit fit = affine_fit(n.content[j] ^ target_[j], n_in_);
        n.distance[j] = fit.distance;
        n.tail[j] = fit.form.terms() + unsigned(fit.form.constant);
        if (m.step.kind == PlanStep::Kind::Toffoli) {
            if (m.step.level == 1) {
                m.step.cascade = n.next_cascade++;
            } else {
                m.step.cascade = s.tip->cascade;
            }
            n.tip = Tip{j, m.step.flips, m.step.level, m.step.cascade};
        } else if (n.tip && n.tip->line == j) {
            n.tip.reset();
        }
        return n;
    }

    unsigned n_in() const { return n_in_; }
    unsigned n_out() const { return n_out_; }
    const std::vector<BoolFn>& target() const { return target_; }

   private:
    unsigned n_in_;
    unsigned n_out_;
    bool allow_negative_;
    std::vector<BoolFn> target_;
    std::vector<AffineForm> pool_;
};

// Ordering key: larger gain first, then cheaper (gate cost plus the affine
// stage still owed), then fewer negated controls.
struct Rank {
    unsigned gain = 0;
    unsigned cost = std::numeric_limits<unsigned>::max();
    unsigned negs = std::numeric_limits<unsigned>::max();

    bool better_than(const Rank& o) const {
        if (gain != o.gain) return gain > o.gain;
        if (cost != o.cost) return cost < o.cost;
        return negs < o.negs;
    }
};

// --- emission ------------------------------------------------------------

void emit_toffoli_step(const PlanStep& step, unsigned n_in, unsigned n_out, std::vector<Gate>& gates) {
    unsigned target = output_line(step.target, n_in, n_out);
    if (step.c1.kind == ControlSource::Kind::OutputLine) {
        const AffineForm& fb = step.c2.form;
        Borrow b = borrow_on(fb, lowest_var(fb.mask), n_in);
        gates.insert(gates.end(), b.compute.begin(), b.compute.end());
        gates.push_back(Gate::toffoli({output_line(step.c1.output, n_in, n_out), Polarity::Positive},
                                      control_for(b.line, b.negated), target));
        gates.insert(gates.end(), b.compute.rbegin(), b.compute.rend());
        return;
    }
    auto placement = place_pair(step.c1.form, step.c2.form, n_in);
    if (!placement) {
        throw std::logic_error("plan step has no line placement");
    }
    const Borrow& first = placement->a_first ? placement->a : placement->b;
    const Borrow& second = placement->a_first ? placement->b : placement->a;
    gates.insert(gates.end(), first.compute.begin(), first.compute.end());
    gates.insert(gates.end(), second.compute.begin(), second.compute.end());
    gates.push_back(Gate::toffoli(control_for(placement->a.line, placement->a.negated),
                                  control_for(placement->b.line, placement->b.negated), target));
    gates.insert(gates.end(), second.compute.rbegin(), second.compute.rend());
    gates.insert(gates.end(), first.compute.rbegin(), first.compute.rend());
}

std::vector<Gate> emit_steps(const CascadePlan& plan) {
    std::vector<Gate> gates;
    for (const auto& step : plan.steps) {
        if (step.kind == PlanStep::Kind::Copy) {
            gates.push_back(Gate::cnot({output_line(step.source, plan.n_in, plan.n_out), Polarity::Positive},
                                       output_line(step.target, plan.n_in, plan.n_out)));
        } else {
            emit_toffoli_step(step, plan.n_in, plan.n_out, gates);
        }
    }
    return gates;
}

std::vector<Gate> emit_affine(const AffineForm& form, unsigned n_in, unsigned line) {
    std::vector<Gate> gates;
    for (unsigned v = n_in; v-- > 0;) {
        if ((form.mask >> v) & 1) {
            gates.push_back(Gate::cnot({input_line(v, n_in), Polarity::Positive}, line));
        }
    }
    if (form.constant) {
        gates.push_back(Gate::not_gate(line));
    }
    return gates;
}

// Line contents (as functions of x) after the gates run from the standard
// initial state.
std::vector<BoolFn> simulate_contents(const std::vector<Gate>& gates, unsigned n_in, unsigned width) {
    std::vector<BoolFn> lines(width, 0);
    for (unsigned v = 0; v < n_in; ++v) {
        lines[input_line(v, n_in)] = var_fn(v, n_in);
    }
    BoolFn all = all_points(n_in);
    for (const auto& g : gates) {
        BoolFn active = all;
        for (const auto& c : g.controls) {
            active &= c.polarity == Polarity::Positive ? lines[c.line] : ~lines[c.line] & all;
        }
        lines[g.target] ^= active;
    }
    return lines;
}

struct Candidate {
    std::vector<Gate> gates;
    SynthesisRoute route;
};

// Finishes every output with an affine stage, or a cube expansion when the
// remaining difference is not affine.
std::optional<std::vector<Gate>> finish_outputs(std::vector<Gate> gates, const TruthTable& table,
                                                bool allow_negative, bool& used_cubes) {
    unsigned n_in = table.n_in();
    unsigned n_out = table.n_out();
    unsigned width = n_in + n_out;
    auto contents = simulate_contents(gates, n_in, width);
    used_cubes = false;
    for (unsigned j = 0; j < n_out; ++j) {
        unsigned line = output_line(j, n_in, n_out);
        BoolFn diff = contents[line] ^ table.output_bit_mask(j);
        if (diff == 0) {
            continue;
        }
        if (affine_distance(diff, n_in) == 0) {
            auto lin = emit_affine(nearest_affine(diff, n_in), n_in, line);
            gates.insert(gates.end(), lin.begin(), lin.end());
            continue;
        }
        auto cubes = xor_function_into(diff, n_in, line, width, allow_negative);
        if (!cubes) {
            return std::nullopt;
        }
        used_cubes = true;
        gates.insert(gates.end(), cubes->begin(), cubes->end());
    }
    return gates;
}

}  // namespace

// --- public helpers ------------------------------------------------------

unsigned AffineForm::terms() const { return static_cast<unsigned>(std::popcount(mask)); }

BoolFn all_points(unsigned n_in) {
    return n_in >= 6 ? ~BoolFn{0} : (BoolFn{1} << (std::uint64_t{1} << n_in)) - 1;
}

BoolFn AffineForm::eval(unsigned n_in) const {
    BoolFn f = 0;
    for (unsigned v = 0; v < n_in; ++v) {
        if ((mask >> v) & 1) {
            f ^= var_fn(v, n_in);
        }
    }
    return constant ? f ^ all_points(n_in) : f;
}

std::string AffineForm::describe() const {
    std::string out;
    for (unsigned v = 32; v-- > 0;) {
        if ((mask >> v) & 1) {
            if (!out.empty()) out += "^";
            out += "x" + std::to_string(v + 1);
        }
    }
    if (constant) {
        out += out.empty() ? "1" : "^1";
    }
    return out.empty() ? "0" : out;
}

unsigned affine_distance(BoolFn f, unsigned n_in) {
    if (n_in > kMaxInputs) {
        throw std::invalid_argument("affine_distance supports n_in <= 6");
    }
    return affine_fit(f & all_points(n_in), n_in).distance;
}

AffineForm nearest_affine(BoolFn f, unsigned n_in) {
    if (n_in > kMaxInputs) {
        throw std::invalid_argument("nearest_affine supports n_in <= 6");
    }
    return affine_fit(f & all_points(n_in), n_in).form;
}

unsigned LinearFit::total_mismatches() const {
    unsigned t = 0;
    for (const auto& b : bits) {
        t += popcount(b.mismatches);
    }
    return t;
}

LinearFit fit_linear(const TruthTable& table) {
    if (table.n_in() > kMaxInputs) {
        throw std::invalid_argument("fit_linear supports n_in <= 6");
    }
    LinearFit fit;
    fit.n_in = table.n_in();
    std::vector<std::uint32_t> rows;
    for (unsigned j = 0; j < table.n_out(); ++j) {
        BoolFn target = table.output_bit_mask(j);
        AffineForm form = nearest_affine(target, table.n_in());
        fit.bits.push_back({form, target ^ form.eval(table.n_in())});
        rows.push_back(form.mask);
    }
    // Rank over GF(2) by elimination on the masks.
    for (unsigned bit = 0; bit < table.n_in(); ++bit) {
        auto pivot = std::find_if(rows.begin(), rows.end(), [&](std::uint32_t r) { return (r >> bit) & 1; });
        if (pivot == rows.end()) {
            continue;
        }
        std::uint32_t p = *pivot;
        rows.erase(pivot);
        for (auto& r : rows) {
            if ((r >> bit) & 1) {
                r ^= p;
            }
        }
        ++fit.rank;
    }
    return fit;
}

CascadePlan plan_cascades(const LinearFit& fit, const TruthTable& table, const SynthesisBudget& budget) {
    if (fit.n_in != table.n_in() || fit.bits.size() != table.n_out()) {
        throw std::invalid_argument("linear fit does not belong to this table");
    }
    Planner planner(table, budget);
    CascadePlan plan;
    plan.n_in = table.n_in();
    plan.n_out = table.n_out();
    PlannerState state = planner.initial();
    const unsigned step_limit = 4 * table.n_out() * (1u << table.n_in());

    while (planner.total(state) > 0 && plan.steps.size() < step_limit) {
        auto moves = planner.moves(state);
        // Single move with positive gain.
        Rank best_rank;
        std::optional<Move> best;
        unsigned before = planner.total(state);
        for (auto m : moves) {
            PlannerState s1 = planner.apply(state, m);
            unsigned after = planner.total(s1);
            Rank r{before > after ? before - after : 0, m.cost + planner.finish(s1), m.negs};
            if (r.gain > 0 && (!best || r.better_than(best_rank))) {
                best_rank = r;
                best = m;
            }
        }
        if (best) {
            state = planner.apply(state, *best);
            plan.steps.push_back(best->step);
            continue;
        }
        // Two- and three-step lookahead: a gate followed by a cascade
        // continuation or copy out of its target, optionally undoing the
        // first gate afterwards.
        std::vector<Move> best_seq;
        Rank seq_rank;
        for (auto m1 : moves) {
            PlannerState s1 = planner.apply(state, m1);
            std::vector<Move> follow;
            if (m1.step.kind == PlanStep::Kind::Toffoli) {
                planner.append_continuations(s1, follow);
            }
            planner.append_copies(s1, m1.step.target, follow);
            planner.append_copies_into(s1, m1.step.target, follow);
            for (auto m2 : follow) {
                PlannerState s2 = planner.apply(s1, m2);
                unsigned after = planner.total(s2);
                Rank r{before > after ? before - after : 0, m1.cost + m2.cost + planner.finish(s2), m1.negs + m2.negs};
                if (r.gain > 0 && (best_seq.empty() || r.better_than(seq_rank))) {
                    seq_rank = r;
                    best_seq = {m1, m2};
                }
                if (m1.step.kind == PlanStep::Kind::Toffoli && m1.step.level == 1) {
                    Move undo = m1;
                    PlannerState s3 = planner.apply(s2, undo);
                    unsigned after3 = planner.total(s3);
                    Rank r3{before > after3 ? before - after3 : 0, 2 * m1.cost + m2.cost + planner.finish(s3),
                             2 * m1.negs + m2.negs};
                    if (r3.gain > 0 && (best_seq.empty() || r3.better_than(seq_rank))) {
                        seq_rank = r3;
                        best_seq = {m1, m2, m1};
                    }
                }
            }
        }
        if (best_seq.empty()) {
            plan.complete = false;
            break;
        }
        for (auto m : best_seq) {
            state = planner.apply(state, m);
            plan.steps.push_back(m.step);
        }
    }
    if (planner.total(state) > 0) {
        plan.complete = false;
    }
    plan.residual_distance = state.distance;
    return plan;
}

Circuit emit_plan(const CascadePlan& plan, const TruthTable& table) {
    if (!plan.complete) {
        throw std::invalid_argument("cannot emit an incomplete cascade plan");
    }
    bool used_cubes = false;
    auto gates = finish_outputs(emit_steps(plan), table, true, used_cubes);
    return Circuit::with_registers(table.n_in(), table.n_out(), cancel_pairs(*gates));
}

std::optional<std::vector<Gate>> multi_controlled_not(const std::vector<Control>& controls, unsigned target,
                                                      unsigned width) {
    const std::size_t k = controls.size();
    if (k == 0) {
        return std::vector<Gate>{Gate::not_gate(target)};
    }
    if (k == 1) {
        return std::vector<Gate>{Gate::cnot(controls[0], target)};
    }
    if (k == 2) {
        return std::vector<Gate>{Gate::toffoli(controls[0], controls[1], target)};
    }
    std::vector<unsigned> spare;
    for (unsigned line = 0; line < width; ++line) {
        bool used = line == target;
        for (const auto& c : controls) {
            used = used || c.line == line;
        }
        if (!used) {
            spare.push_back(line);
        }
    }
    if (spare.empty()) {
        return std::nullopt;
    }
    std::vector<Gate> out;
    if (spare.size() >= k - 2) {
        // Ladder through k-2 dirty ancillas, run twice so they end unchanged.
        auto anc = [&](std::size_t i) { return Control{spare[i], Polarity::Positive}; };
        std::vector<Gate> half;
        half.push_back(Gate::toffoli(controls[k - 1], anc(k - 3), target));
        for (std::size_t i = k - 2; i >= 2; --i) {
            half.push_back(Gate::toffoli(controls[i], anc(i - 2), spare[i - 1]));
        }
        half.push_back(Gate::toffoli(controls[0], controls[1], spare[0]));
        for (std::size_t i = 2; i <= k - 2; ++i) {
            half.push_back(Gate::toffoli(controls[i], anc(i - 2), spare[i - 1]));
        }
        out = half;
        out.insert(out.end(), half.begin(), half.end());
        return out;
    }
    // One dirty ancilla: split the controls in two halves.
    unsigned ancilla = spare[0];
    std::size_t m1 = (k + 1) / 2;
    std::vector<Control> first(controls.begin(), controls.begin() + static_cast<std::ptrdiff_t>(m1));
    std::vector<Control> second(controls.begin() + static_cast<std::ptrdiff_t>(m1), controls.end());
    second.push_back({ancilla, Polarity::Positive});
    auto g1 = multi_controlled_not(first, ancilla, width);
    auto g2 = multi_controlled_not(second, target, width);
    if (!g1 || !g2) {
        return std::nullopt;
    }
    for (int rep = 0; rep < 2; ++rep) {
        out.insert(out.end(), g1->begin(), g1->end());
        out.insert(out.end(), g2->begin(), g2->end());
    }
    return out;
}

std::optional<std::vector<Gate>> xor_function_into(BoolFn fn, unsigned n_in, unsigned line, unsigned width,
                                                   bool allow_negative_controls) {
    if (n_in > kMaxInputs) {
        throw std::invalid_argument("xor_function_into supports n_in <= 6");
    }
    const std::uint64_t points = std::uint64_t{1} << n_in;
    std::optional<std::vector<Gate>> best;
    unsigned best_cost = std::numeric_limits<unsigned>::max();
    const std::uint64_t polarities = allow_negative_controls ? points : 1;
    for (std::uint64_t pol = 0; pol < polarities; ++pol) {
        // Reed-Muller coefficients of fn(x ^ pol), by the binary Moebius transform.
        std::vector<std::uint8_t> coef(points);
        for (std::uint64_t x = 0; x < points; ++x) {
            coef[x] = (fn >> (x ^ pol)) & 1;
        }
        for (unsigned v = 0; v < n_in; ++v) {
            for (std::uint64_t x = 0; x < points; ++x) {
                if ((x >> v) & 1) {
                    coef[x] ^= coef[x ^ (std::uint64_t{1} << v)];
                }
            }
        }
        std::vector<Gate> gates;
        bool ok = true;
        for (std::uint64_t mono = 0; mono < points && ok; ++mono) {
            if (!coef[mono]) {
                continue;
            }
            std::vector<Control> controls;
            for (unsigned v = n_in; v-- > 0;) {
                if ((mono >> v) & 1) {
                    controls.push_back(control_for(input_line(v, n_in), (pol >> v) & 1));
                }
            }
            auto cube = multi_controlled_not(controls, line, width);
            if (!cube) {
                ok = false;
                break;
            }
            gates.insert(gates.end(), cube->begin(), cube->end());
        }
        if (!ok) {
            continue;
        }
        Circuit probe(width, {}, {}, gates);
        unsigned c = cost(probe).inclusive_cost;
        if (c < best_cost) {
            best_cost = c;
            best = std::move(gates);
        }
    }
    return best;
}

namespace {

class Searcher {
   public:
    Searcher(const TruthTable& table, const SynthesisBudget& budget)
        : n_in_(table.n_in()), width_(table.n_in() + table.n_out()), budget_(budget) {
        goal_.assign(width_, 0);
        for (unsigned v = 0; v < n_in_; ++v) {
            goal_[input_line(v, n_in_)] = var_fn(v, n_in_);
        }
        for (unsigned j = 0; j < table.n_out(); ++j) {
            goal_[output_line(j, n_in_, table.n_out())] = table.output_bit_mask(j);
        }
        start_.assign(width_, 0);
        for (unsigned v = 0; v < n_in_; ++v) {
            start_[input_line(v, n_in_)] = var_fn(v, n_in_);
        }
        all_ = all_points(n_in_);
        std::vector<Polarity> pols{Polarity::Positive};
        if (budget.allow_negative_controls) {
            pols.push_back(Polarity::Negative);
        }
        for (unsigned t = 0; t < width_; ++t) {
            moves_.push_back(Gate::not_gate(t));
        }
        for (unsigned t = 0; t < width_; ++t) {
            for (unsigned c = 0; c < width_; ++c) {
                if (c == t) continue;
                for (auto p : pols) {
                    moves_.push_back(Gate::cnot({c, p}, t));
                }
            }
        }
        for (unsigned t = 0; t < width_; ++t) {
            for (unsigned c1 = 0; c1 < width_; ++c1) {
                for (unsigned c2 = c1 + 1; c2 < width_; ++c2) {
                    if (c1 == t || c2 == t) continue;
                    for (auto p1 : pols) {
                        for (auto p2 : pols) {
                            moves_.push_back(Gate::toffoli({c1, p1}, {c2, p2}, t));
                        }
                    }
                }
            }
        }
    }

    std::optional<std::vector<Gate>> run() {
        unsigned cap = std::min(budget_.search_cost_cap, budget_.max_quantum_cost);
        unsigned bound = heuristic(start_);
        while (bound <= cap) {
            path_.clear();
            unsigned next = std::numeric_limits<unsigned>::max();
            auto lines = start_;
            if (dfs(lines, 0, bound, next)) {
                return path_;
            }
            if (nodes_ > budget_.search_node_limit || next == std::numeric_limits<unsigned>::max()) {
                break;
            }
            bound = next;
        }
        return std::nullopt;
    }

   private:
    unsigned heuristic(const std::vector<BoolFn>& lines) const {
        unsigned h = 0;
        for (unsigned i = 0; i < width_; ++i) {
            h += lines[i] != goal_[i];
        }
        return h;
    }

    static unsigned gate_cost(const Gate& g) { return g.controls.size() == 2 ? kToffoliCost : 1; }

    bool dfs(std::vector<BoolFn>& lines, unsigned g, unsigned bound, unsigned& next) {
        unsigned f = g + heuristic(lines);
        if (f > bound) {
            next = std::min(next, f);
            return false;
        }
        if (lines == goal_) {
            return true;
        }
        if (++nodes_ > budget_.search_node_limit || path_.size() >= budget_.max_gates) {
            return false;
        }
        for (const auto& m : moves_) {
            if (!path_.empty() && path_.back() == m) {
                continue;
            }
            BoolFn active = all_;
            for (const auto& c : m.controls) {
                active &= c.polarity == Polarity::Positive ? lines[c.line] : ~lines[c.line] & all_;
            }
            if (active == 0) {
                continue;
            }
            lines[m.target] ^= active;
            path_.push_back(m);
            if (dfs(lines, g + gate_cost(m), bound, next)) {
                return true;
            }
            path_.pop_back();
            lines[m.target] ^= active;
        }
        return false;
    }

    unsigned n_in_;
    unsigned width_;
    SynthesisBudget budget_;
    std::vector<BoolFn> goal_;
    std::vector<BoolFn> start_;
    BoolFn all_ = 0;
    std::vector<Gate> moves_;
    std::vector<Gate> path_;
    std::uint64_t nodes_ = 0;
};

}  // namespace

std::optional<Circuit> search_circuit(const TruthTable& table, const SynthesisBudget& budget) {
    if (table.n_in() > kMaxInputs || table.n_out() > kMaxInputs) {
        throw std::invalid_argument("search supports at most 6 input and 6 output bits");
    }
    Searcher searcher(table, budget);
    auto gates = searcher.run();
    if (!gates) {
        return std::nullopt;
    }
    return Circuit::with_registers(table.n_in(), table.n_out(), *gates);
}

std::string to_string(SynthesisRoute route) {
    switch (route) {
        case SynthesisRoute::Cascade:
            return "cascade";
        case SynthesisRoute::CascadeWithCubes:
            return "cascade+cubes";
        case SynthesisRoute::Cubes:
            return "cubes";
        case SynthesisRoute::Search:
            return "search";
    }
    return "?";
}

SynthesisResult synthesize_detailed(const TruthTable& table, const SynthesisBudget& budget) {
    if (table.n_in() > kMaxInputs || table.n_out() > kMaxInputs) {
        throw std::invalid_argument("synthesize supports at most 6 input and 6 output bits");
    }
    SynthesisResult result;
    result.fit = fit_linear(table);
    result.plan = plan_cascades(result.fit, table, budget);

    std::vector<Candidate> candidates;
    bool used_cubes = false;
    if (auto gates = finish_outputs(emit_steps(result.plan), table, budget.allow_negative_controls, used_cubes)) {
        candidates.push_back(
            {cancel_pairs(*gates), used_cubes ? SynthesisRoute::CascadeWithCubes : SynthesisRoute::Cascade});
    }
    if (auto gates = finish_outputs({}, table, budget.allow_negative_controls, used_cubes)) {
        candidates.push_back({cancel_pairs(*gates), SynthesisRoute::Cubes});
    }

    std::optional<Candidate> best;
    std::optional<CostReport> best_cost;
    for (auto& cand : candidates) {
        Circuit c = Circuit::with_registers(table.n_in(), table.n_out(), cand.gates);
        if (!verify(c, table).empty()) {
            throw std::logic_error("synthesis produced a circuit that fails verification");
        }
        CostReport r = cost(c);
        auto key = [](const CostReport& x, std::size_t gates) {
            return std::make_tuple(x.quantum_cost, x.inclusive_cost, gates);
        };
        if (!best || key(r, cand.gates.size()) < key(*best_cost, best->gates.size())) {
            best = cand;
            best_cost = r;
        }
    }
    auto fits = [&](const CostReport& r, std::size_t n_gates) {
        return r.quantum_cost <= budget.max_quantum_cost && n_gates <= budget.max_gates;
    };
    if (best && fits(*best_cost, best->gates.size())) {
        result.circuit = Circuit::with_registers(table.n_in(), table.n_out(), best->gates);
        result.cost = *best_cost;
        result.route = best->route;
        return result;
    }
    if (budget.exhaustive_fallback) {
        if (auto found = search_circuit(table, budget)) {
            CostReport r = cost(*found);
            if (verify(*found, table).empty() && fits(r, found->gates().size())) {
                result.circuit = *found;
                result.cost = r;
                result.route = SynthesisRoute::Search;
                return result;
            }
        }
    }
    throw SynthesisBudgetExceeded(
        best ? "best circuit (quantum cost " + std::to_string(best_cost->quantum_cost) + ", " +
                   std::to_string(best->gates.size()) + " gates) exceeds the synthesis budget"
             : "no circuit found within the synthesis budget",
        best_cost);
}

Circuit synthesize(const TruthTable& table, const SynthesisBudget& budget) {
    return synthesize_detailed(table, budget).circuit;
}

long compare_cost(const Circuit& circuit, const Circuit& reference, const TruthTable& table) {
    if (!verify(circuit, table).empty() || !verify(reference, table).empty()) {
        throw std::invalid_argument("compare_cost needs two circuits that implement the same table");
    }
    return compare_cost(cost(circuit), cost(reference));
}

long compare_cost(const CostReport& circuit, const CostReport& reference) {
    return static_cast<long>(circuit.quantum_cost) - static_cast<long>(reference.quantum_cost);
}

}  // namespace cshor
