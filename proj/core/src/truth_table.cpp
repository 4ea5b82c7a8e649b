#include "cshor/truth_table.hpp"

#include <algorithm>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>

#include "cshor/numtheory.hpp"

namespace cshor {

unsigned bit_width_of(std::uint64_t v) {
    unsigned w = 0;
    while (v != 0) {
        ++w;
        v >>= 1;
    }
    return w;
}

unsigned ceil_log2(std::uint64_t v) {
    unsigned b = 0;
    while ((std::uint64_t{1} << b) < v) {
        ++b;
    }
    return b;
}

TruthTable::TruthTable(unsigned n_in, unsigned n_out, std::vector<std::uint64_t> rows)
    : n_in_(n_in), n_out_(n_out), rows_(std::move(rows)) {
    if (n_in > 20 || n_out > 63) {
        throw std::invalid_argument("truth table register too wide");
    }
    if (rows_.size() != (std::size_t{1} << n_in)) {
        throw std::invalid_argument("truth table needs exactly 2^n_in rows");
    }
    for (auto y : rows_) {
        if (bit_width_of(y) > n_out) {
            throw std::invalid_argument("output value " + std::to_string(y) + " does not fit in " +
                                        std::to_string(n_out) + " bits");
        }
    }
}

std::uint64_t TruthTable::output_bit_mask(unsigned bit) const {
    if (n_in_ > 6) {
        throw std::invalid_argument("output_bit_mask supports n_in <= 6");
    }
    std::uint64_t mask = 0;
    for (std::size_t x = 0; x < rows_.size(); ++x) {
        if ((rows_[x] >> bit) & 1) {
            mask |= std::uint64_t{1} << x;
        }
    }
    return mask;
}

std::string to_string(GKind kind) {
    switch (kind) {
        case GKind::None:
            return "none";
        case GKind::Log:
            return "log";
        case GKind::Affine:
            return "affine";
        case GKind::Rank:
            return "rank";
    }
    return "?";
}

GKind parse_g_kind(const std::string& text) {
    if (text == "none") return GKind::None;
    if (text == "log") return GKind::Log;
    if (text == "affine") return GKind::Affine;
    if (text == "rank") return GKind::Rank;
    throw std::invalid_argument("unknown compile strategy '" + text + "'");
}

std::string to_string(CompileLevel level) {
    switch (level) {
        case CompileLevel::Uncompiled:
            return "uncompiled";
        case CompileLevel::Partial:
            return "partial";
        case CompileLevel::Full:
            return "full";
    }
    return "?";
}

std::uint64_t GDescriptor::apply(std::uint64_t y) const {
    switch (kind) {
        case GKind::None:
            return y;
        case GKind::Log: {
            std::uint64_t e = 0;
            std::uint64_t v = 1;
            while (v < y) {
                v *= base;
                ++e;
            }
            if (v != y) {
                throw std::invalid_argument(std::to_string(y) + " is not a power of " + std::to_string(base));
            }
            return e;
        }
        case GKind::Affine:
            if (y < c || (y - c) % d != 0) {
                throw std::invalid_argument(std::to_string(y) + " is outside the affine map");
            }
            return (y - c) / d;
        case GKind::Rank: {
            auto it = std::lower_bound(rank_values.begin(), rank_values.end(), y);
            if (it == rank_values.end() || *it != y) {
                throw std::invalid_argument(std::to_string(y) + " was not ranked");
            }
            return static_cast<std::uint64_t>(it - rank_values.begin());
        }
    }
    return y;
}

std::uint64_t GDescriptor::invert(std::uint64_t v) const {
    switch (kind) {
        case GKind::None:
            return v;
        case GKind::Log: {
            std::uint64_t y = 1;
            for (std::uint64_t i = 0; i < v; ++i) {
                y *= base;
            }
            return y;
        }
        case GKind::Affine:
            return v * d + c;
        case GKind::Rank:
            return rank_values.at(v);
    }
    return v;
}

std::string GDescriptor::describe() const {
    switch (kind) {
        case GKind::None:
            return "g(y)=y";
        case GKind::Log:
            return "g(y)=log_" + std::to_string(base) + "(y)";
        case GKind::Affine:
            return "g(y)=(y-" + std::to_string(c) + ")/" + std::to_string(d);
        case GKind::Rank:
            return "g(y)=rank(y) [non-simple]";
    }
    return "?";
}

TruthTable build_modexp_table(std::uint64_t a, std::uint64_t n, unsigned n_in) {
    TruthTable wide = build_modexp_table(a, n, n_in, ceil_log2(n));
    std::uint64_t max_value = *std::max_element(wide.rows().begin(), wide.rows().end());
    return TruthTable(n_in, std::max(1u, bit_width_of(max_value)), wide.rows());
}

TruthTable build_modexp_table(std::uint64_t a, std::uint64_t n, unsigned n_in, unsigned n_out) {
    if (n < 3 || a <= 1 || a >= n) {
        throw std::invalid_argument("build_modexp_table requires 1 < a < N");
    }
    if (gcd(a, n) != 1) {
        throw std::invalid_argument("a=" + std::to_string(a) + " is not coprime to N=" + std::to_string(n));
    }
    std::vector<std::uint64_t> rows(std::size_t{1} << n_in);
    for (std::size_t x = 0; x < rows.size(); ++x) {
        rows[x] = mod_pow(a, x, n);
    }
    return TruthTable(n_in, n_out, std::move(rows));
}

GDescriptor fit_g(const std::vector<std::uint64_t>& raw_values, std::uint64_t a, std::uint64_t n, GKind kind) {
    std::set<std::uint64_t> distinct(raw_values.begin(), raw_values.end());
    if (distinct.empty()) {
        throw std::invalid_argument("fit_g needs at least one value");
    }
    GDescriptor g;
    g.kind = kind;
    switch (kind) {
        case GKind::None:
            break;
        case GKind::Log:
            g.base = a;
            for (auto y : distinct) {
                g.apply(y);
            }
            break;
        case GKind::Affine: {
            std::uint64_t best_max = std::numeric_limits<std::uint64_t>::max();
            bool found = false;
            for (std::uint64_t d = 1; d <= n; ++d) {
                for (std::uint64_t c = 0; c <= d; ++c) {
                    bool ok = true;
                    std::uint64_t max_value = 0;
                    for (auto y : distinct) {
                        if (y < c || (y - c) % d != 0) {
                            ok = false;
                            break;
                        }
                        max_value = std::max(max_value, (y - c) / d);
                    }
                    if (ok && max_value < best_max) {
                        best_max = max_value;
                        g.c = c;
                        g.d = d;
                        found = true;
                    }
                }
            }
            if (!found) {
                throw std::invalid_argument("no affine map (y-c)/d with d <= N fits the outputs");
            }
            break;
        }
        case GKind::Rank:
            g.rank_values.assign(distinct.begin(), distinct.end());
            break;
    }
    return g;
}

namespace {

TruthTable remap(const std::vector<std::uint64_t>& raw, unsigned n_in, const GDescriptor& g) {
    std::vector<std::uint64_t> rows;
    rows.reserve(raw.size());
    std::uint64_t max_value = 0;
    for (auto y : raw) {
        rows.push_back(g.apply(y));
        max_value = std::max(max_value, rows.back());
    }
    return TruthTable(n_in, std::max(1u, bit_width_of(max_value)), std::move(rows));
}

}  // namespace

CompiledFunction classical_compile(const TruthTable& table, std::uint64_t a, std::uint64_t n, GKind kind) {
    for (std::size_t x = 0; x < table.size(); ++x) {
        if (table(x) != mod_pow(a, x, n)) {
            throw std::invalid_argument("table is not a^x mod N for the given a, N");
        }
    }
    GDescriptor g = fit_g(table.rows(), a, n, kind);
    CompiledFunction out{a, n, multiplicative_order(a, n), g, {}, CompileLevel::Partial};
    if (kind == GKind::None) {
        out.table = table;
        out.level = CompileLevel::Uncompiled;
    } else {
        out.table = remap(table.rows(), table.n_in(), g);
    }
    return out;
}

CompiledFunction full_compile(std::uint64_t a, std::uint64_t n) {
    std::uint64_t r = multiplicative_order(a, n);
    unsigned n_in = std::max(1u, ceil_log2(r));
    std::vector<std::uint64_t> raw(std::size_t{1} << n_in);
    for (std::size_t x = 0; x < raw.size(); ++x) {
        raw[x] = mod_pow(a, x % r, n);
    }
    GDescriptor g;
    bool found = false;
    for (GKind kind : {GKind::Log, GKind::Affine, GKind::Rank}) {
        try {
            g = fit_g(raw, a, n, kind);
            found = true;
            break;
        } catch (const std::invalid_argument&) {
        }
    }
    if (!found) {
        throw std::logic_error("rank remapping cannot fail");
    }
    return CompiledFunction{a, n, r, g, remap(raw, n_in, g), CompileLevel::Full};
}

std::uint64_t period_of(const TruthTable& table) {
    const auto& rows = table.rows();
    for (std::size_t r = 1; r < rows.size(); ++r) {
        bool periodic = true;
        for (std::size_t x = 0; x + r < rows.size(); ++x) {
            if (rows[x] != rows[x + r]) {
                periodic = false;
                break;
            }
        }
        if (periodic) {
            return r;
        }
    }
    return rows.size();
}

TruthTable alternate_f4_33_table() {
    return TruthTable(3, 4, {0, 1, 5, 12, 8, 0, 1, 5});
}

nlohmann::json to_json(const TruthTable& table) {
    return {{"n_in", table.n_in()}, {"n_out", table.n_out()}, {"rows", table.rows()}};
}

TruthTable table_from_json(const nlohmann::json& j) {
    return TruthTable(j.at("n_in").get<unsigned>(), j.at("n_out").get<unsigned>(),
                      j.at("rows").get<std::vector<std::uint64_t>>());
}

std::string render_table(const TruthTable& table) {
    std::ostringstream out;
    for (unsigned i = table.n_in(); i >= 1; --i) {
        out << "x" << i << ' ';
    }
    out << '|';
    for (unsigned i = table.n_out(); i >= 1; --i) {
        out << " y" << i;
    }
    out << '\n';
    for (std::size_t x = 0; x < table.size(); ++x) {
        for (unsigned i = table.n_in(); i >= 1; --i) {
            out << ' ' << ((x >> (i - 1)) & 1) << ' ';
        }
        out << '|';
        for (unsigned i = table.n_out(); i >= 1; --i) {
            out << "  " << ((table(x) >> (i - 1)) & 1);
        }
        out << '\n';
    }
    return out.str();
}

}  // namespace cshor
