#include "topt/phasepoly.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace topt {

PhasePolynomial PhasePolynomial::identity(std::uint32_t n, std::uint32_t d) {
    PhasePolynomial p;
    p.n = n;
    p.d = d;
    p.output_map = BitMatrix::identity(n);
    p.output_affine = BitVec(n);
    return p;
}

void PhasePolynomial::add_term(const BitVec& mask, bool complemented, std::uint32_t weight) {
    const std::uint32_t mod = modulus();
    std::uint32_t w = weight % mod;
    if (w == 0) return;
    if (mask.is_zero()) {
        if (complemented) constant = (constant + w) % mod;
        return;
    }
    if (complemented) {
        // a*(y (+) 1) = a - a*y
        constant = (constant + w) % mod;
        w = mod - w;
    }
    terms.emplace_back(mask, w);
}

void PhasePolynomial::canonicalize() {
    const std::uint32_t mod = modulus();
    std::vector<std::pair<BitVec, std::uint32_t>> merged;
    std::unordered_map<BitVec, std::size_t, BitVecHash> index;
    for (auto& [mask, w] : terms) {
        auto it = index.find(mask);
        if (it == index.end()) {
            index.emplace(mask, merged.size());
            merged.emplace_back(mask, w % mod);
        } else {
            merged[it->second].second = (merged[it->second].second + w) % mod;
        }
    }
    terms.clear();
    for (auto& [mask, w] : merged)
        if (w % mod != 0) terms.emplace_back(mask, w % mod);
    constant %= mod;
}

std::uint32_t PhasePolynomial::eval(const BitVec& x) const {
    const std::uint32_t mod = modulus();
    std::uint64_t acc = constant;
    for (const auto& [mask, w] : terms)
        if (BitVec::and_parity(mask, x)) acc += w;
    return static_cast<std::uint32_t>(acc % mod);
}

ParityTable ParityTable::from_columns(std::uint32_t n, std::uint32_t d,
                                      std::vector<BitVec> cols, bool normalized) {
    ParityTable t;
    t.n = n;
    t.d = d;
    t.columns = std::move(cols);
    if (normalized) t.normalize();
    else t.rebuild_rows();
    return t;
}

void ParityTable::rebuild_rows() {
    rows.assign(n, BitVec(columns.size()));
    for (std::size_t j = 0; j < columns.size(); ++j)
        for (std::uint32_t i = 0; i < n; ++i)
            if (columns[j].get(i)) rows[i].set(j, true);
}

void ParityTable::normalize() {
    // A column appearing k times contributes k mod 2 copies; zero columns go.
    std::unordered_map<BitVec, std::size_t, BitVecHash> mult;
    for (const auto& c : columns) ++mult[c];
    std::vector<BitVec> kept;
    std::unordered_map<BitVec, bool, BitVecHash> taken;
    for (const auto& c : columns) {
        if (c.is_zero()) continue;
        if (mult[c] % 2 == 0) continue;
        if (taken[c]) continue;
        taken[c] = true;
        kept.push_back(c);
    }
    columns = std::move(kept);
    rebuild_rows();
}

bool SignatureTensor::entry(std::vector<std::uint32_t> indices) const {
    std::sort(indices.begin(), indices.end());
    indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
    return odd_supports.count(indices) > 0;
}

PhasePolynomial extract(const Circuit& c, std::uint32_t d) {
    const std::uint32_t nw = c.n_wires();
    const std::uint32_t mod = 1u << (d + 1);
    PhasePolynomial p = PhasePolynomial::identity(nw, d);

    std::vector<BitVec> form;
    BitVec comp(nw);
    for (std::uint32_t i = 0; i < nw; ++i) form.push_back(BitVec::unit(nw, i));

    auto level_check = [&](std::uint32_t need, const char* gate) {
        if (d < need)
            throw std::invalid_argument(std::string("extract: gate ") + gate +
                                        " exceeds level d=" + std::to_string(d));
    };

    for (const auto& g : c.gates) {
        if (g.control_record >= 0)
            throw std::invalid_argument("extract: classically controlled gate");
        switch (g.kind) {
            case GateKind::H:
                throw std::invalid_argument("extract: circuit contains H");
            case GateKind::CNOT: {
                const auto ctl = g.wires[0], tgt = g.wires[1];
                form[tgt] ^= form[ctl];
                if (comp.get(ctl)) comp.flip(tgt);
                break;
            }
            case GateKind::X:
                comp.flip(g.wires[0]);
                break;
            case GateKind::Z:
                p.add_term(form[g.wires[0]], comp.get(g.wires[0]), 1u << d);
                break;
            case GateKind::S:
                level_check(1, "S");
                p.add_term(form[g.wires[0]], comp.get(g.wires[0]), 1u << (d - 1));
                break;
            case GateKind::Sdg:
                level_check(1, "S*");
                p.add_term(form[g.wires[0]], comp.get(g.wires[0]), 3u << (d - 1));
                break;
            case GateKind::T:
                level_check(2, "T");
                p.add_term(form[g.wires[0]], comp.get(g.wires[0]), 1u << (d - 2));
                break;
            case GateKind::Tdg:
                level_check(2, "T*");
                p.add_term(form[g.wires[0]], comp.get(g.wires[0]), 7u << (d - 2));
                break;
            case GateKind::RZ: {
                if (g.rz_d > d) level_check(g.rz_d, "rz");
                p.add_term(form[g.wires[0]], comp.get(g.wires[0]),
                           g.rz_k << (d - g.rz_d));
                break;
            }
            case GateKind::CZ: {
                level_check(1, "CZ");
                const std::uint32_t w = 1u << (d - 1);
                const auto a = g.wires[0], b = g.wires[1];
                p.add_term(form[a], comp.get(a), w);
                p.add_term(form[b], comp.get(b), w);
                p.add_term(form[a] ^ form[b], comp.get(a) ^ comp.get(b), mod - w);
                break;
            }
            case GateKind::CCZ: {
                level_check(2, "CCZ");
                const std::uint32_t w = 1u << (d - 2);
                const auto a = g.wires[0], b = g.wires[1], t = g.wires[2];
                p.add_term(form[a], comp.get(a), w);
                p.add_term(form[b], comp.get(b), w);
                p.add_term(form[t], comp.get(t), w);
                p.add_term(form[a] ^ form[b], comp.get(a) ^ comp.get(b), mod - w);
                p.add_term(form[a] ^ form[t], comp.get(a) ^ comp.get(t), mod - w);
                p.add_term(form[b] ^ form[t], comp.get(b) ^ comp.get(t), mod - w);
                p.add_term(form[a] ^ form[b] ^ form[t],
                           comp.get(a) ^ comp.get(b) ^ comp.get(t), w);
                break;
            }
        }
    }
    p.canonicalize();
    p.output_map = BitMatrix(form);
    p.output_affine = comp;
    return p;
}

ParityTable to_parity_table(const PhasePolynomial& p) {
    std::vector<BitVec> cols;
    for (const auto& [mask, w] : p.terms)
        if (w & 1u) cols.push_back(mask);
    return ParityTable::from_columns(p.n, p.d, std::move(cols));
}

namespace {

// Visits every subset of `support` of size 1..max_size.
template <typename F>
void for_each_subset(const std::vector<std::uint32_t>& support, std::size_t max_size, F&& f) {
    const std::size_t k = support.size();
    std::vector<std::uint32_t> cur;
    std::vector<std::size_t> stack;
    // Iterative combinations by size.
    for (std::size_t sz = 1; sz <= std::min(max_size, k); ++sz) {
        std::vector<std::size_t> idx(sz);
        for (std::size_t i = 0; i < sz; ++i) idx[i] = i;
        while (true) {
            cur.clear();
            for (std::size_t i : idx) cur.push_back(support[i]);
            f(cur);
            std::size_t i = sz;
            while (i > 0) {
                --i;
                if (idx[i] != i + k - sz) break;
            }
            if (idx[i] == i + k - sz) break;
            ++idx[i];
            for (std::size_t j = i + 1; j < sz; ++j) idx[j] = idx[j - 1] + 1;
        }
    }
    (void)stack;
}

std::vector<std::uint32_t> support_of(const BitVec& v) {
    std::vector<std::uint32_t> s;
    for (std::size_t i = 0; i < v.size(); ++i)
        if (v.get(i)) s.push_back(static_cast<std::uint32_t>(i));
    return s;
}

} // namespace

SignatureTensor signature_tensor(const ParityTable& p, std::uint32_t order) {
    SignatureTensor t;
    t.n = p.n;
    t.order = order;
    std::vector<std::uint32_t> all(p.n);
    for (std::uint32_t i = 0; i < p.n; ++i) all[i] = i;
    const std::size_t m = p.n_cols();
    for_each_subset(all, order, [&](const std::vector<std::uint32_t>& sub) {
        BitVec wedge(m);
        for (std::size_t j = 0; j < m; ++j) wedge.set(j, true);
        for (std::uint32_t r : sub) wedge &= p.rows[r];
        if (wedge.parity()) t.odd_supports.insert(sub);
    });
    return t;
}

namespace {

// Canonical monomial coefficients of a phase polynomial: c[T] mod
// 2^(d+2-|T|) for every support subset T of size 1..d+1.
std::map<std::vector<std::uint32_t>, std::uint32_t>
monomial_coefficients(const std::vector<std::pair<BitVec, std::uint32_t>>& terms,
                      std::uint32_t d) {
    std::map<std::vector<std::uint32_t>, std::uint32_t> c;
    for (const auto& [mask, w] : terms) {
        const auto supp = support_of(mask);
        for_each_subset(supp, d + 1, [&](const std::vector<std::uint32_t>& sub) {
            const std::uint32_t m = 1u << (d + 2 - sub.size());
            auto& slot = c[sub];
            slot = (slot + w) % m;
        });
    }
    return c;
}

} // namespace

PhasePolynomial clifford_residue(const PhasePolynomial& original, const ParityTable& optimized) {
    if (original.n != optimized.n)
        throw std::invalid_argument("clifford_residue: qubit count mismatch");
    const std::uint32_t d = original.d;
    const std::uint32_t mod = original.modulus();

    std::vector<std::pair<BitVec, std::uint32_t>> opt_terms;
    for (const auto& col : optimized.columns) opt_terms.emplace_back(col, 1u);

    auto c_orig = monomial_coefficients(original.terms, d);
    auto c_opt = monomial_coefficients(opt_terms, d);

    // Deficit per monomial, mod 2^(d+2-|T|).
    std::map<std::vector<std::uint32_t>, std::uint32_t> e;
    auto fold = [&](const std::map<std::vector<std::uint32_t>, std::uint32_t>& src, bool add) {
        for (const auto& [t, v] : src) {
            const std::uint32_t m = 1u << (d + 2 - t.size());
            auto& slot = e[t];
            slot = (slot + (add ? v : m - v % m)) % m;
        }
    };
    fold(c_orig, true);
    fold(c_opt, false);

    for (const auto& [t, v] : e)
        if (v & 1u)
            throw std::invalid_argument("clifford_residue: signature tensors disagree");

    // Fix coefficients from the highest order down; each inserted parity
    // adjusts every proper sub-monomial by its weight.
    PhasePolynomial r;
    r.n = original.n;
    r.d = d;
    r.output_map = BitMatrix::identity(original.n);
    r.output_affine = BitVec(original.n);
    r.constant = original.constant % mod;

    for (std::size_t k = d + 1; k >= 1; --k) {
        for (auto& [t, v] : e) {
            if (t.size() != k || v == 0) continue;
            BitVec mask(original.n);
            for (auto i : t) mask.set(i, true);
            r.terms.emplace_back(mask, v % mod);
            const std::uint32_t w = v;
            for_each_subset(t, k - 1, [&](const std::vector<std::uint32_t>& sub) {
                const std::uint32_t m = 1u << (d + 2 - sub.size());
                auto& slot = e[sub];
                slot = (slot + m - w % m) % m;
            });
            v = 0;
        }
        if (k == 1) break;
    }
    r.canonicalize();
    return r;
}

std::vector<Gate> linear_network(const BitMatrix& map) {
    const std::size_t n = map.n_rows();
    BitMatrix work = map;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> ops; // row_t ^= row_c
    auto rowxor = [&](std::size_t c, std::size_t t) {
        work.row(t) ^= work.row(c);
        ops.emplace_back(static_cast<std::uint32_t>(c), static_cast<std::uint32_t>(t));
    };
    for (std::size_t i = 0; i < n; ++i) {
        if (!work.get(i, i)) {
            std::size_t piv = n;
            for (std::size_t r = i + 1; r < n; ++r)
                if (work.get(r, i)) { piv = r; break; }
            if (piv == n) throw std::invalid_argument("linear_network: singular map");
            // Swap rows i and piv with three XORs.
            rowxor(piv, i);
            rowxor(i, piv);
            rowxor(piv, i);
        }
        for (std::size_t r = 0; r < n; ++r)
            if (r != i && work.get(r, i)) rowxor(i, r);
    }
    // ops reduce `map` to I; played in reverse from I they build `map`.
    std::vector<Gate> gates;
    for (auto it = ops.rbegin(); it != ops.rend(); ++it)
        gates.push_back(Gate::cnot(it->first, it->second));
    return gates;
}

namespace {

// One rotation of weight a (mod 2^(d+1)) at level d on a wire, reduced to
// the lowest level and to a named gate when one exists.
void emit_rotation(std::vector<Gate>& out, std::uint32_t wire, std::uint32_t a, std::uint32_t d) {
    a %= (1u << (d + 1));
    if (a == 0) return;
    while ((a & 1u) == 0 && d > 0) { a >>= 1; --d; }
    if (d == 0) {
        out.push_back(Gate::single(GateKind::Z, wire)); // a == 1
    } else if (d == 1) {
        out.push_back(Gate::single(a == 1 ? GateKind::S : GateKind::Sdg, wire));
    } else if (d == 2 && a == 1) {
        out.push_back(Gate::single(GateKind::T, wire));
    } else if (d == 2 && a == 7) {
        out.push_back(Gate::single(GateKind::Tdg, wire));
    } else {
        out.push_back(Gate::rz(a, d, wire));
    }
}

} // namespace

Circuit synthesize(const PhasePolynomial& p) {
    const std::uint32_t mod = p.modulus();
    Circuit c = Circuit::empty(p.n);

    // An odd constant is absorbed by emitting one odd-weight term in
    // complemented form (w*(y (+) 1) = -w*y + w), which keeps the count of
    // odd rotations equal to the number of odd terms.
    std::uint32_t remainder = p.constant % mod;
    std::size_t complemented = p.terms.size();
    if (remainder & 1u) {
        for (std::size_t i = 0; i < p.terms.size(); ++i) {
            if (p.terms[i].second & 1u) {
                complemented = i;
                remainder = (remainder + p.terms[i].second) % mod;
                break;
            }
        }
    }

    for (std::size_t t = 0; t < p.terms.size(); ++t) {
        const auto& [mask, w] = p.terms[t];
        const std::size_t pivot = mask.lowest_set();
        const auto pivot32 = static_cast<std::uint32_t>(pivot);
        std::vector<std::uint32_t> others;
        for (std::size_t i = pivot + 1; i < mask.size(); ++i)
            if (mask.get(i)) others.push_back(static_cast<std::uint32_t>(i));
        for (auto o : others) c.gates.push_back(Gate::cnot(o, pivot32));
        if (t == complemented) {
            c.gates.push_back(Gate::single(GateKind::X, pivot32));
            emit_rotation(c.gates, pivot32, mod - w, p.d);
            c.gates.push_back(Gate::single(GateKind::X, pivot32));
        } else {
            emit_rotation(c.gates, pivot32, w, p.d);
        }
        for (auto it = others.rbegin(); it != others.rend(); ++it)
            c.gates.push_back(Gate::cnot(*it, pivot32));
    }
    if (remainder % mod != 0 && p.n > 0) {
        // X R X R realizes a bare global phase; the remainder is even
        // whenever any odd term exists, so this stays Clifford-grade then.
        c.gates.push_back(Gate::single(GateKind::X, 0));
        emit_rotation(c.gates, 0, remainder, p.d);
        c.gates.push_back(Gate::single(GateKind::X, 0));
        emit_rotation(c.gates, 0, remainder, p.d);
    }
    auto net = linear_network(p.output_map);
    c.gates.insert(c.gates.end(), net.begin(), net.end());
    for (std::uint32_t i = 0; i < p.n; ++i)
        if (p.output_affine.get(i)) c.gates.push_back(Gate::single(GateKind::X, i));
    return c;
}

std::vector<std::uint32_t> expand_parity(std::uint32_t parity_size, std::uint32_t weight,
                                         std::uint32_t d) {
    const std::uint32_t mod = 1u << (d + 1);
    std::vector<std::uint32_t> coeffs;
    std::int64_t factor = 1;
    for (std::uint32_t k = 1; k <= parity_size && k <= d + 1; ++k) {
        const std::int64_t v = ((static_cast<std::int64_t>(weight) * factor) % mod + mod) % mod;
        coeffs.push_back(static_cast<std::uint32_t>(v));
        factor = ((-2 * factor) % mod + mod) % mod;
    }
    return coeffs;
}

std::string write_table_text(const PhasePolynomial& p) {
    std::ostringstream out;
    out << p.n << ' ' << p.terms.size() << ' ' << p.d << '\n';
    for (std::uint32_t r = 0; r < p.n; ++r) {
        for (const auto& [mask, w] : p.terms) out << (mask.get(r) ? '1' : '0');
        out << '\n';
    }
    for (std::size_t j = 0; j < p.terms.size(); ++j)
        out << (j ? " " : "") << p.terms[j].second;
    out << '\n';
    return out.str();
}

std::string write_table_text(const ParityTable& t) {
    PhasePolynomial p;
    p.n = t.n;
    p.d = t.d;
    for (const auto& c : t.columns) p.terms.emplace_back(c, 1u);
    p.output_map = BitMatrix::identity(t.n);
    p.output_affine = BitVec(t.n);
    return write_table_text(p);
}

PhasePolynomial read_table_text(const std::string& text) {
    std::istringstream in(text);
    std::uint32_t n = 0, d = 0;
    std::size_t m = 0;
    if (!(in >> n >> m >> d)) throw std::invalid_argument("parity table: bad header");
    std::vector<std::string> rows(n);
    for (std::uint32_t r = 0; r < n; ++r) {
        if (!(in >> rows[r]) || rows[r].size() != m)
            throw std::invalid_argument("parity table: bad row " + std::to_string(r));
    }
    PhasePolynomial p = PhasePolynomial::identity(n, d);
    std::vector<BitVec> cols(m, BitVec(n));
    for (std::uint32_t r = 0; r < n; ++r)
        for (std::size_t j = 0; j < m; ++j) {
            if (rows[r][j] == '1') cols[j].set(r, true);
            else if (rows[r][j] != '0') throw std::invalid_argument("parity table: bad bit");
        }
    for (std::size_t j = 0; j < m; ++j) {
        std::uint32_t w = 0;
        if (!(in >> w)) throw std::invalid_argument("parity table: missing weight");
        p.terms.emplace_back(cols[j], w % p.modulus());
    }
    p.canonicalize();
    return p;
}

} // namespace topt
