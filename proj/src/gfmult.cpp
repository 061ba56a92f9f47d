#include "topt/gfmult.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace topt {

namespace {

// Dense GF(2)[x] arithmetic on word vectors, low degree first.
using Poly = std::vector<std::uint64_t>;

int pdeg(const Poly& p) {
    for (std::size_t i = p.size(); i > 0; --i) {
        if (p[i - 1]) {
            int bit = 63;
            while (!((p[i - 1] >> bit) & 1u)) --bit;
            return static_cast<int>((i - 1) * 64) + bit;
        }
    }
    return -1;
}

bool pget(const Poly& p, std::size_t i) {
    return i / 64 < p.size() && ((p[i / 64] >> (i % 64)) & 1u);
}

void pset(Poly& p, std::size_t i) {
    if (i / 64 >= p.size()) p.resize(i / 64 + 1, 0);
    p[i / 64] |= std::uint64_t(1) << (i % 64);
}

// a ^= b << shift
void pxor_shift(Poly& a, const Poly& b, std::size_t shift) {
    const std::size_t wshift = shift / 64, bshift = shift % 64;
    const std::size_t need = b.size() + wshift + 1;
    if (a.size() < need) a.resize(need, 0);
    for (std::size_t i = 0; i < b.size(); ++i) {
        a[i + wshift] ^= b[i] << bshift;
        if (bshift) a[i + wshift + 1] ^= b[i] >> (64 - bshift);
    }
}

void pmod(Poly& a, const Poly& f) {
    const int df = pdeg(f);
    int da = pdeg(a);
    while (da >= df && da >= 0) {
        pxor_shift(a, f, static_cast<std::size_t>(da - df));
        da = pdeg(a);
    }
}

Poly pmulmod(const Poly& a, const Poly& b, const Poly& f) {
    Poly acc;
    const int da = pdeg(a);
    for (int i = 0; i <= da; ++i)
        if (pget(a, static_cast<std::size_t>(i))) pxor_shift(acc, b, static_cast<std::size_t>(i));
    pmod(acc, f);
    return acc;
}

Poly pgcd(Poly a, Poly b) {
    while (pdeg(b) >= 0) {
        pmod(a, b);
        std::swap(a, b);
    }
    return a;
}

Poly from_bitvec(const BitVec& v) {
    Poly p;
    for (std::size_t i = 0; i < v.size(); ++i)
        if (v.get(i)) pset(p, i);
    return p;
}

Poly poly_x() {
    Poly p;
    pset(p, 1);
    return p;
}

} // namespace

bool is_irreducible(const BitVec& poly) {
    const Poly f = from_bitvec(poly);
    const int n = pdeg(f);
    if (n <= 0) return false;
    if (n == 1) return true;

    // x^(2^n) == x mod f, and gcd(x^(2^(n/q)) - x, f) = 1 for prime q | n.
    Poly x = poly_x();
    pmod(x, f);
    Poly t = x;
    std::vector<Poly> stations(static_cast<std::size_t>(n) + 1);
    stations[0] = t;
    for (int i = 1; i <= n; ++i) {
        t = pmulmod(t, t, f);
        stations[static_cast<std::size_t>(i)] = t;
    }
    Poly top = stations[static_cast<std::size_t>(n)];
    top.resize(std::max(top.size(), x.size()), 0);
    Poly xe = x;
    xe.resize(top.size(), 0);
    for (std::size_t i = 0; i < top.size(); ++i) top[i] ^= xe[i];
    if (pdeg(top) >= 0) return false;

    auto coprime_check = [&](int q) {
        Poly u = stations[static_cast<std::size_t>(n / q)];
        u.resize(std::max(u.size(), x.size()), 0);
        Poly x2 = x;
        x2.resize(u.size(), 0);
        for (std::size_t i = 0; i < u.size(); ++i) u[i] ^= x2[i];
        return pdeg(pgcd(u, f)) == 0;
    };
    int rem = n;
    for (int q = 2; q * q <= rem; ++q) {
        if (rem % q) continue;
        while (rem % q == 0) rem /= q;
        if (!coprime_check(q)) return false;
    }
    if (rem > 1 && !coprime_check(rem)) return false;
    return true;
}

BitVec default_modulus(std::uint32_t n) {
    if (n < 1 || n > 512) throw std::invalid_argument("default_modulus: need 1 <= n <= 512");
    // Ascending low part; constant term must be one for x not to divide f.
    for (std::uint64_t low = 1;; low += 2) {
        BitVec f(n + 1);
        f.set(n, true);
        bool overflow = n < 64 && low >= (std::uint64_t(1) << n);
        if (overflow) throw std::logic_error("default_modulus: no irreducible found");
        for (std::uint32_t b = 0; b < std::min<std::uint32_t>(n, 64); ++b)
            if ((low >> b) & 1u) f.set(b, true);
        if (is_irreducible(f)) return f;
    }
}

GfMultSpec make_gf_spec(std::uint32_t n, const BitVec& modulus) {
    if (modulus.size() != n + 1 || !modulus.get(n))
        throw std::invalid_argument("gf spec: modulus must have degree n");
    if (!modulus.get(0) || !is_irreducible(modulus))
        throw std::invalid_argument("gf spec: reducible modulus");

    GfMultSpec spec;
    spec.n = n;
    spec.modulus = modulus;
    spec.m = BitMatrix(n, n);
    const Poly f = from_bitvec(modulus);
    Poly cur = poly_x();
    pmod(cur, f);
    for (std::uint32_t i = 1; i < n; ++i) cur = pmulmod(cur, poly_x(), f); // x^n mod f
    for (std::uint32_t col = 0; col < n; ++col) {
        for (std::uint32_t r = 0; r < n; ++r)
            if (pget(cur, r)) spec.m.set(r, col, true);
        cur = pmulmod(cur, poly_x(), f);
    }
    spec.m_tilde = spec.m.transposed();
    if (!try_invert(spec.m))
        throw std::invalid_argument("gf spec: reduction matrix is singular");
    return spec;
}

namespace {

struct RegState {
    std::vector<BitVec> a, b, c, cp;
};

void gf_recurse(RegState s, std::vector<CczTriple>& out) {
    const std::size_t size = s.a.size();
    if (size == 1) {
        if (!s.a[0].is_zero() && !s.b[0].is_zero() && !s.c[0].is_zero())
            out.push_back({s.a[0], s.b[0], s.c[0]});
        return;
    }
    const std::size_t nbits = s.a[0].size();
    s.cp[size - 1] = BitVec(nbits); // never read by this block

    if (size & 1) {
        RegState t;
        t.a = s.a;
        t.a.emplace_back(nbits);
        t.b = s.b;
        t.b.emplace_back(nbits);
        t.c = s.c;
        t.c.push_back(s.cp[0]);
        t.cp.assign(s.cp.begin() + 1, s.cp.end());
        t.cp.emplace_back(nbits);
        t.cp.emplace_back(nbits);
        gf_recurse(std::move(t), out);
        return;
    }

    const std::size_t h = size / 2;
    auto lo = [&](const std::vector<BitVec>& v) {
        return std::vector<BitVec>(v.begin(), v.begin() + h);
    };
    auto hi = [&](const std::vector<BitVec>& v) {
        return std::vector<BitVec>(v.begin() + h, v.end());
    };
    auto mix = [&](const std::vector<BitVec>& x, const std::vector<BitVec>& y) {
        std::vector<BitVec> r = x;
        for (std::size_t i = 0; i < r.size(); ++i) r[i] ^= y[i];
        return r;
    };

    const auto al = lo(s.a), ar = hi(s.a), bl = lo(s.b), br = hi(s.b);
    const auto cl = lo(s.c), cr = hi(s.c), cpl = lo(s.cp), cpr = hi(s.cp);

    gf_recurse({mix(al, ar), mix(bl, br), cr, cpl}, out);
    gf_recurse({ar, br, mix(cpl, cr), mix(cpl, cpr)}, out);
    gf_recurse({al, bl, mix(cl, cr), mix(cpl, cr)}, out);
}

// CCZ pairs sharing both control combinations fuse: the two target
// combinations add mod 2.
std::vector<CczTriple> merge_triples(const std::vector<CczTriple>& raw) {
    std::map<std::pair<BitVec, BitVec>, BitVec> fused;
    for (const auto& t : raw) {
        auto key = std::make_pair(t.u, t.v);
        auto it = fused.find(key);
        if (it == fused.end()) fused.emplace(std::move(key), t.w);
        else it->second ^= t.w;
    }
    std::vector<CczTriple> out;
    for (auto& [key, w] : fused)
        if (!w.is_zero()) out.push_back({key.first, key.second, w});
    std::sort(out.begin(), out.end(), [](const CczTriple& x, const CczTriple& y) {
        if (x.u != y.u) return x.u.lex_less(y.u);
        if (x.v != y.v) return x.v.lex_less(y.v);
        return x.w.lex_less(y.w);
    });
    return out;
}

// Computes the control parities on their lowest set wires, fires the CCZ
// (or the H-conjugated Toffoli), then uncomputes. In Toffoli form the
// target ladder is conjugated by the Hadamard layer, which reverses its
// direction into a fan-out from the pivot.
void with_parity_ladders(Circuit& c, const CczTriple& t, std::uint32_t n,
                         bool toffoli_form) {
    const auto pa = static_cast<std::uint32_t>(t.u.lowest_set());
    const auto pb = static_cast<std::uint32_t>(t.v.lowest_set()) + n;
    const auto pc = static_cast<std::uint32_t>(t.w.lowest_set()) + 2 * n;
    std::vector<Gate> ladder;
    auto add_ladder = [&](const BitVec& comb, std::uint32_t base, std::uint32_t pivot,
                          bool fanout) {
        for (std::size_t i = comb.lowest_set() + 1; i < comb.size(); ++i)
            if (comb.get(i)) {
                const auto other = base + static_cast<std::uint32_t>(i);
                ladder.push_back(fanout ? Gate::cnot(pivot, other) : Gate::cnot(other, pivot));
            }
    };
    add_ladder(t.u, 0, pa, false);
    add_ladder(t.v, n, pb, false);
    add_ladder(t.w, 2 * n, pc, toffoli_form);
    c.gates.insert(c.gates.end(), ladder.begin(), ladder.end());
    if (toffoli_form) {
        Gate h = Gate::single(GateKind::H, pc);
        h.tof_pair = true;
        c.gates.push_back(h);
        c.gates.push_back(Gate::ccz(pa, pb, pc));
        c.gates.push_back(h);
    } else {
        c.gates.push_back(Gate::ccz(pa, pb, pc));
    }
    for (auto it = ladder.rbegin(); it != ladder.rend(); ++it) c.gates.push_back(*it);
}

Circuit registers_circuit(std::uint32_t n) {
    Circuit c;
    c.n_qubits = 3 * n;
    for (std::uint32_t i = 0; i < n; ++i) c.wire_names.push_back("a" + std::to_string(i));
    for (std::uint32_t i = 0; i < n; ++i) c.wire_names.push_back("b" + std::to_string(i));
    for (std::uint32_t i = 0; i < n; ++i) c.wire_names.push_back("c" + std::to_string(i));
    return c;
}

std::vector<CczTriple> make_triples(const GfMultSpec& spec) {
    const std::uint32_t n = spec.n;
    RegState init;
    for (std::uint32_t i = 0; i < n; ++i) {
        init.a.push_back(BitVec::unit(n, i));
        init.b.push_back(BitVec::unit(n, i));
        init.c.push_back(BitVec::unit(n, i));
        BitVec cp(n); // (m^T c)_i, i.e. column i of m over the c register
        for (std::uint32_t r = 0; r < n; ++r)
            if (spec.m.get(r, i)) cp.set(r, true);
        init.cp.push_back(std::move(cp));
    }
    std::vector<CczTriple> raw;
    gf_recurse(std::move(init), raw);
    return merge_triples(raw);
}

} // namespace

GfMultResult generate(const GfMultSpec& spec) {
    GfMultResult res;
    res.triples = make_triples(spec);
    res.core = registers_circuit(spec.n);
    for (const auto& t : res.triples) with_parity_ladders(res.core, t, spec.n, false);
    return res;
}

Circuit multiplier_circuit(const GfMultSpec& spec) {
    Circuit c = registers_circuit(spec.n);
    for (const auto& t : make_triples(spec)) with_parity_ladders(c, t, spec.n, true);
    return c;
}

SignatureTensor gf_reference_tensor(const GfMultSpec& spec) {
    const std::uint32_t n = spec.n;
    SignatureTensor t;
    t.n = 3 * n;
    t.order = 3;
    auto toggle = [&](std::uint32_t wa, std::uint32_t wb, std::uint32_t wc) {
        std::vector<std::uint32_t> key = {wa, wb, wc};
        std::sort(key.begin(), key.end());
        auto it = t.odd_supports.find(key);
        if (it == t.odd_supports.end()) t.odd_supports.insert(key);
        else t.odd_supports.erase(it);
    };
    // g: a_j b_{i-j} c_i
    for (std::uint32_t i = 0; i < n; ++i)
        for (std::uint32_t j = 0; j <= i; ++j) toggle(j, n + i - j, 2 * n + i);
    // h with c' = m^T c: a_j b_{n+i-j} c_k for every m[k][i] = 1
    for (std::uint32_t i = 0; i + 1 < n; ++i)
        for (std::uint32_t j = i + 1; j < n; ++j)
            for (std::uint32_t k = 0; k < n; ++k)
                if (spec.m.get(k, i)) toggle(j, n + n + i - j, 2 * n + k);
    return t;
}

} // namespace topt
