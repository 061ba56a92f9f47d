#include <doctest.h>

#include <map>

#include "support.hpp"
#include "topt/optimize.hpp"
#include "topt/phasepoly.hpp"
#include "topt/verify.hpp"

using namespace topt;
using topt::testing::Rng;

namespace {

std::map<std::string, std::uint32_t> term_map(const PhasePolynomial& p) {
    std::map<std::string, std::uint32_t> m;
    for (const auto& [mask, w] : p.terms) m[mask.to_string()] = w;
    return m;
}

// Pointwise polynomial evaluation incl. the output map, for roundtrips.
bool same_function(const PhasePolynomial& a, const PhasePolynomial& b) {
    if (a.n != b.n || a.d != b.d) return false;
    for (std::uint64_t x = 0; x < (1ull << a.n); ++x) {
        BitVec xv(a.n);
        for (std::uint32_t i = 0; i < a.n; ++i)
            if (x >> i & 1) xv.set(i, true);
        if (a.eval(xv) != b.eval(xv)) return false;
        if (!((a.output_map.mul_vec(xv) ^ a.output_affine) ==
              (b.output_map.mul_vec(xv) ^ b.output_affine)))
            return false;
    }
    return true;
}

} // namespace

TEST_CASE("extraction of the 7-T CCZ circuit") {
    Circuit fig = parse_qc(topt::testing::fig_ccz_qc());
    PhasePolynomial p = extract(fig, 2);
    auto terms = term_map(p);
    REQUIRE(terms.size() == 7);
    CHECK(terms["100"] == 1);
    CHECK(terms["010"] == 1);
    CHECK(terms["001"] == 1);
    CHECK(terms["110"] == 7);
    CHECK(terms["101"] == 7);
    CHECK(terms["011"] == 7);
    CHECK(terms["111"] == 1);
    CHECK(p.output_map == BitMatrix::identity(3));
    CHECK(p.constant == 0);
}

TEST_CASE("extraction basics") {
    Circuit c = Circuit::empty(2);
    c.gates.push_back(Gate::single(GateKind::T, 0));
    PhasePolynomial p = extract(c, 2);
    REQUIRE(p.terms.size() == 1);
    CHECK(p.terms[0].first == BitVec::from_string("10"));
    CHECK(p.terms[0].second == 1);
    CHECK(p.output_map == BitMatrix::identity(2));

    Circuit cn = Circuit::empty(2);
    cn.gates.push_back(Gate::cnot(0, 1));
    PhasePolynomial q = extract(cn, 2);
    CHECK(q.terms.empty());
    CHECK(q.output_map.get(1, 0));
    CHECK(q.output_map.get(1, 1));
    CHECK(!q.output_map.get(0, 1));

    Circuit h = Circuit::empty(1);
    h.gates.push_back(Gate::single(GateKind::H, 0));
    CHECK_THROWS(extract(h, 2));
    Circuit lvl = Circuit::empty(1);
    lvl.gates.push_back(Gate::rz(1, 3, 0));
    CHECK_THROWS(extract(lvl, 2));
}

TEST_CASE("to_parity_table keeps odd weights") {
    Circuit fig = parse_qc(topt::testing::fig_ccz_qc());
    PhasePolynomial p = extract(fig, 2);
    CHECK(to_parity_table(p).n_cols() == 7);

    PhasePolynomial even = PhasePolynomial::identity(2, 2);
    even.terms.emplace_back(BitVec::from_string("10"), 2);
    even.terms.emplace_back(BitVec::from_string("01"), 6);
    CHECK(to_parity_table(even).n_cols() == 0);

    even.terms.emplace_back(BitVec::from_string("11"), 3);
    CHECK(to_parity_table(even).n_cols() == 1);
}

TEST_CASE("signature tensor of the CCZ table") {
    auto t = signature_tensor(topt::testing::ccz_table(), 3);
    for (std::uint32_t a = 0; a < 3; ++a)
        for (std::uint32_t b = 0; b < 3; ++b)
            for (std::uint32_t c = 0; c < 3; ++c) {
                const bool expect = a != b && b != c && a != c;
                CHECK(t.entry({a, b, c}) == expect);
            }
}

TEST_CASE("signature tensor matches direct popcount recomputation") {
    Rng rng(51);
    for (int trial = 0; trial < 10; ++trial) {
        ParityTable p = topt::testing::random_table(4, 9, 2, rng);
        auto t = signature_tensor(p, 3);
        for (std::uint32_t a = 0; a < 4; ++a)
            for (std::uint32_t b = 0; b < 4; ++b)
                for (std::uint32_t c = 0; c < 4; ++c) {
                    std::size_t count = 0;
                    for (const auto& col : p.columns)
                        if (col.get(a) && col.get(b) && col.get(c)) ++count;
                    CHECK(t.entry({a, b, c}) == (count & 1));
                    // symmetry under permuted queries
                    CHECK(t.entry({c, a, b}) == t.entry({a, b, c}));
                }
    }
}

TEST_CASE("empty table has the zero tensor") {
    ParityTable empty = ParityTable::from_columns(3, 2, {});
    CHECK(signature_tensor(empty, 3).is_zero());
}

TEST_CASE("clifford residue of an unchanged odd part") {
    PhasePolynomial p = PhasePolynomial::identity(3, 2);
    p.terms.emplace_back(BitVec::from_string("100"), 1);
    p.terms.emplace_back(BitVec::from_string("110"), 1);
    p.terms.emplace_back(BitVec::from_string("011"), 2); // even, goes to the residue
    p.terms.emplace_back(BitVec::from_string("101"), 4);
    ParityTable odd = to_parity_table(p);
    PhasePolynomial r = clifford_residue(p, odd);
    for (const auto& [mask, w] : r.terms) CHECK((w & 1u) == 0);
    PhasePolynomial rebuilt = PhasePolynomial::identity(3, 2);
    for (const auto& col : odd.columns) rebuilt.terms.emplace_back(col, 1u);
    rebuilt.terms.insert(rebuilt.terms.end(), r.terms.begin(), r.terms.end());
    rebuilt.constant = r.constant;
    rebuilt.canonicalize();
    CHECK(same_function(p, rebuilt));
}

TEST_CASE("clifford residue of the all-ones CCZ table is zero") {
    PhasePolynomial p = PhasePolynomial::identity(3, 2);
    for (const auto& col : topt::testing::ccz_table().columns) p.terms.emplace_back(col, 1u);
    PhasePolynomial r = clifford_residue(p, topt::testing::ccz_table());
    CHECK(r.terms.empty());
    CHECK(r.constant == 0);
}

TEST_CASE("clifford residue after an optimizer pass") {
    // the rebuilt polynomial must match the original on every input
    Rng rng(54);
    for (int trial = 0; trial < 10; ++trial) {
        Circuit c = topt::testing::random_hfree_circuit(4, 20, rng);
        PhasePolynomial p = extract(c, 2);
        p.output_map = BitMatrix::identity(4);
        p.output_affine = BitVec(4);
        ParityTable opt = tohpe(to_parity_table(p)).table;
        PhasePolynomial r = clifford_residue(p, opt);
        PhasePolynomial rebuilt = PhasePolynomial::identity(4, 2);
        for (const auto& col : opt.columns) rebuilt.terms.emplace_back(col, 1u);
        rebuilt.terms.insert(rebuilt.terms.end(), r.terms.begin(), r.terms.end());
        rebuilt.constant = r.constant;
        rebuilt.canonicalize();
        CHECK(same_function(p, rebuilt));
    }
}

TEST_CASE("clifford residue refuses mismatched tensors") {
    PhasePolynomial p = PhasePolynomial::identity(3, 2);
    p.terms.emplace_back(BitVec::from_string("100"), 1);
    ParityTable wrong = ParityTable::from_columns(3, 2, {BitVec::from_string("010")});
    CHECK_THROWS(clifford_residue(p, wrong));
}

TEST_CASE("synthesize the CCZ polynomial") {
    Circuit fig = parse_qc(topt::testing::fig_ccz_qc());
    PhasePolynomial p = extract(fig, 2);
    Circuit synth = synthesize(p);
    Circuit ccz = Circuit::empty(3);
    ccz.gates.push_back(Gate::ccz(0, 1, 2));
    CHECK(verify::phase_equal(synth, ccz, 2));
    CHECK(verify::equal_up_to_phase(verify::dense_unitary(synth), verify::dense_unitary(ccz)));
}

TEST_CASE("synthesize the empty polynomial") {
    PhasePolynomial p = PhasePolynomial::identity(3, 2);
    CHECK(synthesize(p).gates.empty());
}

TEST_CASE("extract-synthesize roundtrip") {
    Rng rng(52);
    for (int trial = 0; trial < 60; ++trial) {
        const std::uint32_t n = 2 + trial % 5;
        const std::uint32_t d = trial % 3 == 0 ? 3 : 2;
        Circuit c = topt::testing::random_hfree_circuit(n, 25, rng);
        PhasePolynomial p = extract(c, d);
        Circuit synth = synthesize(p);
        CHECK(verify::phase_equal(c, synth, d));
        CHECK(same_function(p, extract(synth, d)));
    }
}

TEST_CASE("x conjugation tracks affine constants") {
    Circuit c = Circuit::empty(1);
    c.gates.push_back(Gate::single(GateKind::X, 0));
    c.gates.push_back(Gate::single(GateKind::T, 0));
    c.gates.push_back(Gate::single(GateKind::X, 0));
    PhasePolynomial p = extract(c, 2);
    REQUIRE(p.terms.size() == 1);
    CHECK(p.terms[0].second == 7); // weight negated
    CHECK(p.constant == 1);
    CHECK(p.output_affine.is_zero());
    Circuit synth = synthesize(p);
    CHECK(verify::phase_equal(c, synth, 2));
    CHECK(t_count(synth) == 1); // absorbed constant costs no extra T
}

TEST_CASE("expand_parity") {
    auto c1 = expand_parity(1, 5, 2);
    REQUIRE(c1.size() == 1);
    CHECK(c1[0] == 5);

    auto c2 = expand_parity(2, 1, 2);
    REQUIRE(c2.size() == 2);
    CHECK(c2[0] == 1);
    CHECK(c2[1] == 6); // -2 mod 8

    // numeric check of the expansion identity
    Rng rng(53);
    for (int trial = 0; trial < 200; ++trial) {
        const std::uint32_t n = 1 + rng() % 8;
        const std::uint32_t d = rng() % 4;
        const std::uint32_t mod = 1u << (d + 1);
        const std::uint32_t a = rng() % mod;
        const std::uint32_t k = 1 + rng() % n; // parity size
        const std::uint32_t w = rng() % (k + 1); // |support AND x|
        auto coeffs = expand_parity(k, a, d);
        // sum over all monomials: C(w, order) of them evaluate to one
        std::uint64_t rhs = 0;
        std::uint64_t binom = w; // C(w, 1)
        for (std::size_t ord = 1; ord <= coeffs.size(); ++ord) {
            rhs += static_cast<std::uint64_t>(coeffs[ord - 1]) % mod * (binom % mod);
            binom = binom * (w >= ord ? w - ord : 0) / (ord + 1);
        }
        const std::uint32_t lhs = a * (w & 1u);
        CHECK(lhs % mod == rhs % mod);
    }
}

TEST_CASE("table text roundtrip") {
    Circuit fig = parse_qc(topt::testing::fig_ccz_qc());
    PhasePolynomial p = extract(fig, 2);
    PhasePolynomial q = read_table_text(write_table_text(p));
    CHECK(term_map(p) == term_map(q));
    CHECK(q.d == 2);
    CHECK(q.n == 3);
}

TEST_CASE("optimized resynthesis never exceeds the input t-count") {
    Rng rng(55);
    for (int trial = 0; trial < 15; ++trial) {
        Circuit c = decompose_ccz(topt::testing::random_hfree_circuit(4, 25, rng));
        PhasePolynomial p = extract(c, 2);
        ParityTable table = to_parity_table(p);
        ParityTable opt = fast_todd(table).table;
        PhasePolynomial residue = clifford_residue(p, opt);
        PhasePolynomial out = PhasePolynomial::identity(4, 2);
        for (const auto& col : opt.columns) out.terms.emplace_back(col, 1u);
        out.terms.insert(out.terms.end(), residue.terms.begin(), residue.terms.end());
        out.constant = residue.constant;
        out.output_map = p.output_map;
        out.output_affine = p.output_affine;
        out.canonicalize();
        Circuit synth = synthesize(out);
        CHECK(t_count(synth) <= t_count(c));
        CHECK(verify::phase_equal(c, synth, 2));
    }
}

TEST_CASE("normalize cancels duplicate columns in pairs") {
    std::vector<BitVec> cols = {BitVec::from_string("10"), BitVec::from_string("10"),
                                BitVec::from_string("10"), BitVec::from_string("01"),
                                BitVec::from_string("01"), BitVec(2)};
    ParityTable t = ParityTable::from_columns(2, 2, cols);
    REQUIRE(t.n_cols() == 1);
    CHECK(t.columns[0] == BitVec::from_string("10"));
    // rows mirror stays in sync
    CHECK(t.rows[0].get(0));
    CHECK(!t.rows[1].get(0));
}
