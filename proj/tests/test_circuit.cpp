#include <doctest.h>

#include "support.hpp"
#include "topt/circuit.hpp"
#include "topt/verify.hpp"

using namespace topt;
using topt::testing::Rng;

TEST_CASE("parse single toffoli") {
    Circuit c = parse_qc(".v a b c\nBEGIN\ntof a b c\nEND\n");
    REQUIRE(c.gates.size() == 3); // stored as H CCZ H on the target
    CHECK(c.gates[0].kind == GateKind::H);
    CHECK(c.gates[0].tof_pair);
    CHECK(c.gates[1] == Gate::ccz(0, 1, 2));
    CHECK(c.gates[2].kind == GateKind::H);
    CHECK(emit_qc(c) == ".v a b c\nBEGIN\ntof a b c\nEND\n");
}

TEST_CASE("parse empty body") {
    Circuit c = parse_qc(".v a b\nBEGIN\nEND\n");
    CHECK(c.gates.empty());
    CHECK(c.n_qubits == 2);
}

TEST_CASE("parse the 7-T CCZ implementation") {
    Circuit c = parse_qc(topt::testing::fig_ccz_qc());
    CHECK(c.gates.size() == 13); // 7 T/T* plus 6 CNOTs
    CHECK(t_count(c) == 7);
}

TEST_CASE("parse errors carry line numbers") {
    CHECK_THROWS_AS(parse_qc(".v a\nBEGIN\nfoo a\nEND\n"), ParseError);
    CHECK_THROWS_AS(parse_qc(".v a\nBEGIN\nT b\nEND\n"), ParseError);
    CHECK_THROWS_AS(parse_qc(".v a\nBEGIN\ntof a\nEND\n"), ParseError);
    try {
        parse_qc(".v a\nBEGIN\nT a\nweird a\nEND\n");
        FAIL("expected parse error");
    } catch (const ParseError& e) {
        CHECK(e.line == 4);
    }
}

TEST_CASE("emit canonical lines") {
    Circuit c = Circuit::empty(3);
    CHECK(emit_qc(c) == ".v q0 q1 q2\nBEGIN\nEND\n");
    c.gates.push_back(Gate::ccz(0, 1, 2));
    CHECK(emit_qc(c) == ".v q0 q1 q2\nBEGIN\nZ q0 q1 q2\nEND\n");
}

TEST_CASE("roundtrip is gate-exact") {
    Rng rng(21);
    for (int trial = 0; trial < 40; ++trial) {
        Circuit c = topt::testing::random_clifford_t_circuit(4, 30, 3, rng);
        c.gates.push_back(Gate::rz(3, 3, 1));
        c.gates.push_back(Gate::rz(5, 4, 0));
        Circuit back = parse_qc(emit_qc(c));
        CHECK(back == c);
    }
}

TEST_CASE("s and t dagger spellings") {
    Circuit a = parse_qc(".v q\nBEGIN\nS* q\nT* q\nEND\n");
    Circuit b = parse_qc(".v q\nBEGIN\nSdg q\nTdg q\nEND\n");
    CHECK(a == b);
}

TEST_CASE("t_count") {
    CHECK(t_count(Circuit::empty(1)) == 0);
    Circuit c = Circuit::empty(2);
    c.gates.push_back(Gate::single(GateKind::T, 0));
    c.gates.push_back(Gate::single(GateKind::T, 1));
    c.gates.push_back(Gate::single(GateKind::T, 0));
    c.gates.push_back(Gate::single(GateKind::Tdg, 1));
    CHECK(t_count(c) == 4);
    c.gates.push_back(Gate::ccz(0, 1, 0)); // CCZ does not count
    CHECK(t_count(c) == 4);
    c.gates.push_back(Gate::rz(3, 2, 0)); // odd level-2 rotation counts
    CHECK(t_count(c) == 5);
    c.gates.push_back(Gate::rz(2, 2, 0)); // even numerator does not
    CHECK(t_count(c) == 5);
    CHECK(rz_count(c, 3) == 0);
}

TEST_CASE("internal hadamard count") {
    auto mk = [](std::initializer_list<GateKind> kinds) {
        Circuit c = Circuit::empty(1);
        for (auto k : kinds) c.gates.push_back(Gate::single(k, 0));
        return c;
    };
    CHECK(internal_hadamard_count(mk({GateKind::H, GateKind::T, GateKind::H})) == 0);
    CHECK(internal_hadamard_count(mk({GateKind::T, GateKind::H, GateKind::T})) == 1);
    CHECK(internal_hadamard_count(
              mk({GateKind::T, GateKind::H, GateKind::H, GateKind::T, GateKind::H})) == 2);
    CHECK(internal_hadamard_count(mk({GateKind::H, GateKind::H})) == 0);
}

TEST_CASE("decompose_ccz") {
    Circuit c = Circuit::empty(3);
    c.gates.push_back(Gate::ccz(0, 1, 2));
    Circuit d = decompose_ccz(c);
    CHECK(t_count(d) == 7);
    std::size_t cnots = 0;
    for (const auto& g : d.gates) cnots += g.kind == GateKind::CNOT;
    CHECK(cnots == 6);
    CHECK(verify::equal_up_to_phase(verify::dense_unitary(d), verify::dense_unitary(c)));

    Circuit untouched = Circuit::empty(2);
    untouched.gates.push_back(Gate::cnot(0, 1));
    CHECK(decompose_ccz(untouched) == untouched);

    Circuit many = Circuit::empty(4);
    for (int i = 0; i < 3; ++i) many.gates.push_back(Gate::ccz(0, 1, 2));
    CHECK(t_count(decompose_ccz(many)) == 21);
}

TEST_CASE("fig circuit matches a native CCZ") {
    Circuit fig = parse_qc(topt::testing::fig_ccz_qc());
    Circuit ccz = Circuit::empty(3);
    ccz.gates.push_back(Gate::ccz(0, 1, 2));
    CHECK(verify::phase_equal(fig, ccz, 2));
}
