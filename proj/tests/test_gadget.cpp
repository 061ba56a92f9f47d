#include <doctest.h>

#include "support.hpp"
#include "topt/gadget.hpp"

using namespace topt;
using topt::testing::Rng;

TEST_CASE("hadamard-free input passes through") {
    Rng rng(41);
    Circuit c = topt::testing::random_hfree_circuit(3, 20, rng);
    auto g = gadgetize(c);
    CHECK(g.core == c);
    CHECK(g.records.empty());
    CHECK(g.pre.gates.empty());
    CHECK(g.core.n_ancillas == 0);
}

TEST_CASE("single internal hadamard") {
    Circuit c = Circuit::empty(1);
    c.gates.push_back(Gate::single(GateKind::T, 0));
    c.gates.push_back(Gate::single(GateKind::H, 0));
    c.gates.push_back(Gate::single(GateKind::T, 0));
    auto g = gadgetize(c);
    CHECK(g.core.n_wires() == 2);
    CHECK(g.records.size() == 1);
    CHECK(t_count(g.core) == 2);
    CHECK(internal_hadamard_count(g.core) == 0);
    // second T lands on the ancilla
    bool t_on_ancilla = false;
    for (const auto& gate : g.core.gates)
        if (gate.kind == GateKind::T && gate.wires[0] == 1) t_on_ancilla = true;
    CHECK(t_on_ancilla);

    auto d = defer_corrections(g);
    REQUIRE(d.corrections.size() == 1);
    const auto& corr = d.corrections[0];
    CHECK(corr.record == 0);
    CHECK(corr.pauli.x.get(1));
    // crossing the trailing T spawns a -pi/2 rotation: S* grade
    REQUIRE(corr.rotations.size() == 1);
    CHECK(corr.rotations[0].d == 1);
    CHECK(corr.rotations[0].k == 3);
    CHECK(corr.rotations[0].axis.z.get(1));
}

TEST_CASE("ancilla count equals internal hadamard count") {
    Rng rng(42);
    for (int trial = 0; trial < 30; ++trial) {
        Circuit c = topt::testing::random_clifford_t_circuit(4, 25, 1 + trial % 4, rng);
        const std::size_t h = internal_hadamard_count(c);
        auto g = gadgetize(c);
        CHECK(g.core.n_ancillas == h);
        CHECK(g.records.size() == h);
        CHECK(g.core.n_wires() == c.n_wires() + h);
        CHECK(t_count(g.core) == t_count(c));
        CHECK(internal_hadamard_count(g.core) == 0);

        auto d = defer_corrections(g);
        CHECK(t_count(d.core) == t_count(c));
        CHECK(d.corrections.size() == h);
        // no classically controlled gates remain inside the core
        for (const auto& gate : d.core.gates) CHECK(gate.control_record < 0);
        // corrections are Clifford: only pi/2-grade rotations
        for (const auto& corr : d.corrections)
            for (const auto& rot : corr.rotations) CHECK(is_clifford(Gate::rz(rot.k, rot.d, 0)));
    }
}

TEST_CASE("correction crossing a CNOT target moves without spawning") {
    Circuit c = Circuit::empty(2);
    c.gates.push_back(Gate::single(GateKind::T, 0));
    c.gates.push_back(Gate::single(GateKind::H, 0));
    c.gates.push_back(Gate::cnot(1, 0));
    c.gates.push_back(Gate::single(GateKind::T, 1));
    auto d = defer_corrections(gadgetize(c));
    REQUIRE(d.corrections.size() == 1);
    const auto& corr = d.corrections[0];
    CHECK(corr.rotations.empty());
    // X on the ancilla is untouched by a CNOT targeting it
    CHECK(corr.pauli.x.popcount() == 1);
}

TEST_CASE("correction crossing nothing stays an X") {
    Circuit c = Circuit::empty(1);
    c.gates.push_back(Gate::single(GateKind::T, 0));
    c.gates.push_back(Gate::single(GateKind::H, 0));
    c.gates.push_back(Gate::single(GateKind::T, 0));
    auto g = gadgetize(c);
    // strip the trailing T so the correction reaches the end untouched
    Circuit core = g.core;
    core.gates.pop_back();
    g.core = core;
    auto d = defer_corrections(g);
    REQUIRE(d.corrections.size() == 1);
    CHECK(d.corrections[0].rotations.empty());
    CHECK(d.corrections[0].pauli.x.get(1));
    CHECK(d.corrections[0].pauli.z.is_zero());
}

TEST_CASE("correction crossing a CCZ spawns a controlled CZ") {
    Circuit base = Circuit::empty(3);
    base.gates.push_back(Gate::single(GateKind::T, 0));
    base.gates.push_back(Gate::single(GateKind::H, 0));
    base.gates.push_back(Gate::ccz(0, 1, 2));
    base.gates.push_back(Gate::single(GateKind::T, 1));
    auto g = gadgetize(base);
    auto d = defer_corrections(g);
    REQUIRE(d.corrections.size() == 1);
    const auto& corr = d.corrections[0];
    // crossing CCZ with X on one control spawns rotations realizing a CZ
    // on the other two wires, each at the pi/2 grade
    CHECK(corr.rotations.size() >= 1);
    for (const auto& rot : corr.rotations) {
        CHECK(is_clifford(Gate::rz(rot.k, rot.d, 0)));
        CHECK(rot.axis.x.is_zero());
    }
}

TEST_CASE("gadgetized emission renders records and corrections") {
    Circuit c = Circuit::empty(1);
    c.gates.push_back(Gate::single(GateKind::T, 0));
    c.gates.push_back(Gate::single(GateKind::H, 0));
    c.gates.push_back(Gate::single(GateKind::T, 0));
    auto d = defer_corrections(gadgetize(c));
    const std::string text = emit_qc(d);
    CHECK(text.find("# measure r0") != std::string::npos);
    CHECK(text.find("# cc[r0] X anc0") != std::string::npos);
    CHECK(text.find("# cc[r0] S* anc0") != std::string::npos);
}

TEST_CASE("rejects corrections across level-3 rotations") {
    Circuit c = Circuit::empty(1);
    c.gates.push_back(Gate::rz(1, 3, 0));
    c.gates.push_back(Gate::single(GateKind::H, 0));
    c.gates.push_back(Gate::rz(1, 3, 0));
    auto g = gadgetize(c);
    CHECK_THROWS(defer_corrections(g));
}
