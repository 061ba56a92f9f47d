#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace topt {

enum class GateKind : std::uint8_t { CNOT, H, X, Z, S, Sdg, T, Tdg, CZ, CCZ, RZ };

// RZ carries an angle k*pi/2^d with 0 <= k < 2^(d+1).
struct Gate {
    GateKind kind = GateKind::H;
    std::array<std::uint32_t, 3> wires{0, 0, 0};
    std::uint8_t arity = 1;
    std::uint32_t rz_k = 0;
    std::uint32_t rz_d = 0;
    std::int32_t control_record = -1; // classically controlled when >= 0
    bool tof_pair = false;            // H inserted by the tof -> H CCZ H expansion

    static Gate single(GateKind k, std::uint32_t q) {
        Gate g; g.kind = k; g.wires = {q, 0, 0}; g.arity = 1; return g;
    }
    static Gate cnot(std::uint32_t c, std::uint32_t t) {
        Gate g; g.kind = GateKind::CNOT; g.wires = {c, t, 0}; g.arity = 2; return g;
    }
    static Gate cz(std::uint32_t a, std::uint32_t b) {
        Gate g; g.kind = GateKind::CZ; g.wires = {a, b, 0}; g.arity = 2; return g;
    }
    static Gate ccz(std::uint32_t a, std::uint32_t b, std::uint32_t c) {
        Gate g; g.kind = GateKind::CCZ; g.wires = {a, b, c}; g.arity = 3; return g;
    }
    static Gate rz(std::uint32_t k, std::uint32_t d, std::uint32_t q) {
        Gate g; g.kind = GateKind::RZ; g.wires = {q, 0, 0}; g.arity = 1;
        g.rz_k = k; g.rz_d = d; return g;
    }

    bool operator==(const Gate& o) const {
        if (kind != o.kind || arity != o.arity || control_record != o.control_record) return false;
        for (std::uint8_t i = 0; i < arity; ++i) if (wires[i] != o.wires[i]) return false;
        if (kind == GateKind::RZ && (rz_k != o.rz_k || rz_d != o.rz_d)) return false;
        return true;
    }
};

// True when the gate is diagonal in the computational basis.
bool is_diagonal(const Gate& g);
// True when the gate belongs to the Clifford group.
bool is_clifford(const Gate& g);
// True for T, Tdg and odd RZ(k,d) with d >= 2 (the non-Clifford diagonals).
bool is_t_like(const Gate& g);

struct Circuit {
    std::uint32_t n_qubits = 0;
    std::uint32_t n_ancillas = 0;
    std::vector<std::string> wire_names; // size n_qubits + n_ancillas
    std::vector<Gate> gates;

    std::uint32_t n_wires() const { return n_qubits + n_ancillas; }

    static Circuit empty(std::uint32_t n);
    // Appends a fresh ancilla wire named anc<k> and returns its index.
    std::uint32_t add_ancilla();

    // Gate-exact equality; the qubit/ancilla split is bookkeeping.
    bool operator==(const Circuit& o) const {
        return n_wires() == o.n_wires() && gates == o.gates;
    }
};

struct ParseError : std::runtime_error {
    int line;
    ParseError(int line_, const std::string& what_)
        : std::runtime_error(".qc parse error at line " + std::to_string(line_) + ": " + what_),
          line(line_) {}
};

// .qc text format. "tof a b" parses to a CNOT; "tof a b c" to H CCZ H on the
// target with the two H gates tagged as a conjugation pair.
Circuit parse_qc(const std::string& text);
std::string emit_qc(const Circuit& c);

// Number of T/Tdg plus odd RZ(k,2) gates. CCZ counts as zero.
std::size_t t_count(const Circuit& c);
// Number of R_Z(pi/2^d)-grade gates: odd-k rotations at exactly level d.
std::size_t rz_count(const Circuit& c, std::uint32_t d);
// H gates strictly between the first and the last t-like gate.
// With exclude_tof_pairs, H gates tagged by the tof expansion are not counted.
std::size_t internal_hadamard_count(const Circuit& c, bool exclude_tof_pairs = false);

// Replaces every CCZ by its 7-T implementation (6 CNOTs, 7 T/Tdg).
Circuit decompose_ccz(const Circuit& c);

} // namespace topt
