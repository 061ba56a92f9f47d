#pragma once

#include <random>
#include <string>
#include <vector>

#include "topt/bitvec.hpp"
#include "topt/circuit.hpp"
#include "topt/phasepoly.hpp"

namespace topt::testing {

using Rng = std::mt19937_64;

inline BitVec random_nonzero_bits(std::uint32_t n, Rng& rng) {
    BitVec v(n);
    while (v.is_zero())
        for (std::uint32_t i = 0; i < n; ++i) v.set(i, rng() & 1);
    return v;
}

// m raw random nonzero columns; duplicates collapse during normalization.
inline ParityTable random_table(std::uint32_t n, std::size_t m, std::uint32_t d, Rng& rng) {
    std::vector<BitVec> cols;
    for (std::size_t j = 0; j < m; ++j) cols.push_back(random_nonzero_bits(n, rng));
    return ParityTable::from_columns(n, d, std::move(cols));
}

// The 3-qubit table of the doubly-controlled Z phase: all seven nonzero
// parities.
inline ParityTable ccz_table() {
    std::vector<BitVec> cols;
    for (std::uint32_t v = 1; v < 8; ++v) {
        BitVec c(3);
        for (int b = 0; b < 3; ++b)
            if (v >> b & 1) c.set(b, true);
        cols.push_back(c);
    }
    return ParityTable::from_columns(3, 2, std::move(cols));
}

// Two CCZ blocks on disjoint qubit triples: 6 rows, 14 columns.
inline ParityTable disjoint_ccz_table() {
    std::vector<BitVec> cols;
    for (int block = 0; block < 2; ++block)
        for (std::uint32_t v = 1; v < 8; ++v) {
            BitVec c(6);
            for (int b = 0; b < 3; ++b)
                if (v >> b & 1) c.set(3 * block + b, true);
            cols.push_back(c);
        }
    return ParityTable::from_columns(6, 2, std::move(cols));
}

// The .qc transcription of the 7-T CCZ implementation.
inline std::string fig_ccz_qc() {
    return ".v x1 x2 x3\n"
           "BEGIN\n"
           "T x1\nT x2\nT x3\n"
           "tof x1 x2\nT* x2\ntof x1 x2\n"
           "tof x1 x3\nT* x3\ntof x2 x3\nT x3\ntof x1 x3\nT* x3\ntof x2 x3\n"
           "END\n";
}

// Random Hadamard-free circuit over {CNOT, X, Z, S, S*, T, T*, CZ, CCZ}.
inline Circuit random_hfree_circuit(std::uint32_t n, std::size_t len, Rng& rng) {
    Circuit c = Circuit::empty(n);
    std::uniform_int_distribution<int> kind(0, 8);
    std::uniform_int_distribution<std::uint32_t> wire(0, n - 1);
    for (std::size_t i = 0; i < len; ++i) {
        const std::uint32_t a = wire(rng);
        std::uint32_t b = wire(rng), t = wire(rng);
        switch (kind(rng)) {
            case 0:
                while (b == a) b = wire(rng);
                c.gates.push_back(Gate::cnot(a, b));
                break;
            case 1: c.gates.push_back(Gate::single(GateKind::X, a)); break;
            case 2: c.gates.push_back(Gate::single(GateKind::Z, a)); break;
            case 3: c.gates.push_back(Gate::single(GateKind::S, a)); break;
            case 4: c.gates.push_back(Gate::single(GateKind::Sdg, a)); break;
            case 5: c.gates.push_back(Gate::single(GateKind::T, a)); break;
            case 6: c.gates.push_back(Gate::single(GateKind::Tdg, a)); break;
            case 7:
                while (b == a) b = wire(rng);
                c.gates.push_back(Gate::cz(a, b));
                break;
            default:
                if (n < 3) { c.gates.push_back(Gate::single(GateKind::T, a)); break; }
                while (b == a) b = wire(rng);
                while (t == a || t == b) t = wire(rng);
                c.gates.push_back(Gate::ccz(a, b, t));
                break;
        }
    }
    return c;
}

// Random circuit over the full gate set including H.
inline Circuit random_clifford_t_circuit(std::uint32_t n, std::size_t len, std::size_t n_h,
                                         Rng& rng) {
    Circuit c = random_hfree_circuit(n, len, rng);
    std::uniform_int_distribution<std::uint32_t> wire(0, n - 1);
    std::uniform_int_distribution<std::size_t> pos(1, c.gates.size() > 1 ? c.gates.size() - 1 : 1);
    for (std::size_t i = 0; i < n_h; ++i)
        c.gates.insert(c.gates.begin() + static_cast<std::ptrdiff_t>(pos(rng)),
                       Gate::single(GateKind::H, wire(rng)));
    return c;
}

} // namespace topt::testing
