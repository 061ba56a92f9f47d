#pragma once

#include <cstdint>
#include <vector>

#include "topt/bitmatrix.hpp"
#include "topt/bitvec.hpp"
#include "topt/circuit.hpp"
#include "topt/phasepoly.hpp"

namespace topt {

// One CCZ acting on linear combinations over the a-, b- and c-registers.
// All three combinations are nonzero.
struct CczTriple {
    BitVec u, v, w; // n bits each

    bool operator==(const CczTriple& o) const { return u == o.u && v == o.v && w == o.w; }
};

struct GfMultSpec {
    std::uint32_t n = 0;
    BitVec modulus;     // n+1 bits, bit i = coefficient of x^i
    BitMatrix m;        // n x n reduction matrix, column i = x^(n+i) mod f
    BitMatrix m_tilde;  // c-register basis change, m^T
};

// Irreducibility over GF(2) (Rabin's test).
bool is_irreducible(const BitVec& poly);

// Lexicographically smallest irreducible polynomial of degree n.
BitVec default_modulus(std::uint32_t n);

// Builds the multiplier description; throws on a reducible modulus or
// degree mismatch.
GfMultSpec make_gf_spec(std::uint32_t n, const BitVec& modulus);

struct GfMultResult {
    std::vector<CczTriple> triples;
    Circuit core; // Hadamard-free: CNOT ladders around each CCZ, 3n wires
};

// Karatsuba-style recursion; odd sizes are padded at the high index and
// vanished or mergeable terms are eliminated. At most 3^ceil(log2 n) CCZs.
GfMultResult generate(const GfMultSpec& spec);

// Order-3 tensor of the multiplier's cubic phase over the 3n wires,
// built directly from the convolution sums with c' = m^T c substituted.
SignatureTensor gf_reference_tensor(const GfMultSpec& spec);

// Full multiplier in Toffoli form: each CCZ conjugated by H on its target.
Circuit multiplier_circuit(const GfMultSpec& spec);

} // namespace topt
