#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "topt/bitmatrix.hpp"
#include "topt/bitvec.hpp"
#include "topt/circuit.hpp"

namespace topt {

// Phase function of a Hadamard-free circuit at level d:
//   |x> -> e^{i pi/2^d (sum_i a_i <y_i, x> + constant)} |Gx (+) affine>
// with weights a_i mod 2^(d+1) and nonzero parities y_i.
struct PhasePolynomial {
    std::uint32_t n = 0;
    std::uint32_t d = 2;
    std::vector<std::pair<BitVec, std::uint32_t>> terms;
    BitMatrix output_map;   // n x n, invertible
    BitVec output_affine;   // n bits
    std::uint32_t constant = 0;

    static PhasePolynomial identity(std::uint32_t n, std::uint32_t d);
    std::uint32_t modulus() const { return 1u << (d + 1); }

    // Adds weight on a parity whose value is <mask,x> (+) complemented.
    void add_term(const BitVec& mask, bool complemented, std::uint32_t weight);
    // Merges duplicate parities, drops zero weights; insertion order kept.
    void canonicalize();

    // Evaluates the phase (including the constant) on one basis input.
    std::uint32_t eval(const BitVec& x) const;
};

// Bit matrix whose columns are the odd-weight parities. A row-major mirror
// is kept alongside the columns; both views are updated together.
struct ParityTable {
    std::uint32_t n = 0;
    std::uint32_t d = 2;
    std::vector<BitVec> columns; // m columns of n bits
    std::vector<BitVec> rows;    // n rows of m bits

    static ParityTable from_columns(std::uint32_t n, std::uint32_t d,
                                    std::vector<BitVec> cols, bool normalized = true);
    std::size_t n_cols() const { return columns.size(); }
    void rebuild_rows();
    // Drops zero columns and cancels duplicate columns in pairs.
    void normalize();

    bool operator==(const ParityTable& o) const {
        return n == o.n && columns == o.columns;
    }
};

// Symmetric GF(2) tensor of a fixed order; an entry depends only on the
// support of its index multiset, so odd entries are stored by support.
struct SignatureTensor {
    std::uint32_t n = 0;
    std::uint32_t order = 3;
    std::set<std::vector<std::uint32_t>> odd_supports; // sorted distinct indices

    bool entry(std::vector<std::uint32_t> indices) const;
    bool operator==(const SignatureTensor& o) const {
        return n == o.n && order == o.order && odd_supports == o.odd_supports;
    }
    bool is_zero() const { return odd_supports.empty(); }
};

// Phase-polynomial extraction; rejects H gates, classical controls and
// rotations above level d.
PhasePolynomial extract(const Circuit& c, std::uint32_t d);

ParityTable to_parity_table(const PhasePolynomial& p);

// entry(a_1..a_k) = |AND of the selected rows| mod 2.
SignatureTensor signature_tensor(const ParityTable& p, std::uint32_t order);

// Even-weight polynomial r with (optimized, all weights 1) + r == original
// as functions mod 2^(d+1). Throws when the order-(d+1) tensors disagree.
PhasePolynomial clifford_residue(const PhasePolynomial& original, const ParityTable& optimized);

// CNOT ladders around one rotation per term, then a CNOT network for the
// output map, X gates for the affine part and a gadget for the constant.
Circuit synthesize(const PhasePolynomial& p);

// Coefficient of every order-(i+1) monomial in the expansion of
// a*(x_1 (+) ... (+) x_k): entry i holds a*(-2)^i mod 2^(d+1),
// truncated at order d+1.
std::vector<std::uint32_t> expand_parity(std::uint32_t parity_size, std::uint32_t weight,
                                         std::uint32_t d);

// Plain-text exchange format: "n m d", n rows of m chars in {0,1},
// then one line of m weights mod 2^(d+1).
std::string write_table_text(const PhasePolynomial& p);
PhasePolynomial read_table_text(const std::string& text);
// A bare table is written as the all-weights-one polynomial.
std::string write_table_text(const ParityTable& t);

// CNOT network realizing an invertible linear map (Gauss-Jordan).
std::vector<Gate> linear_network(const BitMatrix& map);

} // namespace topt
