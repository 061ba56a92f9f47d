#pragma once

#include <optional>
#include <vector>

#include "topt/bitvec.hpp"

namespace topt {

// Dense GF(2) matrix stored as a list of bit-packed rows.
class BitMatrix {
public:
    BitMatrix() = default;
    BitMatrix(std::size_t n_rows, std::size_t n_cols)
        : n_cols_(n_cols), rows_(n_rows, BitVec(n_cols)) {}
    explicit BitMatrix(std::vector<BitVec> rows);

    static BitMatrix identity(std::size_t n);

    std::size_t n_rows() const { return rows_.size(); }
    std::size_t n_cols() const { return n_cols_; }

    BitVec& row(std::size_t i) { return rows_[i]; }
    const BitVec& row(std::size_t i) const { return rows_[i]; }
    bool get(std::size_t r, std::size_t c) const { return rows_[r].get(c); }
    void set(std::size_t r, std::size_t c, bool b) { rows_[r].set(c, b); }

    void append_row(BitVec r);

    BitVec mul_vec(const BitVec& v) const;       // M v, v has n_cols bits
    BitMatrix transposed() const;
    BitMatrix mul(const BitMatrix& o) const;

    bool operator==(const BitMatrix& o) const { return n_cols_ == o.n_cols_ && rows_ == o.rows_; }

private:
    std::size_t n_cols_ = 0;
    std::vector<BitVec> rows_;
};

struct EchelonForm {
    BitMatrix reduced;            // row-reduced echelon form
    std::size_t rank = 0;
    std::vector<std::size_t> pivot_cols;
};

// Row-reduced echelon form over GF(2). Pivot choice is always the
// lowest-index candidate column, so outputs are reproducible.
EchelonForm echelonize(const BitMatrix& m);

// Basis of the right kernel {v : Mv = 0}, one vector per free column,
// in increasing free-column order.
std::vector<BitVec> nullspace(const BitMatrix& m);

// Some x with Mx = b, or nullopt when the system is inconsistent.
std::optional<BitVec> solve_particular(const BitMatrix& m, const BitVec& b);

std::size_t rank(const BitMatrix& m);

// Inverse of a square invertible matrix; nullopt when singular.
std::optional<BitMatrix> try_invert(const BitMatrix& m);

} // namespace topt
