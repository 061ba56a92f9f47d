#include "topt/bitmatrix.hpp"

#include <cassert>
#include <stdexcept>

namespace topt {

BitMatrix::BitMatrix(std::vector<BitVec> rows) : rows_(std::move(rows)) {
    if (!rows_.empty()) {
        n_cols_ = rows_[0].size();
        for (const auto& r : rows_)
            if (r.size() != n_cols_) throw std::invalid_argument("BitMatrix: ragged rows");
    }
}

BitMatrix BitMatrix::identity(std::size_t n) {
    BitMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.set(i, i, true);
    return m;
}

void BitMatrix::append_row(BitVec r) {
    if (rows_.empty() && n_cols_ == 0) n_cols_ = r.size();
    assert(r.size() == n_cols_);
    rows_.push_back(std::move(r));
}

BitVec BitMatrix::mul_vec(const BitVec& v) const {
    assert(v.size() == n_cols_);
    BitVec out(n_rows());
    for (std::size_t i = 0; i < n_rows(); ++i)
        if (BitVec::and_parity(rows_[i], v)) out.set(i, true);
    return out;
}

BitMatrix BitMatrix::transposed() const {
    BitMatrix t(n_cols_, n_rows());
    for (std::size_t r = 0; r < n_rows(); ++r)
        for (std::size_t c = 0; c < n_cols_; ++c)
            if (rows_[r].get(c)) t.set(c, r, true);
    return t;
}

BitMatrix BitMatrix::mul(const BitMatrix& o) const {
    assert(n_cols_ == o.n_rows());
    BitMatrix out(n_rows(), o.n_cols());
    for (std::size_t i = 0; i < n_rows(); ++i)
        for (std::size_t k = 0; k < n_cols_; ++k)
            if (rows_[i].get(k)) out.rows_[i] ^= o.rows_[k];
    return out;
}

EchelonForm echelonize(const BitMatrix& m) {
    EchelonForm e;
    e.reduced = m;
    const std::size_t nr = m.n_rows(), nc = m.n_cols();
    std::size_t r = 0;
    for (std::size_t c = 0; c < nc && r < nr; ++c) {
        std::size_t piv = nr;
        for (std::size_t i = r; i < nr; ++i)
            if (e.reduced.get(i, c)) { piv = i; break; }
        if (piv == nr) continue;
        if (piv != r) std::swap(e.reduced.row(piv), e.reduced.row(r));
        for (std::size_t i = 0; i < nr; ++i)
            if (i != r && e.reduced.get(i, c)) e.reduced.row(i) ^= e.reduced.row(r);
        e.pivot_cols.push_back(c);
        ++r;
    }
    e.rank = r;
    return e;
}

std::vector<BitVec> nullspace(const BitMatrix& m) {
    const std::size_t nc = m.n_cols();
    EchelonForm e = echelonize(m);
    std::vector<bool> is_pivot(nc, false);
    for (std::size_t c : e.pivot_cols) is_pivot[c] = true;

    std::vector<BitVec> basis;
    for (std::size_t f = 0; f < nc; ++f) {
        if (is_pivot[f]) continue;
        BitVec v(nc);
        v.set(f, true);
        for (std::size_t p = 0; p < e.pivot_cols.size(); ++p)
            if (e.reduced.get(p, f)) v.set(e.pivot_cols[p], true);
        basis.push_back(std::move(v));
    }
    return basis;
}

std::optional<BitVec> solve_particular(const BitMatrix& m, const BitVec& b) {
    assert(b.size() == m.n_rows());
    // Eliminate on [M | b].
    BitMatrix aug(m.n_rows(), m.n_cols() + 1);
    for (std::size_t r = 0; r < m.n_rows(); ++r) {
        for (std::size_t c = 0; c < m.n_cols(); ++c)
            if (m.get(r, c)) aug.set(r, c, true);
        if (b.get(r)) aug.set(r, m.n_cols(), true);
    }
    const std::size_t nr = aug.n_rows(), nc = m.n_cols();
    std::vector<std::size_t> pivot_cols;
    std::size_t r = 0;
    for (std::size_t c = 0; c < nc && r < nr; ++c) {
        std::size_t piv = nr;
        for (std::size_t i = r; i < nr; ++i)
            if (aug.get(i, c)) { piv = i; break; }
        if (piv == nr) continue;
        if (piv != r) std::swap(aug.row(piv), aug.row(r));
        for (std::size_t i = 0; i < nr; ++i)
            if (i != r && aug.get(i, c)) aug.row(i) ^= aug.row(r);
        pivot_cols.push_back(c);
        ++r;
    }
    for (std::size_t i = r; i < nr; ++i)
        if (aug.get(i, nc)) return std::nullopt; // 0 = 1 row
    BitVec x(nc);
    for (std::size_t p = 0; p < pivot_cols.size(); ++p)
        if (aug.get(p, nc)) x.set(pivot_cols[p], true);
    return x;
}

std::size_t rank(const BitMatrix& m) { return echelonize(m).rank; }

std::optional<BitMatrix> try_invert(const BitMatrix& m) {
    const std::size_t n = m.n_rows();
    if (m.n_cols() != n) return std::nullopt;
    BitMatrix aug(n, 2 * n);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c)
            if (m.get(r, c)) aug.set(r, c, true);
        aug.set(r, n + r, true);
    }
    std::size_t row = 0;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = n;
        for (std::size_t i = row; i < n; ++i)
            if (aug.get(i, c)) { piv = i; break; }
        if (piv == n) return std::nullopt;
        if (piv != row) std::swap(aug.row(piv), aug.row(row));
        for (std::size_t i = 0; i < n; ++i)
            if (i != row && aug.get(i, c)) aug.row(i) ^= aug.row(row);
        ++row;
    }
    BitMatrix inv(n, n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c)
            if (aug.get(r, n + c)) inv.set(r, c, true);
    return inv;
}

} // namespace topt
