#include <doctest.h>

#include <random>
#include <set>

#include "support.hpp"
#include "topt/bitmatrix.hpp"

using namespace topt;
using topt::testing::Rng;

namespace {

BitMatrix random_matrix(std::size_t rows, std::size_t cols, Rng& rng) {
    BitMatrix m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c)
            if (rng() & 1) m.set(r, c, true);
    return m;
}

// Rank via the size of the row span, enumerated over all row subsets.
std::size_t bruteforce_rank(const BitMatrix& m) {
    REQUIRE(m.n_rows() <= 12);
    std::set<std::vector<std::uint64_t>> span;
    for (std::uint64_t sub = 0; sub < (1ull << m.n_rows()); ++sub) {
        BitVec acc(m.n_cols());
        for (std::size_t r = 0; r < m.n_rows(); ++r)
            if (sub >> r & 1) acc ^= m.row(r);
        span.insert(acc.words());
    }
    std::size_t rank = 0;
    while ((std::size_t(1) << rank) < span.size()) ++rank;
    return rank;
}

bool in_span(const std::vector<BitVec>& basis, const BitVec& v) {
    std::vector<BitVec> rows = basis;
    BitMatrix a(rows);
    rows.push_back(v);
    BitMatrix b(rows);
    return rank(a) == rank(b);
}

} // namespace

TEST_CASE("echelonize identity") {
    auto e = echelonize(BitMatrix::identity(3));
    CHECK(e.rank == 3);
    CHECK(e.pivot_cols == std::vector<std::size_t>{0, 1, 2});
    CHECK(e.reduced == BitMatrix::identity(3));
}

TEST_CASE("echelonize duplicate rows") {
    BitMatrix m(2, 2);
    m.set(0, 0, true);
    m.set(0, 1, true);
    m.set(1, 0, true);
    m.set(1, 1, true);
    auto e = echelonize(m);
    CHECK(e.rank == 1);
    CHECK(e.reduced.get(0, 0));
    CHECK(e.reduced.get(0, 1));
    CHECK(e.reduced.row(1).is_zero());
}

TEST_CASE("echelonize rank matches subset enumeration and is idempotent") {
    Rng rng(11);
    for (int trial = 0; trial < 30; ++trial) {
        BitMatrix m = random_matrix(6, 10, rng);
        auto e = echelonize(m);
        CHECK(e.rank == bruteforce_rank(m));
        auto e2 = echelonize(e.reduced);
        CHECK(e2.reduced == e.reduced);
        // row space preserved
        std::vector<BitVec> rows;
        for (std::size_t i = 0; i < e.reduced.n_rows(); ++i) rows.push_back(e.reduced.row(i));
        for (std::size_t r = 0; r < m.n_rows(); ++r) CHECK(in_span(rows, m.row(r)));
    }
}

TEST_CASE("nullspace identity is empty") {
    CHECK(nullspace(BitMatrix::identity(4)).empty());
}

TEST_CASE("nullspace of a single row") {
    BitMatrix m(1, 3);
    m.set(0, 0, true);
    m.set(0, 1, true);
    auto basis = nullspace(m);
    REQUIRE(basis.size() == 2);
    CHECK(in_span(basis, BitVec::from_string("110")));
    CHECK(in_span(basis, BitVec::from_string("001")));
}

TEST_CASE("nullspace matches exhaustive kernel enumeration") {
    Rng rng(12);
    for (int trial = 0; trial < 20; ++trial) {
        BitMatrix m = random_matrix(4, 8, rng);
        auto basis = nullspace(m);
        for (const auto& v : basis) CHECK(m.mul_vec(v).is_zero());
        std::size_t kernel_size = 0;
        for (std::uint32_t x = 0; x < (1u << 8); ++x) {
            BitVec v(8);
            for (int b = 0; b < 8; ++b)
                if (x >> b & 1) v.set(b, true);
            if (m.mul_vec(v).is_zero()) {
                ++kernel_size;
                CHECK(in_span(basis, v));
            }
        }
        CHECK(kernel_size == (std::size_t(1) << basis.size()));
        CHECK(rank(m) + basis.size() == m.n_cols());
    }
}

TEST_CASE("solve_particular") {
    BitMatrix id = BitMatrix::identity(3);
    BitVec b = BitVec::from_string("101");
    auto x = solve_particular(id, b);
    REQUIRE(x.has_value());
    CHECK(*x == b);

    BitMatrix row(1, 2);
    row.set(0, 0, true);
    row.set(0, 1, true);
    auto y = solve_particular(row, BitVec::from_string("1"));
    REQUIRE(y.has_value());
    CHECK(row.mul_vec(*y) == BitVec::from_string("1"));

    BitMatrix zero(1, 2);
    CHECK(!solve_particular(zero, BitVec::from_string("1")).has_value());
}

TEST_CASE("try_invert round trips") {
    Rng rng(13);
    int found = 0;
    while (found < 10) {
        BitMatrix m = random_matrix(5, 5, rng);
        auto inv = try_invert(m);
        if (!inv) continue;
        ++found;
        CHECK(m.mul(*inv) == BitMatrix::identity(5));
        CHECK(inv->mul(m) == BitMatrix::identity(5));
    }
    BitMatrix singular(2, 2);
    singular.set(0, 0, true);
    singular.set(1, 0, true);
    CHECK(!try_invert(singular).has_value());
}

TEST_CASE("bitvec lexicographic order") {
    CHECK(BitVec::from_string("010").lex_less(BitVec::from_string("100")));
    CHECK(BitVec::from_string("001").lex_less(BitVec::from_string("010")));
    CHECK(!BitVec::from_string("100").lex_less(BitVec::from_string("100")));
    CHECK(BitVec::from_string("101").lowest_set() == 0);
    CHECK(BitVec(5).lowest_set() == 5);
}
