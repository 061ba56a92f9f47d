#include <doctest.h>

#include "support.hpp"
#include "topt/optimize.hpp"
#include "topt/verify.hpp"

using namespace topt;
using topt::testing::Rng;

TEST_CASE("tensors_equal basics") {
    ParityTable ccz = topt::testing::ccz_table();
    CHECK(verify::tensors_equal(ccz, ccz, 3));
    std::vector<BitVec> cols(ccz.columns.begin(), ccz.columns.end() - 1);
    ParityTable dropped = ParityTable::from_columns(3, 2, cols);
    CHECK(!verify::tensors_equal(ccz, dropped, 3));
}

TEST_CASE("tensors_equal across admissible moves") {
    Rng rng(91);
    for (int trial = 0; trial < 15; ++trial) {
        ParityTable p = topt::testing::random_table(4, 10, 2, rng);
        // any y in the wedge-system kernel gives a tensor-preserving move
        std::vector<BitVec> wedge;
        for (std::uint32_t a = 0; a < p.n; ++a)
            for (std::uint32_t b = a; b < p.n; ++b) wedge.push_back(p.rows[a] & p.rows[b]);
        auto kernel = nullspace(BitMatrix(wedge));
        if (kernel.empty()) continue;
        const BitVec& y = kernel[0];
        const BitVec z = topt::testing::random_nonzero_bits(p.n, rng);
        ParityTable q = apply_move(p, z, y);
        CHECK(verify::tensors_equal(p, q, 3));
    }
}

TEST_CASE("phase_equal basics") {
    Circuit fig = parse_qc(topt::testing::fig_ccz_qc());
    Circuit ccz = Circuit::empty(3);
    ccz.gates.push_back(Gate::ccz(0, 1, 2));
    CHECK(verify::phase_equal(fig, ccz, 2));

    Circuit t = Circuit::empty(1);
    t.gates.push_back(Gate::single(GateKind::T, 0));
    Circuit s = Circuit::empty(1);
    s.gates.push_back(Gate::single(GateKind::S, 0));
    CHECK(!verify::phase_equal(t, s, 2));

    Circuit wide = Circuit::empty(21);
    CHECK_THROWS(verify::phase_equal(wide, wide, 2));
}

TEST_CASE("minimal_columns") {
    SignatureTensor zero;
    zero.n = 3;
    zero.order = 3;
    CHECK(verify::minimal_columns(zero, 8) == 0);

    auto ccz = signature_tensor(topt::testing::ccz_table(), 3);
    CHECK(verify::minimal_columns(ccz, 8) == 7);
    CHECK(!verify::minimal_columns(ccz, 6).has_value());

    SignatureTensor diag;
    diag.n = 3;
    diag.order = 3;
    diag.odd_supports.insert({1});
    CHECK(verify::minimal_columns(diag, 8) == 1);
}

TEST_CASE("dense_unitary basics") {
    Circuit h = Circuit::empty(1);
    h.gates.push_back(Gate::single(GateKind::H, 0));
    auto u = verify::dense_unitary(h);
    const double s = 0.7071067811865475244;
    CHECK(std::abs(u(0, 0).real() - s) < 1e-12);
    CHECK(std::abs(u(1, 1).real() + s) < 1e-12);
    CHECK(std::abs(u(0, 1).real() - s) < 1e-12);

    Circuit ccz = Circuit::empty(3);
    ccz.gates.push_back(Gate::ccz(0, 1, 2));
    auto c = verify::dense_unitary(ccz);
    for (int i = 0; i < 8; ++i) {
        CHECK(std::abs(c(i, i) - (i == 7 ? -1.0 : 1.0)) < 1e-12);
    }

    Circuit fig = parse_qc(topt::testing::fig_ccz_qc());
    CHECK(verify::equal_up_to_phase(verify::dense_unitary(fig), c, 1e-10));
}

TEST_CASE("equal_up_to_phase tolerates only a global factor") {
    Circuit t = Circuit::empty(1);
    t.gates.push_back(Gate::single(GateKind::T, 0));
    auto u = verify::dense_unitary(t);
    CHECK(verify::equal_up_to_phase(std::exp(std::complex<double>(0, 1.234)) * u, u));
    Circuit s = Circuit::empty(1);
    s.gates.push_back(Gate::single(GateKind::S, 0));
    CHECK(!verify::equal_up_to_phase(verify::dense_unitary(s), u));
}
