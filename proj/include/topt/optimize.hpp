#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "topt/bitmatrix.hpp"
#include "topt/bitvec.hpp"
#include "topt/circuit.hpp"
#include "topt/phasepoly.hpp"

namespace topt {

using Deadline = std::optional<std::chrono::steady_clock::time_point>;

struct OptimizeReport {
    std::string method;
    std::size_t initial_columns = 0;
    std::size_t final_columns = 0;
    std::size_t iterations = 0;
    double wall_ms = 0.0;
    bool fixpoint_verified = false;
    bool hit_iteration_guard = false;
    bool timed_out = false;

    std::string to_text() const;
};

struct OptimizeResult {
    ParityTable table;
    OptimizeReport report;
};

// One rank-one update candidate together with its objective value.
struct ReductionMove {
    BitVec z;
    BitVec y;
    long score = 0;
};

// P' = P (+) z y^T, with z appended as an extra column when |y| is odd,
// then zero columns dropped and duplicate columns cancelled in pairs.
ParityTable apply_move(const ParityTable& p, const BitVec& z, const BitVec& y);

// Generators of { y | exists y', b : L y (+) X y' (+) b v = 0 }, each with
// a witness (y', b). The generators span exactly the projection of the
// joint kernel onto the y block.
struct OffsetKernel {
    std::vector<BitVec> generators;
    std::vector<std::pair<BitVec, bool>> witnesses;
};
OffsetKernel kernel_with_offset(const BitMatrix& l, const BitMatrix& x, const BitVec& v);

// Third-order homogeneous polynomial elimination; fixpoint when the wedge
// system L has no admissible kernel vector. Preserves the order-3 tensor.
OptimizeResult tohpe(const ParityTable& p, Deadline deadline = {});

// Baseline duplicate-and-destroy: per column-pair z, search the chi kernel
// for y with y_i (+) y_j = 1. Preserves the order-3 tensor.
OptimizeResult todd(const ParityTable& p, Deadline deadline = {});

// Faster duplicate-and-destroy built on the offset-kernel condition;
// starts with a tohpe pass. Preserves the order-3 tensor.
OptimizeResult fast_todd(const ParityTable& p, Deadline deadline = {});

// Generalizations preserving the order-(d+1) tensor. d_tohpe accepts any
// d >= 0; d_fast_todd supports d in {1,2,3}.
OptimizeResult d_tohpe(const ParityTable& p, std::uint32_t d, Deadline deadline = {});
OptimizeResult d_fast_todd(const ParityTable& p, std::uint32_t d, Deadline deadline = {});

// Splits off the phase content of qubit beta: returns (P-tilde, P-prime)
// where P-prime has row beta all-ones and at most
// sum_{i<d} C(n-1,i) + 1 columns, P-tilde has row beta zero, and the
// order-(d+1) tensors satisfy tensor(P-tilde) (+) tensor(P-prime) =
// tensor(P).
std::pair<ParityTable, ParityTable> peel_qubit(const ParityTable& p, std::uint32_t beta,
                                               std::uint32_t d);

// Table-level optimizer for a circuit cut at h internal Hadamards.
// segments are in time order (segments[0] acts first); h_qubits[i] is the
// Hadamard wire between segments[i] and segments[i+1].
std::vector<ParityTable> bounded_optimize(const std::vector<ParityTable>& segments,
                                          const std::vector<std::uint32_t>& h_qubits,
                                          std::uint32_t d);

// Polynomial-level peel: p == p_tilde + p_prime exactly (mod 2^(d+1)),
// with p_tilde free of qubit beta. The even-weight residue is folded into
// p_prime.
std::pair<PhasePolynomial, PhasePolynomial> peel_poly(const PhasePolynomial& p,
                                                      std::uint32_t beta, std::uint32_t d);

// Exact circuit pipeline for Hadamard-cut segments: returns resynthesized
// segment circuits (same time order) whose composition with the original
// Hadamards reproduces the input exactly. carried[i] is the diagonal that
// commuted through the i-th Hadamard into the next segment.
struct BoundedSegments {
    std::vector<Circuit> segments;
    std::vector<PhasePolynomial> carried;
    std::size_t rz_total = 0;
};
BoundedSegments bounded_pipeline(const std::vector<Circuit>& segments,
                                 const std::vector<std::uint32_t>& h_qubits, std::uint32_t d);

} // namespace topt
