#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>

#include "topt/circuit.hpp"
#include "topt/pauli.hpp"
#include "topt/phasepoly.hpp"

// Brute-force oracles. These deliberately avoid the code paths of the
// modules they check: tensor entries are recomputed column-wise, phase
// functions are evaluated pointwise, unitaries are literal matrix products.
namespace topt::verify {

bool tensors_equal(const ParityTable& p, const ParityTable& q, std::uint32_t order);

// Pointwise phase-function and output-map comparison over all 2^n basis
// states, exact integers mod 2^(d+1); rejects widths above 20 wires.
bool phase_equal(const Circuit& a, const Circuit& b, std::uint32_t d);

// Exhaustive search over subsets of the 2^n - 1 nonzero columns for the
// smallest table matching the tensor; nullopt when max_m is exceeded.
std::optional<std::size_t> minimal_columns(const SignatureTensor& t, std::size_t max_m);

Eigen::MatrixXcd dense_unitary(const Circuit& c);
Eigen::MatrixXcd dense_pauli(const PauliProduct& p);
Eigen::MatrixXcd dense_rotation(const PauliRotation& r);

bool equal_up_to_phase(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b, double tol = 1e-10);

} // namespace topt::verify
