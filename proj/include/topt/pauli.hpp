#pragma once

#include <cstdint>
#include <vector>

#include "topt/bitvec.hpp"
#include "topt/circuit.hpp"

namespace topt {

// n-qubit Pauli product, sign +/-1. Per-qubit letter is encoded by
// (x,z): (0,0)=I, (1,0)=X, (0,1)=Z, (1,1)=Y, with Y the literal matrix.
struct PauliProduct {
    BitVec x, z;
    bool neg = false;

    explicit PauliProduct(std::size_t n) : x(n), z(n) {}
    PauliProduct(BitVec x_, BitVec z_, bool neg_ = false)
        : x(std::move(x_)), z(std::move(z_)), neg(neg_) {}

    std::size_t n_qubits() const { return x.size(); }
    bool is_identity_axis() const { return x.is_zero() && z.is_zero(); }

    bool operator==(const PauliProduct& o) const {
        return x == o.x && z == o.z && neg == o.neg;
    }
};

bool commutes(const PauliProduct& a, const PauliProduct& b);

// a*b with the i-exponent folded into the sign; products arising from
// tableau composition are always Hermitian, anything else asserts.
PauliProduct pauli_mul(const PauliProduct& a, const PauliProduct& b);

// Rotation exp(-i theta P / 2) with theta = k*pi/2^d, 0 < k < 2^(d+1),
// axis sign normalized to +.
struct PauliRotation {
    PauliProduct axis;
    std::uint32_t k = 1;
    std::uint32_t d = 2;

    PauliRotation(PauliProduct axis_, std::uint32_t k_, std::uint32_t d_);

    bool operator==(const PauliRotation& o) const {
        return axis == o.axis && k == o.k && d == o.d;
    }
};

// Images of the X_i and Z_i generators under conjugation by a Clifford C,
// i.e. img_x[i] = C^dag X_i C.
struct CliffordTableau {
    std::vector<PauliProduct> img_x, img_z;

    static CliffordTableau identity(std::size_t n);
    std::size_t n_qubits() const { return img_x.size(); }

    // Extends conjugation multiplicatively to an arbitrary Pauli product.
    PauliProduct image_of(const PauliProduct& p) const;
    // Updates the tableau for C <- g . C  (gate applied after C).
    void prepend_gate(const Gate& g);

    bool is_identity() const;
};

// g^dag P g for a single Clifford gate; throws on non-Clifford g.
PauliProduct conjugate_pauli(const PauliProduct& p, const Gate& g);
PauliRotation conjugate(const PauliRotation& r, const Gate& g);

struct RotationForm {
    std::vector<PauliRotation> rotations; // first element acts first
    CliffordTableau final_clifford;
    std::vector<Gate> clifford_gates;     // the gates making up the final Clifford
    double phase = 0.0;                   // global phase in radians
};

// Pushes every non-Clifford gate through the accumulated Clifford:
// U = e^{i phase} * C * R_m ... R_1. CCZ expands into 7 pi/4 rotations.
RotationForm circuit_to_rotations(const Circuit& c);

// Algorithm: each rotation lands in layer j+1 where j is the largest layer
// holding an anticommuting element (0 when none). Insertion order is kept
// within a layer.
std::vector<std::vector<std::size_t>> group_rotations(const std::vector<PauliRotation>& rs);

} // namespace topt
