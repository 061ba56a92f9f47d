#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "topt/circuit.hpp"
#include "topt/pauli.hpp"

namespace topt {

// A classically controlled Clifford correction attached to one
// measurement record: a Pauli frame plus spawned pi/2-grade rotations.
struct CliffordCorrection {
    std::int32_t record = -1;
    PauliProduct pauli;
    std::vector<PauliRotation> rotations; // all Clifford angles

    explicit CliffordCorrection(std::size_t n) : pauli(n) {}
};

struct GadgetizedCircuit {
    Circuit core;  // no internal Hadamards, n+h wires
    Circuit pre;   // Clifford prefix: ancilla |+> preparations
    Circuit post;  // Clifford suffix: measurement basis changes
    std::vector<std::pair<std::uint32_t, std::int32_t>> records; // (measured wire, record)
    std::vector<CliffordCorrection> corrections; // filled by defer_corrections
    std::vector<std::uint32_t> output_wires;     // logical wire -> physical wire
};

// Replaces each internal H by an ancilla, a CZ and a wire swap; the
// classically controlled X lands in the core as a controlled gate.
// Hadamards outside the first..last t-like range stay in place.
GadgetizedCircuit gadgetize(const Circuit& c);

// Commutes every classically controlled X to the end of the core. Crossing
// a non-Clifford rotation of angle theta spawns a controlled rotation of
// angle -2*theta on the same record; crossing a Clifford conjugates the
// Pauli frame. Rejects cores whose rotations sit above level 2, where the
// spawned rotation would not be Clifford.
GadgetizedCircuit defer_corrections(const GadgetizedCircuit& g);

// .qc text of pre+core+post with records and corrections rendered as
// comment lines ("# cc[r0] ...").
std::string emit_qc(const GadgetizedCircuit& g);

} // namespace topt
