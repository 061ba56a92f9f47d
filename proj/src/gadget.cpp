#include "topt/gadget.hpp"

#include <sstream>
#include <stdexcept>

namespace topt {

namespace {

Gate gate_inverse(const Gate& g) {
    Gate inv = g;
    switch (g.kind) {
        case GateKind::S:   inv.kind = GateKind::Sdg; break;
        case GateKind::Sdg: inv.kind = GateKind::S; break;
        case GateKind::T:   inv.kind = GateKind::Tdg; break;
        case GateKind::Tdg: inv.kind = GateKind::T; break;
        case GateKind::RZ: {
            const std::uint32_t mod = 1u << (g.rz_d + 1);
            inv.rz_k = (mod - g.rz_k % mod) % mod;
            break;
        }
        default: break; // H, X, Z, CNOT, CZ, CCZ are involutions
    }
    return inv;
}

} // namespace

GadgetizedCircuit gadgetize(const Circuit& c) {
    // Internal region: strictly between the first and last t-like gate.
    std::size_t first = c.gates.size(), last = 0;
    bool any_t = false;
    for (std::size_t i = 0; i < c.gates.size(); ++i) {
        if (is_t_like(c.gates[i])) {
            if (!any_t) first = i;
            last = i;
            any_t = true;
        }
    }

    GadgetizedCircuit out;
    out.core = c;
    out.core.gates.clear();
    out.pre = Circuit{};
    out.post = Circuit{};
    std::vector<std::uint32_t> wire_map(c.n_wires());
    for (std::uint32_t i = 0; i < c.n_wires(); ++i) wire_map[i] = i;

    std::int32_t next_record = 0;
    for (std::size_t i = 0; i < c.gates.size(); ++i) {
        Gate g = c.gates[i];
        for (std::uint8_t w = 0; w < g.arity; ++w) g.wires[w] = wire_map[g.wires[w]];
        const bool internal = any_t && i > first && i < last && g.kind == GateKind::H &&
                              g.control_record < 0;
        if (!internal) {
            out.core.gates.push_back(g);
            continue;
        }
        const std::uint32_t old_wire = g.wires[0];
        const std::uint32_t anc = out.core.add_ancilla();
        out.pre.gates.push_back(Gate::single(GateKind::H, anc));
        out.core.gates.push_back(Gate::cz(old_wire, anc));
        Gate corr = Gate::single(GateKind::X, anc);
        corr.control_record = next_record;
        out.core.gates.push_back(corr);
        out.post.gates.push_back(Gate::single(GateKind::H, old_wire));
        out.records.emplace_back(old_wire, next_record);
        ++next_record;
        // Subsequent gates on this logical wire act on the ancilla.
        for (auto& m : wire_map)
            if (m == old_wire) m = anc;
    }
    out.pre.n_qubits = out.core.n_wires();
    out.pre.wire_names = out.core.wire_names;
    out.post.n_qubits = out.core.n_wires();
    out.post.wire_names = out.core.wire_names;
    out.output_wires = std::move(wire_map);
    return out;
}

namespace {

// Local parity decomposition of a diagonal gate: (mask over its own wires,
// weight) pairs at the given level d, exactly as the extractor uses.
struct LocalTerm {
    std::uint32_t wire_mask; // bit i = gate wire i
    std::uint32_t weight;
};

std::vector<LocalTerm> diagonal_terms(const Gate& g, std::uint32_t d) {
    const std::uint32_t mod = 1u << (d + 1);
    switch (g.kind) {
        case GateKind::Z:   return {{1, 1u << d}};
        case GateKind::S:   return {{1, 1u << (d - 1)}};
        case GateKind::Sdg: return {{1, 3u << (d - 1)}};
        case GateKind::T:   return {{1, 1u << (d - 2)}};
        case GateKind::Tdg: return {{1, 7u << (d - 2)}};
        case GateKind::RZ:  return {{1, g.rz_k << (d - g.rz_d)}};
        case GateKind::CZ: {
            const std::uint32_t w = 1u << (d - 1);
            return {{1, w}, {2, w}, {3, mod - w}};
        }
        case GateKind::CCZ: {
            const std::uint32_t w = 1u << (d - 2);
            return {{1, w},       {2, w},       {4, w},
                    {3, mod - w}, {5, mod - w}, {6, mod - w},
                    {7, w}};
        }
        default:
            throw std::logic_error("diagonal_terms: not a diagonal gate");
    }
}

std::uint32_t level_of(const Gate& g) {
    switch (g.kind) {
        case GateKind::Z: return 0;
        case GateKind::S: case GateKind::Sdg: case GateKind::CZ: return 1;
        case GateKind::T: case GateKind::Tdg: case GateKind::CCZ: return 2;
        case GateKind::RZ: return g.rz_d;
        default: return 0;
    }
}

} // namespace

GadgetizedCircuit defer_corrections(const GadgetizedCircuit& g) {
    GadgetizedCircuit out = g;
    out.core.gates.clear();
    out.corrections.clear();
    const std::size_t nw = g.core.n_wires();

    std::vector<Gate> plain;
    std::vector<std::pair<std::size_t, Gate>> controlled; // (index into plain, gate)
    for (const auto& gate : g.core.gates) {
        if (gate.control_record >= 0) {
            if (gate.kind != GateKind::X)
                throw std::invalid_argument("defer_corrections: non-X controlled gate");
            controlled.emplace_back(plain.size(), gate);
        } else {
            plain.push_back(gate);
        }
    }
    out.core.gates = plain;

    for (const auto& [start, xgate] : controlled) {
        CliffordCorrection corr(nw);
        corr.record = xgate.control_record;
        corr.pauli.x.set(xgate.wires[0], true);

        for (std::size_t j = start; j < plain.size(); ++j) {
            const Gate& gj = plain[j];
            if (is_clifford(gj)) {
                // Move the frame right: P -> g P g^dag.
                const Gate inv = gate_inverse(gj);
                corr.pauli = conjugate_pauli(corr.pauli, inv);
                for (auto& r : corr.rotations) r = conjugate(r, inv);
                continue;
            }
            if (!is_diagonal(gj))
                throw std::invalid_argument("defer_corrections: core contains internal H");
            const std::uint32_t lvl = level_of(gj);
            // X^S D X^S D^dag: every local parity with odd overlap against
            // the X mask contributes weight -2a.
            for (const auto& term : diagonal_terms(gj, lvl)) {
                bool overlap = false;
                for (int b = 0; b < gj.arity; ++b)
                    if ((term.wire_mask >> b & 1u) && corr.pauli.x.get(gj.wires[b]))
                        overlap = !overlap;
                if (!overlap) continue;
                const std::uint32_t mod = 1u << (lvl + 1);
                std::uint32_t spawned = (2u * (mod - term.weight % mod)) % mod;
                if (spawned == 0) continue;
                std::uint32_t slvl = lvl;
                while ((spawned & 1u) == 0 && slvl > 0) { spawned >>= 1; --slvl; }
                if (!is_clifford(Gate::rz(spawned, slvl, 0)))
                    throw std::invalid_argument(
                        "defer_corrections: correction crosses a rotation above level 2");
                PauliProduct axis(nw);
                for (int b = 0; b < gj.arity; ++b)
                    if (term.wire_mask >> b & 1u) axis.z.set(gj.wires[b], true);
                corr.rotations.emplace_back(std::move(axis), spawned, slvl);
            }
        }
        out.corrections.push_back(std::move(corr));
    }
    return out;
}

namespace {

std::string pauli_string(const PauliProduct& p, const std::vector<std::string>& names) {
    std::string s;
    for (std::size_t q = 0; q < p.n_qubits(); ++q) {
        const bool x = p.x.get(q), z = p.z.get(q);
        if (!x && !z) continue;
        if (!s.empty()) s += ' ';
        s += x && z ? "Y " : x ? "X " : "Z ";
        s += names[q];
    }
    return s.empty() ? "I" : s;
}

} // namespace

std::string emit_qc(const GadgetizedCircuit& g) {
    Circuit full = g.core;
    full.gates.clear();
    full.gates.insert(full.gates.end(), g.pre.gates.begin(), g.pre.gates.end());
    full.gates.insert(full.gates.end(), g.core.gates.begin(), g.core.gates.end());
    std::string text = emit_qc(full);
    // Drop the trailing END, append measurement/correction annotations.
    const auto endpos = text.rfind("END\n");
    std::ostringstream out;
    out << text.substr(0, endpos);
    for (const auto& [wire, rec] : g.records)
        out << "# measure r" << rec << " = X basis on " << g.core.wire_names[wire] << '\n';
    for (const auto& gate : g.post.gates) {
        Circuit tmp = g.core;
        tmp.gates = {gate};
        std::string line = emit_qc(tmp);
        // Extract just the gate line between BEGIN and END.
        auto b = line.find("BEGIN\n") + 6;
        auto e = line.rfind("END\n");
        out << line.substr(b, e - b);
    }
    for (const auto& corr : g.corrections) {
        for (const auto& rot : corr.rotations) {
            out << "# cc[r" << corr.record << "] ";
            const bool single_z = rot.axis.x.is_zero() && rot.axis.z.popcount() == 1;
            if (single_z && rot.d == 0 && rot.k == 1)
                out << "Z " << g.core.wire_names[rot.axis.z.lowest_set()];
            else if (single_z && rot.d == 1 && (rot.k == 1 || rot.k == 3))
                out << (rot.k == 1 ? "S " : "S* ") << g.core.wire_names[rot.axis.z.lowest_set()];
            else
                out << "rz " << rot.k << "/" << (1u << rot.d) << " on "
                    << pauli_string(rot.axis, g.core.wire_names);
            out << '\n';
        }
        for (std::size_t q = 0; q < corr.pauli.n_qubits(); ++q) {
            if (corr.pauli.x.get(q))
                out << "# cc[r" << corr.record << "] X " << g.core.wire_names[q] << '\n';
            if (corr.pauli.z.get(q))
                out << "# cc[r" << corr.record << "] Z " << g.core.wire_names[q] << '\n';
        }
    }
    out << "END\n";
    return out.str();
}

} // namespace topt
