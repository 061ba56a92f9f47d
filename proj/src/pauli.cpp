#include "topt/pauli.hpp"

#include <cassert>
#include <stdexcept>

namespace topt {

bool commutes(const PauliProduct& a, const PauliProduct& b) {
    return !(BitVec::and_parity(a.x, b.z) ^ BitVec::and_parity(a.z, b.x));
}

namespace {

// i-exponent of sigma(a)*sigma(b) relative to sigma(a^b), single qubit:
// ax*az + bx*bz + 2*az*bx - cx*cz  (mod 4).
inline int mul_phase(int ax, int az, int bx, int bz) {
    const int cx = ax ^ bx, cz = az ^ bz;
    return ((ax * az + bx * bz + 2 * az * bx - cx * cz) % 4 + 4) % 4;
}

} // namespace

namespace {

// acc <- acc * b as sigma-labels, adding the picked-up i-exponent
// (including b's sign) into iexp.
void mul_acc(PauliProduct& acc, const PauliProduct& b, int& iexp) {
    const std::size_t n = acc.n_qubits();
    if (b.neg) iexp += 2;
    for (std::size_t q = 0; q < n; ++q) {
        const int ax = acc.x.get(q), az = acc.z.get(q), bx = b.x.get(q), bz = b.z.get(q);
        if ((ax | az) && (bx | bz)) iexp += mul_phase(ax, az, bx, bz);
    }
    acc.x ^= b.x;
    acc.z ^= b.z;
}

} // namespace

PauliProduct pauli_mul(const PauliProduct& a, const PauliProduct& b) {
    assert(a.n_qubits() == b.n_qubits());
    PauliProduct out = a;
    int iexp = a.neg ? 2 : 0;
    out.neg = false;
    mul_acc(out, b, iexp);
    iexp = ((iexp % 4) + 4) % 4;
    assert(iexp == 0 || iexp == 2);
    out.neg = (iexp == 2);
    return out;
}

PauliRotation::PauliRotation(PauliProduct axis_, std::uint32_t k_, std::uint32_t d_)
    : axis(std::move(axis_)), d(d_) {
    const std::uint32_t mod = 1u << (d_ + 1);
    std::uint32_t kk = k_ % mod;
    if (axis.neg) { // R_{-P}(theta) = R_P(-theta)
        axis.neg = false;
        kk = (mod - kk) % mod;
    }
    k = kk;
}

CliffordTableau CliffordTableau::identity(std::size_t n) {
    CliffordTableau t;
    for (std::size_t q = 0; q < n; ++q) {
        PauliProduct px(n), pz(n);
        px.x.set(q, true);
        pz.z.set(q, true);
        t.img_x.push_back(std::move(px));
        t.img_z.push_back(std::move(pz));
    }
    return t;
}

PauliProduct CliffordTableau::image_of(const PauliProduct& p) const {
    const std::size_t n = n_qubits();
    // P = i^(2 neg + sum x_q z_q) * prod X_q^{x_q} Z_q^{z_q}; map each factor
    // through the tableau and collect every picked-up power of i.
    int iexp = p.neg ? 2 : 0;
    PauliProduct acc(n);
    for (std::size_t q = 0; q < n; ++q) {
        const bool xq = p.x.get(q), zq = p.z.get(q);
        if (xq && zq) iexp += 1; // Y_q = i X_q Z_q
        if (xq) mul_acc(acc, img_x[q], iexp);
        if (zq) mul_acc(acc, img_z[q], iexp);
    }
    iexp = ((iexp % 4) + 4) % 4;
    if (iexp & 1) throw std::logic_error("image_of: non-Hermitian image");
    acc.neg = (iexp == 2);
    return acc;
}

namespace {

struct LocalRule {
    // g^dag (generator) g expressed as a Pauli supported on g's wires.
    PauliProduct image;
};

// Applies the single-gate conjugation g^dag P g in place.
void conjugate_inplace(PauliProduct& p, const Gate& g) {
    auto one_qubit_rz = [&p](std::uint32_t q, int quarter_turns) {
        // diag(1, i^j): j quarter turns. j=1 is S, j=2 is Z, j=3 is Sdg.
        for (int t = 0; t < ((quarter_turns % 4) + 4) % 4; ++t) {
            const bool x = p.x.get(q), z = p.z.get(q);
            if (x) {
                // S: X -> -Y, Y -> X
                p.z.set(q, !z);
                if (!z) p.neg = !p.neg;
            }
        }
    };

    switch (g.kind) {
        case GateKind::H: {
            const std::uint32_t q = g.wires[0];
            const bool x = p.x.get(q), z = p.z.get(q);
            p.x.set(q, z);
            p.z.set(q, x);
            if (x && z) p.neg = !p.neg;
            break;
        }
        case GateKind::X: {
            const std::uint32_t q = g.wires[0];
            if (p.z.get(q)) p.neg = !p.neg;
            break;
        }
        case GateKind::Z: {
            const std::uint32_t q = g.wires[0];
            if (p.x.get(q)) p.neg = !p.neg;
            break;
        }
        case GateKind::S:
            one_qubit_rz(g.wires[0], 1);
            break;
        case GateKind::Sdg:
            one_qubit_rz(g.wires[0], 3);
            break;
        case GateKind::RZ: {
            if (!is_clifford(g)) throw std::invalid_argument("conjugate: non-Clifford RZ");
            int j;
            if (g.rz_d == 0) j = (2 * g.rz_k) % 4;
            else j = static_cast<int>(g.rz_k >> (g.rz_d - 1)) % 4;
            one_qubit_rz(g.wires[0], j);
            break;
        }
        case GateKind::CNOT: {
            const std::uint32_t c = g.wires[0], t = g.wires[1];
            const bool xc = p.x.get(c), zc = p.z.get(c), xt = p.x.get(t), zt = p.z.get(t);
            if (xc && zt && (xt == zc)) p.neg = !p.neg;
            p.x.set(t, xt ^ xc);
            p.z.set(c, zc ^ zt);
            break;
        }
        case GateKind::CZ: {
            const std::uint32_t a = g.wires[0], b = g.wires[1];
            const bool xa = p.x.get(a), za = p.z.get(a), xb = p.x.get(b), zb = p.z.get(b);
            if (xa && xb && (za ^ zb)) p.neg = !p.neg;
            p.z.set(a, za ^ xb);
            p.z.set(b, zb ^ xa);
            break;
        }
        default:
            throw std::invalid_argument("conjugate: gate is not Clifford");
    }
}

} // namespace

PauliProduct conjugate_pauli(const PauliProduct& p, const Gate& g) {
    if (!is_clifford(g)) throw std::invalid_argument("conjugate: gate is not Clifford");
    PauliProduct out = p;
    conjugate_inplace(out, g);
    return out;
}

PauliRotation conjugate(const PauliRotation& r, const Gate& g) {
    return PauliRotation(conjugate_pauli(r.axis, g), r.k, r.d);
}

void CliffordTableau::prepend_gate(const Gate& g) {
    if (!is_clifford(g)) throw std::invalid_argument("prepend_gate: non-Clifford gate");
    const std::size_t n = n_qubits();
    // New image of a generator on g's wires: T(g^dag gen g), computed from
    // the old images. Generators off g's wires are untouched.
    std::vector<std::pair<PauliProduct*, PauliProduct>> updates;
    for (std::uint8_t i = 0; i < g.arity; ++i) {
        const std::uint32_t q = g.wires[i];
        PauliProduct genx(n), genz(n);
        genx.x.set(q, true);
        genz.z.set(q, true);
        updates.emplace_back(&img_x[q], image_of(conjugate_pauli(genx, g)));
        updates.emplace_back(&img_z[q], image_of(conjugate_pauli(genz, g)));
    }
    for (auto& [slot, val] : updates) *slot = std::move(val);
}

bool CliffordTableau::is_identity() const {
    const std::size_t n = n_qubits();
    for (std::size_t q = 0; q < n; ++q) {
        PauliProduct px(n), pz(n);
        px.x.set(q, true);
        pz.z.set(q, true);
        if (!(img_x[q] == px) || !(img_z[q] == pz)) return false;
    }
    return true;
}

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

// CCZ as seven pi/4 rotations on the Z-parities of its wires; weights
// follow 4abc = a+b+c - (ab parities) + (abc parity) mod 8.
struct DiagTerm {
    std::uint32_t mask; // subset of the three wires
    std::uint32_t weight;
};
constexpr DiagTerm kCczTerms[] = {
    {0b001, 1}, {0b010, 1}, {0b100, 1},
    {0b011, 7}, {0b101, 7}, {0b110, 7},
    {0b111, 1},
};

} // namespace

RotationForm circuit_to_rotations(const Circuit& c) {
    const std::size_t n = c.n_wires();
    RotationForm out;
    out.final_clifford = CliffordTableau::identity(n);

    auto push_diag = [&](const BitVec& zmask, std::uint32_t k, std::uint32_t d) {
        // diag phase e^{i k pi/2^d * parity} = e^{i k pi/2^{d+1}} R_{Z-pattern}(k pi/2^d)
        PauliProduct zp(n);
        zp.z = zmask;
        PauliProduct axis = out.final_clifford.image_of(zp);
        const bool negated = axis.neg;
        PauliRotation rot(std::move(axis), k, d);
        out.phase += static_cast<double>(k) * kPi / static_cast<double>(1u << (d + 1));
        if (rot.k == 0 || rot.axis.is_identity_axis()) return;
        // Rotations have period 4*pi: storing R_{-P}(theta) as
        // R_P(2*pi - theta) costs a global minus sign.
        if (negated) out.phase += kPi;
        out.rotations.push_back(std::move(rot));
    };

    for (const auto& g : c.gates) {
        if (g.control_record >= 0)
            throw std::invalid_argument("circuit_to_rotations: classically controlled gate");
        if (is_clifford(g)) {
            out.final_clifford.prepend_gate(g);
            out.clifford_gates.push_back(g);
            continue;
        }
        switch (g.kind) {
            case GateKind::T:
                push_diag(BitVec::unit(n, g.wires[0]), 1, 2);
                break;
            case GateKind::Tdg:
                push_diag(BitVec::unit(n, g.wires[0]), 7, 2);
                break;
            case GateKind::RZ:
                push_diag(BitVec::unit(n, g.wires[0]), g.rz_k, g.rz_d);
                break;
            case GateKind::CCZ: {
                for (const auto& term : kCczTerms) {
                    BitVec mask(n);
                    for (int b = 0; b < 3; ++b)
                        if (term.mask >> b & 1) mask.set(g.wires[b], true);
                    push_diag(mask, term.weight, 2);
                }
                break;
            }
            default:
                throw std::logic_error("circuit_to_rotations: unhandled gate");
        }
    }
    return out;
}

std::vector<std::vector<std::size_t>> group_rotations(const std::vector<PauliRotation>& rs) {
    std::vector<std::vector<std::size_t>> layers;
    for (std::size_t i = 0; i < rs.size(); ++i) {
        std::size_t j = 0; // largest layer (1-based) with an anticommuting element
        for (std::size_t l = layers.size(); l > 0; --l) {
            bool anti = false;
            for (std::size_t idx : layers[l - 1]) {
                if (!commutes(rs[idx].axis, rs[i].axis)) { anti = true; break; }
            }
            if (anti) { j = l; break; }
        }
        if (j == layers.size()) layers.emplace_back();
        layers[j].push_back(i);
    }
    return layers;
}

} // namespace topt
