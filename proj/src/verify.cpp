#include "topt/verify.hpp"

#include <complex>
#include <stdexcept>
#include <vector>

namespace topt::verify {

namespace {

// Enumerates index subsets of {0..n-1} of size 1..max_size.
template <typename F>
void subsets(std::uint32_t n, std::uint32_t max_size, F&& f) {
    std::vector<std::uint32_t> cur;
    auto rec = [&](auto&& self, std::uint32_t start) -> void {
        if (!cur.empty()) f(cur);
        if (cur.size() == max_size) return;
        for (std::uint32_t i = start; i < n; ++i) {
            cur.push_back(i);
            self(self, i + 1);
            cur.pop_back();
        }
    };
    rec(rec, 0);
}

bool column_wedge_parity(const ParityTable& t, const std::vector<std::uint32_t>& sel) {
    bool parity = false;
    for (const auto& col : t.columns) {
        bool all = true;
        for (auto r : sel)
            if (!col.get(r)) { all = false; break; }
        if (all) parity = !parity;
    }
    return parity;
}

} // namespace

bool tensors_equal(const ParityTable& p, const ParityTable& q, std::uint32_t order) {
    if (p.n != q.n) return false;
    bool equal = true;
    subsets(p.n, order, [&](const std::vector<std::uint32_t>& sel) {
        if (!equal) return;
        if (column_wedge_parity(p, sel) != column_wedge_parity(q, sel)) equal = false;
    });
    return equal;
}

namespace {

struct PhasedState {
    std::uint64_t bits = 0;
    std::uint32_t phase = 0; // mod 2^(d+1)
};

PhasedState run_phase(const Circuit& c, std::uint64_t input, std::uint32_t d) {
    const std::uint32_t mod = 1u << (d + 1);
    PhasedState st;
    st.bits = input;
    auto bit = [&](std::uint32_t w) -> std::uint32_t {
        return (st.bits >> w) & 1u;
    };
    auto add = [&](std::uint64_t amount) { st.phase = (st.phase + amount) % mod; };
    for (const auto& g : c.gates) {
        if (g.control_record >= 0)
            throw std::invalid_argument("phase_equal: classically controlled gate");
        switch (g.kind) {
            case GateKind::H:
                throw std::invalid_argument("phase_equal: circuit contains H");
            case GateKind::CNOT:
                st.bits ^= static_cast<std::uint64_t>(bit(g.wires[0])) << g.wires[1];
                break;
            case GateKind::X:
                st.bits ^= std::uint64_t(1) << g.wires[0];
                break;
            case GateKind::Z:
                add(static_cast<std::uint64_t>(bit(g.wires[0])) << d);
                break;
            case GateKind::S:
                if (d < 1) throw std::invalid_argument("phase_equal: S above level");
                add(static_cast<std::uint64_t>(bit(g.wires[0])) << (d - 1));
                break;
            case GateKind::Sdg:
                if (d < 1) throw std::invalid_argument("phase_equal: S* above level");
                add(3ull * bit(g.wires[0]) << (d - 1));
                break;
            case GateKind::T:
                if (d < 2) throw std::invalid_argument("phase_equal: T above level");
                add(static_cast<std::uint64_t>(bit(g.wires[0])) << (d - 2));
                break;
            case GateKind::Tdg:
                if (d < 2) throw std::invalid_argument("phase_equal: T* above level");
                add(7ull * bit(g.wires[0]) << (d - 2));
                break;
            case GateKind::RZ:
                if (g.rz_d > d) throw std::invalid_argument("phase_equal: rz above level");
                add(static_cast<std::uint64_t>(g.rz_k) * bit(g.wires[0]) << (d - g.rz_d));
                break;
            case GateKind::CZ:
                add(static_cast<std::uint64_t>(bit(g.wires[0]) & bit(g.wires[1])) << d);
                break;
            case GateKind::CCZ:
                add(static_cast<std::uint64_t>(bit(g.wires[0]) & bit(g.wires[1]) &
                                               bit(g.wires[2]))
                    << d);
                break;
        }
    }
    return st;
}

} // namespace

bool phase_equal(const Circuit& a, const Circuit& b, std::uint32_t d) {
    if (a.n_wires() != b.n_wires()) return false;
    const std::uint32_t n = a.n_wires();
    if (n > 20) throw std::invalid_argument("phase_equal: more than 20 wires");
    for (std::uint64_t x = 0; x < (std::uint64_t(1) << n); ++x) {
        const PhasedState sa = run_phase(a, x, d);
        const PhasedState sb = run_phase(b, x, d);
        if (sa.bits != sb.bits || sa.phase != sb.phase) return false;
    }
    return true;
}

std::optional<std::size_t> minimal_columns(const SignatureTensor& t, std::size_t max_m) {
    const std::uint32_t n = t.n;
    if (n > 6) throw std::invalid_argument("minimal_columns: n too large");

    // Index every subset of size 1..order; tensors become XOR masks.
    std::vector<std::vector<std::uint32_t>> index_sets;
    subsets(n, t.order, [&](const std::vector<std::uint32_t>& s) { index_sets.push_back(s); });
    if (index_sets.size() > 63) throw std::invalid_argument("minimal_columns: tensor too large");

    std::uint64_t target = 0;
    for (std::size_t i = 0; i < index_sets.size(); ++i)
        if (t.odd_supports.count(index_sets[i])) target |= std::uint64_t(1) << i;

    const std::uint32_t ncand = (1u << n) - 1;
    std::vector<std::uint64_t> cand_mask(ncand + 1, 0);
    for (std::uint32_t v = 1; v <= ncand; ++v) {
        std::uint64_t mask = 0;
        for (std::size_t i = 0; i < index_sets.size(); ++i) {
            bool all = true;
            for (auto r : index_sets[i])
                if (!((v >> r) & 1u)) { all = false; break; }
            if (all) mask |= std::uint64_t(1) << i;
        }
        cand_mask[v] = mask;
    }

    if (target == 0) return 0;
    auto search = [&](auto&& self, std::uint32_t start, std::size_t left,
                      std::uint64_t acc) -> bool {
        if (left == 0) return acc == target;
        for (std::uint32_t v = start; v <= ncand; ++v) {
            if (ncand - v + 1 < left) break;
            if (self(self, v + 1, left - 1, acc ^ cand_mask[v])) return true;
        }
        return false;
    };
    for (std::size_t m = 1; m <= max_m; ++m)
        if (search(search, 1, m, 0)) return m;
    return std::nullopt;
}

namespace {

using Mat = Eigen::MatrixXcd;
using Cx = std::complex<double>;
constexpr double kInvSqrt2 = 0.7071067811865475244;
constexpr double kPi = 3.141592653589793238462643383279502884;

Mat gate_matrix(const Gate& g, std::uint32_t nw) {
    const std::size_t dim = std::size_t(1) << nw;
    Mat m = Mat::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    auto bit = [](std::uint64_t s, std::uint32_t w) { return (s >> w) & 1u; };
    for (std::uint64_t s = 0; s < dim; ++s) {
        switch (g.kind) {
            case GateKind::CNOT: {
                const std::uint64_t out =
                    s ^ (static_cast<std::uint64_t>(bit(s, g.wires[0])) << g.wires[1]);
                m(static_cast<Eigen::Index>(out), static_cast<Eigen::Index>(s)) = 1.0;
                break;
            }
            case GateKind::X: {
                const std::uint64_t out = s ^ (std::uint64_t(1) << g.wires[0]);
                m(static_cast<Eigen::Index>(out), static_cast<Eigen::Index>(s)) = 1.0;
                break;
            }
            case GateKind::H: {
                const std::uint64_t out0 = s & ~(std::uint64_t(1) << g.wires[0]);
                const std::uint64_t out1 = s | (std::uint64_t(1) << g.wires[0]);
                const double sign = bit(s, g.wires[0]) ? -1.0 : 1.0;
                m(static_cast<Eigen::Index>(out0), static_cast<Eigen::Index>(s)) = kInvSqrt2;
                m(static_cast<Eigen::Index>(out1), static_cast<Eigen::Index>(s)) =
                    sign * kInvSqrt2;
                break;
            }
            default: {
                double theta = 0.0;
                switch (g.kind) {
                    case GateKind::Z:   theta = kPi * bit(s, g.wires[0]); break;
                    case GateKind::S:   theta = kPi / 2 * bit(s, g.wires[0]); break;
                    case GateKind::Sdg: theta = -kPi / 2 * bit(s, g.wires[0]); break;
                    case GateKind::T:   theta = kPi / 4 * bit(s, g.wires[0]); break;
                    case GateKind::Tdg: theta = -kPi / 4 * bit(s, g.wires[0]); break;
                    case GateKind::RZ:
                        theta = kPi * g.rz_k / static_cast<double>(1u << g.rz_d) *
                                bit(s, g.wires[0]);
                        break;
                    case GateKind::CZ:
                        theta = kPi * (bit(s, g.wires[0]) & bit(s, g.wires[1]));
                        break;
                    case GateKind::CCZ:
                        theta = kPi * (bit(s, g.wires[0]) & bit(s, g.wires[1]) &
                                       bit(s, g.wires[2]));
                        break;
                    default: break;
                }
                m(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(s)) =
                    std::exp(Cx(0.0, theta));
                break;
            }
        }
    }
    return m;
}

} // namespace

Mat dense_unitary(const Circuit& c) {
    const std::uint32_t nw = c.n_wires();
    if (nw > 6) throw std::invalid_argument("dense_unitary: more than 6 wires");
    const std::size_t dim = std::size_t(1) << nw;
    Mat u = Mat::Identity(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    for (const auto& g : c.gates) {
        if (g.control_record >= 0)
            throw std::invalid_argument("dense_unitary: classically controlled gate");
        u = gate_matrix(g, nw) * u;
    }
    return u;
}

Mat dense_pauli(const PauliProduct& p) {
    const std::uint32_t nw = static_cast<std::uint32_t>(p.n_qubits());
    if (nw > 6) throw std::invalid_argument("dense_pauli: more than 6 wires");
    const std::size_t dim = std::size_t(1) << nw;
    Mat m = Mat::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    for (std::uint64_t s = 0; s < dim; ++s) {
        std::uint64_t out = s;
        Cx amp = p.neg ? -1.0 : 1.0;
        for (std::uint32_t q = 0; q < nw; ++q) {
            const bool x = p.x.get(q), z = p.z.get(q);
            const bool sq = (s >> q) & 1u;
            if (x && z) { // Y
                out ^= std::uint64_t(1) << q;
                amp *= sq ? Cx(0.0, -1.0) : Cx(0.0, 1.0);
            } else if (x) {
                out ^= std::uint64_t(1) << q;
            } else if (z) {
                if (sq) amp = -amp;
            }
        }
        m(static_cast<Eigen::Index>(out), static_cast<Eigen::Index>(s)) = amp;
    }
    return m;
}

Mat dense_rotation(const PauliRotation& r) {
    const double theta = kPi * r.k / static_cast<double>(1u << r.d);
    const std::size_t dim = std::size_t(1) << r.axis.n_qubits();
    Mat id = Mat::Identity(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    return std::cos(theta / 2) * id -
           Cx(0.0, 1.0) * std::sin(theta / 2) * dense_pauli(r.axis);
}

bool equal_up_to_phase(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b, double tol) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
    Eigen::Index bi = 0, bj = 0;
    double best = 0.0;
    for (Eigen::Index i = 0; i < b.rows(); ++i)
        for (Eigen::Index j = 0; j < b.cols(); ++j)
            if (std::abs(b(i, j)) > best) {
                best = std::abs(b(i, j));
                bi = i;
                bj = j;
            }
    if (best < tol) return a.cwiseAbs().maxCoeff() < tol;
    const Cx phase = a(bi, bj) / b(bi, bj);
    if (std::abs(std::abs(phase) - 1.0) > tol) return false;
    return (a - phase * b).cwiseAbs().maxCoeff() <= tol;
}

} // namespace topt::verify
