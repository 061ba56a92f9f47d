#include "topt/circuit.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>

namespace topt {

bool is_diagonal(const Gate& g) {
    switch (g.kind) {
        case GateKind::Z: case GateKind::S: case GateKind::Sdg:
        case GateKind::T: case GateKind::Tdg: case GateKind::CZ:
        case GateKind::CCZ: case GateKind::RZ:
            return true;
        default:
            return false;
    }
}

bool is_clifford(const Gate& g) {
    switch (g.kind) {
        case GateKind::CNOT: case GateKind::H: case GateKind::X:
        case GateKind::Z: case GateKind::S: case GateKind::Sdg:
        case GateKind::CZ:
            return true;
        case GateKind::T: case GateKind::Tdg: case GateKind::CCZ:
            return false;
        case GateKind::RZ: {
            // Clifford iff the angle k*pi/2^d is a multiple of pi/2.
            if (g.rz_d <= 1) return true;
            const std::uint32_t q = 1u << (g.rz_d - 1);
            return g.rz_k % q == 0;
        }
    }
    return false;
}

bool is_t_like(const Gate& g) {
    if (g.kind == GateKind::T || g.kind == GateKind::Tdg) return true;
    if (g.kind == GateKind::RZ && g.rz_d >= 2 && (g.rz_k & 1u)) return true;
    return false;
}

Circuit Circuit::empty(std::uint32_t n) {
    Circuit c;
    c.n_qubits = n;
    for (std::uint32_t i = 0; i < n; ++i) c.wire_names.push_back("q" + std::to_string(i));
    return c;
}

std::uint32_t Circuit::add_ancilla() {
    const std::uint32_t idx = n_wires();
    wire_names.push_back("anc" + std::to_string(n_ancillas));
    ++n_ancillas;
    return idx;
}

namespace {

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
}

std::vector<std::string> tokenize(const std::string& line) {
    std::vector<std::string> toks;
    std::istringstream in(line);
    std::string t;
    while (in >> t) toks.push_back(t);
    return toks;
}

// Parses "k/2^d" (e.g. "3/8") into an RZ angle.
bool parse_fraction(const std::string& s, std::uint32_t& k, std::uint32_t& d) {
    const auto slash = s.find('/');
    if (slash == std::string::npos) return false;
    try {
        const long num = std::stol(s.substr(0, slash));
        const long den = std::stol(s.substr(slash + 1));
        if (num < 0 || den <= 0) return false;
        if ((den & (den - 1)) != 0) return false;
        std::uint32_t dd = 0;
        long q = den;
        while (q > 1) { q >>= 1; ++dd; }
        if (num >= 2 * den) return false;
        k = static_cast<std::uint32_t>(num);
        d = dd;
        return true;
    } catch (...) {
        return false;
    }
}

} // namespace

Circuit parse_qc(const std::string& text) {
    Circuit c;
    std::map<std::string, std::uint32_t> wire_of;
    bool in_body = false;
    bool saw_v = false;

    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        const auto hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        auto toks = tokenize(raw);
        if (toks.empty()) continue;

        const std::string head = lower(toks[0]);
        if (!in_body) {
            if (head == ".v") {
                saw_v = true;
                for (std::size_t i = 1; i < toks.size(); ++i) {
                    if (wire_of.count(toks[i]))
                        throw ParseError(lineno, "duplicate wire '" + toks[i] + "'");
                    wire_of[toks[i]] = c.n_qubits++;
                    c.wire_names.push_back(toks[i]);
                }
            } else if (head == ".i" || head == ".o" || head == ".c" || head == ".ol") {
                continue;
            } else if (head == "begin") {
                if (!saw_v) throw ParseError(lineno, "BEGIN before .v");
                in_body = true;
            } else {
                throw ParseError(lineno, "unexpected token '" + toks[0] + "'");
            }
            continue;
        }
        if (head == "end") { in_body = false; continue; }

        auto wire = [&](const std::string& name) -> std::uint32_t {
            auto it = wire_of.find(name);
            if (it == wire_of.end()) throw ParseError(lineno, "undeclared wire '" + name + "'");
            return it->second;
        };
        const std::size_t nargs = toks.size() - 1;
        auto need = [&](std::size_t lo, std::size_t hi) {
            if (nargs < lo || nargs > hi)
                throw ParseError(lineno, "wrong arity for '" + toks[0] + "'");
        };

        if (head == "h") {
            need(1, 1);
            c.gates.push_back(Gate::single(GateKind::H, wire(toks[1])));
        } else if (head == "x" || head == "not") {
            need(1, 1);
            c.gates.push_back(Gate::single(GateKind::X, wire(toks[1])));
        } else if (head == "t") {
            need(1, 1);
            c.gates.push_back(Gate::single(GateKind::T, wire(toks[1])));
        } else if (head == "t*" || head == "tdg") {
            need(1, 1);
            c.gates.push_back(Gate::single(GateKind::Tdg, wire(toks[1])));
        } else if (head == "s" || head == "p") {
            need(1, 1);
            c.gates.push_back(Gate::single(GateKind::S, wire(toks[1])));
        } else if (head == "s*" || head == "p*" || head == "sdg") {
            need(1, 1);
            c.gates.push_back(Gate::single(GateKind::Sdg, wire(toks[1])));
        } else if (head == "z") {
            need(1, 3);
            if (nargs == 1) c.gates.push_back(Gate::single(GateKind::Z, wire(toks[1])));
            else if (nargs == 2) c.gates.push_back(Gate::cz(wire(toks[1]), wire(toks[2])));
            else c.gates.push_back(Gate::ccz(wire(toks[1]), wire(toks[2]), wire(toks[3])));
        } else if (head == "tof" || head == "cnot") {
            need(2, 3);
            if (nargs == 2) {
                c.gates.push_back(Gate::cnot(wire(toks[1]), wire(toks[2])));
            } else {
                const std::uint32_t a = wire(toks[1]), b = wire(toks[2]), t = wire(toks[3]);
                Gate h1 = Gate::single(GateKind::H, t); h1.tof_pair = true;
                Gate h2 = h1;
                c.gates.push_back(h1);
                c.gates.push_back(Gate::ccz(a, b, t));
                c.gates.push_back(h2);
            }
        } else if (head == "rz") {
            need(2, 2);
            std::uint32_t k = 0, d = 0;
            if (!parse_fraction(toks[1], k, d))
                throw ParseError(lineno, "bad rz angle '" + toks[1] + "' (expected k/2^d)");
            c.gates.push_back(Gate::rz(k, d, wire(toks[2])));
        } else {
            throw ParseError(lineno, "unknown gate '" + toks[0] + "'");
        }
    }
    return c;
}

std::string emit_qc(const Circuit& c) {
    std::ostringstream out;
    out << ".v";
    for (const auto& n : c.wire_names) out << ' ' << n;
    out << "\nBEGIN\n";

    const auto& g = c.gates;
    auto name = [&](std::uint32_t w) -> const std::string& { return c.wire_names[w]; };

    for (std::size_t i = 0; i < g.size(); ++i) {
        // Re-emit a tagged H CCZ H triple as a tof line.
        if (i + 2 < g.size() && g[i].kind == GateKind::H && g[i].tof_pair &&
            g[i + 1].kind == GateKind::CCZ && g[i + 2].kind == GateKind::H &&
            g[i + 2].tof_pair && g[i + 1].wires[2] == g[i].wires[0] &&
            g[i + 2].wires[0] == g[i].wires[0] && g[i].control_record < 0) {
            const Gate& z = g[i + 1];
            out << "tof " << name(z.wires[0]) << ' ' << name(z.wires[1]) << ' '
                << name(z.wires[2]) << '\n';
            i += 2;
            continue;
        }
        const Gate& gate = g[i];
        if (gate.control_record >= 0) out << "# cc[r" << gate.control_record << "] ";
        switch (gate.kind) {
            case GateKind::H:   out << "H " << name(gate.wires[0]); break;
            case GateKind::X:   out << "X " << name(gate.wires[0]); break;
            case GateKind::Z:
                out << "Z " << name(gate.wires[0]);
                break;
            case GateKind::S:   out << "S " << name(gate.wires[0]); break;
            case GateKind::Sdg: out << "S* " << name(gate.wires[0]); break;
            case GateKind::T:   out << "T " << name(gate.wires[0]); break;
            case GateKind::Tdg: out << "T* " << name(gate.wires[0]); break;
            case GateKind::CNOT:
                out << "tof " << name(gate.wires[0]) << ' ' << name(gate.wires[1]);
                break;
            case GateKind::CZ:
                out << "Z " << name(gate.wires[0]) << ' ' << name(gate.wires[1]);
                break;
            case GateKind::CCZ:
                out << "Z " << name(gate.wires[0]) << ' ' << name(gate.wires[1]) << ' '
                    << name(gate.wires[2]);
                break;
            case GateKind::RZ:
                out << "rz " << gate.rz_k << "/" << (1u << gate.rz_d) << ' '
                    << name(gate.wires[0]);
                break;
        }
        out << '\n';
    }
    out << "END\n";
    return out.str();
}

std::size_t t_count(const Circuit& c) { return rz_count(c, 2); }

std::size_t rz_count(const Circuit& c, std::uint32_t d) {
    std::size_t n = 0;
    for (const auto& g : c.gates) {
        switch (g.kind) {
            case GateKind::T: case GateKind::Tdg:
                if (d == 2) ++n;
                break;
            case GateKind::S: case GateKind::Sdg:
                if (d == 1) ++n;
                break;
            case GateKind::Z:
                if (d == 0) ++n;
                break;
            case GateKind::RZ:
                if (g.rz_d == d && (g.rz_k & 1u)) ++n;
                break;
            default:
                break;
        }
    }
    return n;
}

std::size_t internal_hadamard_count(const Circuit& c, bool exclude_tof_pairs) {
    std::size_t first = c.gates.size(), last = 0;
    bool any = false;
    for (std::size_t i = 0; i < c.gates.size(); ++i) {
        if (is_t_like(c.gates[i])) {
            if (!any) first = i;
            last = i;
            any = true;
        }
    }
    if (!any) return 0;
    std::size_t n = 0;
    for (std::size_t i = first + 1; i < last; ++i) {
        const Gate& g = c.gates[i];
        if (g.kind == GateKind::H && !(exclude_tof_pairs && g.tof_pair)) ++n;
    }
    return n;
}

Circuit decompose_ccz(const Circuit& c) {
    Circuit out = c;
    out.gates.clear();
    for (const auto& g : c.gates) {
        if (g.kind != GateKind::CCZ) {
            out.gates.push_back(g);
            continue;
        }
        const std::uint32_t a = g.wires[0], b = g.wires[1], t = g.wires[2];
        out.gates.push_back(Gate::single(GateKind::T, a));
        out.gates.push_back(Gate::single(GateKind::T, b));
        out.gates.push_back(Gate::single(GateKind::T, t));
        out.gates.push_back(Gate::cnot(a, b));
        out.gates.push_back(Gate::single(GateKind::Tdg, b));
        out.gates.push_back(Gate::cnot(a, b));
        out.gates.push_back(Gate::cnot(a, t));
        out.gates.push_back(Gate::single(GateKind::Tdg, t));
        out.gates.push_back(Gate::cnot(b, t));
        out.gates.push_back(Gate::single(GateKind::T, t));
        out.gates.push_back(Gate::cnot(a, t));
        out.gates.push_back(Gate::single(GateKind::Tdg, t));
        out.gates.push_back(Gate::cnot(b, t));
    }
    return out;
}

} // namespace topt
