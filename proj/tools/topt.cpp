#include <CLI11.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "topt/circuit.hpp"
#include "topt/gadget.hpp"
#include "topt/gfmult.hpp"
#include "topt/optimize.hpp"
#include "topt/pauli.hpp"
#include "topt/phasepoly.hpp"
#include "topt/verify.hpp"

namespace {

using namespace topt;

struct CliError : std::runtime_error {
    int code;
    CliError(int code_, const std::string& what_) : std::runtime_error(what_), code(code_) {}
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CliError(1, "cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spit(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw CliError(1, "cannot write '" + path + "'");
    out << text;
}

bool looks_like_table(const std::string& text) {
    for (char ch : text) {
        if (std::isspace(static_cast<unsigned char>(ch))) continue;
        return std::isdigit(static_cast<unsigned char>(ch));
    }
    return false;
}

OptimizeResult run_method(const std::string& method, const ParityTable& table, std::uint32_t d,
                          Deadline deadline = {}) {
    if (method == "tohpe" || method == "todd" || method == "fasttodd") {
        if (d != 2) throw CliError(1, "method '" + method + "' runs at level 2; use --d 2");
        if (method == "tohpe") return tohpe(table, deadline);
        if (method == "todd") return todd(table, deadline);
        return fast_todd(table, deadline);
    }
    if (method == "d-tohpe") return d_tohpe(table, d, deadline);
    if (method == "d-fasttodd") return d_fast_todd(table, d, deadline);
    throw CliError(1, "unknown method '" + method + "'");
}

struct SplitCircuit {
    std::vector<Gate> prefix, middle, suffix;
};

SplitCircuit split_at_t_region(const Circuit& c) {
    SplitCircuit s;
    std::size_t first = c.gates.size(), last = 0;
    bool any = false;
    for (std::size_t i = 0; i < c.gates.size(); ++i) {
        if (is_t_like(c.gates[i])) {
            if (!any) first = i;
            last = i;
            any = true;
        }
    }
    if (!any) {
        s.middle = c.gates;
        return s;
    }
    s.prefix.assign(c.gates.begin(), c.gates.begin() + static_cast<std::ptrdiff_t>(first));
    s.middle.assign(c.gates.begin() + static_cast<std::ptrdiff_t>(first),
                    c.gates.begin() + static_cast<std::ptrdiff_t>(last + 1));
    s.suffix.assign(c.gates.begin() + static_cast<std::ptrdiff_t>(last + 1), c.gates.end());
    return s;
}

Circuit with_gates(const Circuit& shape, std::vector<Gate> gates) {
    Circuit c = shape;
    c.gates = std::move(gates);
    return c;
}

PhasePolynomial optimized_polynomial(const PhasePolynomial& poly, const ParityTable& opt) {
    PhasePolynomial out = PhasePolynomial::identity(poly.n, poly.d);
    PhasePolynomial residue = clifford_residue(poly, opt);
    for (const auto& col : opt.columns) out.terms.emplace_back(col, 1u);
    out.terms.insert(out.terms.end(), residue.terms.begin(), residue.terms.end());
    out.constant = residue.constant;
    out.output_map = poly.output_map;
    out.output_affine = poly.output_affine;
    out.canonicalize();
    return out;
}

int cmd_optimize(const std::string& input_path, const std::string& method, bool gadgetize_flag,
                 std::uint32_t d, const std::string& out_path, const std::string& report_path,
                 bool verify_flag) {
    const std::string text = slurp(input_path);
    std::ostringstream report;
    std::string output_text;
    bool verified_ok = true;

    if (looks_like_table(text)) {
        PhasePolynomial poly = read_table_text(text);
        d = poly.d; // the table header carries its level
        ParityTable table = to_parity_table(poly);
        OptimizeResult res = run_method(method, table, d);
        PhasePolynomial out_poly = optimized_polynomial(poly, res.table);
        output_text = write_table_text(out_poly);
        report << res.report.to_text();
        report << "t_before=" << table.n_cols() << "\nt_after=" << res.table.n_cols() << '\n';
        if (verify_flag)
            verified_ok = verify::tensors_equal(table, res.table, d + 1);
    } else {
        Circuit circuit = parse_qc(text);
        if (method == "bounded") {
            if (gadgetize_flag) throw CliError(1, "method 'bounded' refuses --gadgetize");
            auto split = split_at_t_region(circuit);
            std::vector<Circuit> segments;
            std::vector<std::uint32_t> h_qubits;
            std::vector<Gate> cur;
            for (const auto& g : split.middle) {
                if (g.kind == GateKind::H && g.control_record < 0) {
                    segments.push_back(with_gates(circuit, cur));
                    cur.clear();
                    h_qubits.push_back(g.wires[0]);
                } else {
                    cur.push_back(g);
                }
            }
            segments.push_back(with_gates(circuit, cur));
            const std::size_t t_before = rz_count(circuit, d);
            BoundedSegments opt = bounded_pipeline(segments, h_qubits, d);
            std::vector<Gate> rebuilt = split.prefix;
            for (std::size_t i = 0; i < opt.segments.size(); ++i) {
                rebuilt.insert(rebuilt.end(), opt.segments[i].gates.begin(),
                               opt.segments[i].gates.end());
                if (i < h_qubits.size())
                    rebuilt.push_back(Gate::single(GateKind::H, h_qubits[i]));
            }
            rebuilt.insert(rebuilt.end(), split.suffix.begin(), split.suffix.end());
            Circuit out_circ = with_gates(circuit, std::move(rebuilt));
            output_text = emit_qc(out_circ);
            report << "method=bounded\nh=" << h_qubits.size() << "\nt_before=" << t_before
                   << "\nt_after=" << opt.rz_total << '\n';
            if (verify_flag && circuit.n_wires() <= 6)
                verified_ok = verify::equal_up_to_phase(verify::dense_unitary(out_circ),
                                                        verify::dense_unitary(circuit));
        } else {
            GadgetizedCircuit gadget;
            Circuit work = circuit;
            if (gadgetize_flag) {
                gadget = defer_corrections(gadgetize(circuit));
                work = gadget.core;
            }
            if (internal_hadamard_count(work) > 0)
                throw CliError(1,
                               "circuit has internal Hadamards; use --gadgetize or "
                               "--method bounded");
            auto split = split_at_t_region(work);
            for (const auto& g : split.middle)
                if (g.kind == GateKind::H)
                    throw CliError(1, "unexpected H inside the t-gate region");
            Circuit middle = with_gates(work, split.middle);
            PhasePolynomial poly = extract(middle, d);
            ParityTable table = to_parity_table(poly);
            OptimizeResult res = run_method(method, table, d);
            Circuit out_middle = synthesize(optimized_polynomial(poly, res.table));
            std::vector<Gate> rebuilt = split.prefix;
            rebuilt.insert(rebuilt.end(), out_middle.gates.begin(), out_middle.gates.end());
            rebuilt.insert(rebuilt.end(), split.suffix.begin(), split.suffix.end());
            Circuit out_circ = with_gates(work, std::move(rebuilt));
            if (gadgetize_flag) {
                GadgetizedCircuit out_gadget = gadget;
                out_gadget.core = out_circ;
                output_text = emit_qc(out_gadget);
            } else {
                output_text = emit_qc(out_circ);
            }
            report << res.report.to_text();
            report << "t_before=" << rz_count(work, d) << "\nt_after=" << rz_count(out_circ, d)
                   << '\n';
            if (verify_flag) {
                verified_ok = verify::tensors_equal(table, res.table, d + 1);
                if (verified_ok && work.n_wires() <= 20)
                    verified_ok = verify::phase_equal(middle, out_middle, d);
            }
        }
    }

    if (out_path.empty()) std::cout << output_text;
    else spit(out_path, output_text);
    if (report_path.empty()) std::cerr << report.str();
    else spit(report_path, report.str());
    if (!verified_ok) {
        std::cerr << "verification failed\n";
        return 2;
    }
    return 0;
}

int cmd_gen_gfmult(std::uint32_t n, const std::string& modulus_bits, const std::string& method,
                   const std::string& format, const std::string& out_path) {
    BitVec modulus;
    if (modulus_bits.empty()) {
        modulus = default_modulus(n);
    } else {
        if (modulus_bits.size() != n + 1)
            throw CliError(1, "--modulus needs n+1 bits, highest degree first");
        modulus = BitVec(n + 1);
        for (std::size_t i = 0; i < modulus_bits.size(); ++i) {
            if (modulus_bits[i] == '1') modulus.set(n - i, true);
            else if (modulus_bits[i] != '0') throw CliError(1, "--modulus must be 0/1 bits");
        }
    }
    GfMultSpec spec;
    try {
        spec = make_gf_spec(n, modulus);
    } catch (const std::invalid_argument& e) {
        throw CliError(1, e.what());
    }
    GfMultResult gen = generate(spec);
    std::cout << "ccz=" << gen.triples.size() << '\n';

    std::string output_text;
    if (format == "triples") {
        std::ostringstream ss;
        for (const auto& t : gen.triples)
            ss << t.u.to_string() << '|' << t.v.to_string() << '|' << t.w.to_string() << '\n';
        output_text = ss.str();
    } else if (format == "ccz") {
        output_text = emit_qc(gen.core);
    } else {
        output_text = emit_qc(multiplier_circuit(spec));
    }

    if (!method.empty()) {
        Circuit decomposed = decompose_ccz(gen.core);
        PhasePolynomial poly = extract(decomposed, 2);
        ParityTable table = to_parity_table(poly);
        OptimizeResult res = run_method(method, table, 2);
        std::cout << "t_unoptimized=" << t_count(decomposed) << '\n';
        std::cout << "t=" << res.table.n_cols() << '\n';
        Circuit out_middle = synthesize(optimized_polynomial(poly, res.table));
        output_text = emit_qc(out_middle);
    }
    if (out_path.empty()) std::cout << output_text;
    else spit(out_path, output_text);
    return 0;
}

int cmd_stats(const std::string& input_path) {
    Circuit c = parse_qc(slurp(input_path));
    std::size_t counts[11] = {};
    for (const auto& g : c.gates) counts[static_cast<int>(g.kind)]++;
    std::cout << "n=" << c.n_wires() << '\n';
    std::cout << "gates=" << c.gates.size() << '\n';
    const char* names[] = {"cnot", "h", "x", "z", "s", "sdg", "t", "tdg", "cz", "ccz", "rz"};
    for (int k = 0; k < 11; ++k)
        if (counts[k]) std::cout << names[k] << "=" << counts[k] << '\n';
    std::cout << "t_count=" << t_count(c) << '\n';
    std::cout << "h_internal=" << internal_hadamard_count(c) << '\n';
    RotationForm rf = circuit_to_rotations(c);
    auto layers = group_rotations(rf.rotations);
    std::cout << "rotation_layers=" << layers.size() << '\n';
    std::cout << "measurement_depth=" << (layers.empty() ? 0 : layers.size() - 1) << '\n';
    return 0;
}

int cmd_bench(const std::string& dir, const std::string& methods_csv, double timeout_sec,
              std::uint32_t d) {
    std::vector<std::string> methods;
    {
        std::stringstream ss(methods_csv);
        std::string tok;
        while (std::getline(ss, tok, ',')) methods.push_back(tok);
    }
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir))
        if (entry.path().extension() == ".qc") files.push_back(entry.path());
    std::sort(files.begin(), files.end());

    std::cout << "name\tn\th\tt_before";
    for (const auto& m : methods) std::cout << '\t' << m << "_t\t" << m << "_ms\t" << m << "_status";
    std::cout << '\n';

    for (const auto& path : files) {
        std::cout << path.stem().string();
        Circuit c;
        try {
            c = parse_qc(slurp(path.string()));
        } catch (const std::exception&) {
            std::cout << "\tparse_error\n";
            continue;
        }
        const std::size_t h = internal_hadamard_count(c);
        std::cout << '\t' << c.n_wires() << '\t' << h << '\t' << rz_count(c, d);
        for (const auto& m : methods) {
            const auto t0 = std::chrono::steady_clock::now();
            std::string status = "ok";
            std::size_t t_after = 0;
            try {
                GadgetizedCircuit gadget = defer_corrections(gadgetize(c));
                auto split = split_at_t_region(gadget.core);
                Circuit middle = with_gates(gadget.core, split.middle);
                PhasePolynomial poly = extract(middle, d);
                ParityTable table = to_parity_table(poly);
                Deadline dl;
                if (timeout_sec > 0)
                    dl = std::chrono::steady_clock::now() +
                         std::chrono::milliseconds(static_cast<long>(timeout_sec * 1000));
                OptimizeResult res = run_method(m, table, d, dl);
                t_after = res.table.n_cols();
                if (res.report.timed_out) status = "timeout";
            } catch (const std::exception&) {
                status = "error";
            }
            const double ms = std::chrono::duration<double, std::milli>(
                                  std::chrono::steady_clock::now() - t0)
                                  .count();
            std::cout << '\t' << t_after << '\t' << static_cast<long>(ms) << '\t' << status;
        }
        std::cout << '\n';
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"T-count optimization toolkit"};
    app.require_subcommand(1);

    std::string input, method = "fasttodd", gf_method, out_path, report_path, modulus_bits,
                format = "tof", methods_csv = "tohpe,fasttodd";
    std::uint32_t d = 2, gf_n = 2;
    double timeout_sec = 0;
    bool gadgetize_flag = false, verify_flag = false;

    auto* opt = app.add_subcommand("optimize", "optimize a .qc circuit or parity table");
    opt->add_option("input", input, "input path")->required();
    opt->add_option("--method", method, "tohpe|todd|fasttodd|d-tohpe|d-fasttodd|bounded");
    opt->add_flag("--gadgetize", gadgetize_flag, "gadgetize internal Hadamards first");
    opt->add_option("--d", d, "rotation level (default 2 = T gates)");
    opt->add_option("--out", out_path, "output path (default stdout)");
    opt->add_option("--report", report_path, "report path (default stderr)");
    opt->add_flag("--verify", verify_flag, "run tensor / phase verification");

    auto* gen = app.add_subcommand("gen-gfmult", "generate a GF(2^n) multiplier circuit");
    gen->add_option("n", gf_n, "field degree")->required();
    gen->add_option("--modulus", modulus_bits, "modulus bits, highest degree first");
    gen->add_option("--optimize", gf_method, "also optimize with this method");
    gen->add_option("--format", format, "tof|ccz|triples");
    gen->add_option("--out", out_path, "output path (default stdout)");

    auto* st = app.add_subcommand("stats", "print circuit statistics");
    st->add_option("input", input, "input path")->required();

    auto* bench = app.add_subcommand("bench", "run optimizers over a corpus directory");
    bench->add_option("dir", input, "directory of .qc files")->required();
    bench->add_option("--methods", methods_csv, "comma-separated method list");
    bench->add_option("--timeout", timeout_sec, "per-circuit timeout in seconds");
    bench->add_option("--d", d, "rotation level");

    CLI11_PARSE(app, argc, argv);

    try {
        if (opt->parsed())
            return cmd_optimize(input, method, gadgetize_flag, d, out_path, report_path,
                                verify_flag);
        if (gen->parsed()) return cmd_gen_gfmult(gf_n, modulus_bits, gf_method, format, out_path);
        if (st->parsed()) return cmd_stats(input);
        if (bench->parsed()) return cmd_bench(input, methods_csv, timeout_sec, d);
    } catch (const CliError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return e.code;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
