#include "topt/optimize.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace topt {

std::string OptimizeReport::to_text() const {
    std::ostringstream out;
    out << "method=" << method << '\n'
        << "initial_columns=" << initial_columns << '\n'
        << "final_columns=" << final_columns << '\n'
        << "iterations=" << iterations << '\n'
        << "wall_ms=" << wall_ms << '\n'
        << "fixpoint=" << (fixpoint_verified ? 1 : 0) << '\n'
        << "iteration_guard=" << (hit_iteration_guard ? 1 : 0) << '\n'
        << "timeout=" << (timed_out ? 1 : 0) << '\n';
    return out.str();
}

namespace {

bool expired(const Deadline& dl) {
    return dl && std::chrono::steady_clock::now() > *dl;
}

// Subsets of {0..n-1} of size 1..max_size, ordered by size then
// lexicographically; the row order of every wedge system.
std::vector<std::vector<std::uint32_t>> wedge_subsets(std::uint32_t n, std::uint32_t max_size) {
    std::vector<std::vector<std::uint32_t>> out;
    for (std::uint32_t sz = 1; sz <= std::min(max_size, n); ++sz) {
        std::vector<std::uint32_t> idx(sz);
        for (std::uint32_t i = 0; i < sz; ++i) idx[i] = i;
        while (true) {
            out.push_back(idx);
            std::uint32_t i = sz;
            while (i > 0) {
                --i;
                if (idx[i] != i + n - sz) break;
            }
            if (idx[i] == i + n - sz) break;
            ++idx[i];
            for (std::uint32_t j = i + 1; j < sz; ++j) idx[j] = idx[j - 1] + 1;
        }
    }
    return out;
}

std::vector<BitVec> wedge_rows(const ParityTable& p,
                               const std::vector<std::vector<std::uint32_t>>& subsets) {
    std::vector<BitVec> rows;
    rows.reserve(subsets.size());
    const std::size_t m = p.n_cols();
    for (const auto& s : subsets) {
        BitVec w = p.rows[s[0]];
        for (std::size_t i = 1; i < s.size(); ++i) w &= p.rows[s[i]];
        (void)m;
        rows.push_back(std::move(w));
    }
    return rows;
}

// Candidate z values with, per value, the index pairs producing it.
struct CandidateSet {
    std::vector<BitVec> zs;
    std::unordered_map<BitVec, std::vector<std::pair<std::uint32_t, std::uint32_t>>, BitVecHash>
        pairs;
};

CandidateSet candidates(const ParityTable& p, bool include_singles) {
    CandidateSet cs;
    const std::size_t m = p.n_cols();
    auto push = [&](const BitVec& z, std::uint32_t i, std::uint32_t j) {
        auto [it, fresh] = cs.pairs.try_emplace(z);
        if (fresh) cs.zs.push_back(z);
        it->second.emplace_back(i, j);
    };
    for (std::uint32_t i = 0; i < m; ++i)
        for (std::uint32_t j = i + 1; j < m; ++j)
            push(p.columns[i] ^ p.columns[j], i, j);
    if (include_singles)
        for (std::uint32_t i = 0; i < m; ++i) push(p.columns[i], i, i);
    return cs;
}

// Number of removable columns (net of the appended z when |y| is odd).
long objective(const BitVec& y,
               const std::vector<std::pair<std::uint32_t, std::uint32_t>>& pairs) {
    const bool odd = y.popcount() & 1;
    long s = odd ? -1 : 0;
    for (const auto& [i, j] : pairs) {
        if (i != j) {
            s += 2 * (y.get(i) ^ y.get(j));
        } else {
            s += y.get(i) ? 1 : 0;
            if (!y.get(i) && odd) s += 2;
        }
    }
    return s;
}

// Reduced column echelon form of a system given by rows, tracking for each
// echelon column the combination of original columns producing it.
struct ColEchelon {
    std::vector<BitVec> cols;              // nonzero echelon columns, R bits
    std::vector<BitVec> combs;             // m-bit combinations
    std::vector<std::size_t> pivot_rows;   // one per echelon column
    std::vector<BitVec> kernel;            // m-bit kernel basis
};

ColEchelon column_echelon(const std::vector<BitVec>& rows, std::size_t m) {
    const std::size_t r_count = rows.size();
    std::vector<BitVec> cols(m, BitVec(r_count));
    for (std::size_t r = 0; r < r_count; ++r)
        for (std::size_t j = 0; j < m; ++j)
            if (rows[r].get(j)) cols[j].set(r, true);
    std::vector<BitVec> combs;
    combs.reserve(m);
    for (std::size_t j = 0; j < m; ++j) combs.push_back(BitVec::unit(m, j));

    ColEchelon e;
    std::size_t done = 0;
    for (std::size_t r = 0; r < r_count && done < m; ++r) {
        std::size_t piv = m;
        for (std::size_t j = done; j < m; ++j)
            if (cols[j].get(r)) { piv = j; break; }
        if (piv == m) continue;
        std::swap(cols[done], cols[piv]);
        std::swap(combs[done], combs[piv]);
        for (std::size_t j = 0; j < m; ++j)
            if (j != done && cols[j].get(r)) {
                cols[j] ^= cols[done];
                combs[j] ^= combs[done];
            }
        e.pivot_rows.push_back(r);
        ++done;
    }
    for (std::size_t j = 0; j < done; ++j) {
        e.cols.push_back(std::move(cols[j]));
        e.combs.push_back(std::move(combs[j]));
    }
    for (std::size_t j = done; j < m; ++j) e.kernel.push_back(std::move(combs[j]));
    return e;
}

// Reduces w against the echelon pivots; returns the residual and the
// m-bit combination y with L y = w - residual.
std::pair<BitVec, BitVec> reduce_against(const ColEchelon& e, BitVec w, std::size_t m) {
    BitVec y(m);
    for (std::size_t t = 0; t < e.cols.size(); ++t) {
        if (w.get(e.pivot_rows[t])) {
            w ^= e.cols[t];
            y ^= e.combs[t];
        }
    }
    return {std::move(w), std::move(y)};
}

bool admissible_tohpe(const BitVec& y, std::size_t m) {
    if (y.is_zero()) return false;
    if (y.popcount() == m && (m & 1)) return false; // y = 1 with odd weight
    return true;
}

std::optional<BitVec> find_admissible(const std::vector<BitVec>& kernel, std::size_t m) {
    for (const auto& v : kernel)
        if (admissible_tohpe(v, m)) return v;
    // Basis vectors can only be inadmissible by equalling the all-ones
    // vector; pair sums cover the remaining span just in case.
    for (std::size_t i = 0; i < kernel.size(); ++i)
        for (std::size_t j = i + 1; j < kernel.size(); ++j) {
            BitVec s = kernel[i] ^ kernel[j];
            if (admissible_tohpe(s, m)) return s;
        }
    return std::nullopt;
}

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double ms() const {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
            .count();
    }
};

OptimizeResult d_tohpe_core(ParityTable p, std::uint32_t d, Deadline deadline,
                            const std::string& method) {
    Timer timer;
    OptimizeReport rep;
    rep.method = method;
    p.normalize();
    rep.initial_columns = p.n_cols();
    const std::size_t guard = 10 * std::max<std::size_t>(p.n_cols(), 1) + 10;
    const auto subsets = wedge_subsets(p.n, d);

    while (true) {
        if (expired(deadline)) { rep.timed_out = true; break; }
        if (rep.iterations > guard) { rep.hit_iteration_guard = true; break; }
        const std::size_t m = p.n_cols();
        if (m == 0) break;

        auto ech = column_echelon(wedge_rows(p, subsets), m);
        auto y = find_admissible(ech.kernel, m);
        if (!y) break;

        auto cs = candidates(p, true);
        const BitVec* best_z = nullptr;
        long best_score = 0;
        for (const auto& z : cs.zs) {
            const long s = objective(*y, cs.pairs.at(z));
            if (!best_z || s > best_score || (s == best_score && z.lex_less(*best_z))) {
                best_z = &z;
                best_score = s;
            }
        }
        if (!best_z || best_score <= 0) { rep.hit_iteration_guard = true; break; }
        p = apply_move(p, *best_z, *y);
        ++rep.iterations;
    }

    // Fixpoint certificate: the admissibility condition re-checked on the
    // final table.
    if (!rep.timed_out && !rep.hit_iteration_guard) {
        auto ech = column_echelon(wedge_rows(p, subsets), p.n_cols());
        rep.fixpoint_verified = !find_admissible(ech.kernel, p.n_cols()).has_value();
    }
    rep.final_columns = p.n_cols();
    rep.wall_ms = timer.ms();
    return {std::move(p), std::move(rep)};
}

// One fast-todd move search: best (z, y) over the offset-kernel generators.
struct MoveSearch {
    bool found = false;
    ReductionMove move;
};

// Exact admissibility system for one z: a rank-one update preserves every
// order-(k<=d+1) wedge parity iff, for each index set S of size 2..d+1,
//   sum over nonempty W strictly inside S with W inside supp(z) of
//   |wedge(S\W) AND y|  vanishes mod 2.
// The all-of-S term is covered by |y| even, handled by the move itself.
std::vector<BitVec> exact_admissible_kernel(const ParityTable& p, std::uint32_t d,
                                            const BitVec& z) {
    const std::size_t m = p.n_cols();
    const std::uint32_t n = p.n;
    const auto cells = wedge_subsets(n, d + 1);
    std::map<std::vector<std::uint32_t>, BitVec> wedge_of;
    for (const auto& s : cells) {
        if (s.size() > d) continue;
        BitVec w = p.rows[s[0]];
        for (std::size_t i = 1; i < s.size(); ++i) w &= p.rows[s[i]];
        wedge_of[s] = std::move(w);
    }
    std::vector<BitVec> rows;
    for (const auto& s : cells) {
        const std::size_t k = s.size();
        if (k < 2) continue;
        BitVec row(m);
        for (std::uint32_t mask = 1; mask + 1 < (1u << k); ++mask) {
            std::vector<std::uint32_t> rest;
            bool w_in_z = true;
            for (std::size_t i = 0; i < k; ++i) {
                if (mask >> i & 1) {
                    if (!z.get(s[i])) { w_in_z = false; break; }
                } else {
                    rest.push_back(s[i]);
                }
            }
            if (w_in_z) row ^= wedge_of.at(rest);
        }
        if (!row.is_zero()) rows.push_back(std::move(row));
    }
    return column_echelon(rows, m).kernel;
}

MoveSearch best_offset_move(const ParityTable& p, std::uint32_t d, const Deadline& deadline,
                            bool& timed_out) {
    const std::size_t m = p.n_cols();
    const std::uint32_t n = p.n;
    const auto row_subsets = wedge_subsets(n, d);
    const auto col_subsets = wedge_subsets(n, d >= 1 ? d - 1 : 0); // X columns
    std::map<std::vector<std::uint32_t>, std::size_t> row_index;
    for (std::size_t i = 0; i < row_subsets.size(); ++i) row_index[row_subsets[i]] = i;

    const auto lrows = wedge_rows(p, row_subsets);
    const auto ech = column_echelon(lrows, m);
    auto cs = candidates(p, true);

    MoveSearch best;
    auto consider = [&](const BitVec& z, const BitVec& y) {
        if (y.is_zero()) return;
        const long s = objective(y, cs.pairs.at(z));
        auto& b = best.move;
        if (!best.found || s > b.score ||
            (s == b.score &&
             (y.popcount() < b.y.popcount() ||
              (y.popcount() == b.y.popcount() &&
               (y.lex_less(b.y) || (y == b.y && z.lex_less(b.z))))))) {
            best.found = true;
            b.z = z;
            b.y = y;
            b.score = s;
        }
    };

    const std::size_t r_count = row_subsets.size();
    for (const auto& z : cs.zs) {
        if (expired(deadline)) { timed_out = true; break; }
        if (d >= 3) {
            // The published offset construction is only exact up to level 2;
            // above that the admissibility system is built directly.
            for (const auto& y : exact_admissible_kernel(p, d, z)) consider(z, y);
            continue;
        }
        // Offset blocks of the admissibility condition for this z.
        std::vector<std::pair<BitVec, BitVec>> reduced_x; // (residual, y-combination)
        reduced_x.reserve(col_subsets.size());
        for (const auto& t : col_subsets) {
            BitVec xcol(r_count);
            for (std::uint32_t g = 0; g < n; ++g) {
                if (!z.get(g)) continue;
                if (std::find(t.begin(), t.end(), g) != t.end()) continue;
                std::vector<std::uint32_t> s = t;
                s.insert(std::lower_bound(s.begin(), s.end(), g), g);
                auto it = row_index.find(s);
                if (it != row_index.end()) xcol.flip(it->second);
            }
            reduced_x.push_back(reduce_against(ech, std::move(xcol), m));
        }
        BitVec vcol(r_count);
        for (std::size_t r = 0; r < r_count; ++r) {
            bool all = true;
            for (auto a : row_subsets[r])
                if (!z.get(a)) { all = false; break; }
            if (all) vcol.set(r, true);
        }
        auto reduced_v = reduce_against(ech, std::move(vcol), m);

        // Kernel of the residual system over (y', b).
        const std::size_t k = reduced_x.size();
        std::vector<BitVec> resid_rows(r_count, BitVec(k + 1));
        for (std::size_t l = 0; l < k; ++l)
            for (std::size_t r = 0; r < r_count; ++r)
                if (reduced_x[l].first.get(r)) resid_rows[r].set(l, true);
        for (std::size_t r = 0; r < r_count; ++r)
            if (reduced_v.first.get(r)) resid_rows[r].set(k, true);
        auto resid_ech = column_echelon(resid_rows, k + 1);

        for (const auto& sol : resid_ech.kernel) {
            BitVec y(m);
            for (std::size_t l = 0; l < k; ++l)
                if (sol.get(l)) y ^= reduced_x[l].second;
            if (sol.get(k)) y ^= reduced_v.second;
            consider(z, y);
        }
        for (const auto& ky : ech.kernel) consider(z, ky);
    }
    return best;
}

OptimizeResult d_fast_todd_core(ParityTable p, std::uint32_t d, Deadline deadline,
                                const std::string& method) {
    Timer timer;
    OptimizeReport rep;
    rep.method = method;
    p.normalize();
    rep.initial_columns = p.n_cols();
    const std::size_t guard = 10 * std::max<std::size_t>(p.n_cols(), 1) + 10;

    bool fixpoint = false;
    while (!fixpoint) {
        if (expired(deadline)) { rep.timed_out = true; break; }
        if (rep.iterations > guard) { rep.hit_iteration_guard = true; break; }

        auto pre = d_tohpe_core(std::move(p), d, deadline, method);
        p = std::move(pre.table);
        rep.iterations += pre.report.iterations;
        if (pre.report.timed_out) { rep.timed_out = true; break; }
        if (pre.report.hit_iteration_guard) { rep.hit_iteration_guard = true; break; }
        if (p.n_cols() == 0) { fixpoint = true; break; }

        bool search_timeout = false;
        auto move = best_offset_move(p, d, deadline, search_timeout);
        if (search_timeout) { rep.timed_out = true; break; }
        if (!move.found || move.move.score <= 0) { fixpoint = true; break; }
        ParityTable next = apply_move(p, move.move.z, move.move.y);
        if (next.n_cols() >= p.n_cols()) { fixpoint = true; break; }
        p = std::move(next);
        ++rep.iterations;
    }
    rep.fixpoint_verified = fixpoint;
    rep.final_columns = p.n_cols();
    rep.wall_ms = timer.ms();
    return {std::move(p), std::move(rep)};
}

OptimizeResult todd_core(ParityTable p, Deadline deadline) {
    Timer timer;
    OptimizeReport rep;
    rep.method = "todd";
    p.normalize();
    rep.initial_columns = p.n_cols();
    const std::uint32_t n = p.n;
    const auto triples = wedge_subsets(n, 3); // sizes 1..3; chi uses 1 and 3

    bool fixpoint = false;
    while (!fixpoint) {
        if (expired(deadline)) { rep.timed_out = true; break; }
        const std::size_t m = p.n_cols();
        bool found = false;
        for (std::uint32_t i = 0; i < m && !found; ++i) {
            for (std::uint32_t j = i + 1; j < m && !found; ++j) {
                if (expired(deadline)) { rep.timed_out = true; break; }
                const BitVec z = p.columns[i] ^ p.columns[j];
                // chi: one row per qubit, one per alpha<beta<gamma triple.
                std::vector<BitVec> chi;
                for (std::uint32_t a = 0; a < n; ++a) chi.push_back(p.rows[a]);
                for (const auto& t : triples) {
                    if (t.size() != 3) continue;
                    BitVec row(m);
                    const auto a = t[0], b = t[1], c = t[2];
                    if (z.get(a)) row ^= p.rows[b] & p.rows[c];
                    if (z.get(b)) row ^= p.rows[a] & p.rows[c];
                    if (z.get(c)) row ^= p.rows[a] & p.rows[b];
                    chi.push_back(std::move(row));
                }
                auto ech = column_echelon(chi, m);
                for (const auto& y : ech.kernel) {
                    if (y.get(i) ^ y.get(j)) {
                        p = apply_move(p, z, y);
                        ++rep.iterations;
                        found = true;
                        break;
                    }
                }
            }
        }
        if (rep.timed_out) break;
        if (!found) fixpoint = true;
    }
    rep.fixpoint_verified = fixpoint;
    rep.final_columns = p.n_cols();
    rep.wall_ms = timer.ms();
    return {std::move(p), std::move(rep)};
}

// When a table has more rows than columns its rows are dependent; a basis
// change zeroes the dependent rows, the smaller instance is optimized, and
// the result is mapped back.
template <typename Core>
OptimizeResult with_row_elimination(const ParityTable& input, Core&& core) {
    ParityTable p = input;
    p.normalize();
    if (p.n_cols() == 0 || p.n <= p.n_cols()) return core(std::move(p));

    const std::uint32_t n = p.n;
    const std::size_t m = p.n_cols();
    // [rows | I] -> RREF by the first m columns gives B with B*rows = E.
    BitMatrix aug(n, m + n);
    for (std::uint32_t r = 0; r < n; ++r) {
        for (std::size_t cbit = 0; cbit < m; ++cbit)
            if (p.rows[r].get(cbit)) aug.set(r, cbit, true);
        aug.set(r, m + r, true);
    }
    std::size_t row = 0;
    for (std::size_t c = 0; c < m && row < n; ++c) {
        std::size_t piv = n;
        for (std::size_t i = row; i < n; ++i)
            if (aug.get(i, c)) { piv = i; break; }
        if (piv == n) continue;
        if (piv != row) std::swap(aug.row(piv), aug.row(row));
        for (std::size_t i = 0; i < n; ++i)
            if (i != row && aug.get(i, c)) aug.row(i) ^= aug.row(row);
        ++row;
    }
    const std::size_t rk = row;
    if (rk == n) return core(std::move(p));

    BitMatrix b(n, n);
    std::vector<BitVec> sub_rows;
    for (std::uint32_t r = 0; r < n; ++r) {
        for (std::uint32_t c = 0; c < n; ++c)
            if (aug.get(r, m + c)) b.set(r, c, true);
        if (r < rk) {
            BitVec e(m);
            for (std::size_t cbit = 0; cbit < m; ++cbit)
                if (aug.get(r, cbit)) e.set(cbit, true);
            sub_rows.push_back(std::move(e));
        }
    }
    std::vector<BitVec> sub_cols(m, BitVec(static_cast<std::uint32_t>(rk)));
    for (std::size_t r = 0; r < rk; ++r)
        for (std::size_t cbit = 0; cbit < m; ++cbit)
            if (sub_rows[r].get(cbit)) sub_cols[cbit].set(r, true);
    ParityTable sub =
        ParityTable::from_columns(static_cast<std::uint32_t>(rk), p.d, std::move(sub_cols));

    OptimizeResult res = core(std::move(sub));

    auto binv = try_invert(b);
    if (!binv) throw std::logic_error("row elimination: basis change not invertible");
    std::vector<BitVec> lifted;
    for (const auto& q : res.table.columns) {
        BitVec padded(n);
        for (std::size_t r = 0; r < rk; ++r)
            if (q.get(r)) padded.set(r, true);
        lifted.push_back(binv->mul_vec(padded));
    }
    res.table = ParityTable::from_columns(n, p.d, std::move(lifted));
    res.report.final_columns = res.table.n_cols();
    return res;
}

} // namespace

ParityTable apply_move(const ParityTable& p, const BitVec& z, const BitVec& y) {
    assert(z.size() == p.n && y.size() == p.n_cols());
    std::vector<BitVec> cols = p.columns;
    for (std::size_t j = 0; j < cols.size(); ++j)
        if (y.get(j)) cols[j] ^= z;
    if (y.popcount() & 1) cols.push_back(z);
    return ParityTable::from_columns(p.n, p.d, std::move(cols));
}

OffsetKernel kernel_with_offset(const BitMatrix& l, const BitMatrix& x, const BitVec& v) {
    const std::size_t m = l.n_cols();
    const std::size_t r_count = l.n_rows();
    const std::size_t k = x.n_cols();
    assert(x.n_rows() == r_count && v.size() == r_count);

    std::vector<BitVec> lrows;
    lrows.reserve(r_count);
    for (std::size_t r = 0; r < r_count; ++r) lrows.push_back(l.row(r));
    auto ech = column_echelon(lrows, m);

    std::vector<std::pair<BitVec, BitVec>> reduced_x;
    for (std::size_t c = 0; c < k; ++c) {
        BitVec col(r_count);
        for (std::size_t r = 0; r < r_count; ++r)
            if (x.get(r, c)) col.set(r, true);
        reduced_x.push_back(reduce_against(ech, std::move(col), m));
    }
    auto reduced_v = reduce_against(ech, v, m);

    std::vector<BitVec> resid_rows(r_count, BitVec(k + 1));
    for (std::size_t c = 0; c < k; ++c)
        for (std::size_t r = 0; r < r_count; ++r)
            if (reduced_x[c].first.get(r)) resid_rows[r].set(c, true);
    for (std::size_t r = 0; r < r_count; ++r)
        if (reduced_v.first.get(r)) resid_rows[r].set(k, true);
    auto resid_ech = column_echelon(resid_rows, k + 1);

    OffsetKernel out;
    for (const auto& sol : resid_ech.kernel) {
        BitVec y(m);
        for (std::size_t c = 0; c < k; ++c)
            if (sol.get(c)) y ^= reduced_x[c].second;
        if (sol.get(k)) y ^= reduced_v.second;
        if (y.is_zero()) continue;
        BitVec yprime(k);
        for (std::size_t c = 0; c < k; ++c)
            if (sol.get(c)) yprime.set(c, true);
        out.generators.push_back(std::move(y));
        out.witnesses.emplace_back(std::move(yprime), sol.get(k));
    }
    for (const auto& ky : ech.kernel) {
        out.generators.push_back(ky);
        out.witnesses.emplace_back(BitVec(k), false);
    }
    return out;
}

OptimizeResult tohpe(const ParityTable& p, Deadline deadline) {
    return with_row_elimination(p, [&](ParityTable q) {
        return d_tohpe_core(std::move(q), 2, deadline, "tohpe");
    });
}

OptimizeResult todd(const ParityTable& p, Deadline deadline) {
    if (p.d != 2)
        throw std::invalid_argument("todd: table level must be 2");
    return with_row_elimination(p, [&](ParityTable q) { return todd_core(std::move(q), deadline); });
}

OptimizeResult fast_todd(const ParityTable& p, Deadline deadline) {
    return with_row_elimination(p, [&](ParityTable q) {
        return d_fast_todd_core(std::move(q), 2, deadline, "fasttodd");
    });
}

OptimizeResult d_tohpe(const ParityTable& p, std::uint32_t d, Deadline deadline) {
    return with_row_elimination(p, [&](ParityTable q) {
        return d_tohpe_core(std::move(q), d, deadline, "d-tohpe");
    });
}

OptimizeResult d_fast_todd(const ParityTable& p, std::uint32_t d, Deadline deadline) {
    if (d < 1 || d > 3)
        throw std::invalid_argument("d_fast_todd: supported levels are 1..3");
    return with_row_elimination(p, [&](ParityTable q) {
        return d_fast_todd_core(std::move(q), d, deadline, "d-fasttodd");
    });
}

std::pair<ParityTable, ParityTable> peel_qubit(const ParityTable& p, std::uint32_t beta,
                                               std::uint32_t d) {
    if (beta >= p.n) throw std::invalid_argument("peel_qubit: bad qubit");
    if (d < 1) throw std::invalid_argument("peel_qubit: level must be >= 1");

    std::vector<BitVec> qcols;
    std::size_t beta_weight = 0;
    for (const auto& col : p.columns) {
        if (!col.get(beta)) continue;
        ++beta_weight;
        BitVec c = col;
        c.set(beta, false);
        qcols.push_back(std::move(c));
    }
    ParityTable q = ParityTable::from_columns(p.n, d - 1, std::move(qcols));
    q = d_tohpe(q, d - 1).table;

    std::vector<BitVec> prime_cols = q.columns;
    if ((prime_cols.size() & 1) != (beta_weight & 1)) prime_cols.emplace_back(p.n);
    for (auto& c : prime_cols) c.set(beta, true);
    ParityTable pprime = ParityTable::from_columns(p.n, p.d, std::move(prime_cols));

    std::vector<BitVec> tilde_cols;
    for (const auto& col : p.columns) {
        BitVec c = col;
        c.set(beta, false);
        tilde_cols.push_back(std::move(c));
    }
    for (const auto& col : pprime.columns) {
        BitVec c = col;
        c.set(beta, false);
        tilde_cols.push_back(std::move(c));
    }
    ParityTable ptilde = ParityTable::from_columns(p.n, p.d, std::move(tilde_cols));
    return {std::move(ptilde), std::move(pprime)};
}

std::vector<ParityTable> bounded_optimize(const std::vector<ParityTable>& segments,
                                          const std::vector<std::uint32_t>& h_qubits,
                                          std::uint32_t d) {
    if (segments.size() != h_qubits.size() + 1)
        throw std::invalid_argument("bounded_optimize: need h+1 segments for h Hadamards");
    std::vector<ParityTable> out(segments.size());
    ParityTable cur = segments[0];
    cur.normalize();
    for (std::size_t i = 0; i < h_qubits.size(); ++i) {
        auto [ptilde, pprime] = peel_qubit(cur, h_qubits[i], d);
        out[i] = std::move(pprime);
        std::vector<BitVec> cols = ptilde.columns;
        cols.insert(cols.end(), segments[i + 1].columns.begin(), segments[i + 1].columns.end());
        cur = ParityTable::from_columns(cur.n, d, std::move(cols));
    }
    out.back() = d_tohpe(cur, d).table;
    return out;
}

std::pair<PhasePolynomial, PhasePolynomial> peel_poly(const PhasePolynomial& p,
                                                      std::uint32_t beta, std::uint32_t d) {
    if (p.d != d) throw std::invalid_argument("peel_poly: level mismatch");
    ParityTable tab = to_parity_table(p);
    auto [ptilde, pprime] = peel_qubit(tab, beta, d);

    std::vector<BitVec> combined_cols = ptilde.columns;
    combined_cols.insert(combined_cols.end(), pprime.columns.begin(), pprime.columns.end());
    ParityTable combined = ParityTable::from_columns(p.n, d, std::move(combined_cols));
    PhasePolynomial residue = clifford_residue(p, combined);

    PhasePolynomial out_tilde = PhasePolynomial::identity(p.n, d);
    for (const auto& c : ptilde.columns) out_tilde.terms.emplace_back(c, 1u);

    PhasePolynomial out_prime = PhasePolynomial::identity(p.n, d);
    for (const auto& c : pprime.columns) out_prime.terms.emplace_back(c, 1u);
    out_prime.terms.insert(out_prime.terms.end(), residue.terms.begin(), residue.terms.end());
    out_prime.constant = residue.constant;
    out_prime.canonicalize();
    return {std::move(out_tilde), std::move(out_prime)};
}

namespace {

// Rewrites a polynomial over the segment's input basis into the output
// basis: q(x) = p(G^-1 (x (+) affine)).
PhasePolynomial to_output_basis(const PhasePolynomial& p) {
    auto ginv = try_invert(p.output_map);
    if (!ginv) throw std::invalid_argument("to_output_basis: singular output map");
    const BitMatrix ginv_t = ginv->transposed();
    const BitVec shift = ginv->mul_vec(p.output_affine);

    PhasePolynomial q = PhasePolynomial::identity(p.n, p.d);
    q.constant = p.constant;
    for (const auto& [mask, w] : p.terms)
        q.add_term(ginv_t.mul_vec(mask), BitVec::and_parity(mask, shift), w);
    q.canonicalize();
    return q;
}

Circuit emit_segment(const PhasePolynomial& diag, const BitMatrix& map, const BitVec& affine) {
    Circuit c = Circuit::empty(diag.n);
    auto net = linear_network(map);
    c.gates.insert(c.gates.end(), net.begin(), net.end());
    for (std::uint32_t i = 0; i < diag.n; ++i)
        if (affine.get(i)) c.gates.push_back(Gate::single(GateKind::X, i));
    Circuit rot = synthesize(diag);
    c.gates.insert(c.gates.end(), rot.gates.begin(), rot.gates.end());
    return c;
}

} // namespace

BoundedSegments bounded_pipeline(const std::vector<Circuit>& segments,
                                 const std::vector<std::uint32_t>& h_qubits,
                                 std::uint32_t d) {
    if (segments.size() != h_qubits.size() + 1)
        throw std::invalid_argument("bounded_pipeline: need h+1 segments for h Hadamards");
    const std::uint32_t n = segments[0].n_wires();

    BoundedSegments out;
    out.segments.resize(segments.size());
    PhasePolynomial pending = PhasePolynomial::identity(n, d);

    for (std::size_t i = 0; i < segments.size(); ++i) {
        Circuit chunk = Circuit::empty(n);
        Circuit pre = synthesize(pending);
        chunk.gates = pre.gates;
        chunk.gates.insert(chunk.gates.end(), segments[i].gates.begin(),
                           segments[i].gates.end());
        PhasePolynomial pi = extract(chunk, d);
        PhasePolynomial pout = to_output_basis(pi);
        PhasePolynomial diag = PhasePolynomial::identity(n, d);
        if (i + 1 < segments.size()) {
            auto [ptilde, pprime] = peel_poly(pout, h_qubits[i], d);
            pending = ptilde;
            out.carried.push_back(std::move(ptilde));
            diag = std::move(pprime);
        } else {
            ParityTable tab = to_parity_table(pout);
            ParityTable opt = d_tohpe(tab, d).table;
            PhasePolynomial residue = clifford_residue(pout, opt);
            for (const auto& c : opt.columns) diag.terms.emplace_back(c, 1u);
            diag.terms.insert(diag.terms.end(), residue.terms.begin(), residue.terms.end());
            diag.constant = residue.constant;
            diag.canonicalize();
        }
        out.segments[i] = emit_segment(diag, pi.output_map, pi.output_affine);
        out.rz_total += rz_count(out.segments[i], d);
    }
    return out;
}

} // namespace topt
