#include "beltrami/modulus.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <queue>
#include <unordered_set>
#include <cstdio>
#include <cstdlib>

namespace qc {

CurveFamilySpec CurveFamilySpec::joining(std::vector<int> e, std::vector<int> f) {
    if (e.empty() || f.empty())
        throw invalid_input("joining family needs nonempty end sets");
    CurveFamilySpec spec;
    spec.kind = Kind::joining;
    spec.set_e = std::move(e);
    spec.set_f = std::move(f);
    return spec;
}

CurveFamilySpec CurveFamilySpec::circles(cplx z0, double eps, double eps0) {
    if (!(eps > 0.0) || !(eps0 > eps))
        throw invalid_input("circle family needs 0 < eps < eps0");
    CurveFamilySpec spec;
    spec.kind = Kind::circles;
    spec.z0 = z0;
    spec.eps = eps;
    spec.eps0 = eps0;
    return spec;
}

CurveTrace trace_polyline(const GridSpec& grid, const std::vector<cplx>& points,
                          double step_cells) {
    CurveTrace trace;
    if (points.size() < 2) return trace;
    double h = std::min(grid.hx(), grid.hy());
    double step = step_cells * h;
    // Bilinear deposition: the accumulated weights make the line integral
    // of a cell density the trapezoid quadrature of its bilinear
    // interpolant along the polyline.
    std::vector<std::pair<int, double>> hits;
    for (std::size_t s = 0; s + 1 < points.size(); ++s) {
        cplx a = points[s], b = points[s + 1];
        double len = std::abs(b - a);
        if (len == 0.0) continue;
        int pieces = std::max(1, static_cast<int>(std::ceil(len / step)));
        double dl = len / pieces;
        for (int i = 0; i < pieces; ++i) {
            cplx m = a + (b - a) * ((i + 0.5) / pieces);
            double fx = (m.real() - grid.origin().real()) / grid.hx();
            double fy = (m.imag() - grid.origin().imag()) / grid.hy();
            int ix = static_cast<int>(std::floor(fx));
            int iy = static_cast<int>(std::floor(fy));
            if (ix < 0 || ix >= grid.nx() - 1 || iy < 0 || iy >= grid.ny() - 1)
                continue;
            double tx = fx - ix, ty = fy - iy;
            const double w[4] = {(1 - tx) * (1 - ty), tx * (1 - ty), (1 - tx) * ty,
                                 tx * ty};
            const int cx[4] = {ix, ix + 1, ix, ix + 1};
            const int cy[4] = {iy, iy, iy + 1, iy + 1};
            double wsum = 0.0;
            for (int c = 0; c < 4; ++c)
                if (grid.inside(cx[c], cy[c])) wsum += w[c];
            if (wsum < 0.5) continue;
            for (int c = 0; c < 4; ++c) {
                if (!grid.inside(cx[c], cy[c]) || w[c] == 0.0) continue;
                hits.emplace_back(grid.index(cx[c], cy[c]), dl * w[c] / wsum);
            }
        }
    }
    std::sort(hits.begin(), hits.end());
    for (const auto& [cell, dl] : hits) {
        if (!trace.cells.empty() && trace.cells.back() == cell) {
            trace.lengths.back() += dl;
        } else {
            trace.cells.push_back(cell);
            trace.lengths.push_back(dl);
        }
    }
    return trace;
}

namespace {

// Constraint storage for the quadratic program: flattened (cell, length)
// incidences per curve.
struct ConstraintSet {
    std::vector<int> offsets{0};
    std::vector<int> cells;
    std::vector<double> weights;
    std::vector<double> self_q;  // sum w^2 / (2 a) per curve
    std::vector<double> lambda;
    std::vector<int> age;  // round the curve was added

    int count() const { return static_cast<int>(self_q.size()); }

    void add(const CurveTrace& trace, double cell_area, int round = 0) {
        double q = 0.0;
        for (std::size_t i = 0; i < trace.cells.size(); ++i) {
            cells.push_back(trace.cells[i]);
            weights.push_back(trace.lengths[i]);
            q += trace.lengths[i] * trace.lengths[i];
        }
        offsets.push_back(static_cast<int>(cells.size()));
        self_q.push_back(q / (2.0 * cell_area));
        lambda.push_back(0.0);
        age.push_back(round);
    }

    std::size_t hash_of(int r) const {
        std::size_t h = static_cast<std::size_t>(offsets[r + 1] - offsets[r]);
        for (int i = offsets[r]; i < offsets[r + 1]; ++i)
            h = h * 1000003u + static_cast<std::size_t>(cells[i]);
        return h;
    }

    // Drops constraints whose multiplier vanished (keeping fresh ones a
    // grace period); the dual stays feasible since dropped multipliers are
    // zero. Returns the kept hashes so dropped curves may be rediscovered.
    void prune(int current_round, std::unordered_set<std::size_t>& seen) {
        std::vector<int> keep;
        for (int r = 0; r < count(); ++r)
            if (lambda[r] > 1e-12 || age[r] >= current_round - 1) keep.push_back(r);
        if (keep.size() == static_cast<std::size_t>(count())) return;
        ConstraintSet next;
        seen.clear();
        for (int r : keep) {
            CurveTrace t;
            t.cells.assign(cells.begin() + offsets[r], cells.begin() + offsets[r + 1]);
            t.lengths.assign(weights.begin() + offsets[r],
                             weights.begin() + offsets[r + 1]);
            next.add(t, 1.0, age[r]);
            next.self_q.back() = self_q[r];
            next.lambda.back() = lambda[r];
            seen.insert(next.hash_of(next.count() - 1));
        }
        *this = std::move(next);
    }
};

// Dual coordinate ascent (with over-relaxation) on the nonnegative
// least-norm program:
//   min sum a rho^2  s.t.  line integrals >= 1.
// Each visit solves the single-constraint subproblem; the primal density
// is kept in sync so restarts are warm.
double qp_sweeps(ConstraintSet& con, std::vector<double>& rho, double cell_area,
                 int max_sweeps, double tol, double omega = 1.0) {
    double maxviol = 0.0;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        maxviol = 0.0;
        for (int r = 0; r < con.count(); ++r) {
            if (con.self_q[r] <= 0.0) continue;
            double line = 0.0;
            for (int i = con.offsets[r]; i < con.offsets[r + 1]; ++i)
                line += con.weights[i] * rho[con.cells[i]];
            double delta = omega * (1.0 - line) / con.self_q[r];
            if (delta < -con.lambda[r]) delta = -con.lambda[r];
            if (line < 1.0) maxviol = std::max(maxviol, 1.0 - line);
            if (std::abs(delta) < 1e-15) continue;
            con.lambda[r] += delta;
            double scale = delta / (2.0 * cell_area);
            for (int i = con.offsets[r]; i < con.offsets[r + 1]; ++i)
                rho[con.cells[i]] += scale * con.weights[i];
        }
        if (maxviol < tol) break;
    }
    return maxviol;
}

double min_line_integral(const ConstraintSet& con, const std::vector<double>& rho) {
    double m = std::numeric_limits<double>::infinity();
    for (int r = 0; r < con.count(); ++r) {
        double line = 0.0;
        for (int i = con.offsets[r]; i < con.offsets[r + 1]; ++i)
            line += con.weights[i] * rho[con.cells[i]];
        m = std::min(m, line);
    }
    return m;
}

double density_energy(const std::vector<double>& rho, double cell_area) {
    double e = 0.0;
    for (double v : rho) e += v * v;
    return e * cell_area;
}

// 8-connected Dijkstra under the metric (rho_u + rho_v)/2 * edge_length,
// with a small euclidean tie-break so zero-density regions still prefer
// straight paths. Returns arrival values and parent pointers.
struct PathSearch {
    std::vector<double> dist;
    std::vector<int> parent;
};

PathSearch dijkstra(const GridSpec& g, const std::vector<double>& rho,
                    const std::vector<int>& sources, double tie_break) {
    const int nx = g.nx(), ny = g.ny();
    PathSearch out;
    out.dist.assign(g.size(), std::numeric_limits<double>::infinity());
    out.parent.assign(g.size(), -1);
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    for (int s : sources) {
        if (!g.masked(s)) continue;
        out.dist[s] = 0.0;
        heap.emplace(0.0, s);
    }
    // Sixteen directions (axes, diagonals, knight steps): the widest
    // angular gap shrinks to ~27 degrees, keeping the staircase length
    // overshoot of sampled curves near one percent squared.
    const int dx[16] = {1, -1, 0, 0, 1, 1, -1, -1, 2, 2, -2, -2, 1, 1, -1, -1};
    const int dy[16] = {0, 0, 1, -1, 1, -1, 1, -1, 1, -1, 1, -1, 2, -2, 2, -2};
    double elen[16];
    for (int e = 0; e < 16; ++e) elen[e] = std::hypot(dx[e] * g.hx(), dy[e] * g.hy());
    while (!heap.empty()) {
        auto [d, k] = heap.top();
        heap.pop();
        if (d > out.dist[k] * (1 + 1e-15) + 1e-300) continue;
        int ix = k % nx, iy = k / nx;
        for (int e = 0; e < 16; ++e) {
            int jx = ix + dx[e], jy = iy + dy[e];
            if (jx < 0 || jx >= nx || jy < 0 || jy >= ny) continue;
            int j = g.index(jx, jy);
            if (!g.masked(j)) continue;
            if (e >= 8) {
                // knight steps must not jump across unmasked cells
                int mx = ix + (dx[e] > 0 ? 1 : -1);
                int my = iy + (dy[e] > 0 ? 1 : -1);
                if (!g.inside(mx, my)) continue;
            }
            double w = (0.5 * (rho[k] + rho[j]) + tie_break) * elen[e];
            double nd = d + w;
            if (nd < out.dist[j]) {
                out.dist[j] = nd;
                out.parent[j] = k;
                heap.emplace(nd, j);
            }
        }
    }
    return out;
}

CurveTrace backtrack(const GridSpec& g, const PathSearch& ps, int target) {
    std::vector<int> nodes;
    for (int k = target; k >= 0; k = ps.parent[k]) nodes.push_back(k);
    std::reverse(nodes.begin(), nodes.end());
    CurveTrace trace;
    trace.cells.reserve(nodes.size());
    trace.lengths.assign(nodes.size(), 0.0);
    for (std::size_t i = 0; i < nodes.size(); ++i) trace.cells.push_back(nodes[i]);
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
        double len = std::abs(g.point(nodes[i + 1]) - g.point(nodes[i]));
        trace.lengths[i] += 0.5 * len;
        trace.lengths[i + 1] += 0.5 * len;
    }
    return trace;
}

std::size_t trace_hash(const CurveTrace& t) {
    std::size_t h = t.cells.size();
    for (int c : t.cells) h = h * 1000003u + static_cast<std::size_t>(c);
    return h;
}

std::vector<CurveTrace> circle_traces(const GridSpec& grid, cplx z0, double eps,
                                      double eps0, const ModulusConfig& cfg) {
    double h = std::min(grid.hx(), grid.hy());
    double spacing = cfg.circle_spacing_cells * h;
    int count = std::max(2, static_cast<int>(std::round((eps0 - eps) / spacing)) + 1);
    std::vector<CurveTrace> traces;
    for (int i = 0; i < count; ++i) {
        double r = eps + (eps0 - eps) * i / (count - 1);
        int nodes = std::max(32, static_cast<int>(std::ceil(2.0 * std::numbers::pi * r /
                                                            (0.5 * h))));
        std::vector<cplx> pts;
        pts.reserve(nodes + 1);
        for (int j = 0; j <= nodes; ++j) {
            double th = 2.0 * std::numbers::pi * j / nodes;
            pts.push_back(z0 + r * cplx(std::cos(th), std::sin(th)));
        }
        CurveTrace t = trace_polyline(grid, pts);
        double total = 0.0;
        for (double l : t.lengths) total += l;
        if (total < cfg.min_arc_cells * h) continue;  // sub-resolution arcs dropped
        traces.push_back(std::move(t));
    }
    return traces;
}

}  // namespace

ModulusResult modulus_of_traces(const GridSpec& grid,
                                const std::vector<CurveTrace>& traces,
                                const ModulusConfig& cfg) {
    if (traces.empty()) throw invalid_input("no representative exists");
    double cell_area = grid.hx() * grid.hy();
    ConstraintSet con;
    for (const auto& t : traces)
        if (!t.cells.empty()) con.add(t, cell_area);
    if (con.count() == 0) throw invalid_input("no representative exists");

    std::vector<double> rho(grid.size(), 0.0);
    qp_sweeps(con, rho, cell_area, cfg.qp_final_sweeps, 0.3 * cfg.qp_tol);

    ModulusResult res{0.0, RealField(grid, 0.0)};
    double minint = min_line_integral(con, rho);
    if (!(minint > 0.0)) throw numeric_failure("degenerate representative set");
    for (auto& v : rho) v /= minint;
    res.value = density_energy(rho, cell_area);
    res.density = RealField(grid, std::move(rho));
    res.min_line_integral = minint;
    res.representatives = con.count();
    res.infinite_proxy = res.value > cfg.infinite_threshold;
    return res;
}

ModulusResult discrete_modulus(const GridSpec& grid, const CurveFamilySpec& family,
                               const ModulusConfig& cfg) {
    grid.require_connected();
    double cell_area = grid.hx() * grid.hy();

    if (family.kind == CurveFamilySpec::Kind::circles) {
        auto traces = circle_traces(grid, family.z0, family.eps, family.eps0, cfg);
        return modulus_of_traces(grid, traces, cfg);
    }

    for (int c : family.set_e)
        if (c < 0 || c >= static_cast<int>(grid.size()) || !grid.masked(c))
            throw invalid_input("end set E leaves the mask");
    for (int c : family.set_f)
        if (c < 0 || c >= static_cast<int>(grid.size()) || !grid.masked(c))
            throw invalid_input("end set F leaves the mask");

    const double tie = 1e-12;
    ConstraintSet con;
    std::vector<double> rho(grid.size(), 0.0);
    std::unordered_set<std::size_t> seen;

    // Representatives are weighted shortest paths, generated from both end
    // sets: trees funnel near their source, so sourcing at E spreads the
    // constraints near F and vice versa.
    auto add_paths = [&](const PathSearch& ps, const std::vector<int>& targets,
                         int want, double below) {
        std::vector<std::pair<double, int>> candidates;
        for (int c : targets)
            if (std::isfinite(ps.dist[c]) && ps.dist[c] < below)
                candidates.emplace_back(ps.dist[c], c);
        if (candidates.empty()) return 0;
        std::sort(candidates.begin(), candidates.end());
        std::size_t stride = std::max<std::size_t>(1, candidates.size() / want);
        int added = 0;
        for (std::size_t i = 0; i < candidates.size(); i += stride) {
            CurveTrace t = backtrack(grid, ps, candidates[i].second);
            if (t.cells.size() < 2) {
                // Zero-separation family: adjacent end sets.
                t.lengths.assign(t.cells.size(), 0.5 * std::min(grid.hx(), grid.hy()));
            }
            std::size_t h = trace_hash(t);
            if (!seen.insert(h).second) continue;
            con.add(t, cell_area);
            ++added;
        }
        return added;
    };

    PathSearch from_e = dijkstra(grid, rho, family.set_e, tie);
    bool reachable = false;
    double separation = std::numeric_limits<double>::infinity();
    for (int c : family.set_f)
        if (std::isfinite(from_e.dist[c])) {
            reachable = true;
            separation = std::min(separation, from_e.dist[c] / tie);
        }
    if (!reachable)
        throw invalid_input("no representative exists: end sets lie in different components");
    // Touching end sets: the family contains arbitrarily short curves, so
    // the modulus blows up; the grid cannot represent that beyond flagging.
    bool zero_separation = separation <= 2.5 * std::min(grid.hx(), grid.hy());
    add_paths(from_e, family.set_f, cfg.initial_curves / 2,
              std::numeric_limits<double>::infinity());
    PathSearch from_f = dijkstra(grid, rho, family.set_f, tie);
    add_paths(from_f, family.set_e, cfg.initial_curves / 2,
              std::numeric_limits<double>::infinity());

    // Violated-corridor saturation: a cell with forward + backward distance
    // below one sits on a sub-unit path; every round adds spatially spread
    // paths through the worst such cells.
    auto saturate = [&](const PathSearch& fe, const PathSearch& ff, int budget,
                        double below, int round_now) {
        std::vector<std::pair<double, int>> deficient;
        for (std::size_t k = 0; k < grid.size(); ++k) {
            if (!grid.masked(static_cast<int>(k))) continue;
            double d = fe.dist[k] + ff.dist[k];
            if (std::isfinite(d) && d < below)
                deficient.emplace_back(d, static_cast<int>(k));
        }
        if (deficient.empty()) return 0;
        std::sort(deficient.begin(), deficient.end());
        std::vector<std::uint8_t> stamped(grid.size(), 0);
        int added = 0;
        for (const auto& [d, c] : deficient) {
            if (added >= budget || con.count() + added >= cfg.max_curves) break;
            if (stamped[c]) continue;
            // stamp a small neighbourhood so one corridor yields one path
            int cx = c % grid.nx(), cy = c / grid.nx();
            for (int dy = -2; dy <= 2; ++dy)
                for (int dx = -2; dx <= 2; ++dx) {
                    int jx = cx + dx, jy = cy + dy;
                    if (jx < 0 || jx >= grid.nx() || jy < 0 || jy >= grid.ny()) continue;
                    stamped[grid.index(jx, jy)] = 1;
                }
            CurveTrace left = backtrack(grid, fe, c);
            CurveTrace right = backtrack(grid, ff, c);
            CurveTrace joined;
            joined.cells = left.cells;
            joined.lengths = left.lengths;
            for (std::size_t i = right.cells.size(); i-- > 1;) {
                joined.cells.push_back(right.cells[i - 1]);
                joined.lengths.push_back(right.lengths[i - 1]);
            }
            // join the two halves across the pivot cell
            if (joined.cells.size() >= 2) {
                std::size_t h = trace_hash(joined);
                if (seen.insert(h).second) {
                    con.add(joined, cell_area, round_now);
                    ++added;
                }
            }
        }
        return added;
    };

    int rounds = 0;
    double best = 0.0;
    const bool dbg = std::getenv("QCMOD_DEBUG") != nullptr;
    for (; rounds < cfg.max_rounds; ++rounds) {
        double viol = qp_sweeps(con, rho, cell_area, cfg.qp_max_sweeps, cfg.qp_tol);
        from_e = dijkstra(grid, rho, family.set_e, tie);
        best = std::numeric_limits<double>::infinity();
        for (int c : family.set_f) best = std::min(best, from_e.dist[c]);
        if (dbg) {
            int active = 0;
            for (double l : con.lambda)
                if (l > 1e-10) ++active;
            std::fprintf(stderr, "round %d curves=%d active=%d best=%.4f viol=%.2e E=%.4f\n",
                         rounds, con.count(), active, best, viol,
                         density_energy(rho, cell_area));
        }
        if (best >= 1.0 - cfg.admissibility_tol) break;
        if (con.count() >= cfg.max_curves) break;
        from_f = dijkstra(grid, rho, family.set_f, tie);
        if (saturate(from_e, from_f, cfg.batch_curves,
                     1.0 - cfg.admissibility_tol, rounds) == 0)
            break;
        con.prune(rounds, seen);
    }
    qp_sweeps(con, rho, cell_area, cfg.qp_final_sweeps, 0.5 * cfg.qp_tol);

    ModulusResult res{0.0, RealField(grid, 0.0)};
    // Certification: rescale so every sampled representative and the final
    // weighted shortest path have unit line integral; the reported value
    // upper-bounds the sampled program.
    double minint = min_line_integral(con, rho);
    from_e = dijkstra(grid, rho, family.set_e, tie);
    best = std::numeric_limits<double>::infinity();
    for (int c : family.set_f) best = std::min(best, from_e.dist[c]);
    minint = std::min(minint, best);
    if (!(minint > 0.0)) throw numeric_failure("degenerate representative set");
    for (auto& v : rho) v /= minint;
    res.value = density_energy(rho, cell_area);
    res.density = RealField(grid, std::move(rho));
    res.min_line_integral = minint;
    res.representatives = con.count();
    res.generation_rounds = rounds;
    res.infinite_proxy = zero_separation || res.value > cfg.infinite_threshold;
    return res;
}

WeightedMinSolution weighted_inf_closed_form(const WeightedMinProblem& problem) {
    if (problem.weights.size() != problem.values.size() || problem.weights.empty())
        throw invalid_input("weighted problem needs matching nonempty atoms");
    if (!(problem.p > 1.0)) throw invalid_input("exponent must exceed 1");
    double lambda = 1.0 / (problem.p - 1.0);
    double mass = 0.0;
    for (std::size_t i = 0; i < problem.weights.size(); ++i) {
        if (!(problem.weights[i] > 0.0) || !(problem.values[i] > 0.0) ||
            !std::isfinite(problem.values[i]))
            throw invalid_input("atoms need positive finite weight and value");
        mass += problem.weights[i] * std::pow(problem.values[i], -lambda);
    }
    WeightedMinSolution sol;
    sol.lambda = lambda;
    sol.value = std::pow(mass, -1.0 / lambda);
    double C = 1.0 / mass;
    sol.minimizer.resize(problem.values.size());
    for (std::size_t i = 0; i < problem.values.size(); ++i)
        sol.minimizer[i] = C * std::pow(problem.values[i], -lambda);
    return sol;
}

double circle_family_modulus_lower(const DilatationField& Kt, cplx z0, double eps,
                                   double eps0, int r_steps) {
    if (!(eps > 0.0) || !(eps0 > eps)) throw invalid_input("needs 0 < eps < eps0");
    const GridSpec& g = Kt.grid();
    if (r_steps <= 0) {
        double h = std::min(g.hx(), g.hy());
        r_steps = std::max(32, static_cast<int>(std::ceil((eps0 - eps) / (0.5 * h))));
        r_steps = std::min(r_steps, 4096);
    }
    RealField f = Kt.as_real_field();
    double total = 0.0;
    double prev_val = 0.0, prev_r = 0.0;
    for (int i = 0; i <= r_steps; ++i) {
        double r = eps * std::pow(eps0 / eps, static_cast<double>(i) / r_steps);
        CircleScan scan = circle_scan(f, z0, r);
        double val = scan.integral > 0.0 ? 1.0 / scan.integral : 0.0;
        if (i > 0) total += 0.5 * (val + prev_val) * (r - prev_r);
        prev_val = val;
        prev_r = r;
    }
    return total;
}

EtaComparison eta0_optimality(const DilatationField& Kt, cplx z0, double eps,
                              double eps0, const std::vector<double>& eta_values,
                              int r_steps) {
    if (!(eps > 0.0) || !(eps0 > eps)) throw invalid_input("needs 0 < eps < eps0");
    int n = static_cast<int>(eta_values.size());
    if (r_steps > 0 && r_steps + 1 != n)
        throw invalid_input("eta samples do not match the radius grid");
    if (n < 2) throw invalid_input("eta needs at least two samples");

    // Uniform radius grid with trapezoid weights.
    std::vector<double> r(n), w(n), norm(n);
    double dr = (eps0 - eps) / (n - 1);
    RealField f = Kt.as_real_field();
    for (int i = 0; i < n; ++i) {
        r[i] = eps + dr * i;
        w[i] = (i == 0 || i == n - 1) ? 0.5 * dr : dr;
        CircleScan scan = circle_scan(f, z0, r[i]);
        norm[i] = scan.integral;
        if (!(norm[i] > 0.0))
            throw invalid_input("ring norm vanished inside the radius range");
    }
    double I = 0.0;
    for (int i = 0; i < n; ++i) I += w[i] / norm[i];
    if (!(I > 0.0)) throw numeric_failure("all ring norms infinite in range");

    EtaComparison cmp;
    cmp.lhs = 1.0 / I;

    std::vector<double> eta(eta_values);
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += w[i] * eta[i];
    if (!(s > 0.0)) throw invalid_input("candidate eta has zero integral");
    if (std::abs(s - 1.0) > 1e-8) {
        for (auto& v : eta) v /= s;
        cmp.rescaled = true;
    }
    double rhs = 0.0;
    for (int i = 0; i < n; ++i) rhs += w[i] * eta[i] * eta[i] * norm[i];
    cmp.rhs = rhs;
    return cmp;
}

PushforwardReport pushforward_modulus_check(const MapField& f, const MuField& mu,
                                            cplx z0, double eps, double eps0,
                                            int image_resolution, double slack) {
    const GridSpec& g = f.grid();
    double h = std::min(g.hx(), g.hy());

    // Image polylines of the dashed circle family.
    int radii = std::max(24, static_cast<int>(std::round((eps0 - eps) / (0.5 * h))));
    radii = std::min(radii, 512);
    std::vector<std::vector<cplx>> polylines;
    double img_min_x = 1e300, img_max_x = -1e300, img_min_y = 1e300, img_max_y = -1e300;
    ComplexField view(g, f.values());
    double max_jump = 0.0;
    for (int i = 0; i <= radii; ++i) {
        double r = eps + (eps0 - eps) * i / radii;
        int nodes = std::max(64, static_cast<int>(std::ceil(2.0 * std::numbers::pi * r /
                                                            (0.5 * h))));
        std::vector<cplx> img;
        img.reserve(nodes + 1);
        cplx prev{};
        bool has_prev = false;
        for (int j = 0; j <= nodes; ++j) {
            double th = 2.0 * std::numbers::pi * j / nodes;
            cplx p = z0 + r * cplx(std::cos(th), std::sin(th));
            cplx val;
            int ix = static_cast<int>(std::lround((p.real() - g.origin().real()) / g.hx()));
            int iy = static_cast<int>(std::lround((p.imag() - g.origin().imag()) / g.hy()));
            if (!g.inside(ix, iy) || !interp_bilinear(view, p, val)) {
                has_prev = false;
                img.push_back(cplx(std::numeric_limits<double>::quiet_NaN(), 0));
                continue;
            }
            img.push_back(val);
            img_min_x = std::min(img_min_x, val.real());
            img_max_x = std::max(img_max_x, val.real());
            img_min_y = std::min(img_min_y, val.imag());
            img_max_y = std::max(img_max_y, val.imag());
            if (has_prev) max_jump = std::max(max_jump, std::abs(val - prev));
            prev = val;
            has_prev = true;
        }
        polylines.push_back(std::move(img));
    }
    if (!(img_max_x > img_min_x) || !(img_max_y > img_min_y))
        throw invalid_input("image of the circle family is degenerate");

    double pad_x = 0.05 * (img_max_x - img_min_x) + 1e-12;
    double pad_y = 0.05 * (img_max_y - img_min_y) + 1e-12;
    cplx origin(img_min_x - pad_x, img_min_y - pad_y);
    double width = (img_max_x - img_min_x) + 2 * pad_x;
    double height = (img_max_y - img_min_y) + 2 * pad_y;
    GridSpec img_grid(origin, width, height, image_resolution, image_resolution,
                      full_mask(image_resolution, image_resolution));

    std::vector<CurveTrace> traces;
    for (auto& poly : polylines) {
        // split on NaN gaps, merge arcs of one dashed line into one trace
        CurveTrace merged;
        std::vector<cplx> run;
        auto flush = [&]() {
            if (run.size() >= 2) {
                CurveTrace t = trace_polyline(img_grid, run);
                merged.cells.insert(merged.cells.end(), t.cells.begin(), t.cells.end());
                merged.lengths.insert(merged.lengths.end(), t.lengths.begin(),
                                      t.lengths.end());
            }
            run.clear();
        };
        for (cplx p : poly) {
            if (std::isnan(p.real())) flush();
            else run.push_back(p);
        }
        flush();
        if (!merged.cells.empty()) traces.push_back(std::move(merged));
    }

    PushforwardReport report;
    report.curves = static_cast<int>(traces.size());
    double img_h = std::min(img_grid.hx(), img_grid.hy());
    report.under_resolved = max_jump > 3.0 * img_h;

    if (traces.empty()) throw invalid_input("no representative exists");
    ModulusResult m = modulus_of_traces(img_grid, traces);
    report.image_modulus = m.value;

    DilatationField Kt = tangent_dilatation(mu, z0);
    report.lower_bound = circle_family_modulus_lower(Kt, z0, eps, eps0);
    report.bound_satisfied = report.image_modulus >= report.lower_bound * (1.0 - slack);
    return report;
}

}  // namespace qc
