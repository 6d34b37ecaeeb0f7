#include "beltrami/solver.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace qc {

MuField truncate_mu(const MuField& mu, double n) {
    if (!(n >= 1.0)) throw invalid_input("truncation level must be >= 1");
    const GridSpec& g = mu.grid();
    double cap = (n - 1.0) / (n + 1.0);  // K <= n  <=>  |mu| <= (n-1)/(n+1)
    std::vector<cplx> vals(mu.values());
    for (std::size_t k = 0; k < vals.size(); ++k) {
        if (!g.masked(static_cast<int>(k))) continue;
        if (std::abs(vals[k]) > cap) vals[k] = cplx(0, 0);
    }
    return MuField(g, std::move(vals));
}

namespace {

struct Stencil {
    int nodes[3];
    double coeff[3];
    int size = 0;
};

// Second-order difference along one axis; centered inside, one-sided at
// mask edges. Returns false when no stencil fits.
bool axis_stencil(const GridSpec& g, int ix, int iy, int dx, int dy, double h,
                  Stencil& s) {
    bool m_minus = g.inside(ix - dx, iy - dy);
    bool m_plus = g.inside(ix + dx, iy + dy);
    if (m_minus && m_plus) {
        s.nodes[0] = g.index(ix + dx, iy + dy);
        s.coeff[0] = 0.5 / h;
        s.nodes[1] = g.index(ix - dx, iy - dy);
        s.coeff[1] = -0.5 / h;
        s.size = 2;
        return true;
    }
    if (m_plus && g.inside(ix + 2 * dx, iy + 2 * dy)) {
        s.nodes[0] = g.index(ix, iy);
        s.coeff[0] = -1.5 / h;
        s.nodes[1] = g.index(ix + dx, iy + dy);
        s.coeff[1] = 2.0 / h;
        s.nodes[2] = g.index(ix + 2 * dx, iy + 2 * dy);
        s.coeff[2] = -0.5 / h;
        s.size = 3;
        return true;
    }
    if (m_minus && g.inside(ix - 2 * dx, iy - 2 * dy)) {
        s.nodes[0] = g.index(ix, iy);
        s.coeff[0] = 1.5 / h;
        s.nodes[1] = g.index(ix - dx, iy - dy);
        s.coeff[1] = -2.0 / h;
        s.nodes[2] = g.index(ix - 2 * dx, iy - 2 * dy);
        s.coeff[2] = 0.5 / h;
        s.size = 3;
        return true;
    }
    return false;
}

using Triplet = Eigen::Triplet<double>;

// One matrix entry candidate: node, real/imaginary component, coefficient.
struct Entry {
    int node;
    bool is_imag;
    double coeff;
};

struct Assembly {
    std::vector<Triplet> triplets;
    std::vector<double> rhs;
    int rows = 0;
    std::vector<int> var_of_node;  // variable base index; -1 pinned/unmasked
    std::vector<cplx> pin_value;
    std::vector<std::uint8_t> pinned;
    int unknowns = 0;

    void add_row(const Entry* entries, int count, double target, double weight) {
        double b = target;
        for (int i = 0; i < count; ++i) {
            const Entry& e = entries[i];
            if (e.coeff == 0.0) continue;
            if (pinned[e.node]) {
                double val = e.is_imag ? pin_value[e.node].imag()
                                       : pin_value[e.node].real();
                b -= e.coeff * val;
                continue;
            }
            triplets.emplace_back(rows, var_of_node[e.node] + (e.is_imag ? 1 : 0),
                                  e.coeff * weight);
        }
        rhs.push_back(b * weight);
        ++rows;
    }
};

Assembly assemble_system(const MuField& mu, const SolverConfig& cfg) {
    const GridSpec& g = mu.grid();
    g.require_connected();
    double h = std::max(g.hx(), g.hy());

    int k0 = g.nearest_masked(cfg.normalization_p0, 2.0 * h);
    int k1 = g.nearest_masked(cfg.normalization_p1, 2.0 * h);
    if (k0 < 0 || k1 < 0 || k0 == k1)
        throw invalid_input("normalization cell outside mask");

    Assembly a;
    a.var_of_node.assign(g.size(), -1);
    a.pin_value.assign(g.size(), cplx(0, 0));
    a.pinned.assign(g.size(), 0);
    a.pinned[k0] = 1;
    a.pin_value[k0] = cfg.normalization_w0;
    a.pinned[k1] = 1;
    a.pin_value[k1] = cfg.normalization_w1;
    for (std::size_t k = 0; k < g.size(); ++k) {
        if (!g.masked(static_cast<int>(k)) || a.pinned[k]) continue;
        a.var_of_node[k] = a.unknowns;
        a.unknowns += 2;
    }
    a.triplets.reserve(g.masked_count() * 20);

    // Equation rows: residual = ((1 - mu) Dx f + i (1 + mu) Dy f) / 2,
    // split into real and imaginary parts, weighted by sqrt(cell area).
    double w_pde = std::sqrt(g.hx() * g.hy());
    Entry re_row[12], im_row[12];
    for (int iy = 0; iy < g.ny(); ++iy) {
        for (int ix = 0; ix < g.nx(); ++ix) {
            int k = g.index(ix, iy);
            if (!g.masked(k)) continue;
            Stencil sx, sy;
            if (!axis_stencil(g, ix, iy, 1, 0, g.hx(), sx)) continue;
            if (!axis_stencil(g, ix, iy, 0, 1, g.hy(), sy)) continue;
            cplx m = mu[k];
            double mr = m.real(), mi = m.imag();
            int n = 0;
            for (int i = 0; i < sx.size; ++i) {
                double c = sx.coeff[i];
                re_row[n] = {sx.nodes[i], false, 0.5 * (1 - mr) * c};
                im_row[n] = {sx.nodes[i], false, -0.5 * mi * c};
                ++n;
                re_row[n] = {sx.nodes[i], true, 0.5 * mi * c};
                im_row[n] = {sx.nodes[i], true, 0.5 * (1 - mr) * c};
                ++n;
            }
            for (int i = 0; i < sy.size; ++i) {
                double c = sy.coeff[i];
                re_row[n] = {sy.nodes[i], false, -0.5 * mi * c};
                im_row[n] = {sy.nodes[i], false, 0.5 * (1 + mr) * c};
                ++n;
                re_row[n] = {sy.nodes[i], true, -0.5 * (1 + mr) * c};
                im_row[n] = {sy.nodes[i], true, -0.5 * mi * c};
                ++n;
            }
            a.add_row(re_row, n, 0.0, w_pde);
            a.add_row(im_row, n, 0.0, w_pde);
        }
    }

    // Boundary trace rows: Re f on the mask boundary ring follows the
    // prescribed real data (Re z unless overridden).
    TraceData trace = cfg.trace ? cfg.trace : [](cplx z) { return z.real(); };
    double w_tr = std::sqrt(h);
    for (int bnode : g.boundary_ring()) {
        Entry e{bnode, false, 1.0};
        a.add_row(&e, 1, trace(g.point(bnode)), w_tr);
    }

    // Optional gradient penalty on nearest-neighbour differences.
    if (cfg.regularization_weight > 0.0) {
        double w = std::sqrt(cfg.regularization_weight);
        for (int iy = 0; iy < g.ny(); ++iy)
            for (int ix = 0; ix < g.nx(); ++ix) {
                int k = g.index(ix, iy);
                if (!g.masked(k)) continue;
                const int steps[2][2] = {{1, 0}, {0, 1}};
                for (auto [dx, dy] : steps) {
                    if (!g.inside(ix + dx, iy + dy)) continue;
                    int j = g.index(ix + dx, iy + dy);
                    Entry du[2] = {{k, false, 1.0}, {j, false, -1.0}};
                    Entry dv[2] = {{k, true, 1.0}, {j, true, -1.0}};
                    a.add_row(du, 2, 0.0, w);
                    a.add_row(dv, 2, 0.0, w);
                }
            }
    }
    return a;
}

Eigen::VectorXd field_as_vector(const Assembly& a, const GridSpec& g,
                                const MapField& f) {
    Eigen::VectorXd x = Eigen::VectorXd::Zero(std::max(a.unknowns, 1));
    for (std::size_t k = 0; k < g.size(); ++k) {
        int var = a.var_of_node[k];
        if (var < 0) continue;
        x[var] = f[static_cast<int>(k)].real();
        x[var + 1] = f[static_cast<int>(k)].imag();
    }
    return x;
}

}  // namespace

double solver_objective(const MapField& f, const MuField& mu,
                        const SolverConfig& cfg) {
    if (!f.grid().same_layout(mu.grid()))
        throw invalid_input("map and coefficient live on different grids");
    Assembly a = assemble_system(mu, cfg);
    Eigen::SparseMatrix<double> A(a.rows, std::max(a.unknowns, 1));
    A.setFromTriplets(a.triplets.begin(), a.triplets.end());
    Eigen::VectorXd b = Eigen::Map<Eigen::VectorXd>(a.rhs.data(), a.rows);
    Eigen::VectorXd x = field_as_vector(a, mu.grid(), f);
    return (A * x - b).squaredNorm();
}

SolveResult solve_beltrami_disk(const MuField& mu, const SolverConfig& cfg) {
    const GridSpec& g = mu.grid();
    Assembly a = assemble_system(mu, cfg);

    Eigen::SparseMatrix<double> A(a.rows, a.unknowns);
    A.setFromTriplets(a.triplets.begin(), a.triplets.end());
    Eigen::VectorXd b = Eigen::Map<Eigen::VectorXd>(a.rhs.data(), a.rows);

    Eigen::SparseMatrix<double> At = A.transpose();
    Eigen::SparseMatrix<double> AtA = At * A;
    Eigen::VectorXd Atb = At * b;

    double reg_used = 0.0;
    Eigen::VectorXd x;
    bool use_direct = cfg.backend != SolverConfig::Backend::cg &&
                      (cfg.backend == SolverConfig::Backend::direct ||
                       a.unknowns <= 700000);
    bool solved = false;
    if (use_direct) {
        Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt;
        ldlt.compute(AtA);
        if (ldlt.info() == Eigen::Success) {
            x = ldlt.solve(Atb);
            // one refinement step on the normal equations
            Eigen::VectorXd r = Atb - AtA * x;
            x += ldlt.solve(r);
            solved = true;
        } else {
            reg_used = 1e-8;
            Eigen::SparseMatrix<double> shifted = AtA;
            for (int i = 0; i < a.unknowns; ++i) shifted.coeffRef(i, i) += reg_used;
            ldlt.compute(shifted);
            if (ldlt.info() != Eigen::Success)
                throw numeric_failure("system rank-deficient");
            x = ldlt.solve(Atb);
            solved = true;
        }
    }
    if (!solved) {
        Eigen::ConjugateGradient<Eigen::SparseMatrix<double>,
                                 Eigen::Lower | Eigen::Upper>
            cg;
        cg.setTolerance(1e-13);
        cg.setMaxIterations(40000);
        cg.compute(AtA);
        x = cg.solve(Atb);
        if (cg.info() != Eigen::Success && cg.error() > 1e-8)
            throw numeric_failure("system rank-deficient");
    }

    std::vector<cplx> values(g.size(), cplx(0, 0));
    for (std::size_t k = 0; k < g.size(); ++k) {
        if (!g.masked(static_cast<int>(k))) continue;
        if (a.pinned[k]) {
            values[k] = a.pin_value[k];
        } else {
            int var = a.var_of_node[k];
            values[k] = cplx(x[var], x[var + 1]);
        }
    }
    SolveResult result{MapField(g, std::move(values), Provenance::solver)};
    result.regularization_used = reg_used;
    result.objective_total = (A * x - b).squaredNorm();

    RealField res = residual_field(result.f, mu);
    double acc = 0.0;
    double cell = g.hx() * g.hy();
    for (std::size_t k = 0; k < g.size(); ++k)
        acc += res[static_cast<int>(k)] * res[static_cast<int>(k)] * cell;
    result.residual_l2 = std::sqrt(acc);
    result.accepted = result.residual_l2 <= cfg.max_residual;

    RealField jac = jacobian(result.f);
    const double excl = 0.05;
    int pos = 0, tot = 0;
    double jmin = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < g.size(); ++k) {
        if (!g.masked(static_cast<int>(k))) continue;
        double v = jac[static_cast<int>(k)];
        if (v == 0.0) continue;  // no stencil
        if (std::abs(g.point(static_cast<int>(k)) - cfg.normalization_p0) < excl)
            continue;
        ++tot;
        if (v > 0.0) ++pos;
        jmin = std::min(jmin, v);
    }
    result.jacobian_positive_fraction = tot > 0 ? static_cast<double>(pos) / tot : 0.0;
    result.jacobian_min = jmin;
    return result;
}

namespace {

double sup_difference_on_annulus(const MapField& f1, const MapField& f2, cplx center,
                                 double r_lo, double r_hi) {
    const GridSpec& g = f1.grid();
    double sup = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k) {
        if (!g.masked(static_cast<int>(k))) continue;
        double r = std::abs(g.point(static_cast<int>(k)) - center);
        if (r < r_lo || r > r_hi) continue;
        sup = std::max(sup, std::abs(f1[static_cast<int>(k)] - f2[static_cast<int>(k)]));
    }
    return sup;
}

}  // namespace

SolveResult solve_with_ladder(const MuField& mu, const SolverConfig& cfg) {
    std::vector<double> levels = cfg.truncation_levels;
    if (levels.empty()) return solve_beltrami_disk(mu, cfg);
    for (std::size_t i = 1; i < levels.size(); ++i)
        if (!(levels[i] > levels[i - 1]))
            throw invalid_input("truncation levels must be strictly increasing");

    std::optional<SolveResult> prev;
    std::vector<double> diffs;
    for (double n : levels) {
        MuField mun = truncate_mu(mu, n);
        SolveResult cur = solve_beltrami_disk(mun, cfg);
        if (prev)
            diffs.push_back(sup_difference_on_annulus(prev->f, cur.f,
                                                      cfg.normalization_p0, 0.2, 0.9));
        prev = std::move(cur);
    }
    prev->cauchy_differences = std::move(diffs);
    // Residual reported against the untruncated coefficient.
    RealField res = residual_field(prev->f, mu);
    const GridSpec& g = mu.grid();
    double acc = 0.0, cell = g.hx() * g.hy();
    for (std::size_t k = 0; k < g.size(); ++k)
        acc += res[static_cast<int>(k)] * res[static_cast<int>(k)] * cell;
    prev->residual_l2 = std::sqrt(acc);
    prev->accepted = prev->residual_l2 <= cfg.max_residual;
    return std::move(*prev);
}

std::vector<double> convergence_study(const MuField& mu, const SolverConfig& cfg) {
    if (cfg.truncation_levels.size() < 2)
        throw invalid_input("convergence study needs at least two truncation levels");
    return solve_with_ladder(mu, cfg).cauchy_differences;
}

RealField residual_field(const MapField& f, const MuField& mu) {
    if (!f.grid().same_layout(mu.grid()))
        throw invalid_input("map and coefficient live on different grids");
    WirtingerDerivatives d = wirtinger(f);
    const GridSpec& g = f.grid();
    RealField out(g, 0.0);
    for (std::size_t k = 0; k < g.size(); ++k) {
        if (!d.valid[k]) continue;
        out[static_cast<int>(k)] =
            std::abs(d.fzbar[static_cast<int>(k)] -
                     mu[static_cast<int>(k)] * d.fz[static_cast<int>(k)]);
    }
    return out;
}

RegularityReport regularity_diagnostics(const SolveResult& result,
                                        double exclusion_radius, int samples) {
    const MapField& f = result.f;
    const GridSpec& g = f.grid();
    RegularityReport report;
    report.exclusion_radius = exclusion_radius;

    RealField jac = jacobian(f);
    int pos = 0, tot = 0;
    double jmin = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < g.size(); ++k) {
        if (!g.masked(static_cast<int>(k))) continue;
        double v = jac[static_cast<int>(k)];
        if (v == 0.0) continue;
        if (std::abs(g.point(static_cast<int>(k))) < exclusion_radius) continue;
        ++tot;
        if (v > 0.0) ++pos;
        jmin = std::min(jmin, v);
    }
    report.jacobian_positive_fraction = tot > 0 ? static_cast<double>(pos) / tot : 0.0;
    report.jacobian_min = jmin;

    // Sampled injectivity: domain points farther than 2h apart must not
    // collapse to nearly the same image point.
    std::vector<int> cells;
    for (std::size_t k = 0; k < g.size(); ++k)
        if (g.masked(static_cast<int>(k))) cells.push_back(static_cast<int>(k));
    std::mt19937 rng(12345);
    std::uniform_int_distribution<std::size_t> pick(0, cells.size() - 1);
    double h = std::max(g.hx(), g.hy());
    double eps_inj = 0.05 * h;
    int checked = 0, violations = 0;
    for (int s = 0; s < samples; ++s) {
        int ka = cells[pick(rng)], kb = cells[pick(rng)];
        double dz = std::abs(g.point(ka) - g.point(kb));
        if (dz <= 2.0 * h) continue;
        ++checked;
        if (std::abs(f[ka] - f[kb]) < eps_inj) ++violations;
    }
    report.injectivity_samples = checked;
    report.injectivity_violations = violations;
    return report;
}

}  // namespace qc
