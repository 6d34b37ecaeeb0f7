#include "beltrami/dirichlet.hpp"

#include "beltrami/detail/dft.hpp"
#include "beltrami/field_ops.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>

namespace qc {

namespace {

constexpr double kPi = std::numbers::pi;

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Quadratic extrapolation of field values sampled along the inward normal
// to the boundary point itself.
template <class FieldT, class ValueT>
bool extrapolate_to_boundary(const FieldT& field, cplx bpoint, cplx inward,
                             double h, ValueT& out) {
    const double depths[3] = {1.2 * h, 2.2 * h, 3.2 * h};
    ValueT v[3];
    for (int i = 0; i < 3; ++i) {
        if (!interp_bilinear(field, bpoint + depths[i] * inward, v[i])) return false;
    }
    // Lagrange basis at 0 for nodes d0, d1, d2.
    double l0 = (depths[1] * depths[2]) /
                ((depths[0] - depths[1]) * (depths[0] - depths[2]));
    double l1 = (depths[0] * depths[2]) /
                ((depths[1] - depths[0]) * (depths[1] - depths[2]));
    double l2 = (depths[0] * depths[1]) /
                ((depths[2] - depths[0]) * (depths[2] - depths[1]));
    out = l0 * v[0] + l1 * v[1] + l2 * v[2];
    return true;
}

}  // namespace

double boundary_error(const MapField& f, const BoundaryData& phi,
                      const JordanBoundary& boundary, double collar_cells) {
    const GridSpec& g = f.grid();
    double h = std::max(g.hx(), g.hy());
    if (collar_cells < 2.0)
        throw invalid_input("collar needs at least 2 cells");
    RealField re(g, 0.0);
    for (std::size_t k = 0; k < g.size(); ++k)
        re[static_cast<int>(k)] = f[static_cast<int>(k)].real();

    double worst = 0.0;
    for (int i = 0; i < boundary.size(); ++i) {
        cplx bp = boundary.point(i);
        cplx n = boundary.inward_normal(i);
        double value;
        if (!extrapolate_to_boundary(re, bp, n, (collar_cells / 3.0) * h, value))
            continue;
        worst = std::max(worst, std::abs(value - phi[i]));
    }
    return worst;
}

DirichletResult dirichlet_solve(const JordanBoundary& boundary, const GridSpec& mask,
                                const MuField& mu, const BoundaryData& phi,
                                const DirichletConfig& cfg) {
    if (!mask.same_layout(mu.grid()))
        throw invalid_input("mask and coefficient grids differ");
    const GridSpec& g = mu.grid();
    double h = std::max(g.hx(), g.hy());

    TheoremRoute route = TheoremRoute::none_established;
    {
        std::vector<cplx> pts = cfg.condition_points;
        if (pts.empty()) {
            for (int q = 0; q < 4; ++q)
                pts.push_back(boundary.at_arclength(boundary.total_length() * q / 4.0));
            pts.push_back(boundary.centroid());
        }
        ConditionReport rep = condition_report(mu, pts, cfg.conditions);
        route = TheoremRoute::fmo;
        for (const auto& p : rep.points) {
            if (p.route == TheoremRoute::none_established) {
                route = TheoremRoute::none_established;
                break;
            }
            // report the weakest route used across points (latest in order)
            if (static_cast<int>(p.route) > static_cast<int>(route)) route = p.route;
        }
        if (route == TheoremRoute::none_established && !cfg.force)
            throw route_not_established("no solvability route established; "
                                        "pass force to run anyway");
    }

    DirichletResult result{MapField(g, std::vector<cplx>(g.size(), cplx(0, 0)),
                                    Provenance::composed)};
    result.route = route;

    auto t0 = std::chrono::steady_clock::now();
    MapField F = cfg.precomputed_first_map.has_value()
                     ? *cfg.precomputed_first_map
                     : solve_with_ladder(mu, cfg.solver).f;
    result.timings.solve_s = seconds_since(t0);

    // Image boundary: extrapolate the first map to each boundary sample
    // along the inward normal, then build the conformal factor of the
    // image domain.
    t0 = std::chrono::steady_clock::now();
    ComplexField Fview(g, F.values());
    int nb = boundary.size();
    std::vector<cplx> image_boundary(nb);
    for (int i = 0; i < nb; ++i) {
        cplx value;
        if (!extrapolate_to_boundary(Fview, boundary.point(i),
                                     boundary.inward_normal(i), h, value))
            throw numeric_failure("image boundary extrapolation left the mask");
        image_boundary[i] = value;
    }
    JordanBoundary image(std::move(image_boundary));
    cplx anchor;
    {
        int kc = g.nearest_masked(boundary.centroid(), 4.0 * h);
        if (kc < 0) throw invalid_input("domain centroid not on the mask");
        anchor = F[kc];
    }
    RiemannMap R = riemann_map(image, anchor);
    result.riemann_conformality = R.conformality_residual();
    result.timings.riemann_s = seconds_since(t0);

    // Transplant: boundary sample i carries phi_i and lands at angle
    // theta_i; resample onto the uniform angular grid of the holomorphic
    // completion.
    t0 = std::chrono::steady_clock::now();
    const std::vector<double>& theta = R.correspondence();
    int ns = cfg.schwarz_nodes;
    std::vector<double> phi_uniform(ns, 0.0);
    {
        // unwrapped theta increases by 2 pi over the loop
        std::vector<double> th(theta);
        double base = th[0];
        for (auto& t : th) t -= base;
        std::vector<double> values(nb);
        for (int i = 0; i < nb; ++i) values[i] = phi[i];
        // circular linear interpolation in theta
        for (int j = 0; j < ns; ++j) {
            double target = 2.0 * kPi * j / ns - base;
            double wrapped = std::fmod(target, 2.0 * kPi);
            if (wrapped < 0) wrapped += 2.0 * kPi;
            // find segment [th_i, th_{i+1}) containing wrapped
            int lo = 0, hi = nb;  // th[nb] == 2 pi by construction
            auto th_at = [&](int i) { return i < nb ? th[i] : 2.0 * kPi; };
            while (hi - lo > 1) {
                int mid = (lo + hi) / 2;
                if (th_at(mid) <= wrapped) lo = mid;
                else hi = mid;
            }
            double t0s = th_at(lo), t1s = th_at(lo + 1);
            double t = t1s > t0s ? (wrapped - t0s) / (t1s - t0s) : 0.0;
            phi_uniform[j] = values[lo % nb] +
                             t * (values[(lo + 1) % nb] - values[lo % nb]);
        }
    }
    SchwarzIntegral hfun(phi_uniform);
    result.schwarz_tail_energy = hfun.tail_energy();
    result.timings.transplant_s = seconds_since(t0);

    // Composition h(R(F(z))) over the masked cells.
    t0 = std::chrono::steady_clock::now();
    std::vector<cplx> values(g.size(), cplx(0, 0));
    for (std::size_t k = 0; k < g.size(); ++k) {
        if (!g.masked(static_cast<int>(k))) continue;
        cplx zeta = R.map(F[static_cast<int>(k)]);
        values[k] = hfun(zeta);
    }
    result.f = MapField(g, std::move(values), Provenance::composed);
    result.timings.compose_s = seconds_since(t0);

    result.boundary_error = boundary_error(result.f, phi, boundary, cfg.collar_cells);

    // Equation residual away from the boundary collar, relative to the
    // local derivative scale; cells where the completion derivative
    // nearly vanishes are excluded.
    {
        WirtingerDerivatives d = wirtinger(result.f);
        // Interior region: peel 3-collar layers off the mask boundary by BFS.
        std::vector<int> depth(g.size(), -1);
        std::vector<int> frontier = g.boundary_ring();
        for (int k : frontier) depth[k] = 0;
        int peel = static_cast<int>(std::ceil(3.0 * cfg.collar_cells)) + 1;
        for (int layer = 1; layer <= peel && !frontier.empty(); ++layer) {
            std::vector<int> next;
            for (int k : frontier) {
                int ix = k % g.nx(), iy = k / g.nx();
                const int dx[4] = {1, -1, 0, 0};
                const int dy[4] = {0, 0, 1, -1};
                for (int e = 0; e < 4; ++e) {
                    if (!g.inside(ix + dx[e], iy + dy[e])) continue;
                    int j = g.index(ix + dx[e], iy + dy[e]);
                    if (depth[j] >= 0) continue;
                    depth[j] = layer;
                    next.push_back(j);
                }
            }
            frontier = std::move(next);
        }
        auto interior = [&](std::size_t k) {
            return d.valid[k] && depth[k] < 0;  // deeper than the peel
        };
        std::vector<double> fz_mags;
        for (std::size_t k = 0; k < g.size(); ++k)
            if (interior(k) && g.masked(static_cast<int>(k)))
                fz_mags.push_back(std::abs(d.fz[static_cast<int>(k)]));
        double floor = 0.0;
        if (!fz_mags.empty()) {
            std::nth_element(fz_mags.begin(), fz_mags.begin() + fz_mags.size() / 20,
                             fz_mags.end());
            floor = fz_mags[fz_mags.size() / 20];  // drop the lowest 5 percent
        }
        double num = 0.0, den = 0.0;
        for (std::size_t k = 0; k < g.size(); ++k) {
            if (!interior(k) || !g.masked(static_cast<int>(k))) continue;
            double fz = std::abs(d.fz[static_cast<int>(k)]);
            if (fz <= floor) continue;
            cplx res = d.fzbar[static_cast<int>(k)] -
                       mu[static_cast<int>(k)] * d.fz[static_cast<int>(k)];
            num += std::norm(res);
            den += fz * fz;
        }
        result.beltrami_residual_rel = den > 0 ? std::sqrt(num / den) : 0.0;
    }

    RealField jac = jacobian(result.f);
    int pos = 0, tot = 0;
    for (std::size_t k = 0; k < g.size(); ++k) {
        if (!g.masked(static_cast<int>(k))) continue;
        double v = jac[static_cast<int>(k)];
        if (v == 0.0) continue;
        ++tot;
        if (v > 0.0) ++pos;
    }
    result.jacobian_positive_fraction = tot > 0 ? static_cast<double>(pos) / tot : 0.0;
    return result;
}

}  // namespace qc
