#include "beltrami/field_ops.hpp"

#include <cmath>

namespace qc {

namespace {

// One axis of a second-order difference: centered when both neighbours are
// masked, one-sided otherwise. Returns false when no stencil fits.
bool axis_derivative(const GridSpec& g, const std::vector<cplx>& v, int ix, int iy,
                     int dx, int dy, double h, cplx& out) {
    auto val = [&](int jx, int jy) { return v[g.index(jx, jy)]; };
    bool m_minus = g.inside(ix - dx, iy - dy);
    bool m_plus = g.inside(ix + dx, iy + dy);
    if (m_minus && m_plus) {
        out = (val(ix + dx, iy + dy) - val(ix - dx, iy - dy)) / (2.0 * h);
        return true;
    }
    if (m_plus && g.inside(ix + 2 * dx, iy + 2 * dy)) {
        out = (-3.0 * val(ix, iy) + 4.0 * val(ix + dx, iy + dy) -
               val(ix + 2 * dx, iy + 2 * dy)) /
              (2.0 * h);
        return true;
    }
    if (m_minus && g.inside(ix - 2 * dx, iy - 2 * dy)) {
        out = (3.0 * val(ix, iy) - 4.0 * val(ix - dx, iy - dy) +
               val(ix - 2 * dx, iy - 2 * dy)) /
              (2.0 * h);
        return true;
    }
    return false;
}

}  // namespace

WirtingerDerivatives wirtinger(const MapField& f) {
    const GridSpec& g = f.grid();
    WirtingerDerivatives d{ComplexField(g), ComplexField(g),
                           std::vector<std::uint8_t>(g.size(), 0)};
    for (int iy = 0; iy < g.ny(); ++iy) {
        for (int ix = 0; ix < g.nx(); ++ix) {
            int k = g.index(ix, iy);
            if (!g.masked(k)) continue;
            cplx fx, fy;
            if (!axis_derivative(g, f.values(), ix, iy, 1, 0, g.hx(), fx)) continue;
            if (!axis_derivative(g, f.values(), ix, iy, 0, 1, g.hy(), fy)) continue;
            d.fz[k] = 0.5 * (fx - cplx(0, 1) * fy);
            d.fzbar[k] = 0.5 * (fx + cplx(0, 1) * fy);
            d.valid[k] = 1;
        }
    }
    return d;
}

DilatationField dilatation_quotient(const MuField& mu) {
    const GridSpec& g = mu.grid();
    std::vector<double> out(g.size(), 1.0);
    for (std::size_t k = 0; k < g.size(); ++k) {
        if (!g.masked(static_cast<int>(k))) continue;
        double a = std::abs(mu[static_cast<int>(k)]);
        out[k] = (1.0 + a) / (1.0 - a);
    }
    return DilatationField(g, std::move(out));
}

DilatationField tangent_dilatation(const MuField& mu, cplx z0, CenterOptions opts) {
    const GridSpec& g = mu.grid();
    double excl = opts.exclusion_cells * std::max(g.hx(), g.hy());
    std::vector<double> out(g.size(), 1.0);
    for (std::size_t k = 0; k < g.size(); ++k) {
        if (!g.masked(static_cast<int>(k))) continue;
        cplx w = g.point(static_cast<int>(k)) - z0;
        double r = std::abs(w);
        if (r <= excl) {
            if (r == 0.0 && opts.exclusion_cells <= 0.0)
                throw invalid_input(
                    "z0 coincides with a masked sample and no exclusion radius given");
            continue;  // excluded: left at 1
        }
        cplx m = mu[static_cast<int>(k)];
        double a = std::abs(m);
        cplx unim = std::conj(w) / w;  // modulus 1
        double num = std::norm(1.0 - unim * m);
        out[k] = num / (1.0 - a * a);
    }
    return DilatationField(g, std::move(out), z0);
}

DirectionalDerivative directional_derivative(const MapField& f, cplx z, cplx omega) {
    const GridSpec& g = f.grid();
    double ao = std::abs(omega);
    if (std::abs(ao - 1.0) > 1e-9)
        throw invalid_input("direction must be a unit complex number");
    double h = std::max(g.hx(), g.hy());
    // Step chosen so axis and diagonal directions land on samples.
    double t = h;
    if (std::abs(std::abs(omega.real()) - std::abs(omega.imag())) < 1e-12)
        t = h * std::sqrt(2.0);

    auto sample = [&](cplx p, cplx& out) -> bool {
        ComplexField view(g, f.values());
        return interp_bilinear(view, p, out);
    };

    cplx fm, fp, f0 = cplx(0, 0), f2;
    bool has_m = sample(z - t * omega, fm);
    bool has_p = sample(z + t * omega, fp);
    if (has_m && has_p) {
        return {(fp - fm) / (2.0 * t), t, 2};
    }
    if (has_p && sample(z + 2.0 * t * omega, f2) && sample(z, f0)) {
        return {(-3.0 * f0 + 4.0 * fp - f2) / (2.0 * t), t, 2};
    }
    if (has_m && sample(z - 2.0 * t * omega, f2) && sample(z, f0)) {
        return {(3.0 * f0 - 4.0 * fm + f2) / (2.0 * t), t, 2};
    }
    throw invalid_input("directional stencil leaves the mask");
}

cplx tangent_derivative(const MapField& f, cplx z, cplx z0) {
    if (std::abs(z - z0) == 0.0)
        throw invalid_input("tangent derivative undefined at z == z0");
    const GridSpec& g = f.grid();
    int k = g.nearest_masked(z, std::max(g.hx(), g.hy()));
    if (k < 0) throw invalid_input("point not on the masked grid");
    int ix = k % g.nx(), iy = k / g.nx();
    cplx fx, fy;
    if (!axis_derivative(g, f.values(), ix, iy, 1, 0, g.hx(), fx) ||
        !axis_derivative(g, f.values(), ix, iy, 0, 1, g.hy(), fy))
        throw invalid_input("derivative stencil leaves the mask");
    cplx fz = 0.5 * (fx - cplx(0, 1) * fy);
    cplx fzbar = 0.5 * (fx + cplx(0, 1) * fy);
    cplx w = g.point(k) - z0;
    double r = std::abs(w);
    return cplx(0, 1) * (w / r * fz - std::conj(w) / r * fzbar);
}

double geometric_tangent_dilatation(const MapField& f, cplx z, cplx z0,
                                    double jacobian_floor) {
    const GridSpec& g = f.grid();
    int k = g.nearest_masked(z, std::max(g.hx(), g.hy()));
    if (k < 0) throw invalid_input("point not on the masked grid");
    int ix = k % g.nx(), iy = k / g.nx();
    cplx fx, fy;
    if (!axis_derivative(g, f.values(), ix, iy, 1, 0, g.hx(), fx) ||
        !axis_derivative(g, f.values(), ix, iy, 0, 1, g.hy(), fy))
        throw invalid_input("derivative stencil leaves the mask");
    cplx fz = 0.5 * (fx - cplx(0, 1) * fy);
    cplx fzbar = 0.5 * (fx + cplx(0, 1) * fy);
    double jac = std::norm(fz) - std::norm(fzbar);
    // Relative floor against a local derivative scale.
    double scale = std::max(std::norm(fz) + std::norm(fzbar), 1.0);
    if (std::abs(jac) <= jacobian_floor * scale)
        throw numeric_failure("degenerate Jacobian");
    cplx w = g.point(k) - z0;
    double r = std::abs(w);
    if (r == 0.0) throw invalid_input("z coincides with z0");
    cplx dt = cplx(0, 1) * (w / r * fz - std::conj(w) / r * fzbar);
    return std::norm(dt) / std::abs(jac);
}

RealField jacobian(const MapField& f) {
    WirtingerDerivatives d = wirtinger(f);
    const GridSpec& g = f.grid();
    RealField out(g, 0.0);
    for (std::size_t k = 0; k < g.size(); ++k) {
        if (!d.valid[k]) continue;
        out[static_cast<int>(k)] = std::norm(d.fz[static_cast<int>(k)]) -
                                   std::norm(d.fzbar[static_cast<int>(k)]);
    }
    return out;
}

}  // namespace qc
