#pragma once

// Test-only oracles: independent routes to expected values (closed forms,
// symbolic derivatives, brute-force minimization, quadrature). These stay
// decoupled from the library implementations they check.

#include "beltrami/grid.hpp"

#include <cmath>
#include <functional>
#include <random>
#include <vector>

namespace oracle {

using qc::cplx;

// Exact Wirtinger data of the radial map rho(r) z / r:
//   f_z = rho'/2 + rho/(2r),   f_zbar = (z/zbar) (rho' - rho/r) / 2.
struct RadialDerivatives {
    cplx fz;
    cplx fzbar;
};

inline RadialDerivatives radial_map_derivatives(cplx z, double rho, double drho) {
    double r = std::abs(z);
    RadialDerivatives d;
    d.fz = cplx(0.5 * (drho + rho / r), 0.0);
    d.fzbar = (z / std::conj(z)) * (0.5 * (drho - rho / r));
    return d;
}

// Tangent derivative of the radial map at z with center 0, from direct
// differentiation along the circle: i z rho(r) / r^2.
inline cplx radial_tangent_derivative(cplx z, double rho) {
    double r = std::abs(z);
    return cplx(0, 1) * z * rho / (r * r);
}

// Dilatation quotient of the log-degenerate profile: 1 + log(1/r).
inline double log_profile_dilatation(double r) { return 1.0 + std::log(1.0 / r); }

// Brute-force constrained minimum of sum(w phi a^p) over sum(w a) = 1:
// random admissible densities (Dirichlet-style normalization).
inline double brute_force_weighted_min(const std::vector<double>& w,
                                       const std::vector<double>& phi, double p,
                                       int trials, std::mt19937& rng) {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const std::size_t n = w.size();
    double best = std::numeric_limits<double>::infinity();
    std::vector<double> a(n);
    for (int t = 0; t < trials; ++t) {
        double mass = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            a[i] = -std::log(1.0 - unif(rng));  // exponential spread
            mass += w[i] * a[i];
        }
        double value = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            value += w[i] * phi[i] * std::pow(a[i] / mass, p);
        best = std::min(best, value);
    }
    return best;
}

// Adaptive-free composite Simpson on [a, b].
inline double simpson(const std::function<double(double)>& f, double a, double b,
                      int intervals) {
    if (intervals % 2 == 1) ++intervals;
    double h = (b - a) / intervals;
    double acc = f(a) + f(b);
    for (int i = 1; i < intervals; ++i)
        acc += f(a + i * h) * (i % 2 == 1 ? 4.0 : 2.0);
    return acc * h / 3.0;
}

// Uniformly random coefficient grid with |mu| <= cap.
inline std::vector<cplx> random_mu(const qc::GridSpec& g, double cap,
                                   std::mt19937& rng) {
    std::uniform_real_distribution<double> mag(0.0, cap);
    std::uniform_real_distribution<double> ang(0.0, 2.0 * 3.141592653589793);
    std::vector<cplx> vals(g.size(), cplx(0, 0));
    for (std::size_t k = 0; k < g.size(); ++k) {
        if (!g.masked(static_cast<int>(k))) continue;
        vals[k] = std::polar(mag(rng), ang(rng));
    }
    return vals;
}

}  // namespace oracle
