#include "beltrami/riemann.hpp"

#include "beltrami/detail/dft.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace qc {

namespace {

constexpr double kPi = std::numbers::pi;

// Discrete interior Cauchy transform of boundary values in barycentric
// form: numerator and denominator alias the same way near the boundary, so
// the ratio stays usable there.
cplx cauchy_barycentric(const std::vector<cplx>& gamma, const std::vector<cplx>& dgamma,
                        const std::vector<cplx>& values, cplx w) {
    cplx num(0, 0), den(0, 0);
    const int n = static_cast<int>(gamma.size());
    for (int j = 0; j < n; ++j) {
        cplx c = dgamma[j] / (gamma[j] - w);
        num += values[j] * c;
        den += c;
    }
    if (std::abs(den) < 1e-14) return num / cplx(1e-14, 0);
    return num / den;
}

}  // namespace

cplx RiemannMap::map(cplx w) const {
    cplx v = cauchy_barycentric(gamma_, dgamma_, boundary_values_, w);
    double a = std::abs(v);
    if (a > 1.0) v /= a;  // clamp roundoff overshoot onto the closed disk
    return v;
}

RiemannMap riemann_map(const JordanBoundary& boundary, std::optional<cplx> anchor) {
    const int n = boundary.size();
    const double dt = 2.0 * kPi / n;

    // Spectrally smoothed parametrization and derivatives. The low-pass
    // keeps two thirds of the usable band; ring-extracted boundaries carry
    // sample noise that would otherwise pollute the derivative.
    std::vector<cplx> raw(boundary.samples());
    std::vector<cplx> coeff = detail::dft(raw);
    detail::low_pass(coeff, n / 3);
    std::vector<cplx> gamma = detail::idft(coeff);
    std::vector<cplx> dgamma = detail::idft(detail::spectral_derivative(coeff, 1));
    std::vector<cplx> ddgamma = detail::idft(detail::spectral_derivative(coeff, 2));

    double smoothing_delta = 0.0;
    for (int i = 0; i < n; ++i)
        smoothing_delta = std::max(smoothing_delta, std::abs(gamma[i] - raw[i]));

    cplx w0 = anchor.value_or(boundary.centroid());

    // Winding check: the anchor must lie inside the curve.
    {
        double winding = 0.0;
        for (int i = 0; i < n; ++i) {
            cplx a = gamma[i] - w0, b = gamma[(i + 1) % n] - w0;
            winding += std::arg(b / a);
        }
        if (std::abs(winding - 2.0 * kPi) > 0.1)
            throw invalid_input("anchor is not interior to the boundary");
    }

    for (int i = 0; i < n; ++i)
        if (std::abs(dgamma[i]) < 1e-12)
            throw numeric_failure("correspondence solve did not converge: "
                                  "degenerate boundary parametrization");

    // Second-kind system (I/2 + K) sigma = -log|gamma - w0| for the
    // double-layer density of the harmonic part of log R.
    Eigen::MatrixXd K(n, n);
    Eigen::VectorXd g(n);
    for (int i = 0; i < n; ++i) {
        g[i] = -std::log(std::abs(gamma[i] - w0));
        for (int j = 0; j < n; ++j) {
            cplx kern;
            if (i == j) {
                kern = ddgamma[i] / (2.0 * dgamma[i]);
            } else {
                kern = dgamma[j] / (gamma[j] - gamma[i]);
            }
            K(i, j) = (kern / (2.0 * kPi * cplx(0, 1))).real() * dt;
        }
    }
    Eigen::MatrixXd A = 0.5 * Eigen::MatrixXd::Identity(n, n) + K;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
    Eigen::VectorXd sigma_vec = lu.solve(g);
    if (!sigma_vec.allFinite())
        throw numeric_failure("correspondence solve did not converge");
    std::vector<double> sigma(sigma_vec.data(), sigma_vec.data() + n);

    // Interior complex potential Phi with Re Phi = u.
    auto phi_at = [&](cplx w) {
        cplx acc(0, 0);
        for (int j = 0; j < n; ++j)
            acc += sigma[j] * dgamma[j] / (gamma[j] - w);
        return acc * dt / (2.0 * kPi * cplx(0, 1));
    };
    double c_rot = -phi_at(w0).imag();

    // Boundary limit by Plemelj: sigma/2 + (i/2) H sigma + smooth part.
    std::vector<double> hilb = detail::conjugate_function(sigma);
    std::vector<double> theta(n);
    for (int i = 0; i < n; ++i) {
        cplx smooth(0, 0);
        for (int j = 0; j < n; ++j) {
            cplx m;
            if (i == j) {
                m = ddgamma[i] / (2.0 * dgamma[i]);
            } else {
                double arg_half = 0.5 * (dt * j - dt * i);
                m = dgamma[j] / (gamma[j] - gamma[i]) -
                    0.5 / std::tan(arg_half);
            }
            smooth += sigma[j] * m;
        }
        smooth *= dt / (2.0 * kPi * cplx(0, 1));
        cplx phi_b = cplx(0.5 * sigma[i], 0) + cplx(0, 0.5) * cplx(hilb[i], 0) + smooth;
        theta[i] = std::arg(gamma[i] - w0) + phi_b.imag() + c_rot;
    }

    // Unwrap so the correspondence increases by 2 pi over the loop.
    for (int i = 1; i < n; ++i) {
        while (theta[i] < theta[i - 1] - kPi) theta[i] += 2.0 * kPi;
        while (theta[i] > theta[i - 1] + kPi) theta[i] -= 2.0 * kPi;
    }
    double turn = theta[0] + 2.0 * kPi - theta[n - 1];
    if (!(turn > -kPi && turn < 3.0 * kPi))
        throw numeric_failure("correspondence solve did not converge");
    int decreases = 0;
    for (int i = 1; i < n; ++i)
        if (theta[i] < theta[i - 1] - 1e-6) ++decreases;
    if (decreases > n / 16)
        throw numeric_failure("correspondence solve did not converge: "
                              "non-monotone boundary correspondence");

    RiemannMap R;
    R.gamma_ = std::move(gamma);
    R.dgamma_ = std::move(dgamma);
    R.theta_ = theta;
    R.boundary_values_.resize(n);
    for (int i = 0; i < n; ++i)
        R.boundary_values_[i] = std::polar(1.0, theta[i]);
    R.anchor_ = w0;
    R.smoothing_delta_ = smoothing_delta;

    // Conformality probe: Cauchy-Riemann residual of the evaluator on a
    // small grid around the anchor.
    {
        double scale = 0.0;
        for (int i = 0; i < n; ++i)
            scale = std::max(scale, std::abs(R.gamma_[i] - w0));
        double hstep = 1e-4 * scale;
        double worst = 0.0;
        for (int iy = -2; iy <= 2; ++iy)
            for (int ix = -2; ix <= 2; ++ix) {
                cplx p = w0 + cplx(ix * 0.08 * scale, iy * 0.08 * scale);
                cplx fx = (R.map(p + hstep) - R.map(p - hstep)) / (2.0 * hstep);
                cplx fy = (R.map(p + cplx(0, hstep)) - R.map(p - cplx(0, hstep))) /
                          (2.0 * hstep);
                cplx fzbar = 0.5 * (fx + cplx(0, 1) * fy);
                cplx fz = 0.5 * (fx - cplx(0, 1) * fy);
                if (std::abs(fz) > 1e-12)
                    worst = std::max(worst, std::abs(fzbar) / std::abs(fz));
            }
        R.conformality_residual_ = worst;
    }
    return R;
}

}  // namespace qc
