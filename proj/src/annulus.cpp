#include "beltrami/annulus.hpp"

#include "beltrami/detail/dft.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace qc {

namespace {

constexpr double kPi = std::numbers::pi;

// Angle in [0, 2pi): the slit sits on the positive real axis.
double slit_angle(cplx w) {
    double a = std::arg(w);
    if (a < 0) a += 2.0 * kPi;
    return a;
}

}  // namespace

AnnulusHarmonic::AnnulusHarmonic(double r_in, const std::vector<double>& phi_in,
                                 const std::vector<double>& phi_out, int max_modes)
    : r_in_(r_in) {
    if (!(r_in > 0.0) || !(r_in < 1.0))
        throw invalid_input("annulus needs 0 < r_in < 1");
    if (phi_in.size() != phi_out.size() || phi_in.size() < 8)
        throw invalid_input("boundary data needs matching node counts >= 8");
    const int n = static_cast<int>(phi_in.size());

    std::vector<cplx> xin(n), xout(n);
    for (int j = 0; j < n; ++j) {
        xin[j] = phi_in[j];
        xout[j] = phi_out[j];
    }
    std::vector<cplx> din = detail::dft(xin);
    std::vector<cplx> dout = detail::dft(xout);

    int kmax = n / 2 - 1;
    if (max_modes > 0) kmax = std::min(kmax, max_modes);

    a0_ = dout[0].real();
    b0_ = (din[0].real() - dout[0].real()) / std::log(r_in);

    alpha_.assign(kmax, cplx(0, 0));
    beta_scaled_.assign(kmax, cplx(0, 0));
    for (int m = 1; m <= kmax; ++m) {
        double q = std::pow(r_in, m);
        double det = q * q - 1.0;
        cplx di = 2.0 * din[m], du = 2.0 * dout[m];
        alpha_[m - 1] = (di * q - du) / det;
        beta_scaled_[m - 1] = (du * q - di) / det;
    }
}

double AnnulusHarmonic::value(cplx w) const {
    double r = std::abs(w);
    double th = std::arg(w);
    double u = a0_ + b0_ * std::log(r);
    for (std::size_t m = 1; m <= alpha_.size(); ++m) {
        cplx e = std::polar(1.0, static_cast<double>(m) * th);
        double rn = std::pow(r, static_cast<double>(m));
        double rq = std::pow(r_in_ / r, static_cast<double>(m));
        u += ((alpha_[m - 1] * rn + beta_scaled_[m - 1] * rq) * e).real();
    }
    return u;
}

cplx AnnulusHarmonic::gradient(cplx w) const {
    // u = Re H for the branch H; (u_x, u_y) = conj(H').
    cplx hp = b0_ / w;
    for (std::size_t m = 1; m <= alpha_.size(); ++m) {
        double dm = static_cast<double>(m);
        cplx wn = std::pow(w, dm - 1.0);
        // d/dw of conj(beta) (r_in/w)^m = -m conj(beta_scaled) r_in^m w^{-m-1}
        cplx rq = std::pow(r_in_ / w, dm);
        hp += dm * alpha_[m - 1] * wn - dm * std::conj(beta_scaled_[m - 1]) * rq / w;
    }
    return std::conj(hp);
}

cplx AnnulusHarmonic::branch(cplx w) const {
    double r = std::abs(w);
    double th = slit_angle(w);
    cplx h = cplx(a0_, 0) + b0_ * cplx(std::log(r), th);
    for (std::size_t m = 1; m <= alpha_.size(); ++m) {
        double dm = static_cast<double>(m);
        cplx wm = std::polar(std::pow(r, dm), dm * th);
        cplx wm_inv = std::polar(std::pow(r_in_ / r, dm), -dm * th);
        h += alpha_[m - 1] * wm + std::conj(beta_scaled_[m - 1]) * wm_inv;
    }
    return h;
}

RealField AnnulusHarmonic::sample(const GridSpec& grid) const {
    RealField out(grid, 0.0);
    for (std::size_t k = 0; k < grid.size(); ++k) {
        if (!grid.masked(static_cast<int>(k))) continue;
        out[static_cast<int>(k)] = value(grid.point(static_cast<int>(k)));
    }
    return out;
}

double AnnulusHarmonic::boundary_error(const std::vector<double>& phi_in,
                                       const std::vector<double>& phi_out) const {
    const int n = static_cast<int>(phi_in.size());
    double worst = 0.0;
    for (int j = 0; j < n; ++j) {
        double th = 2.0 * kPi * j / n;
        worst = std::max(worst,
                         std::abs(value(std::polar(r_in_, th)) - phi_in[j]));
        worst = std::max(worst, std::abs(value(std::polar(1.0, th)) - phi_out[j]));
    }
    return worst;
}

AnnulusHarmonic annulus_harmonic_dirichlet(double r_in,
                                           const std::vector<double>& phi_in,
                                           const std::vector<double>& phi_out,
                                           int max_modes) {
    return AnnulusHarmonic(r_in, phi_in, phi_out, max_modes);
}

MultiValuedSolution conjugate_period(const AnnulusHarmonic& u, const GridSpec& grid) {
    MultiValuedSolution sol{ComplexField(grid)};

    // Loop quadrature of the conjugate differential on a mid circle; for
    // the series this recovers the log coefficient to rounding.
    double r_mid = std::sqrt(u.r_in());
    const int m = 512;
    double acc = 0.0;
    for (int j = 0; j < m; ++j) {
        double th = 2.0 * kPi * j / m;
        cplx w = std::polar(r_mid, th);
        cplx grad = u.gradient(w);
        double ur = grad.real() * std::cos(th) + grad.imag() * std::sin(th);
        acc += r_mid * ur;
    }
    sol.period = acc * (2.0 * kPi / m);

    cplx anchor = u.branch(cplx(r_mid, 0.0) + cplx(0, 1e-12));
    for (std::size_t k = 0; k < grid.size(); ++k) {
        if (!grid.masked(static_cast<int>(k))) continue;
        sol.base_branch[static_cast<int>(k)] =
            u.branch(grid.point(static_cast<int>(k))) - cplx(0, anchor.imag());
    }

    double re_jump = 0.0, im_jump = 0.0;
    for (int i = 1; i <= 8; ++i) {
        double r = u.r_in() + i * (1.0 - u.r_in()) / 9.0;
        cplx above = u.branch(std::polar(r, 1e-9));
        cplx below = u.branch(std::polar(r, 2.0 * kPi - 1e-9));
        re_jump = std::max(re_jump, std::abs(above.real() - below.real()));
        im_jump = std::max(im_jump, std::abs(below.imag() - above.imag()));
    }
    sol.re_slit_jump = re_jump;
    sol.im_slit_jump = im_jump;
    return sol;
}

MultiValuedSolution conjugate_period(const RealField& u, double r_in, double r_out,
                                     int angular_nodes) {
    const GridSpec& g = u.grid();
    double h = std::max(g.hx(), g.hy());
    double delta = 0.75 * h;

    auto radial_derivative = [&](double r, double th, bool& ok) {
        cplx dir = std::polar(1.0, th);
        double up, um;
        ok = interp_bilinear(u, std::polar(r + delta, th), up) &&
             interp_bilinear(u, std::polar(r - delta, th), um);
        (void)dir;
        return ok ? (up - um) / (2.0 * delta) : 0.0;
    };
    auto angular_derivative = [&](double r, double th, bool& ok) {
        double dth = delta / r;
        double up, um;
        ok = interp_bilinear(u, std::polar(r, th + dth), up) &&
             interp_bilinear(u, std::polar(r, th - dth), um);
        return ok ? (up - um) / (2.0 * dth) : 0.0;
    };

    // Loop integrals at three mid radii; disagreement flags poor resolution.
    std::vector<double> estimates;
    for (int j = 1; j <= 3; ++j) {
        double r = r_in + j * (r_out - r_in) / 4.0;
        double acc = 0.0;
        bool all_ok = true;
        for (int i = 0; i < angular_nodes; ++i) {
            double th = 2.0 * kPi * i / angular_nodes;
            bool ok;
            acc += r * radial_derivative(r, th, ok);
            all_ok = all_ok && ok;
        }
        if (all_ok) estimates.push_back(acc * 2.0 * kPi / angular_nodes);
    }
    if (estimates.size() < 2)
        throw numeric_failure("period quadrature unstable");
    double mean = 0.0;
    for (double e : estimates) mean += e;
    mean /= static_cast<double>(estimates.size());
    double spread = 0.0;
    for (double e : estimates)
        spread = std::max(spread, std::abs(e - mean));
    if (spread > std::max(1e-6, 0.05 * std::abs(mean)) && spread > 1e-4)
        throw numeric_failure("period quadrature unstable");

    MultiValuedSolution sol{ComplexField(g)};
    sol.period = mean;

    // Conjugate on a polar lattice: radial leg along theta = 0+, then
    // angular legs along circles.
    int nr = std::max(8, static_cast<int>((r_out - r_in) / h));
    int nth = angular_nodes;
    double th0 = 1e-6;
    std::vector<double> radii(nr);
    for (int i = 0; i < nr; ++i)
        radii[i] = r_in + delta + (r_out - r_in - 2 * delta) * i / (nr - 1);
    std::vector<std::vector<double>> v(nr, std::vector<double>(nth, 0.0));
    // radial leg
    for (int i = 1; i < nr; ++i) {
        double rm = 0.5 * (radii[i] + radii[i - 1]);
        bool ok;
        double du = angular_derivative(rm, th0, ok);
        v[i][0] = v[i - 1][0] - (ok ? du / rm : 0.0) * (radii[i] - radii[i - 1]);
    }
    // angular legs
    for (int i = 0; i < nr; ++i) {
        for (int j = 1; j < nth; ++j) {
            double thm = th0 + (2.0 * kPi - 2 * th0) * (j - 0.5) / (nth - 1);
            bool ok;
            double ur = radial_derivative(radii[i], thm, ok);
            v[i][j] = v[i][j - 1] +
                      (ok ? radii[i] * ur : 0.0) * (2.0 * kPi - 2 * th0) / (nth - 1);
        }
    }
    for (std::size_t k = 0; k < g.size(); ++k) {
        if (!g.masked(static_cast<int>(k))) continue;
        cplx z = g.point(static_cast<int>(k));
        double r = std::abs(z);
        double th = slit_angle(z);
        double fr = (r - radii.front()) / (radii.back() - radii.front()) * (nr - 1);
        double ft = (th - th0) / (2.0 * kPi - 2 * th0) * (nth - 1);
        int i0 = std::clamp(static_cast<int>(fr), 0, nr - 2);
        int j0 = std::clamp(static_cast<int>(ft), 0, nth - 2);
        double tx = std::clamp(fr - i0, 0.0, 1.0);
        double ty = std::clamp(ft - j0, 0.0, 1.0);
        double vv = (1 - tx) * (1 - ty) * v[i0][j0] + tx * (1 - ty) * v[i0 + 1][j0] +
                    (1 - tx) * ty * v[i0][j0 + 1] + tx * ty * v[i0 + 1][j0 + 1];
        sol.base_branch[static_cast<int>(k)] = cplx(u[static_cast<int>(k)], vv);
    }
    // Slit diagnostics: u is single-valued by construction; the v-jump is
    // the loop integral.
    sol.re_slit_jump = 0.0;
    double im_jump = 0.0;
    for (int i = 0; i < nr; ++i)
        im_jump = std::max(im_jump, std::abs(v[i][nth - 1] - v[i][0]));
    sol.im_slit_jump = im_jump;
    return sol;
}

}  // namespace qc
