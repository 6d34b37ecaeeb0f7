#pragma once

#include "beltrami/grid.hpp"

#include <numbers>
#include <vector>

namespace qc::detail {

/// Plain O(N^2) discrete Fourier transform; boundary node counts stay in
/// the hundreds, so no FFT machinery is warranted.
inline std::vector<cplx> dft(const std::vector<cplx>& x) {
    const int n = static_cast<int>(x.size());
    std::vector<cplx> out(n, cplx(0, 0));
    for (int k = 0; k < n; ++k) {
        cplx acc(0, 0);
        for (int j = 0; j < n; ++j) {
            double ang = -2.0 * std::numbers::pi * k * j / n;
            acc += x[j] * cplx(std::cos(ang), std::sin(ang));
        }
        out[k] = acc / static_cast<double>(n);
    }
    return out;
}

inline std::vector<cplx> idft(const std::vector<cplx>& coeff) {
    const int n = static_cast<int>(coeff.size());
    std::vector<cplx> out(n, cplx(0, 0));
    for (int j = 0; j < n; ++j) {
        cplx acc(0, 0);
        for (int k = 0; k < n; ++k) {
            double ang = 2.0 * std::numbers::pi * k * j / n;
            acc += coeff[k] * cplx(std::cos(ang), std::sin(ang));
        }
        out[j] = acc;
    }
    return out;
}

/// Signed frequency of bin k for an n-point transform.
inline int signed_freq(int k, int n) { return k <= n / 2 ? k : k - n; }

/// Zeroes all modes with |frequency| above cutoff.
inline void low_pass(std::vector<cplx>& coeff, int cutoff) {
    const int n = static_cast<int>(coeff.size());
    for (int k = 0; k < n; ++k)
        if (std::abs(signed_freq(k, n)) > cutoff) coeff[k] = cplx(0, 0);
}

/// Spectral derivative d/dt (t the 2pi-periodic parameter).
inline std::vector<cplx> spectral_derivative(const std::vector<cplx>& coeff, int order) {
    const int n = static_cast<int>(coeff.size());
    std::vector<cplx> out(coeff);
    for (int k = 0; k < n; ++k) {
        int f = signed_freq(k, n);
        cplx factor = std::pow(cplx(0, f), order);
        if (f == n / 2 && n % 2 == 0) factor = 0;  // drop the Nyquist mode
        out[k] *= factor;
    }
    return out;
}

/// Circle conjugation operator: e^{ikt} -> -i sgn(k) e^{ikt}.
inline std::vector<double> conjugate_function(const std::vector<double>& u) {
    const int n = static_cast<int>(u.size());
    std::vector<cplx> x(n);
    for (int j = 0; j < n; ++j) x[j] = u[j];
    std::vector<cplx> c = dft(x);
    for (int k = 0; k < n; ++k) {
        int f = signed_freq(k, n);
        double s = f > 0 ? 1.0 : (f < 0 ? -1.0 : 0.0);
        c[k] *= cplx(0, -s);
    }
    std::vector<cplx> y = idft(c);
    std::vector<double> out(n);
    for (int j = 0; j < n; ++j) out[j] = y[j].real();
    return out;
}

}  // namespace qc::detail
