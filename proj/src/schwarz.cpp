#include "beltrami/schwarz.hpp"

#include "beltrami/detail/dft.hpp"

#include <cmath>

namespace qc {

SchwarzIntegral::SchwarzIntegral(const std::vector<double>& phi, int keep_modes) {
    const int n = static_cast<int>(phi.size());
    if (n < 8) throw invalid_input("Schwarz data needs at least 8 angular nodes");
    std::vector<cplx> x(n);
    for (int j = 0; j < n; ++j) {
        if (!std::isfinite(phi[j])) throw invalid_input("non-finite boundary value");
        x[j] = phi[j];
    }
    std::vector<cplx> hat = detail::dft(x);

    int kmax = n / 2 - 1;
    if (keep_modes > 0) kmax = std::min(kmax, keep_modes);
    coeff_.resize(kmax + 1);
    coeff_[0] = cplx(hat[0].real(), 0.0);  // Im h(0) = 0
    for (int k = 1; k <= kmax; ++k) coeff_[k] = hat[k];

    double total = 0.0, tail = 0.0;
    for (int k = 1; k <= kmax; ++k) {
        double e = std::norm(coeff_[k]);
        total += e;
        if (k > (3 * kmax) / 4) tail += e;
    }
    tail_energy_ = total > 0 ? tail / total : 0.0;
}

cplx SchwarzIntegral::operator()(cplx z) const {
    // Horner over h(z) = c0 + 2 (c1 z + c2 z^2 + ...)
    const int kmax = static_cast<int>(coeff_.size()) - 1;
    cplx acc(0, 0);
    for (int k = kmax; k >= 1; --k) acc = (acc + coeff_[k]) * z;
    return coeff_[0] + 2.0 * acc;
}

cplx schwarz_integral(const std::vector<double>& phi, cplx z) {
    return SchwarzIntegral(phi)(z);
}

}  // namespace qc
