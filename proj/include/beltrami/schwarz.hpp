#pragma once

#include "beltrami/grid.hpp"

#include <vector>

namespace qc {

/// Holomorphic completion of real boundary data on the unit circle with
/// Im h(0) = 0: the contour-integral quadrature evaluated through its
/// Fourier modes, which keeps the evaluation stable up to |z| = 1.
class SchwarzIntegral {
  public:
    /// phi sampled at theta_j = 2 pi j / N, N >= 8.
    explicit SchwarzIntegral(const std::vector<double>& phi_uniform,
                             int keep_modes = 0);

    cplx operator()(cplx z) const;

    int modes() const { return static_cast<int>(coeff_.size()); }
    /// Relative energy in the top quarter of the kept band; large values
    /// mean the node count under-resolves the data.
    double tail_energy() const { return tail_energy_; }

  private:
    std::vector<cplx> coeff_;  // c_0 real; h(z) = c_0 + 2 sum c_k z^k
    double tail_energy_ = 0.0;
};

/// One-off evaluation helper.
cplx schwarz_integral(const std::vector<double>& phi_uniform, cplx z);

}  // namespace qc
