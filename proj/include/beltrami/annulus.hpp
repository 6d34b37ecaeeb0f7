#pragma once

#include "beltrami/grid.hpp"

#include <vector>

namespace qc {

/// Harmonic function on the annulus r_in < |w| < 1 fitted to circle data:
/// a log term plus trigonometric modes solved per frequency against both
/// boundaries.
class AnnulusHarmonic {
  public:
    /// phi_in / phi_out sampled uniformly in angle on |w| = r_in and
    /// |w| = 1 (equal counts, >= 8).
    AnnulusHarmonic(double r_in, const std::vector<double>& phi_in,
                    const std::vector<double>& phi_out, int max_modes = 0);

    double r_in() const { return r_in_; }
    int modes() const { return static_cast<int>(alpha_.size()); }
    double log_coefficient() const { return b0_; }

    double value(cplx w) const;
    /// Gradient (u_x, u_y) packed as a complex number.
    cplx gradient(cplx w) const;
    /// Holomorphic completion on the slit annulus (slit along the positive
    /// real axis): u + i v with v(r, 0+) anchored to 0 at r = sqrt(r_in).
    cplx branch(cplx w) const;

    RealField sample(const GridSpec& grid) const;
    /// Max data mismatch on both circles (series truncation diagnostic).
    double boundary_error(const std::vector<double>& phi_in,
                          const std::vector<double>& phi_out) const;

  private:
    double r_in_;
    double a0_ = 0.0, b0_ = 0.0;
    std::vector<cplx> alpha_;        // mode-n coefficient of w^n
    std::vector<cplx> beta_scaled_;  // beta_n r_in^{-n}: beta_n w^{-n} = beta_scaled (r_in/w)^n
};

AnnulusHarmonic annulus_harmonic_dirichlet(double r_in,
                                           const std::vector<double>& phi_in,
                                           const std::vector<double>& phi_out,
                                           int max_modes = 0);

/// Branch data of the conjugate: the base branch on the slit annulus and
/// the period picked up per positive loop around the hole. The real part
/// stays single-valued; the imaginary part jumps by the period across the
/// slit.
struct MultiValuedSolution {
    ComplexField base_branch;
    double period = 0.0;
    double re_slit_jump = 0.0;  // real-part mismatch across the slit
    double im_slit_jump = 0.0;  // imaginary jump measured across the slit
};

/// Period and branch from the analytic series (exact mode integrals).
MultiValuedSolution conjugate_period(const AnnulusHarmonic& u, const GridSpec& grid);

/// Period and branch from a sampled harmonic field: loop quadrature of the
/// conjugate differential on mid-annulus circles plus path integration on
/// a polar lattice. Throws numeric_failure when the circle estimates
/// disagree (under-resolved input).
MultiValuedSolution conjugate_period(const RealField& u, double r_in, double r_out,
                                     int angular_nodes = 720);

}  // namespace qc
