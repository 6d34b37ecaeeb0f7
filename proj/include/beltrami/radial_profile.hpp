#pragma once

#include "beltrami/grid.hpp"

#include <vector>

namespace qc {

/// Radial test map rho(r) * z/r with a strictly increasing profile rho on
/// (r_min, 1], rho(1) = 1. Supplies exact degenerate solutions together
/// with their complex coefficient mu = ((r rho' - rho)/(r rho' + rho)) * z/zbar.
class RadialProfile {
  public:
    enum class Kind { power, log_degenerate, custom_table };

    /// rho(r) = r^alpha, alpha > 0.
    static RadialProfile power(double alpha, double r_min = 1e-6);
    /// rho(r) = 1/(1 + log(1/r)); dilatation quotient 1 + log(1/r).
    static RadialProfile log_degenerate(double r_min = 1e-6);
    /// Monotone samples (r, rho, rho'). Throws when the derivative column
    /// is missing or the profile is not increasing.
    static RadialProfile custom_table(std::vector<double> r, std::vector<double> rho,
                                      std::vector<double> rho_prime);

    Kind kind() const { return kind_; }
    double r_min() const { return r_min_; }

    double rho(double r) const;
    double rho_prime(double r) const;

    /// Radial coefficient k(r) = (r rho' - rho)/(r rho' + rho); mu = k * z/zbar.
    double mu_radial(double r) const;

    /// Exact map value rho(r) z / r (0 at the origin).
    cplx map(cplx z) const;
    /// Exact coefficient value at z (0 at the origin).
    cplx mu(cplx z) const;

    /// Dilatation quotient of the derived coefficient at radius r.
    double dilatation(double r) const;

    /// Samples mu over the masked grid. The mask is expected to sit inside
    /// r_min < |z| <= 1 except for a measure-zero center sample, which is
    /// assigned mu = 0.
    MuField mu_field(const GridSpec& grid) const;
    /// Samples the exact map over the masked grid.
    MapField map_field(const GridSpec& grid) const;

  private:
    RadialProfile(Kind kind, double r_min) : kind_(kind), r_min_(r_min) {}

    Kind kind_;
    double r_min_;
    double alpha_ = 1.0;
    std::vector<double> tab_r_, tab_rho_, tab_drho_;
};

}  // namespace qc
