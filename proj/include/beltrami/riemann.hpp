#pragma once

#include "beltrami/boundary.hpp"
#include "beltrami/grid.hpp"

#include <optional>
#include <vector>

namespace qc {

/// Conformal map of the interior of a Jordan boundary onto the unit disk,
/// anchor -> 0 with positive derivative there. Built from a second-kind
/// boundary integral equation; the interior evaluator is the stabilized
/// Cauchy integral of the boundary values.
class RiemannMap {
  public:
    cplx map(cplx w) const;

    cplx anchor() const { return anchor_; }
    /// Unwrapped boundary angles theta_i with R(gamma_i) = exp(i theta_i);
    /// increases by 2 pi over one positive loop.
    const std::vector<double>& correspondence() const { return theta_; }
    /// Boundary nodes actually used (low-pass smoothed parametrization).
    const std::vector<cplx>& nodes() const { return gamma_; }
    double conformality_residual() const { return conformality_residual_; }
    double smoothing_delta() const { return smoothing_delta_; }

  private:
    friend RiemannMap riemann_map(const JordanBoundary&, std::optional<cplx>);
    RiemannMap() = default;

    std::vector<cplx> gamma_, dgamma_;  // nodes and parameter derivative
    std::vector<cplx> boundary_values_;  // exp(i theta)
    std::vector<double> theta_;
    cplx anchor_{};
    double conformality_residual_ = 0.0;
    double smoothing_delta_ = 0.0;
};

/// Solves the boundary correspondence and returns the map. Throws
/// invalid_input for self-intersecting input (checked by JordanBoundary)
/// and numeric_failure when the correspondence solve does not converge.
RiemannMap riemann_map(const JordanBoundary& boundary,
                       std::optional<cplx> anchor = std::nullopt);

}  // namespace qc
