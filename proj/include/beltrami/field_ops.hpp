#pragma once

#include "beltrami/grid.hpp"

#include <optional>

namespace qc {

/// Discrete Wirtinger derivatives of a complex map: second-order centered
/// differences where both neighbours are masked, second-order one-sided at
/// mask edges. Samples without a usable stencil in either axis are reported
/// through the `valid` mask.
struct WirtingerDerivatives {
    ComplexField fz;
    ComplexField fzbar;
    std::vector<std::uint8_t> valid;
};

WirtingerDerivatives wirtinger(const MapField& f);

/// Dilatation quotient (1+|mu|)/(1-|mu|), >= 1 everywhere.
DilatationField dilatation_quotient(const MuField& mu);

/// Options shared by operations with a marked center z0.
struct CenterOptions {
    /// Samples within exclusion_cells * max(hx,hy) of z0 are skipped
    /// (value set to 1 and excluded from guarantees).
    double exclusion_cells = 2.0;
};

/// Tangent dilatation |1 - conj(w)/w * mu|^2 / (1 - |mu|^2) with w = z - z0.
/// Throws when z0 coincides with a masked sample and the exclusion radius
/// is zero.
DilatationField tangent_dilatation(const MuField& mu, cplx z0,
                                   CenterOptions opts = {});

/// Directional derivative estimate (f(z + t*omega) - f(z))/t -> t->0+,
/// |omega| = 1. Uses a symmetric second-order stencil along the direction
/// when both probes stay in the mask, a one-sided second-order stencil
/// otherwise. Probe values come from the grid when the step lands on
/// samples (axis/diagonal directions) and from bilinear interpolation
/// otherwise.
struct DirectionalDerivative {
    cplx value;
    double step;
    int order;  // nominal stencil order
};

DirectionalDerivative directional_derivative(const MapField& f, cplx z, cplx omega);

/// Derivative in the tangent direction at z with respect to the center z0:
/// i * (w/|w| * f_z - conj(w)/|w| * f_zbar), w = z - z0, with discrete
/// Wirtinger derivatives.
cplx tangent_derivative(const MapField& f, cplx z, cplx z0);

/// |d_T f|^2 / |J_f| at a discrete regular point. jacobian_floor is relative
/// to the maximum |J| over the field; throws numeric_failure with message
/// "degenerate Jacobian" below the floor.
double geometric_tangent_dilatation(const MapField& f, cplx z, cplx z0,
                                    double jacobian_floor = 1e-10);

/// |f_z|^2 - |f_zbar|^2 per masked sample with a usable stencil.
RealField jacobian(const MapField& f);

}  // namespace qc
