#pragma once

#include "beltrami/field_ops.hpp"
#include "beltrami/grid.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace qc {

/// Real boundary data for the canonical solution trace, as a function of
/// the boundary point. The default reproduces Re z, which pins down the
/// solution branch whose real part carries the plane coordinate to the
/// boundary (identity for mu = 0, the normalized affine map for constant
/// mu, the radial map for radial profiles).
using TraceData = std::function<double(cplx)>;

struct SolverConfig {
    int resolution = 256;                      // echoed in metadata
    std::vector<double> truncation_levels{};   // dilatation caps, increasing
    cplx normalization_p0{0.0, 0.0};           // f(p0) = w0
    cplx normalization_w0{0.0, 0.0};
    cplx normalization_p1{1.0, 0.0};           // f(p1) = w1
    cplx normalization_w1{1.0, 0.0};
    double regularization_weight = 0.0;        // optional gradient penalty
    double max_residual = 1e-2;
    TraceData trace{};                         // empty -> Re z
    enum class Backend { automatic, direct, cg } backend = Backend::automatic;
};

struct SolveResult {
    MapField f;
    double residual_l2 = 0.0;        // sqrt(int |f_zbar - mu f_z|^2 dm)
    double objective_total = 0.0;    // full weighted least-squares objective
    double jacobian_min = 0.0;       // over cells outside the exclusion radius
    double jacobian_positive_fraction = 0.0;
    double regularization_used = 0.0;
    bool accepted = false;           // residual_l2 <= max_residual
    std::vector<double> cauchy_differences;  // per truncation level (ladder runs)
};

/// Coefficient truncation: mu where the dilatation quotient stays below the
/// cap, zero elsewhere.
MuField truncate_mu(const MuField& mu, double n);

/// Sparse linear least squares for f_zbar = mu f_z on the masked disk with
/// the two-point normalization and a real boundary trace selecting the
/// solution branch. Degenerate coefficients should be truncated first.
SolveResult solve_beltrami_disk(const MuField& mu, const SolverConfig& config);

/// Runs the truncation ladder and reports sup-norm Cauchy differences of
/// consecutive solutions on the evaluation annulus r in [0.2, 0.9].
SolveResult solve_with_ladder(const MuField& mu, const SolverConfig& config);

std::vector<double> convergence_study(const MuField& mu, const SolverConfig& config);

/// |f_zbar - mu f_z| per masked sample with a usable stencil.
RealField residual_field(const MapField& f, const MuField& mu);

/// Weighted least-squares objective of an arbitrary candidate map over the
/// same rows the solver minimizes (used by optimality checks).
double solver_objective(const MapField& f, const MuField& mu,
                        const SolverConfig& config);

struct RegularityReport {
    double jacobian_positive_fraction = 0.0;
    double jacobian_min = 0.0;
    double exclusion_radius = 0.0;
    int injectivity_samples = 0;
    int injectivity_violations = 0;
};

/// Discrete regularity diagnostics: Jacobian sign statistics away from the
/// exclusion radius and sampled grid injectivity.
RegularityReport regularity_diagnostics(const SolveResult& result,
                                        double exclusion_radius = 0.05,
                                        int samples = 20000);

}  // namespace qc
