#pragma once

#include "beltrami/field_ops.hpp"
#include "beltrami/grid.hpp"
#include "beltrami/phi_spec.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace qc {

/// Tri-state outcome of a finite-resolution criterion check. "holds" always
/// carries the documented numeric margin; a negative verdict at a finite
/// resolution is evidence, not proof.
enum class Verdict { holds, fails, inconclusive };

const char* to_string(Verdict v);

/// Trend thresholds shared by the bounded/growing classifiers for
/// sequences sampled on dyadic radii. "Bounded" requires a per-octave
/// slope within bounded_slope of the sequence scale; "growing" requires
/// mostly monotone increases of at least growth_increment per octave.
struct TrendRule {
    double flat_tol = 0.02;
    double bounded_slope = 0.05;
    double growth_increment = 0.08;
};

Verdict classify_bounded(const std::vector<double>& seq, const TrendRule& rule = {});

/// Disc sampling policy for the mean-oscillation estimate.
struct DiscSampler {
    int target_count = 64;      // discs to attempt
    double min_radius_cells = 2.0;
    double max_radius_frac = 0.25;  // of the shorter grid extent
};

/// Lower estimate of the mean-oscillation norm: max over sampled discs of
/// the mean of |u - u_B|. Throws when fewer than 10 discs fit the mask.
double bmo_norm_estimate(const RealField& u, const DiscSampler& sampler = {});

/// Circle-average table of a field around z0 on strictly decreasing radii.
struct RadialAverages {
    cplx z0;
    std::vector<double> radii;
    std::vector<double> values;
};

/// Arc quadrature of a field over S(z0, r) intersected with the mask.
struct CircleScan {
    double integral = 0.0;    // L1 arc integral
    double arc_length = 0.0;  // covered arc length
    double coverage = 0.0;    // fraction of the full circle inside the mask
};

CircleScan circle_scan(const RealField& f, cplx z0, double r, int nodes = 0);

/// Arc-length average over S(z0, eps) within the domain. Throws when the
/// covered arcs total less than four cell widths.
double circle_average(const DilatationField& K, cplx z0, double eps, int nodes = 0);

/// L1 arc integral (not the average) over the same dashed line.
double ring_norm(const DilatationField& Kt, cplx z0, double r, int nodes = 0);

/// Radii schedule: dyadic steps below eps0, floored at floor_cells grid
/// steps. Returned decreasing.
std::vector<double> dyadic_radii(const GridSpec& grid, double eps0, int levels,
                                 double floor_cells = 3.0);

/// Mean-oscillation scan at a point.
struct FmoResult {
    Verdict verdict = Verdict::inconclusive;  // bounded oscillation sequence
    Verdict sufficient_test = Verdict::inconclusive;  // bounded |phi| means
    std::vector<double> radii;
    std::vector<double> oscillation;  // mean |phi - mean_B| over B(z0, eps)
    std::vector<double> means;        // disc means of phi
};

/// ignore_radius drops samples around z0 from the disc statistics (used
/// when phi carries a marked singular center, e.g. a tangent dilatation).
FmoResult fmo_indicator(const RealField& phi, cplx z0,
                        std::vector<double> radii = {}, const TrendRule& rule = {},
                        double ignore_radius = 0.0);

/// Ratio of the weighted ring integral of phi to log log(1/eps); verdict
/// "holds" means the ratio sequence stays bounded.
struct GrowthCheck {
    Verdict verdict = Verdict::inconclusive;
    std::vector<double> radii;
    std::vector<double> ratios;
};

GrowthCheck fmo_growth_check(const RealField& phi, cplx z0, double eps0 = 0.0,
                             int levels = 8);

/// Partial integrals of dr / ||K^T||_1(z0, r) on a shrinking lower limit.
/// "holds" means numeric divergence: positive increments that do not decay
/// geometrically (or the configured threshold is crossed).
struct DivergenceEstimate {
    Verdict verdict = Verdict::inconclusive;
    bool converging_evidence = false;  // increments decay geometrically
    std::vector<double> eps;           // decreasing lower limits
    std::vector<double> partial;       // int_eps^delta dr/ringnorm
};

struct DivergenceRule {
    double threshold = 10.0;       // absolute partial-integral trigger
    double decay_ratio = 0.55;     // increment ratio separating the regimes
    int window = 4;                // dyadic refinements inspected
};

DivergenceEstimate divergence_integral(const DilatationField& Kt, cplx z0,
                                       double delta, int levels = 8,
                                       const DivergenceRule& rule = {});

/// Cell quadrature of Phi(K) over the masked region (optionally restricted
/// to |z - center| <= radius). Overflow makes the result infinite.
struct PhiIntegral {
    double value = 0.0;
    bool finite = true;
};

PhiIntegral phi_integral(const DilatationField& K, const PhiSpec& phi);
PhiIntegral phi_integral(const DilatationField& K, const PhiSpec& phi, cplx center,
                         double radius);

/// Numeric classification of the five equivalent divergence criteria of a
/// gauge, plus the reference criterion they must agree with.
struct PhiCriteria {
    Verdict reference = Verdict::inconclusive;       // d(tau)/(tau Phi^-1(tau))
    std::array<Verdict, 5> criteria{};               // H'/t, dH/t, H/t^2, H(1/t), d(eta)/H^-1
    bool all_agree = false;
};

PhiCriteria phi_divergence_criteria(const PhiSpec& phi, double delta = 0.0);

/// Ring integrals of K^T psi^2(|z-z0|) against I(eps)^2: the o(I^2) check.
struct LogScaleResult {
    Verdict verdict = Verdict::inconclusive;
    std::vector<double> eps;
    std::vector<double> ratios;
};

struct SmallnessRule {
    double final_fraction = 0.2;  // "holds" needs final <= fraction * initial
    double noise = 0.10;          // tolerated non-monotonicity
    int min_levels = 4;
};

LogScaleResult log_scale_condition(const DilatationField& Kt, cplx z0,
                                   const PsiFamily& psi, int levels = 8,
                                   const SmallnessRule& rule = {});

/// Solvability routes, in report priority order.
enum class TheoremRoute { fmo, log_average, divergence, phi_gauge, none_established };

const char* to_string(TheoremRoute r);

struct ConditionConfig {
    double eps0 = 0.25;   // outer radius of all ring scans
    int levels = 8;       // dyadic radii per scan
    double floor_cells = 3.0;
    int circle_nodes = 0;  // 0 -> 4 * max(nx, ny)
    TrendRule trend{};
    DivergenceRule divergence{};
    PhiSpec phi_gauge = PhiSpec::exp_alpha(1.0);
    /// Optional dominator field Q for the FMO route; without it the route
    /// tests bounded disc means of K^T itself (the sufficient criterion).
    std::optional<RealField> dominator;
    double dominator_violation_frac = 0.005;
};

struct PointVerdicts {
    cplx z0;
    Verdict fmo_route = Verdict::inconclusive;
    Verdict log_average = Verdict::inconclusive;
    Verdict divergence = Verdict::inconclusive;
    Verdict phi_route = Verdict::inconclusive;
    TheoremRoute route = TheoremRoute::none_established;
    RadialAverages averages;       // circle averages of K^T
    DivergenceEstimate div_detail;
    std::vector<double> disc_means;  // disc means of K^T (FMO route input)
    PhiIntegral phi_mass;
};

struct ConditionReport {
    std::vector<PointVerdicts> points;
};

/// Evaluates every route at every sample point and reports the first
/// applicable one in the fixed priority order FMO, log-average, divergence,
/// gauge. "none-established" never claims unsolvability.
ConditionReport condition_report(const MuField& mu, const std::vector<cplx>& points,
                                 const ConditionConfig& cfg = {});

}  // namespace qc
