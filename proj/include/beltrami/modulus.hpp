#pragma once

#include "beltrami/conditions.hpp"
#include "beltrami/grid.hpp"

#include <vector>

namespace qc {

/// A sampled curve: per-cell accumulated euclidean lengths along a polyline,
/// so that the line integral of a cell density is sum(rho[cell] * length).
struct CurveTrace {
    std::vector<int> cells;
    std::vector<double> lengths;
};

/// Curve family over a masked grid: either all curves joining E and F
/// within the domain, or the dashed-line family of circles around z0.
struct CurveFamilySpec {
    enum class Kind { joining, circles };
    Kind kind = Kind::joining;

    // joining families
    std::vector<int> set_e;  // masked cell indices
    std::vector<int> set_f;

    // circle families
    cplx z0{};
    double eps = 0.0;
    double eps0 = 0.0;

    static CurveFamilySpec joining(std::vector<int> e, std::vector<int> f);
    static CurveFamilySpec circles(cplx z0, double eps, double eps0);
};

/// Result of the discrete modulus program.
struct ModulusResult {
    double value = 0.0;
    RealField density;           // certified-admissible cell density
    double min_line_integral = 1.0;  // over sampled representatives, before rescale
    int representatives = 0;
    int generation_rounds = 0;
    bool infinite_proxy = false;  // zero-separation blow-up
};

struct ModulusConfig {
    int initial_curves = 256;     // first batch of shortest-path representatives
    int batch_curves = 4096;      // added per generation round
    int max_curves = 65536;
    int max_rounds = 256;
    double admissibility_tol = 4e-3;  // stop when min weighted path length >= 1 - tol
    double qp_tol = 3e-4;             // constraint violation tolerance of the QP sweep
    int qp_max_sweeps = 110;   // per generation round
    int qp_final_sweeps = 6000;
    double infinite_threshold = 1e4;
    double circle_spacing_cells = 0.5;  // radius step for circle families
    int min_arc_cells = 4;              // arcs shorter than this are dropped
};

/// Discrete conformal modulus: minimizes the cell quadrature of rho^2
/// subject to unit line integrals on sampled representatives. Joining
/// families generate representatives adaptively as weighted shortest paths
/// until every grid path has density length close to one; circle families
/// use all resolvable circles. The returned density is rescaled by the
/// minimum sampled line integral, so the reported value upper-bounds the
/// sampled program.
ModulusResult discrete_modulus(const GridSpec& grid, const CurveFamilySpec& family,
                               const ModulusConfig& cfg = {});

/// Same quadratic program over a fixed set of already-traced curves (used
/// for image families, where curves are polylines rather than grid paths).
ModulusResult modulus_of_traces(const GridSpec& grid,
                                const std::vector<CurveTrace>& traces,
                                const ModulusConfig& cfg = {});

/// Traces an arbitrary polyline into per-cell lengths via nearest-sample
/// binning with euclidean segment lengths; sub-segments outside the mask
/// are skipped.
CurveTrace trace_polyline(const GridSpec& grid, const std::vector<cplx>& points,
                          double step_cells = 0.5);

/// Finite weighted minimization problem: atoms (weight, value) and an
/// exponent p > 1.
struct WeightedMinProblem {
    std::vector<double> weights;  // mu_i > 0
    std::vector<double> values;   // phi_i > 0
    double p = 2.0;
};

struct WeightedMinSolution {
    double value = 0.0;               // attained infimum
    std::vector<double> minimizer;    // alpha_0, normalized so sum w*a = 1
    double lambda = 1.0;              // 1/(p-1)
};

/// Closed form of the constrained minimum of sum(w * phi * alpha^p) over
/// sum(w * alpha) = 1: value [sum w phi^(-lambda)]^(-1/lambda) attained at
/// alpha_0 = C phi^(-lambda).
WeightedMinSolution weighted_inf_closed_form(const WeightedMinProblem& problem);

/// Trapezoid estimate of int_eps^eps0 dr / ||K^T||_1(z0, r): the lower
/// bound for the modulus of the image circle family.
double circle_family_modulus_lower(const DilatationField& Kt, cplx z0, double eps,
                                   double eps0, int r_steps = 0);

/// Both sides of the radial-weight optimality inequality: the left side
/// uses the optimal weight eta_0 = 1/(I * ringnorm), the right side the
/// candidate eta (rescaled to unit integral when needed).
struct EtaComparison {
    double lhs = 0.0;  // with eta_0
    double rhs = 0.0;  // with the candidate
    bool rescaled = false;
};

EtaComparison eta0_optimality(const DilatationField& Kt, cplx z0, double eps,
                              double eps0, const std::vector<double>& eta_values,
                              int r_steps = 0);

/// Pushforward check: discrete modulus of the image dashed-line family
/// against the ring-norm lower bound.
struct PushforwardReport {
    double image_modulus = 0.0;
    double lower_bound = 0.0;
    bool bound_satisfied = false;
    int curves = 0;
    bool under_resolved = false;
};

PushforwardReport pushforward_modulus_check(const MapField& f, const MuField& mu,
                                            cplx z0, double eps, double eps0,
                                            int image_resolution = 256,
                                            double slack = 0.05);

}  // namespace qc
