#pragma once

#include "beltrami/boundary.hpp"
#include "beltrami/conditions.hpp"
#include "beltrami/riemann.hpp"
#include "beltrami/schwarz.hpp"
#include "beltrami/solver.hpp"

#include <optional>

namespace qc {

/// Raised when no solvability route is established and force is off.
struct route_not_established : std::runtime_error {
    explicit route_not_established(const std::string& what)
        : std::runtime_error(what) {}
};

struct DirichletConfig {
    SolverConfig solver{};
    int schwarz_nodes = 1024;
    double collar_cells = 3.0;
    bool force = false;  // skip the solvability-route check
    ConditionConfig conditions{};
    /// Points for the route check; empty means boundary quarters + center.
    std::vector<cplx> condition_points{};
    /// Optional override of the homeomorphic-solve step (pipeline studies
    /// compose automorphisms here).
    std::optional<MapField> precomputed_first_map{};
};

struct StageTimings {
    double solve_s = 0.0;
    double riemann_s = 0.0;
    double transplant_s = 0.0;
    double compose_s = 0.0;
};

struct DirichletResult {
    MapField f;
    TheoremRoute route = TheoremRoute::none_established;
    double boundary_error = 0.0;        // sup |Re f - phi| extrapolated to the boundary
    double beltrami_residual_rel = 0.0; // L2-relative residual away from the collar
    double jacobian_positive_fraction = 0.0;
    double riemann_conformality = 0.0;
    double schwarz_tail_energy = 0.0;
    StageTimings timings;
};

/// Dirichlet construction on a Jordan domain: homeomorphic-type solve for
/// the coefficient, conformal factorization of its image, boundary data
/// transplant through the correspondence, holomorphic completion, and
/// composition.
DirichletResult dirichlet_solve(const JordanBoundary& boundary, const GridSpec& mask,
                                const MuField& mu, const BoundaryData& phi,
                                const DirichletConfig& cfg = {});

/// Sup over boundary rays of |Re f extrapolated to the boundary - phi|,
/// using collar samples along the inward normal.
double boundary_error(const MapField& f, const BoundaryData& phi,
                      const JordanBoundary& boundary, double collar_cells = 3.0);

}  // namespace qc
