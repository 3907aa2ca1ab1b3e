#pragma once

#include <vector>

#include "qwalk/graph.hpp"
#include "qwalk/numeric.hpp"

namespace qwalk {

/// Normalizable eigenstate decaying as (sign * e^{-kappa})^x on every lead,
/// with energy sign * 2 cosh(kappa).
struct BoundState {
    double kappa = 0;
    int sign = +1;
    double energy = 0;
    /// Amplitude at x = 0 of each lead, in GraphTopology::terminals() order.
    RealVector lead_amplitudes;
    RealVector interior;
    /// max |(H - E) psi| over graph vertices for the normalized state.
    double residual = 0;
};

struct BoundStateSearch {
    double kappa_min = 1e-8;
    double grid_step = 1e-4;
    /// Scan reaches acosh(max(d, 2) / 2) + margin, d the maximum degree with leads.
    double margin = 0.1;
    double tolerance = 1e-12;
};

/// Scans kappa for zeros of the boundary-condition matrix
/// A + zL - (z + 1/z), z = +-e^{-kappa}, L the diagonal lead count, and refines
/// each sign change by bisection. Degenerate states are orthonormalized in the
/// lead-extended inner product.
std::vector<BoundState> find_bound_states(const GraphTopology &graph, const BoundStateSearch &search = {});

/// Smallest-magnitude eigenvalue of the boundary-condition matrix; zero exactly
/// at a bound state.
double bound_state_condition(const GraphTopology &graph, double kappa, int sign);

}  // namespace qwalk
