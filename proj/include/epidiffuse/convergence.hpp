#pragma once

#include "epidiffuse/config.hpp"

#include <vector>

namespace epidiffuse {

/// Refinement study results. Temporal: forward Euler against the closed-form
/// spatially uniform solution with the forcing turned off,
///   u(t) = Lambda/mu + (u0 - Lambda/mu) e^{-mu t},  v(t) = v0 e^{-mu t}.
/// Spatial: a Neumann cosine mode against its closed-form decay, with
/// dt proportional to h^2 so the temporal error refines at the same rate.
struct ConvergenceStudy {
    std::vector<double> dts;
    std::vector<double> temporal_errors;
    std::vector<double> temporal_orders;  // log2(e_l / e_{l+1})
    std::vector<int> cells;
    std::vector<double> spatial_errors;
    std::vector<double> spatial_orders;
    double observed_temporal_order = 0.0;  // finest ratio
    double observed_spatial_order = 0.0;
    double t_fix_temporal = 0.0;
    double t_fix_spatial = 0.0;
};

/// Runs both refinement studies on the scenario's parameters and grid.
/// Levels run concurrently when EPIDIFFUSE_THREADS allows; results are
/// joined in level order so output is deterministic either way.
ConvergenceStudy run_convergence(const SimulationConfig& config, int levels);

}  // namespace epidiffuse
