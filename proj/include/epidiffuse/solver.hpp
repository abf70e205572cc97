#pragma once

#include "epidiffuse/monitor.hpp"
#include "epidiffuse/state.hpp"

#include <functional>

namespace epidiffuse {

struct SimulationConfig;  // defined in config.hpp

enum class SolverPath { direct, transformed };

struct StepControl {
    double dt = 0.0;     // 0 = derive from stable_dt
    double safety = 0.9; // CFL safety factor in (0, 1]
    double t_end = 1.0;
    int output_every = 100;  // steps between monitor samples
    SolverPath path = SolverPath::direct;
};

/// Explicit-diffusion stability limit:
///   dt = safety * h_min^2 / (2 * dim * D_eff),
/// D_eff = max(a,d) + b on the direct path (the cross term feeds the v-row's
/// stiffness budget), max(a,d) on the transformed path; additionally
/// dt <= safety / mu when mu > 0.
double stable_dt(const ModelParams& params, const Grid& grid, double safety, SolverPath path);

struct StepStats {
    long long reaction_clamps = 0;  // cells where u or v was clamped at 0 for f
};

/// One forward-Euler step of the direct (u, v) system:
///   u+ = u + dt (a lap(u) + Lambda - lambda(t) f(u,v) - mu u)
///   v+ = v + dt (b lap(u) + d lap(v) + lambda(t) f(u,v) - mu v)
/// Throws IntegrityError naming the first non-finite cell.
State step_direct(const State& s, const ModelParams& params, const Forcing& forcing,
                  const Nonlinearity& nl, double dt, StepStats* stats = nullptr);

/// One forward-Euler step of the diagonalized (u, w) system; v is
/// reconstructed as w + (b/(d-a))(Lambda/mu - u) before evaluating f.
TransformedState step_transformed(const TransformedState& s, const ModelParams& params,
                                  const Forcing& forcing, const Nonlinearity& nl, double dt,
                                  StepStats* stats = nullptr);

/// w = v - (b/(d-a))(Lambda/mu - u) and its inverse. Need d > a and mu > 0.
TransformedState to_w(const State& s, const ModelParams& params);
State from_w(const TransformedState& s, const ModelParams& params);

struct RunResult {
    MonitorReport report;
    State initial_state;
    State final_state;  // last healthy state (transformed runs reconstruct v)
    DerivedConstants constants;
    double dt = 0.0;
    long long steps_taken = 0;
    StepStats stats;
    bool integrity_error = false;
    std::string integrity_message;
    long long integrity_step = -1;

    bool ok() const { return !integrity_error && report.violations.empty(); }
};

/// Steps the configured scenario from t = 0 to t_end, sampling the monitors
/// every output_every steps (plus the initial and final states), and runs
/// the dissipation and envelope checks over the collected samples.
/// An integrity error aborts the run with the partial report preserved.
/// on_sample, when given, sees every sampled state (index counts from 0).
using SampleSink = std::function<void(const State&, size_t sample_index)>;
RunResult run(const SimulationConfig& config, const SampleSink& on_sample = {});

}  // namespace epidiffuse
