#include "epidiffuse/convergence.hpp"

#include <cmath>
#include <functional>
#include <future>
#include <numbers>

namespace epidiffuse {

namespace {

/// Max-norm error of one temporal level at t_fix, uniform data, lambda = 0.
double temporal_level_error(const SimulationConfig& base, double dt, double t_fix) {
    SimulationConfig cfg = base;
    cfg.forcing = Forcing::constant(0.0);
    const double u0c = cfg.initial.u0.base;
    const double v0c = cfg.initial.v0.base;
    cfg.initial.u0 = FieldProfile::constant(u0c);
    cfg.initial.v0 = FieldProfile::constant(v0c);
    cfg.control.dt = dt;
    cfg.control.t_end = t_fix;
    cfg.control.output_every = 1 << 30;  // initial and final samples only
    cfg.control.path = SolverPath::direct;
    cfg.monitor.track_w = false;

    const RunResult res = run(cfg);
    if (res.integrity_error) throw IntegrityError("temporal study: " + res.integrity_message,
                                                  -1, t_fix);
    const double mu = cfg.params.mu;
    const double eq = cfg.params.Lambda / mu;
    const double u_exact = eq + (u0c - eq) * std::exp(-mu * t_fix);
    const double v_exact = v0c * std::exp(-mu * t_fix);
    const auto [u_min, u_max] = extrema(res.final_state.u);
    const auto [v_min, v_max] = extrema(res.final_state.v);
    const double eu = std::max(std::abs(u_min - u_exact), std::abs(u_max - u_exact));
    const double ev = std::max(std::abs(v_min - v_exact), std::abs(v_max - v_exact));
    return std::max(eu, ev);
}

/// Max-norm error of one spatial level at t_fix: u0 a single Neumann cosine
/// mode, lambda = 0, so the u equation has the closed-form solution
///   u(t,x) = eq + (c0-eq) e^{-mu t} + c1 e^{-(a (pi k/L)^2 + mu) t} cos(pi k x / L).
double spatial_level_error(const SimulationConfig& base, int n_cells, double c0, double c1,
                           int mode, double t_fix) {
    SimulationConfig cfg = base;
    cfg.grid = Grid::line(base.grid.extent[0], n_cells);
    cfg.forcing = Forcing::constant(0.0);
    cfg.initial.u0 = FieldProfile::cosine(c0, c1, mode);
    cfg.initial.v0 = FieldProfile::constant(base.initial.v0.base);
    cfg.control.dt = 0.0;  // stable_dt, proportional to h^2
    cfg.control.t_end = t_fix;
    cfg.control.output_every = 1 << 30;
    cfg.control.path = SolverPath::direct;
    cfg.monitor.track_w = false;

    const RunResult res = run(cfg);
    if (res.integrity_error) throw IntegrityError("spatial study: " + res.integrity_message,
                                                  -1, t_fix);
    const double mu = cfg.params.mu;
    const double a = cfg.params.a;
    const double L = cfg.grid.extent[0];
    const double eq = cfg.params.Lambda / mu;
    const double kpi = mode * std::numbers::pi / L;
    const double uniform_part = eq + (c0 - eq) * std::exp(-mu * t_fix);
    const double mode_amp = c1 * std::exp(-(a * kpi * kpi + mu) * t_fix);
    double err = 0.0;
    for (int i = 0; i < cfg.grid.cells[0]; ++i) {
        const double x = cfg.grid.x_center(i);
        const double exact = uniform_part + mode_amp * std::cos(kpi * x);
        err = std::max(err, std::abs(res.final_state.u.values[i] - exact));
    }
    return err;
}

std::vector<double> run_levels(const std::vector<std::function<double()>>& jobs) {
    std::vector<double> out(jobs.size());
    const int cap = thread_cap();
    if (cap > 1) {
        std::vector<std::future<double>> futures;
        futures.reserve(jobs.size());
        size_t launched = 0;
        while (launched < jobs.size()) {
            const size_t batch = std::min<size_t>(cap, jobs.size() - launched);
            futures.clear();
            for (size_t i = 0; i < batch; ++i)
                futures.push_back(std::async(std::launch::async, jobs[launched + i]));
            for (size_t i = 0; i < batch; ++i) out[launched + i] = futures[i].get();
            launched += batch;
        }
    } else {
        for (size_t i = 0; i < jobs.size(); ++i) out[i] = jobs[i]();
    }
    return out;
}

std::vector<double> pairwise_orders(const std::vector<double>& errors) {
    std::vector<double> orders;
    for (size_t i = 0; i + 1 < errors.size(); ++i)
        orders.push_back(std::log2(errors[i] / errors[i + 1]));
    return orders;
}

}  // namespace

ConvergenceStudy run_convergence(const SimulationConfig& config, int levels) {
    if (levels < 2) throw InputError("convergence study needs at least 2 levels");
    if (!(config.params.mu > 0.0))
        throw InputError("convergence study needs mu > 0 (closed-form references decay)");

    ConvergenceStudy study;
    const double mu = config.params.mu;
    study.t_fix_temporal = std::min(config.control.t_end > 0.0 ? config.control.t_end : 1.0, 1.0);
    study.t_fix_spatial = std::min(config.control.t_end > 0.0 ? config.control.t_end : 0.1, 0.1);

    // Temporal: halve dt from a base coarse enough to show first-order error.
    const double dt0 = 0.08 / mu;
    std::vector<std::function<double()>> tjobs;
    for (int l = 0; l < levels; ++l) {
        const double dt = dt0 / static_cast<double>(1 << l);
        study.dts.push_back(dt);
        tjobs.push_back([&config, dt, t = study.t_fix_temporal] {
            return temporal_level_error(config, dt, t);
        });
    }
    study.temporal_errors = run_levels(tjobs);
    study.temporal_orders = pairwise_orders(study.temporal_errors);

    // Spatial: double the cell count; u0 is a smooth non-uniform cosine mode.
    const double c0 = std::max(config.initial.u0.base, 0.5);
    const double c1 = 0.4 * c0;
    std::vector<std::function<double()>> sjobs;
    for (int l = 0; l < levels; ++l) {
        const int n = config.grid.cells[0] * (1 << l);
        study.cells.push_back(n);
        sjobs.push_back([&config, n, c0, c1, t = study.t_fix_spatial] {
            return spatial_level_error(config, n, c0, c1, 1, t);
        });
    }
    study.spatial_errors = run_levels(sjobs);
    study.spatial_orders = pairwise_orders(study.spatial_errors);

    study.observed_temporal_order = study.temporal_orders.back();
    study.observed_spatial_order = study.spatial_orders.back();
    return study;
}

}  // namespace epidiffuse
