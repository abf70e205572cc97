#include "epidiffuse/solver.hpp"

#include "epidiffuse/config.hpp"

#include <cmath>
#include <limits>
#include <optional>

namespace epidiffuse {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void throw_if_non_finite(const Field& f, const char* which, double t) {
    if (long c = first_non_finite(f); c >= 0)
        throw IntegrityError(std::string("non-finite ") + which + " at cell " + std::to_string(c) +
                                 ", t = " + std::to_string(t),
                             c, t);
}

/// Reaction-term inputs clamped at 0; counts clamped cells (never silent).
std::pair<Array, Array> clamped_reaction_inputs(const Array& u, const Array& v,
                                                StepStats* stats) {
    if (stats) stats->reaction_clamps += (u < 0.0).count() + (v < 0.0).count();
    return {u.max(0.0), v.max(0.0)};
}

}  // namespace

double stable_dt(const ModelParams& params, const Grid& grid, double safety, SolverPath path) {
    if (!(safety > 0.0 && safety <= 1.0)) throw InputError("safety factor must be in (0, 1]");
    const double d_eff = path == SolverPath::direct ? std::max(params.a, params.d) + params.b
                                                    : std::max(params.a, params.d);
    const double h = grid.h_min();
    double dt = safety * h * h / (2.0 * grid.dim * d_eff);
    if (params.mu > 0.0) dt = std::min(dt, safety / params.mu);
    return dt;
}

State step_direct(const State& s, const ModelParams& params, const Forcing& forcing,
                  const Nonlinearity& nl, double dt, StepStats* stats) {
    const double lam = eval_lambda(forcing, s.t, params.lambda_hat);
    const Field lap_u = laplacian(s.u);
    const Field lap_v = laplacian(s.v);

    Array reaction;
    if (lam > 0.0) {
        auto [uc, vc] = clamped_reaction_inputs(s.u.values, s.v.values, stats);
        reaction = lam * eval_f(nl, uc, vc);
    } else {
        reaction = Array::Zero(s.u.values.size());
    }

    State out;
    out.t = s.t + dt;
    out.u = {s.u.grid, s.u.values + dt * (params.a * lap_u.values + params.Lambda - reaction -
                                          params.mu * s.u.values)};
    out.v = {s.v.grid, s.v.values + dt * (params.b * lap_u.values + params.d * lap_v.values +
                                          reaction - params.mu * s.v.values)};
    throw_if_non_finite(out.u, "u", out.t);
    throw_if_non_finite(out.v, "v", out.t);
    return out;
}

TransformedState step_transformed(const TransformedState& s, const ModelParams& params,
                                  const Forcing& forcing, const Nonlinearity& nl, double dt,
                                  StepStats* stats) {
    if (!(params.d > params.a)) throw TransformError("transformed step needs d > a");
    if (!(params.mu > 0.0)) throw TransformError("transformed step needs mu > 0");
    const double coeff = params.b / (params.d - params.a);
    const double cap = params.Lambda / params.mu;
    const double lam = eval_lambda(forcing, s.t, params.lambda_hat);
    const Field lap_u = laplacian(s.u);
    const Field lap_w = laplacian(s.w);

    Array reaction;
    if (lam > 0.0) {
        const Array v_rec = s.w.values + coeff * (cap - s.u.values);
        auto [uc, vc] = clamped_reaction_inputs(s.u.values, v_rec, stats);
        reaction = lam * eval_f(nl, uc, vc);
    } else {
        reaction = Array::Zero(s.u.values.size());
    }

    TransformedState out;
    out.t = s.t + dt;
    out.u = {s.u.grid, s.u.values + dt * (params.a * lap_u.values + params.Lambda - reaction -
                                          params.mu * s.u.values)};
    out.w = {s.w.grid, s.w.values + dt * (params.d * lap_w.values + (1.0 - coeff) * reaction -
                                          params.mu * s.w.values)};
    throw_if_non_finite(out.u, "u", out.t);
    throw_if_non_finite(out.w, "w", out.t);
    return out;
}

TransformedState to_w(const State& s, const ModelParams& params) {
    if (!(params.d > params.a)) throw TransformError("to_w needs d > a");
    if (!(params.mu > 0.0)) throw TransformError("to_w needs mu > 0");
    const double coeff = params.b / (params.d - params.a);
    const double cap = params.Lambda / params.mu;
    return {s.t, s.u, {s.v.grid, s.v.values - coeff * (cap - s.u.values)}};
}

State from_w(const TransformedState& s, const ModelParams& params) {
    if (!(params.d > params.a)) throw TransformError("from_w needs d > a");
    if (!(params.mu > 0.0)) throw TransformError("from_w needs mu > 0");
    const double coeff = params.b / (params.d - params.a);
    const double cap = params.Lambda / params.mu;
    return {s.t, s.u, {s.w.grid, s.w.values + coeff * (cap - s.u.values)}};
}

RunResult run(const SimulationConfig& config, const SampleSink& on_sample) {
    const ModelParams& p = config.params;
    const Grid& grid = config.grid;

    Field u0 = sample(config.initial.u0, grid, config.seed);
    Field v0 = sample(config.initial.v0, grid, config.seed + 1);
    if (long c = first_non_finite(u0); c >= 0)
        throw InputError("u0 non-finite at cell " + std::to_string(c));
    if (long c = first_non_finite(v0); c >= 0)
        throw InputError("v0 non-finite at cell " + std::to_string(c));

    RunResult res;
    res.constants = derive_constants(p, extrema(u0).second, grid.measure, config.delta_override,
                                     config.epsilon_override);
    const DerivedConstants& cst = res.constants;

    const double t_end = config.control.t_end;
    if (!(t_end >= 0.0)) throw InputError("t_end must be >= 0");
    const double dt = config.control.dt > 0.0
                          ? config.control.dt
                          : stable_dt(p, grid, config.control.safety, config.control.path);
    res.dt = dt;
    const long long full_steps = static_cast<long long>(std::floor(t_end / dt));
    const double remainder = t_end - static_cast<double>(full_steps) * dt;
    const long long n_steps = full_steps + (remainder > 1e-9 * dt ? 1 : 0);
    const int output_every = std::max(1, config.control.output_every);

    MonitorReport& report = res.report;
    const bool transform_ok = p.d > p.a && p.mu > 0.0;
    const bool invariants_on = p.strict_mode;
    const bool decay_on = p.mu > 0.0;
    if (!invariants_on)
        report.disabled_monitors.push_back("invariant_region (relaxed mode: bounds not implied)");
    if (!transform_ok)
        report.disabled_monitors.push_back("lemma_margin (needs d > a and mu > 0)");
    if (!decay_on) {
        report.disabled_monitors.push_back("dissipation (needs mu > 0)");
        report.disabled_monitors.push_back("envelope (needs mu > 0)");
    }
    const bool track_w = config.monitor.track_w && transform_ok;
    if (config.monitor.track_w && !transform_ok)
        report.disabled_monitors.push_back("J_w series (needs d > a and mu > 0)");

    const double coeff = transform_ok ? p.b / (p.d - p.a) : 0.0;
    const double cap = p.mu > 0.0 ? p.Lambda / p.mu : 0.0;

    auto record_sample = [&](const State& st) {
        MonitorSample m;
        m.t = st.t;
        m.J = lyapunov_J(st, cst.delta, cst.epsilon);
        m.dJdt_estimate = kNaN;
        m.rhs_34 = decay_on ? -p.mu / 2.0 * m.J + cst.gamma : kNaN;
        std::tie(m.min_u, m.max_u) = extrema(st.u);
        m.min_v = extrema(st.v).first;
        m.lemma_margin = transform_ok
                             ? (st.v.values - coeff * (cap - st.u.values)).minCoeff()
                             : kNaN;
        m.mass = integrate({st.u.grid, st.u.values + st.v.values});
        if (track_w) {
            Field w{st.v.grid, st.v.values - coeff * (cap - st.u.values)};
            m.J_w = lyapunov_J(st.u, w, cst.delta, cst.epsilon);
        } else {
            m.J_w = kNaN;
        }
        if (invariants_on) {
            auto viols = check_invariants(st, p, cst.K, config.monitor.invariant_tol);
            report.violations.insert(report.violations.end(), viols.begin(), viols.end());
        }
        report.samples.push_back(m);
        if (on_sample) on_sample(st, report.samples.size() - 1);
    };

    State s{0.0, std::move(u0), std::move(v0)};
    std::optional<TransformedState> ts;
    if (config.control.path == SolverPath::transformed) ts = to_w(s, p);
    res.initial_state = s;

    long long k = 0;
    try {
        record_sample(s);
        for (k = 1; k <= n_steps; ++k) {
            const double step_dt = (k == n_steps && remainder > 1e-9 * dt)
                                       ? t_end - static_cast<double>(k - 1) * dt
                                       : dt;
            const double t_after = (k == n_steps) ? t_end : static_cast<double>(k) * dt;
            if (config.control.path == SolverPath::direct) {
                s = step_direct(s, p, config.forcing, config.nonlinearity, step_dt, &res.stats);
                s.t = t_after;
            } else {
                *ts = step_transformed(*ts, p, config.forcing, config.nonlinearity, step_dt,
                                       &res.stats);
                ts->t = t_after;
            }
            res.steps_taken = k;
            if (k % output_every == 0 || k == n_steps) {
                if (config.control.path == SolverPath::transformed) s = from_w(*ts, p);
                record_sample(s);
            }
        }
    } catch (const IntegrityError& e) {
        res.integrity_error = true;
        res.integrity_message = e.what();
        res.integrity_step = k;
    }

    if (config.control.path == SolverPath::transformed && !res.integrity_error)
        s = from_w(*ts, p);
    res.final_state = s;

    // Forward-difference dJ/dt estimates between consecutive samples.
    auto& samples = report.samples;
    for (size_t i = 0; i + 1 < samples.size(); ++i)
        samples[i].dJdt_estimate =
            (samples[i + 1].J - samples[i].J) / (samples[i + 1].t - samples[i].t);

    if (decay_on && samples.size() >= 2) {
        const double h = grid.h_min();
        const double tol_scale = config.monitor.c_tol * (dt + h * h);
        auto viols = check_dissipation(samples, p.mu, cst.gamma, tol_scale);
        report.violations.insert(report.violations.end(), viols.begin(), viols.end());
    }
    if (decay_on && !samples.empty()) {
        const double J0 = samples.front().J;
        auto viols = check_envelope(samples, J0, p.mu, cst.gamma,
                                    config.monitor.envelope_rel_tol * J0);
        report.violations.insert(report.violations.end(), viols.begin(), viols.end());
    }
    return res;
}

}  // namespace epidiffuse
