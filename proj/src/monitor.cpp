#include "epidiffuse/monitor.hpp"

#include <cmath>

namespace epidiffuse {

namespace {
// exp underflows/overflows double outside roughly [-745, 709]; leave margin
// so the quadrature sum itself cannot overflow.
constexpr double kExpArgLimit = 700.0;
}  // namespace

double lyapunov_J(const Field& u, const Field& v, double delta, double epsilon) {
    const double max_v = v.values.maxCoeff();
    if (epsilon * max_v > kExpArgLimit)
        throw IntegrityError("lyapunov_J: e^{eps v} overflow, max v = " + std::to_string(max_v),
                             -1, 0.0);
    Field integrand{u.grid,
                    (1.0 + delta * (1.0 + u.values + u.values.square())) *
                        (epsilon * v.values).exp()};
    const double J = integrate(integrand);
    if (!std::isfinite(J))
        throw IntegrityError("lyapunov_J: non-finite quadrature, max v = " + std::to_string(max_v),
                             first_non_finite(integrand), 0.0);
    return J;
}

double lyapunov_J(const State& state, double delta, double epsilon) {
    return lyapunov_J(state.u, state.v, delta, epsilon);
}

std::vector<Violation> check_dissipation(std::span<const MonitorSample> samples, double mu,
                                         double gamma, double tol_scale) {
    if (samples.size() < 2) throw InputError("check_dissipation needs at least 2 samples");
    for (size_t k = 1; k < samples.size(); ++k)
        if (!(samples[k].t > samples[k - 1].t))
            throw InputError("check_dissipation: sample times must be strictly increasing");

    std::vector<Violation> out;
    for (size_t k = 0; k + 1 < samples.size(); ++k) {
        const double dt_k = samples[k + 1].t - samples[k].t;
        const double fd = (samples[k + 1].J - samples[k].J) / dt_k;
        const double rhs = -mu / 2.0 * samples[k].J + gamma;
        const double tol = tol_scale * samples[k].J;
        if (fd > rhs + tol)
            out.push_back({"dissipation", samples[k].t, fd - rhs, tol});
    }
    return out;
}

double decay_envelope(double J0, double mu, double gamma, double t) {
    if (!(mu > 0.0)) throw HypothesisError("decay_envelope needs mu > 0");
    if (!(t >= 0.0)) throw InputError("decay_envelope needs t >= 0");
    const double floor = 2.0 * gamma / mu;
    return (J0 - floor) * std::exp(-mu * t / 2.0) + floor;
}

std::vector<Violation> check_envelope(std::span<const MonitorSample> samples, double J0, double mu,
                                      double gamma, double tol) {
    std::vector<Violation> out;
    for (const auto& s : samples) {
        const double bound = decay_envelope(J0, mu, gamma, s.t);
        if (s.J > bound + tol) out.push_back({"envelope", s.t, s.J - bound, tol});
    }
    return out;
}

std::vector<Violation> check_invariants(const State& state, const ModelParams& params, double K,
                                        double tol) {
    std::vector<Violation> out;
    const auto [u_min, u_max] = extrema(state.u);
    const auto [v_min, v_max] = extrema(state.v);
    if (u_min < -tol) out.push_back({"u_nonneg", state.t, -u_min, tol});
    if (u_max > K + tol) out.push_back({"u_K_bound", state.t, u_max - K, tol});
    if (v_min < -tol) out.push_back({"v_nonneg", state.t, -v_min, tol});

    if (params.d > params.a && params.mu > 0.0) {
        const double coeff = params.b / (params.d - params.a);
        const double cap = params.Lambda / params.mu;
        const double margin =
            (state.v.values - coeff * (cap - state.u.values)).minCoeff();
        if (margin < -tol) out.push_back({"lemma_margin", state.t, -margin, tol});
    }
    return out;
}

}  // namespace epidiffuse
