#pragma once

#include "epidiffuse/constants.hpp"
#include "epidiffuse/state.hpp"

#include <span>
#include <string>
#include <vector>

namespace epidiffuse {

struct MonitorSample {
    double t = 0.0;
    double J = 0.0;
    double dJdt_estimate = 0.0;  // forward difference to the next sample; NaN on the last
    double rhs_34 = 0.0;         // -mu/2 * J + gamma
    double min_u = 0.0;
    double max_u = 0.0;
    double min_v = 0.0;
    double lemma_margin = 0.0;   // min over cells of v - (b/(d-a))(Lambda/mu - u); NaN if disabled
    double mass = 0.0;           // integral of u + v
    double J_w = 0.0;            // parallel e^{eps w} series; NaN unless tracked
};

struct Violation {
    std::string id;
    double t = 0.0;
    double witness = 0.0;  // amount by which the bound was exceeded
    double tol = 0.0;
};

struct MonitorReport {
    std::vector<MonitorSample> samples;
    std::vector<Violation> violations;
    std::vector<std::string> disabled_monitors;  // monitors turned off (and why)
};

/// J = integral of (1 + delta (1 + u + u^2)) e^{eps v} by midpoint quadrature.
/// Throws IntegrityError when e^{eps v} overflows (reports max v).
double lyapunov_J(const Field& u, const Field& v, double delta, double epsilon);
double lyapunov_J(const State& state, double delta, double epsilon);

/// Checks the decay inequality dJ/dt <= -mu/2 J + gamma on consecutive
/// samples by forward differences. The per-sample tolerance is
/// tol_scale * J_k with tol_scale = c_tol * (dt + h^2) supplied by the
/// caller (the discretization error budget).
std::vector<Violation> check_dissipation(std::span<const MonitorSample> samples, double mu,
                                         double gamma, double tol_scale);

/// The integrated form of the decay inequality:
/// (J0 - 2 gamma/mu) e^{-mu t / 2} + 2 gamma / mu.
double decay_envelope(double J0, double mu, double gamma, double t);

/// Flags J(t_k) > decay_envelope(J0, ...) + tol across samples.
std::vector<Violation> check_envelope(std::span<const MonitorSample> samples, double J0,
                                      double mu, double gamma, double tol);

/// Invariant-region checks on one state: u >= -tol, u <= K + tol,
/// v >= -tol, lemma margin >= -tol. Strict-mode parameters assumed.
std::vector<Violation> check_invariants(const State& state, const ModelParams& params, double K,
                                        double tol);

inline constexpr double kInvariantTolDefault = 1e-6;

}  // namespace epidiffuse
