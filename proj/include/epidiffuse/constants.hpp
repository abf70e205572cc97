#pragma once

#include "epidiffuse/model.hpp"

#include <optional>

namespace epidiffuse {

/// The derived constants of the decay estimate: the density bound K, the
/// functional weights delta and epsilon together with their admissible
/// ceilings, and the dissipation offset gamma.
struct DerivedConstants {
    double K = 0.0;
    double delta = 0.0;
    double epsilon = 0.0;
    double gamma = 0.0;
    double delta_max = 0.0;
    double epsilon_max = 0.0;
    bool mu_zero_relaxed = false;  // K fell back to ||u0||_inf because mu = 0
};

/// K = max(||u0||_inf, Lambda/mu).
double compute_K(const ModelParams& params, double u0_sup);

/// delta_max = min( mu / (2 Lambda (1+2K)),  2 (2 sqrt(ab)/(a+b) * 1/(1+2K))^2 );
/// the first branch is +inf when Lambda = 0.
double compute_delta_max(const ModelParams& params, double K);

/// epsilon_max = delta / (1 + delta (K + K^2)) * min(1, (d-a)/b).
double compute_epsilon_max(const ModelParams& params, double K, double delta);

/// gamma = mu (1 + delta (K + K^2)) |Omega|.
double compute_gamma(const ModelParams& params, double K, double delta, double domain_measure);

/// Discriminant of the gradient quadratic form, evaluated verbatim:
///   D = [eps((a+d) delta (1+2u) + b eps (1+delta(u+u^2)))]^2
///       - 4 [delta (2a + b eps (1+2u))] [d eps^2 (1+delta(u+u^2))].
double discriminant(const ModelParams& params, double delta, double epsilon, double u);

/// (1 - eps*eta) e^{eps*eta}; nonincreasing on eta >= 0 with maximum 1 at 0.
double pi_bound(double epsilon, double eta);

struct AdmissibilityReport {
    int n_samples = 0;
    double K = 0.0, delta = 0.0, epsilon = 0.0;
    double delta_max = 0.0, epsilon_max = 0.0;
    double max_D = 0.0;     // over u in [0, K]
    double u_at_max_D = 0.0;
    double max_D_2K = 0.0;  // informational, over u in [0, 2K]
    // lhs_36 = Lambda*delta*(1+2K) - mu, checked against -mu/2.
    // lhs_37 = epsilon - delta/(1+delta(K+K^2)), checked against 0.
    double lhs_36 = 0.0;
    double lhs_37 = 0.0;
    bool pass_D = false;
    bool pass_36 = false;
    bool pass_37 = false;
    bool delta_in_range = false;  // 0 < delta <= delta_max
    bool eps_in_range = false;    // 0 < epsilon <= epsilon_max

    bool admissible() const {
        return pass_D && pass_36 && pass_37 && delta_in_range && eps_in_range;
    }
};

/// Samples D at n_samples equispaced points of [0, K] and evaluates the
/// scalar inequalities; every check passes at absolute slack 1e-12.
/// Out-of-range delta/epsilon is recorded, not thrown.
AdmissibilityReport verify_admissible(const ModelParams& params, double K, double delta,
                                      double epsilon, int n_samples);

/// One-stop derivation: K, ceilings, delta/epsilon (defaulting to their
/// ceilings), gamma. Overrides are taken verbatim; their admissibility is
/// judged by verify_admissible.
DerivedConstants derive_constants(const ModelParams& params, double u0_sup,
                                  double domain_measure,
                                  std::optional<double> delta_override = std::nullopt,
                                  std::optional<double> epsilon_override = std::nullopt);

inline constexpr double kAdmissibilitySlack = 1e-12;

}  // namespace epidiffuse
