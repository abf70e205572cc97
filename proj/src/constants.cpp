#include "epidiffuse/constants.hpp"

#include <cmath>
#include <limits>

namespace epidiffuse {

double compute_K(const ModelParams& params, double u0_sup) {
    if (!(u0_sup >= 0.0)) throw InputError("u0_sup must be >= 0");
    if (params.mu <= 0.0) {
        if (params.strict_mode)
            throw HypothesisError("K needs mu > 0 (Lambda/mu undefined) in strict mode");
        return u0_sup;
    }
    return std::max(u0_sup, params.Lambda / params.mu);
}

double compute_delta_max(const ModelParams& params, double K) {
    if (!(params.a > 0.0) || !(params.b > 0.0))
        throw HypothesisError("delta_max needs a > 0 and b > 0");
    if (!(K >= 0.0)) throw InputError("K must be >= 0");
    const double ratio = 2.0 * std::sqrt(params.a * params.b) / (params.a + params.b);
    const double branch2 = 2.0 * std::pow(ratio / (1.0 + 2.0 * K), 2);
    if (params.Lambda == 0.0) return branch2;  // first constraint is vacuous
    const double branch1 = params.mu / (2.0 * params.Lambda * (1.0 + 2.0 * K));
    return std::min(branch1, branch2);
}

double compute_epsilon_max(const ModelParams& params, double K, double delta) {
    if (params.b == 0.0) throw std::domain_error("epsilon_max needs b != 0");
    if (!(delta > 0.0)) throw InputError("epsilon_max needs delta > 0");
    const double gap_factor = std::min(1.0, (params.d - params.a) / params.b);
    return delta / (1.0 + delta * (K + K * K)) * gap_factor;
}

double compute_gamma(const ModelParams& params, double K, double delta, double domain_measure) {
    if (!(params.mu > 0.0)) throw HypothesisError("gamma needs mu > 0");
    if (!(domain_measure > 0.0)) throw InputError("gamma needs |Omega| > 0");
    return params.mu * (1.0 + delta * (K + K * K)) * domain_measure;
}

double discriminant(const ModelParams& params, double delta, double epsilon, double u) {
    const double P = 1.0 + 2.0 * u;
    const double S = 1.0 + delta * (u + u * u);
    const double B = epsilon * ((params.a + params.d) * delta * P + params.b * epsilon * S);
    const double A = delta * (2.0 * params.a + params.b * epsilon * P);
    const double C = params.d * epsilon * epsilon * S;
    return B * B - 4.0 * A * C;
}

double pi_bound(double epsilon, double eta) { return (1.0 - epsilon * eta) * std::exp(epsilon * eta); }

AdmissibilityReport verify_admissible(const ModelParams& params, double K, double delta,
                                      double epsilon, int n_samples) {
    if (n_samples < 2) throw InputError("verify_admissible needs n_samples >= 2");
    AdmissibilityReport rep;
    rep.n_samples = n_samples;
    rep.K = K;
    rep.delta = delta;
    rep.epsilon = epsilon;
    rep.delta_max = compute_delta_max(params, K);
    rep.epsilon_max = compute_epsilon_max(params, K, delta > 0.0 ? delta : rep.delta_max);
    rep.delta_in_range = delta > 0.0 && delta <= rep.delta_max + kAdmissibilitySlack;
    rep.eps_in_range = epsilon > 0.0 && epsilon <= rep.epsilon_max + kAdmissibilitySlack;

    auto scan = [&](double hi, double& max_D, double& arg_max) {
        max_D = -std::numeric_limits<double>::infinity();
        arg_max = 0.0;
        for (int i = 0; i < n_samples; ++i) {
            const double u = n_samples == 1 ? 0.0 : hi * i / (n_samples - 1);
            const double D = discriminant(params, delta, epsilon, u);
            if (D > max_D) {
                max_D = D;
                arg_max = u;
            }
        }
    };
    double arg2k = 0.0;
    scan(K, rep.max_D, rep.u_at_max_D);
    scan(2.0 * K, rep.max_D_2K, arg2k);

    // lhs_36 <= -mu/2 holds with equality exactly at delta = mu/(2 Lambda (1+2K)).
    rep.lhs_36 = params.Lambda * delta * (1.0 + 2.0 * K) - params.mu;
    rep.lhs_37 = epsilon - delta / (1.0 + delta * (K + K * K));

    rep.pass_D = rep.max_D <= kAdmissibilitySlack;
    rep.pass_36 = rep.lhs_36 + params.mu / 2.0 <= kAdmissibilitySlack;
    rep.pass_37 = rep.lhs_37 <= kAdmissibilitySlack;
    return rep;
}

DerivedConstants derive_constants(const ModelParams& params, double u0_sup, double domain_measure,
                                  std::optional<double> delta_override,
                                  std::optional<double> epsilon_override) {
    DerivedConstants c;
    c.K = compute_K(params, u0_sup);
    c.mu_zero_relaxed = params.mu <= 0.0;
    c.delta_max = compute_delta_max(params, c.K);
    c.delta = delta_override.value_or(c.delta_max);
    if (!std::isfinite(c.delta) || c.delta <= 0.0)
        throw InputError("delta override must be finite and > 0");
    c.epsilon_max = compute_epsilon_max(params, c.K, c.delta);
    c.epsilon = epsilon_override.value_or(c.epsilon_max);
    if (!std::isfinite(c.epsilon) || c.epsilon <= 0.0)
        throw InputError("epsilon override must be finite and > 0");
    c.gamma = params.mu > 0.0
                  ? compute_gamma(params, c.K, c.delta, domain_measure)
                  : 0.0;
    return c;
}

}  // namespace epidiffuse
