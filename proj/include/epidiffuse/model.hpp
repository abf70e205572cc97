#pragma once

#include "epidiffuse/grid.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace epidiffuse {

/// Physical constants of the system. H.1 asks for a > 0, b > 0, d - a >= b,
/// mu > 0, Lambda >= 0; strict_mode says whether those are enforced or the
/// scenario is a deliberate stress/conservation test.
struct ModelParams {
    double a = 1.0;           // diffusivity of u
    double b = 1.0;           // cross-diffusivity (v equation carries b*lap(u))
    double d = 2.0;           // diffusivity of v
    double Lambda = 1.0;      // source rate in the u equation
    double mu = 2.0;          // linear decay rate
    double lambda_hat = 1.0;  // ceiling for the forcing lambda(t)
    bool strict_mode = true;
};

enum class ForcingKind { constant, piecewise_constant, sinusoidal_clamped };

/// Time-dependent transmission forcing lambda(t), clamped into [0, lambda_hat]
/// at evaluation time.
struct Forcing {
    ForcingKind kind = ForcingKind::constant;
    double value = 0.0;                   // constant kind
    std::vector<double> interval_starts;  // piecewise kind; starts[0] == 0
    std::vector<double> interval_values;
    double mean = 0.0, amplitude = 0.0, period = 1.0;  // sinusoidal kind

    static Forcing constant(double v);
    static Forcing piecewise(std::vector<double> starts, std::vector<double> values);
    static Forcing sinusoidal(double mean, double amplitude, double period);
};

double eval_lambda(const Forcing& forcing, double t, double lambda_hat);

enum class NonlinearityKind { product_power, sub_exponential, exponential_violator };

/// Reaction term f(u,v). product_power and sub_exponential satisfy the
/// weak-exponential-growth hypothesis; exponential_violator deliberately
/// breaks it for negative tests.
struct Nonlinearity {
    NonlinearityKind kind = NonlinearityKind::product_power;
    double m = 1.0;      // product_power: f = u * v^m, m >= 1
    double alpha = 0.5;  // sub_exponential: f = u * (e^{v^alpha} - 1), 0 < alpha < 1

    bool satisfies_H2() const { return kind != NonlinearityKind::exponential_violator; }

    static Nonlinearity product_power(double m);
    static Nonlinearity sub_exponential(double alpha);
    static Nonlinearity exponential_violator();
};

double eval_f(const Nonlinearity& nl, double u, double v);

/// Vectorized reaction evaluation over whole fields (same formulas as the
/// scalar eval_f; inputs must already be nonnegative).
Array eval_f(const Nonlinearity& nl, const Array& u, const Array& v);

/// log(1 + f(u_probe, v)) / v — the quantity whose decay to 0 is H.2.
double growth_ratio(const Nonlinearity& nl, double u_probe, double v);

enum class ProfileKind { constant, cosine, random_uniform, values };

/// Descriptor for one initial field: a constant, a Neumann-compatible cosine
/// profile sampled at cell centers, seeded uniform noise, or explicit values.
struct FieldProfile {
    ProfileKind kind = ProfileKind::constant;
    double base = 0.0;
    double amplitude = 0.0;
    std::array<int, 2> modes{1, 0};   // cosine: mode number per axis
    std::vector<double> cell_values;  // values kind

    static FieldProfile constant(double c);
    static FieldProfile cosine(double base, double amplitude, int mode_x, int mode_y = 0);
    static FieldProfile random_uniform(double base, double amplitude);
    static FieldProfile explicit_values(std::vector<double> v);

    /// Supremum of the profile (exact for constant/cosine/values; for
    /// random_uniform the envelope base + |amplitude|).
    double sup() const;
};

Field sample(const FieldProfile& profile, const Grid& grid, std::uint64_t seed = 0);

struct InitialData {
    FieldProfile u0;
    FieldProfile v0;
};

struct HypothesisCheck {
    std::string id;
    bool pass = false;
    bool informational = false;  // reported but not gating
    double witness = 0.0;        // offending value (meaning depends on check)
    long cell = -1;              // offending cell for pointwise checks
    std::string detail;
};

struct HypothesisReport {
    std::vector<HypothesisCheck> checks;
    /// True when every non-informational check passes.
    bool all_pass() const;
    const HypothesisCheck* find(const std::string& id) const;
};

/// Checks H.1, initial-data nonnegativity, H.3, and the pointwise w0 >= 0
/// condition the Lemma's maximum-principle step needs (the infinity-norm form
/// stated by the Lemma is reported informationally). Hypothesis failure is
/// data, never an exception; malformed (non-finite) inputs are input errors.
HypothesisReport validate_hypotheses(const ModelParams& params, const InitialData& init,
                                     const Grid& grid, std::uint64_t seed = 0);

}  // namespace epidiffuse
