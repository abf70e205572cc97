#include "epidiffuse/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace epidiffuse {

Forcing Forcing::constant(double v) {
    if (!std::isfinite(v) || v < 0.0) throw InputError("constant forcing must be finite and >= 0");
    Forcing f;
    f.kind = ForcingKind::constant;
    f.value = v;
    return f;
}

Forcing Forcing::piecewise(std::vector<double> starts, std::vector<double> values) {
    if (starts.empty() || starts.size() != values.size())
        throw InputError("piecewise forcing needs matching nonempty breakpoints and values");
    if (starts.front() != 0.0) throw InputError("piecewise forcing must start at t = 0");
    if (!std::is_sorted(starts.begin(), starts.end()))
        throw InputError("piecewise forcing breakpoints must be increasing");
    Forcing f;
    f.kind = ForcingKind::piecewise_constant;
    f.interval_starts = std::move(starts);
    f.interval_values = std::move(values);
    return f;
}

Forcing Forcing::sinusoidal(double mean, double amplitude, double period) {
    if (!(period > 0.0)) throw InputError("sinusoidal forcing needs period > 0");
    Forcing f;
    f.kind = ForcingKind::sinusoidal_clamped;
    f.mean = mean;
    f.amplitude = amplitude;
    f.period = period;
    return f;
}

double eval_lambda(const Forcing& forcing, double t, double lambda_hat) {
    double raw = 0.0;
    switch (forcing.kind) {
        case ForcingKind::constant:
            raw = forcing.value;
            break;
        case ForcingKind::piecewise_constant: {
            auto it = std::upper_bound(forcing.interval_starts.begin(),
                                       forcing.interval_starts.end(), t);
            const auto idx = static_cast<size_t>(
                std::max<std::ptrdiff_t>(0, it - forcing.interval_starts.begin() - 1));
            raw = forcing.interval_values[idx];
            break;
        }
        case ForcingKind::sinusoidal_clamped:
            raw = forcing.mean +
                  forcing.amplitude * std::sin(2.0 * std::numbers::pi * t / forcing.period);
            break;
    }
    return std::clamp(raw, 0.0, lambda_hat);
}

Nonlinearity Nonlinearity::product_power(double m) {
    if (!(m >= 1.0)) throw InputError("product_power exponent must be >= 1");
    Nonlinearity nl;
    nl.kind = NonlinearityKind::product_power;
    nl.m = m;
    return nl;
}

Nonlinearity Nonlinearity::sub_exponential(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw InputError("sub_exponential exponent must be in (0,1)");
    Nonlinearity nl;
    nl.kind = NonlinearityKind::sub_exponential;
    nl.alpha = alpha;
    return nl;
}

Nonlinearity Nonlinearity::exponential_violator() {
    Nonlinearity nl;
    nl.kind = NonlinearityKind::exponential_violator;
    return nl;
}

double eval_f(const Nonlinearity& nl, double u, double v) {
    if (u < 0.0 || v < 0.0) throw std::domain_error("eval_f requires u >= 0 and v >= 0");
    if (u == 0.0) return 0.0;  // exact, even where e^v would overflow
    switch (nl.kind) {
        case NonlinearityKind::product_power:
            return u * std::pow(v, nl.m);
        case NonlinearityKind::sub_exponential:
            return u * std::expm1(std::pow(v, nl.alpha));
        case NonlinearityKind::exponential_violator:
            return u * std::expm1(v);
    }
    return 0.0;
}

Array eval_f(const Nonlinearity& nl, const Array& u, const Array& v) {
    const Array zero = Array::Zero(u.size());
    switch (nl.kind) {
        case NonlinearityKind::product_power:
            if (nl.m == 1.0) return u * v;
            return (u > 0.0).select(u * v.pow(nl.m), zero);
        case NonlinearityKind::sub_exponential:
            return (u > 0.0).select(u * (v.pow(nl.alpha).exp() - 1.0), zero);
        case NonlinearityKind::exponential_violator:
            return (u > 0.0).select(u * (v.exp() - 1.0), zero);
    }
    return zero;
}

double growth_ratio(const Nonlinearity& nl, double u_probe, double v) {
    if (!(v > 0.0)) throw std::domain_error("growth_ratio requires v > 0");
    return std::log1p(eval_f(nl, u_probe, v)) / v;
}

FieldProfile FieldProfile::constant(double c) {
    FieldProfile p;
    p.kind = ProfileKind::constant;
    p.base = c;
    return p;
}

FieldProfile FieldProfile::cosine(double base, double amplitude, int mode_x, int mode_y) {
    if (mode_x < 0 || mode_y < 0) throw InputError("cosine profile modes must be >= 0");
    FieldProfile p;
    p.kind = ProfileKind::cosine;
    p.base = base;
    p.amplitude = amplitude;
    p.modes = {mode_x, mode_y};
    return p;
}

FieldProfile FieldProfile::random_uniform(double base, double amplitude) {
    FieldProfile p;
    p.kind = ProfileKind::random_uniform;
    p.base = base;
    p.amplitude = amplitude;
    return p;
}

FieldProfile FieldProfile::explicit_values(std::vector<double> v) {
    FieldProfile p;
    p.kind = ProfileKind::values;
    p.cell_values = std::move(v);
    return p;
}

double FieldProfile::sup() const {
    switch (kind) {
        case ProfileKind::constant:
            return base;
        case ProfileKind::cosine:
        case ProfileKind::random_uniform:
            return base + std::abs(amplitude);
        case ProfileKind::values:
            return cell_values.empty()
                       ? 0.0
                       : *std::max_element(cell_values.begin(), cell_values.end());
    }
    return 0.0;
}

Field sample(const FieldProfile& profile, const Grid& grid, std::uint64_t seed) {
    const int n = grid.total_cells();
    Field f{grid, Array(n)};
    switch (profile.kind) {
        case ProfileKind::constant:
            f.values.setConstant(profile.base);
            break;
        case ProfileKind::cosine: {
            const int ny = grid.dim == 2 ? grid.cells[1] : 1;
            for (int iy = 0; iy < ny; ++iy) {
                double cy = 1.0;
                if (grid.dim == 2 && profile.modes[1] > 0)
                    cy = std::cos(profile.modes[1] * std::numbers::pi * grid.y_center(iy) /
                                  grid.extent[1]);
                for (int ix = 0; ix < grid.cells[0]; ++ix) {
                    const double cx = std::cos(profile.modes[0] * std::numbers::pi *
                                               grid.x_center(ix) / grid.extent[0]);
                    f.values[grid.index(ix, iy)] = profile.base + profile.amplitude * cx * cy;
                }
            }
            break;
        }
        case ProfileKind::random_uniform: {
            std::mt19937_64 rng(seed);
            std::uniform_real_distribution<double> dist(-1.0, 1.0);
            for (int i = 0; i < n; ++i) f.values[i] = profile.base + profile.amplitude * dist(rng);
            break;
        }
        case ProfileKind::values:
            if (static_cast<int>(profile.cell_values.size()) != n)
                throw InputError("explicit initial values: expected " + std::to_string(n) +
                                 " cells, got " + std::to_string(profile.cell_values.size()));
            for (int i = 0; i < n; ++i) f.values[i] = profile.cell_values[i];
            break;
    }
    return f;
}

bool HypothesisReport::all_pass() const {
    for (const auto& c : checks)
        if (!c.informational && !c.pass) return false;
    return true;
}

const HypothesisCheck* HypothesisReport::find(const std::string& id) const {
    for (const auto& c : checks)
        if (c.id == id) return &c;
    return nullptr;
}

HypothesisReport validate_hypotheses(const ModelParams& params, const InitialData& init,
                                     const Grid& grid, std::uint64_t seed) {
    for (double x : {params.a, params.b, params.d, params.Lambda, params.mu, params.lambda_hat})
        if (!std::isfinite(x)) throw InputError("model parameters must be finite");

    const Field u0 = sample(init.u0, grid, seed);
    const Field v0 = sample(init.v0, grid, seed + 1);
    if (long c = first_non_finite(u0); c >= 0)
        throw InputError("u0 is non-finite at cell " + std::to_string(c));
    if (long c = first_non_finite(v0); c >= 0)
        throw InputError("v0 is non-finite at cell " + std::to_string(c));

    HypothesisReport rep;
    auto add = [&rep](std::string id, bool pass, double witness, std::string detail,
                      long cell = -1, bool informational = false) {
        rep.checks.push_back(
            {std::move(id), pass, informational, witness, cell, std::move(detail)});
    };

    add("H1.a_pos", params.a > 0.0, params.a, "a > 0");
    add("H1.b_pos", params.b > 0.0, params.b, "b > 0");
    add("H1.diffusion_gap", params.d - params.a >= params.b, params.d - params.a,
        "d - a >= b (witness is d - a)");
    add("H1.mu_pos", params.mu > 0.0, params.mu, "mu > 0");
    add("H1.Lambda_nonneg", params.Lambda >= 0.0, params.Lambda, "Lambda >= 0");
    add("lambda_hat_nonneg", params.lambda_hat >= 0.0, params.lambda_hat, "lambda_hat >= 0");

    const auto [u0_min, u0_max] = extrema(u0);
    const auto [v0_min, v0_max] = extrema(v0);
    {
        long cell = -1;
        if (u0_min < 0.0)
            for (long i = 0; i < u0.values.size(); ++i)
                if (u0.values[i] == u0_min) { cell = i; break; }
        add("init.u0_nonneg", u0_min >= 0.0, u0_min, "u0 >= 0 everywhere", cell);
    }
    {
        long cell = -1;
        if (v0_min < 0.0)
            for (long i = 0; i < v0.values.size(); ++i)
                if (v0.values[i] == v0_min) { cell = i; break; }
        add("init.v0_nonneg", v0_min >= 0.0, v0_min, "v0 >= 0 everywhere", cell);
    }

    // H.3 and the Lemma conditions need Lambda/mu and b/(d-a).
    const bool ratio_ok = params.mu > 0.0;
    const bool transform_ok = params.d > params.a && params.mu > 0.0;
    if (ratio_ok) {
        const double cap = params.Lambda / params.mu;
        add("H3.u0_sup_bound", u0_max <= cap, u0_max,
            "||u0||_inf <= Lambda/mu = " + std::to_string(cap));
    } else {
        add("H3.u0_sup_bound", false, params.mu, "not evaluable: mu = 0");
    }
    if (transform_ok) {
        const double coeff = params.b / (params.d - params.a);
        const double cap = params.Lambda / params.mu;
        double w0_min = 0.0;
        long w0_cell = -1;
        for (long i = 0; i < u0.values.size(); ++i) {
            const double w0 = v0.values[i] - coeff * (cap - u0.values[i]);
            if (i == 0 || w0 < w0_min) {
                w0_min = w0;
                w0_cell = i;
            }
        }
        add("lemma.w0_pointwise", w0_min >= 0.0, w0_min,
            "v0 - (b/(d-a))(Lambda/mu - u0) >= 0 pointwise", w0_min < 0.0 ? w0_cell : -1);
        // The Lemma as stated only asks for the weaker infinity-norm form.
        const double inf_bound = coeff * (cap - u0_max);
        add("lemma.v0_infnorm", v0_min >= inf_bound, v0_min,
            "v0 >= (b/(d-a))(Lambda/mu - ||u0||_inf) = " + std::to_string(inf_bound), -1,
            /*informational=*/true);
    } else {
        add("lemma.w0_pointwise", false, params.d - params.a,
            "not evaluable: needs d > a and mu > 0");
    }
    return rep;
}

}  // namespace epidiffuse
