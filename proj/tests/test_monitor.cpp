#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "epidiffuse/monitor.hpp"

#include <cmath>
#include <random>

using namespace epidiffuse;

namespace {

const ModelParams kCanonical{.a = 1.0, .b = 1.0, .d = 2.0, .Lambda = 1.0, .mu = 2.0,
                             .lambda_hat = 1.0};

State uniform_state(double u, double v, int n = 10) {
    const Grid g = Grid::line(1.0, n);
    return {0.0, constant_field(g, u), constant_field(g, v)};
}

std::vector<MonitorSample> samples_from(const std::vector<double>& ts,
                                        const std::vector<double>& js) {
    std::vector<MonitorSample> out;
    for (size_t i = 0; i < ts.size(); ++i) {
        MonitorSample m;
        m.t = ts[i];
        m.J = js[i];
        out.push_back(m);
    }
    return out;
}

}  // namespace

TEST_CASE("lyapunov_J: closed-form examples on measure-1 domains") {
    CHECK(lyapunov_J(uniform_state(0.0, 0.0), 0.5, 4.0 / 11.0) ==
          doctest::Approx(1.5).epsilon(1e-14));
    CHECK(lyapunov_J(uniform_state(1.0, 0.0), 0.5, 4.0 / 11.0) ==
          doctest::Approx(2.5).epsilon(1e-14));
    CHECK(lyapunov_J(uniform_state(0.0, 1.0), 0.5, 4.0 / 11.0) ==
          doctest::Approx(1.5 * std::exp(4.0 / 11.0)).epsilon(1e-14));
}

TEST_CASE("lyapunov_J: overflow of e^{eps v} is an integrity error naming max v") {
    State s = uniform_state(0.2, 1.0);
    s.v.values[3] = 3000.0;  // eps * v ~ 1090
    CHECK_THROWS_AS(lyapunov_J(s, 0.5, 4.0 / 11.0), IntegrityError);
    try {
        lyapunov_J(s, 0.5, 4.0 / 11.0);
    } catch (const IntegrityError& e) {
        CHECK(std::string(e.what()).find("3000") != std::string::npos);
    }
}

TEST_CASE("lyapunov_J is strictly monotone in every cell of v") {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> dist(0.0, 2.0);
    const Grid g = Grid::line(1.0, 16);
    State s{0.0, {g, Array(16)}, {g, Array(16)}};
    for (int i = 0; i < 16; ++i) {
        s.u.values[i] = dist(rng);
        s.v.values[i] = dist(rng);
    }
    const double base = lyapunov_J(s, 0.5, 0.3);
    for (int i = 0; i < 16; ++i) {
        State bumped = s;
        bumped.v.values[i] += 0.1;
        CHECK(lyapunov_J(bumped, 0.5, 0.3) > base);
    }
}

TEST_CASE("lyapunov_J lower bound (1 + delta)|Omega| on nonnegative states") {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> dist(0.0, 3.0);
    for (int trial = 0; trial < 50; ++trial) {
        const Grid g = trial % 2 ? Grid::line(2.0, 20) : Grid::rect(1.0, 1.5, 6, 8);
        State s{0.0, {g, Array(g.total_cells())}, {g, Array(g.total_cells())}};
        for (int i = 0; i < g.total_cells(); ++i) {
            s.u.values[i] = dist(rng);
            s.v.values[i] = dist(rng);
        }
        const double delta = 0.1 + 0.4 * dist(rng);
        CHECK(lyapunov_J(s, delta, 0.2) >= (1.0 + delta) * g.measure - 1e-12);
    }
}

TEST_CASE("check_dissipation: samples of the exact decay ODE produce zero violations") {
    // J' = -mu/2 J + gamma with J0 = 10, mu = 2, gamma = 2.75; sample spacing
    // equal to the step budget dt = 1e-3, h = 0.1.
    const double mu = 2.0, gamma = 2.75, J0 = 10.0, dt = 1e-3, h = 0.1;
    std::vector<double> ts, js;
    const double floor = 2.0 * gamma / mu;
    for (int k = 0; k <= 1000; ++k) {
        ts.push_back(k * dt);
        js.push_back((J0 - floor) * std::exp(-mu * ts.back() / 2.0) + floor);
    }
    const auto samples = samples_from(ts, js);
    const double tol_scale = 1.0 * (dt + h * h);
    CHECK(check_dissipation(samples, mu, gamma, tol_scale).empty());
}

TEST_CASE("check_dissipation: the equilibrium J = 2 gamma / mu sits exactly on the bound") {
    std::vector<double> ts, js;
    for (int k = 0; k <= 100; ++k) {
        ts.push_back(0.01 * k);
        js.push_back(2.75);  // 2*gamma/mu with gamma = 2.75, mu = 2
    }
    CHECK(check_dissipation(samples_from(ts, js), 2.0, 2.75, 1e-4).empty());
}

TEST_CASE("check_dissipation: growing J under gamma = 0 violates at every interval") {
    std::vector<double> ts, js;
    for (int k = 0; k < 10; ++k) {
        ts.push_back(static_cast<double>(k));
        js.push_back(1.0 * (1 + k));
    }
    const auto v = check_dissipation(samples_from(ts, js), 2.0, 0.0, 1e-3);
    CHECK(v.size() == 9);
    for (const auto& viol : v) {
        CHECK(viol.id == "dissipation");
        CHECK(viol.witness > viol.tol);
    }
}

TEST_CASE("check_dissipation rejects non-monotone sample times") {
    auto samples = samples_from({0.0, 0.1, 0.1}, {1.0, 1.0, 1.0});
    CHECK_THROWS_AS(check_dissipation(samples, 1.0, 0.0, 1e-3), InputError);
    CHECK_THROWS_AS(check_dissipation(samples_from({0.0}, {1.0}), 1.0, 0.0, 1e-3), InputError);
}

TEST_CASE("decay_envelope: examples") {
    CHECK(decay_envelope(10.0, 2.0, 2.75, 0.0) == doctest::Approx(10.0));
    CHECK(decay_envelope(10.0, 2.0, 2.75, 1e3) == doctest::Approx(2.75));
    CHECK(decay_envelope(10.0, 2.0, 2.75, 1.0) ==
          doctest::Approx(2.75 + 7.25 * std::exp(-1.0)).epsilon(1e-14));
    CHECK_THROWS_AS(decay_envelope(10.0, 0.0, 1.0, 1.0), HypothesisError);
    CHECK_THROWS_AS(decay_envelope(10.0, 2.0, 1.0, -1.0), InputError);
}

TEST_CASE("check_envelope flags only samples above the envelope") {
    const double mu = 2.0, gamma = 2.75, J0 = 5.0;
    std::vector<double> ts{0.0, 0.5, 1.0}, js;
    for (double t : ts) js.push_back(decay_envelope(J0, mu, gamma, t) - 0.01);
    CHECK(check_envelope(samples_from(ts, js), J0, mu, gamma, 1e-6).empty());
    js[1] = decay_envelope(J0, mu, gamma, 0.5) + 0.02;
    const auto v = check_envelope(samples_from(ts, js), J0, mu, gamma, 1e-6);
    REQUIRE(v.size() == 1);
    CHECK(v[0].id == "envelope");
    CHECK(v[0].t == 0.5);
    CHECK(v[0].witness == doctest::Approx(0.02).epsilon(1e-6));
}

TEST_CASE("check_invariants: interior state is clean") {
    State s = uniform_state(0.5, 0.0);  // u = Lambda/mu, v = 0, w0 = 0
    CHECK(check_invariants(s, kCanonical, 0.5, 1e-6).empty());
}

TEST_CASE("check_invariants: fabricated breaches are flagged with witnesses") {
    State s = uniform_state(0.3, 1.0);
    s.u.values[4] = 1.5;  // K + 1 for K = 0.5
    auto v = check_invariants(s, kCanonical, 0.5, 1e-6);
    REQUIRE(v.size() == 1);
    CHECK(v[0].id == "u_K_bound");
    CHECK(v[0].witness == doctest::Approx(1.0));

    State neg = uniform_state(0.3, 1.0);
    neg.v.values[2] = -2e-6;  // -2*tol
    v = check_invariants(neg, kCanonical, 0.5, 1e-6);
    bool saw_positivity = false;
    for (const auto& viol : v) saw_positivity |= viol.id == "v_nonneg";
    CHECK(saw_positivity);

    State lm = uniform_state(0.2, 0.0);  // v = 0 < (b/(d-a))(0.5 - 0.2) = 0.3
    v = check_invariants(lm, kCanonical, 0.5, 1e-6);
    bool saw_lemma = false;
    for (const auto& viol : v)
        if (viol.id == "lemma_margin") {
            saw_lemma = true;
            CHECK(viol.witness == doctest::Approx(0.3));
        }
    CHECK(saw_lemma);
}

TEST_CASE("every violation's witness exceeds its tolerance") {
    // the MonitorReport invariant: no spurious entries
    State s = uniform_state(0.3, 1.0);
    s.u.values[0] = -5e-7;  // within tol = 1e-6: not a violation
    CHECK(check_invariants(s, kCanonical, 0.5, 1e-6).empty());
    s.u.values[0] = -2e-6;
    const auto v = check_invariants(s, kCanonical, 0.5, 1e-6);
    REQUIRE(!v.empty());
    for (const auto& viol : v) CHECK(viol.witness > viol.tol);
}
