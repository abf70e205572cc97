// Acceptance suite: one pass/fail line per criterion, exit code = failures.
//
// usage: acceptance <cli-binary> <configs-dir> <workdir>
//
// Criteria 1, 7, 8a drive the installed CLI (the external contract); the
// simulation-heavy criteria call the library directly, which is the same
// code path `run` uses behind the command line.

#include "epidiffuse/config.hpp"
#include "epidiffuse/convergence.hpp"
#include "epidiffuse/io.hpp"
#include "epidiffuse/solver.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

using namespace epidiffuse;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string g_cli;
fs::path g_configs;
fs::path g_work;

struct CliResult {
    int exit_code = -1;
    std::string out;
};

CliResult run_cli(const std::string& args) {
    const std::string cmd = g_cli + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) throw std::runtime_error("popen failed for: " + cmd);
    CliResult res;
    char buf[4096];
    size_t n;
    while ((n = fread(buf, 1, sizeof(buf), pipe)) > 0) res.out.append(buf, n);
    const int status = pclose(pipe);
    res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return res;
}

int g_failures = 0;

void criterion(int number, const std::string& label,
               const std::function<bool(std::string&)>& body) {
    std::string detail;
    const auto start = std::chrono::steady_clock::now();
    bool ok = false;
    try {
        ok = body(detail);
    } catch (const std::exception& e) {
        detail = std::string("exception: ") + e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s  criterion %d: %s (%.2f s)%s%s\n", ok ? "PASS" : "FAIL", number,
                label.c_str(), secs, detail.empty() ? "" : " -- ", detail.c_str());
    std::fflush(stdout);
    if (!ok) ++g_failures;
}

bool near(double x, double target, double tol) { return std::abs(x - target) <= tol; }

}  // namespace

int main(int argc, char** argv) {
    if (argc < 4) {
        std::cerr << "usage: acceptance <cli-binary> <configs-dir> <workdir>\n";
        return 2;
    }
    g_cli = argv[1];
    g_configs = argv[2];
    g_work = argv[3];
    fs::create_directories(g_work);

    // ----- 1. constants algebra via the CLI ---------------------------------
    criterion(1, "constants algebra: K, delta_max, eps_max, gamma, max D", [](std::string& why) {
        const auto t0 = std::chrono::steady_clock::now();
        const CliResult r = run_cli("check-constants --config " +
                                    (g_configs / "canonical.cfg").string() + " --json --output " +
                                    (g_work / "c1").string());
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (r.exit_code != 0) {
            why = "exit code " + std::to_string(r.exit_code);
            return false;
        }
        const json j = json::parse(r.out);
        bool ok = true;
        ok &= near(j["K"].get<double>(), 0.5, 1e-12);
        ok &= near(j["delta_max"].get<double>(), 0.5, 1e-12);
        ok &= near(j["epsilon_max"].get<double>(), 4.0 / 11.0, 1e-12);
        ok &= near(j["gamma"].get<double>(), 2.75, 1e-12);
        ok &= j["n_samples"].get<int>() == 1001;
        ok &= j["max_D"].get<double>() <= 1e-12;
        if (!ok) why = "reported values off: " + r.out.substr(0, 200);
        if (secs >= 1.0) {
            why += " runtime " + std::to_string(secs) + " s >= 1 s";
            ok = false;
        }
        return ok;
    });

    // ----- 2 + 3. canonical run: invariant region and dissipation -----------
    SimulationConfig canonical = load_config(g_configs / "canonical.cfg");
    canonical.output_dir = g_work / "canonical";
    RunResult canonical_run;

    criterion(2, "invariant region holds along the canonical run (t = 5, N = 200)",
              [&](std::string& why) {
        const auto t0 = std::chrono::steady_clock::now();
        canonical_run = run(canonical);
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (canonical_run.integrity_error) {
            why = "integrity error: " + canonical_run.integrity_message;
            return false;
        }
        const double K = canonical_run.constants.K;
        for (const auto& s : canonical_run.report.samples) {
            if (!(s.min_u >= -1e-8)) { why = "min u " + std::to_string(s.min_u); return false; }
            if (!(s.max_u <= K + 1e-6)) { why = "max u " + std::to_string(s.max_u); return false; }
            if (!(s.min_v >= -1e-8)) { why = "min v " + std::to_string(s.min_v); return false; }
            if (!(s.lemma_margin >= -1e-6)) {
                why = "lemma margin " + std::to_string(s.lemma_margin);
                return false;
            }
        }
        if (secs >= 60.0) { why = "runtime >= 60 s"; return false; }
        return true;
    });

    criterion(3, "Lyapunov dissipation and Gronwall envelope on the canonical run",
              [&](std::string& why) {
        for (const auto& v : canonical_run.report.violations) {
            if (v.id == "dissipation") {
                why = "dissipation violation at t = " + std::to_string(v.t);
                return false;
            }
        }
        const auto& samples = canonical_run.report.samples;
        if (samples.empty()) { why = "no samples"; return false; }
        const double J0 = samples.front().J;
        const double mu = canonical.params.mu;
        const double gamma = canonical_run.constants.gamma;
        for (const auto& s : samples) {
            const double bound = decay_envelope(J0, mu, gamma, s.t) + 1e-6 * J0;
            if (!(s.J <= bound)) {
                why = "J(" + std::to_string(s.t) + ") = " + std::to_string(s.J) + " > " +
                      std::to_string(bound);
                return false;
            }
        }
        return true;
    });

    // ----- 4. uniform boundedness out to t = 50 -----------------------------
    criterion(4, "uniform boundedness proxy (t = 50, N = 100)", [&](std::string& why) {
        SimulationConfig cfg = canonical;
        cfg.grid = Grid::line(1.0, 100);
        cfg.control.t_end = 50.0;
        cfg.control.output_every = 2000;
        cfg.output_dir = g_work / "long";
        const RunResult res = run(cfg);
        if (res.integrity_error) {
            why = "integrity error: " + res.integrity_message;
            return false;
        }
        const double J0 = res.report.samples.front().J;
        const double cap =
            std::max(J0, 2.0 * res.constants.gamma / cfg.params.mu) * (1.0 + 1e-3);
        double supJ = 0.0;
        for (const auto& s : res.report.samples) supJ = std::max(supJ, s.J);
        if (!(supJ <= cap)) {
            why = "sup J " + std::to_string(supJ) + " > " + std::to_string(cap);
            return false;
        }
        return true;
    });

    // ----- 5. direct vs transformed equivalence -----------------------------
    criterion(5, "transform equivalence: max |v_direct - v_transformed| at t = 1",
              [&](std::string& why) {
        SimulationConfig cfg = canonical;
        cfg.control.t_end = 1.0;
        cfg.control.dt = stable_dt(cfg.params, cfg.grid, 0.9, SolverPath::direct);
        cfg.output_dir = g_work / "equiv";

        SimulationConfig direct = cfg;
        direct.control.path = SolverPath::direct;
        SimulationConfig transformed = cfg;
        transformed.control.path = SolverPath::transformed;

        const RunResult r1 = run(direct);
        const RunResult r2 = run(transformed);
        if (r1.integrity_error || r2.integrity_error) { why = "integrity error"; return false; }
        const double diff =
            (r1.final_state.v.values - r2.final_state.v.values).abs().maxCoeff();
        if (!(diff <= 1e-6)) {
            why = "max-norm difference " + std::to_string(diff);
            return false;
        }
        why = "max diff " + std::to_string(diff);
        return true;
    });

    // ----- 6. conservation in the relaxed pure-diffusion scenario -----------
    criterion(6, "mass conservation with Lambda = mu = 0, lambda = 0", [](std::string& why) {
        SimulationConfig cfg = load_config(g_configs / "conservation.cfg");
        cfg.output_dir = g_work / "conservation";
        const RunResult res = run(cfg);
        if (res.integrity_error) { why = "integrity error"; return false; }
        const double m0 = res.report.samples.front().mass;
        double worst = 0.0;
        for (const auto& s : res.report.samples)
            worst = std::max(worst, std::abs(s.mass - m0) / m0);
        if (!(worst <= 1e-10)) {
            why = "relative drift " + std::to_string(worst);
            return false;
        }
        return true;
    });

    // ----- 7. discretization orders via the CLI -----------------------------
    criterion(7, "convergence: temporal order ~ 1, spatial order ~ 2", [](std::string& why) {
        const auto t0 = std::chrono::steady_clock::now();
        const CliResult r = run_cli("convergence --config " +
                                    (g_configs / "convergence.cfg").string() +
                                    " --levels 3 --json --output " + (g_work / "conv").string());
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (r.exit_code != 0) {
            why = "exit code " + std::to_string(r.exit_code) + ": " + r.out.substr(0, 200);
            return false;
        }
        const json j = json::parse(r.out);
        const double ot = j["temporal"]["observed_order"].get<double>();
        const double os = j["spatial"]["observed_order"].get<double>();
        why = "temporal " + std::to_string(ot) + ", spatial " + std::to_string(os);
        if (!(ot >= 0.8 && ot <= 1.2)) return false;
        if (!(os >= 1.8 && os <= 2.2)) return false;
        if (secs >= 300.0) { why += "; runtime >= 5 min"; return false; }
        return true;
    });

    // ----- 8. negative controls ---------------------------------------------
    criterion(8, "negative controls: lhs_37 witness, violator detection, growth ratios",
              [](std::string& why) {
        // (a) epsilon above its ceiling fails check-constants with an lhs_37 witness
        const CliResult r = run_cli("check-constants --config " +
                                    (g_configs / "epsilon_override.cfg").string() +
                                    " --json --output " + (g_work / "c8a").string());
        if (r.exit_code != 2) {
            why = "(a) expected exit 2, got " + std::to_string(r.exit_code);
            return false;
        }
        const json j = json::parse(r.out);
        if (j["pass_37"].get<bool>() || !(j["lhs_37"].get<double>() > 0.0)) {
            why = "(a) missing lhs_37 witness";
            return false;
        }

        // (b) the driven violator fails before t = 10 (exit 2: violations,
        // exit 3: detected integrity/overflow)
        const CliResult rb = run_cli("run --config " + (g_configs / "violator.cfg").string() +
                                     " --json --output " + (g_work / "violator").string());
        if (rb.exit_code != 2 && rb.exit_code != 3) {
            why = "(b) expected exit 2 or 3, got " + std::to_string(rb.exit_code);
            return false;
        }
        const json rep = json::parse(rb.out);
        bool detected = !rep["integrity_error"].is_null();
        double t_detect = 0.0;
        for (const auto& v : rep["violations"])
            if (v["id"] == "dissipation" && v["t"].get<double>() < 10.0) {
                detected = true;
                t_detect = v["t"].get<double>();
                break;
            }
        if (!detected) {
            why = "(b) violator ran clean to t = 10";
            return false;
        }
        if (rep["exit_code"].get<int>() != rb.exit_code) {
            why = "(b) report.json exit_code disagrees with the process exit";
            return false;
        }

        // (c) growth-ratio separation between compliant kinds and the violator
        const double viol = growth_ratio(Nonlinearity::exponential_violator(), 1.0, 200.0);
        const double pp = growth_ratio(Nonlinearity::product_power(1.0), 1.0, 1e4);
        const double se = growth_ratio(Nonlinearity::sub_exponential(0.5), 1.0, 1e4);
        if (!(viol > 0.05 && pp < 0.05 && se < 0.05)) {
            why = "(c) growth ratios: violator " + std::to_string(viol) + ", product " +
                  std::to_string(pp) + ", sub_exponential " + std::to_string(se);
            return false;
        }
        why = "violator flagged at t = " + std::to_string(t_detect) + ", ratios " +
              std::to_string(viol) + " / " + std::to_string(pp) + " / " + std::to_string(se);
        return true;
    });

    std::printf("%d of 8 criteria passed\n", 8 - g_failures);
    return g_failures;
}
