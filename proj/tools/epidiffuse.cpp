#include "epidiffuse/convergence.hpp"
#include "epidiffuse/io.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <iostream>

namespace {

using namespace epidiffuse;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitViolations = 2;
constexpr int kExitIntegrity = 3;
constexpr int kExitIo = 4;

struct CommonOpts {
    std::string config_path;
    std::string output_override;
    bool relaxed = false;
    bool as_json = false;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--config", opts.config_path, "scenario config file")->required();
    cmd->add_flag("--relaxed", opts.relaxed, "acknowledge hypothesis failures (relaxed mode)");
    cmd->add_option("--output", opts.output_override, "output directory (overrides output.dir)");
    cmd->add_flag("--json", opts.as_json, "machine-readable stdout");
}

SimulationConfig load(const CommonOpts& opts) {
    SimulationConfig cfg = load_config(opts.config_path, opts.relaxed);
    if (!opts.output_override.empty()) cfg.output_dir = opts.output_override;
    return cfg;
}

void echo_defaults(const SimulationConfig& cfg) {
    for (const auto& line : cfg.defaulted) std::cout << "default: " << line << "\n";
}

void print_constants(const DerivedConstants& c) {
    std::printf("K         = %.12g\n", c.K);
    std::printf("delta_max = %.12g\n", c.delta_max);
    std::printf("delta     = %.12g\n", c.delta);
    std::printf("eps_max   = %.12g\n", c.epsilon_max);
    std::printf("epsilon   = %.12g\n", c.epsilon);
    std::printf("gamma     = %.12g\n", c.gamma);
}

std::string snapshot_name(double t) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "snapshot_%g.csv", t);
    return buf;
}

int cmd_run(const CommonOpts& opts) {
    const SimulationConfig cfg = load(opts);
    {
        std::error_code ec;
        std::filesystem::create_directories(cfg.output_dir, ec);
        if (ec) throw IoError("cannot create output directory '" + cfg.output_dir.string() + "'");
    }
    if (!opts.as_json) {
        echo_defaults(cfg);
        std::cout << "scenario: " << opts.config_path << (cfg.relaxed ? " (relaxed)" : "") << "\n";
        if (!cfg.nonlinearity.satisfies_H2())
            std::cout << "warning: nonlinearity declares satisfies_H2 = false; the decay "
                         "estimate is not guaranteed\n";
    }

    const DerivedConstants cst = config_constants(cfg);
    const AdmissibilityReport adm =
        verify_admissible(cfg.params, cst.K, cst.delta, cst.epsilon, 1001);
    if (!adm.admissible()) {
        atomic_write(cfg.output_dir / "admissibility.json", admissibility_json(adm));
        if (opts.as_json) {
            std::cout << admissibility_json(adm);
        } else {
            print_constants(cst);
            std::cout << "constants are not admissible (see admissibility.json); refusing to run\n";
            std::printf("  max_D = %.6g, lhs_36 = %.6g (bound -mu/2), lhs_37 = %.6g\n", adm.max_D,
                        adm.lhs_36, adm.lhs_37);
        }
        return kExitViolations;
    }

    const SampleSink sink = [&](const State& s, size_t idx) {
        if (cfg.snapshot_every > 0 && idx % static_cast<size_t>(cfg.snapshot_every) == 0)
            atomic_write(cfg.output_dir / snapshot_name(s.t), snapshot_csv(s));
    };
    const RunResult res = run(cfg, sink);

    int code = kExitOk;
    if (res.integrity_error)
        code = kExitIntegrity;
    else if (!res.report.violations.empty())
        code = kExitViolations;

    atomic_write(cfg.output_dir / "timeseries.csv",
                 timeseries_csv(res.report, cfg.monitor.track_w));
    atomic_write(cfg.output_dir / snapshot_name(res.initial_state.t),
                 snapshot_csv(res.initial_state));
    atomic_write(cfg.output_dir / snapshot_name(res.final_state.t),
                 snapshot_csv(res.final_state));
    atomic_write(cfg.output_dir / "report.json", report_json(cfg, res, adm, code));
    atomic_write(cfg.output_dir / "admissibility.json", admissibility_json(adm));

    if (opts.as_json) {
        std::cout << report_json(cfg, res, adm, code);
        return code;
    }
    print_constants(res.constants);
    std::printf("dt = %.6g, steps = %lld, samples = %zu\n", res.dt, res.steps_taken,
                res.report.samples.size());
    if (res.stats.reaction_clamps > 0)
        std::printf("reaction inputs clamped at 0 in %lld cell evaluations\n",
                    res.stats.reaction_clamps);
    for (const auto& m : res.report.disabled_monitors) std::cout << "disabled: " << m << "\n";
    if (res.integrity_error) {
        std::cout << "INTEGRITY ERROR at step " << res.integrity_step << ": "
                  << res.integrity_message << "\n";
    }
    std::printf("violations: %zu\n", res.report.violations.size());
    for (size_t i = 0; i < res.report.violations.size() && i < 10; ++i) {
        const auto& v = res.report.violations[i];
        std::printf("  %-16s t=%-12.6g witness=%.6g tol=%.6g\n", v.id.c_str(), v.t, v.witness,
                    v.tol);
    }
    std::cout << "wrote " << (cfg.output_dir / "timeseries.csv").string() << ", report.json\n";
    std::cout << (code == kExitOk ? "RESULT: pass" : "RESULT: fail") << " (exit " << code << ")\n";
    return code;
}

int cmd_check_constants(const CommonOpts& opts, int n_samples) {
    const SimulationConfig cfg = load(opts);
    const DerivedConstants cst = config_constants(cfg);
    const AdmissibilityReport adm =
        verify_admissible(cfg.params, cst.K, cst.delta, cst.epsilon, n_samples);

    json j;
    j["constants"] = {{"K", cst.K},           {"delta", cst.delta},
                      {"epsilon", cst.epsilon}, {"gamma", cst.gamma},
                      {"delta_max", cst.delta_max}, {"epsilon_max", cst.epsilon_max}};
    atomic_write(cfg.output_dir / "admissibility.json", admissibility_json(adm));

    if (opts.as_json) {
        json out = json::parse(admissibility_json(adm));
        out["gamma"] = cst.gamma;
        std::cout << out.dump(2) << "\n";
    } else {
        echo_defaults(cfg);
        print_constants(cst);
        std::printf("max D on [0, K]  = %.12g at u = %.6g (%s)\n", adm.max_D, adm.u_at_max_D,
                    adm.pass_D ? "pass" : "FAIL");
        std::printf("max D on [0, 2K] = %.12g (informational)\n", adm.max_D_2K);
        std::printf("lhs_36 = %.12g vs -mu/2 = %.12g (%s)\n", adm.lhs_36, -cfg.params.mu / 2.0,
                    adm.pass_36 ? "pass" : "FAIL");
        std::printf("lhs_37 = %.12g vs 0 (%s)\n", adm.lhs_37, adm.pass_37 ? "pass" : "FAIL");
        std::printf("delta in (0, delta_max]: %s; epsilon in (0, eps_max]: %s\n",
                    adm.delta_in_range ? "yes" : "NO", adm.eps_in_range ? "yes" : "NO");
        std::cout << (adm.admissible() ? "ADMISSIBLE" : "NOT ADMISSIBLE") << "\n";
    }
    return adm.admissible() ? kExitOk : kExitViolations;
}

int cmd_convergence(const CommonOpts& opts, int levels) {
    const SimulationConfig cfg = load(opts);
    const ConvergenceStudy study = run_convergence(cfg, levels);

    json j;
    j["temporal"] = {{"t_fix", study.t_fix_temporal},
                     {"dts", study.dts},
                     {"errors", study.temporal_errors},
                     {"orders", study.temporal_orders},
                     {"observed_order", study.observed_temporal_order}};
    j["spatial"] = {{"t_fix", study.t_fix_spatial},
                    {"cells", study.cells},
                    {"errors", study.spatial_errors},
                    {"orders", study.spatial_orders},
                    {"observed_order", study.observed_spatial_order}};
    atomic_write(cfg.output_dir / "convergence.json", j.dump(2) + "\n");

    if (opts.as_json) {
        std::cout << j.dump(2) << "\n";
    } else {
        echo_defaults(cfg);
        std::cout << "temporal refinement (t = " << study.t_fix_temporal << "):\n";
        for (size_t l = 0; l < study.dts.size(); ++l)
            std::printf("  dt = %-12.6g err = %-14.6g order = %s\n", study.dts[l],
                        study.temporal_errors[l],
                        l ? std::to_string(study.temporal_orders[l - 1]).c_str() : "-");
        std::cout << "spatial refinement (t = " << study.t_fix_spatial << ", dt ~ h^2):\n";
        for (size_t l = 0; l < study.cells.size(); ++l)
            std::printf("  N = %-6d     err = %-14.6g order = %s\n", study.cells[l],
                        study.spatial_errors[l],
                        l ? std::to_string(study.spatial_orders[l - 1]).c_str() : "-");
        std::printf("observed orders: temporal %.4f, spatial %.4f\n",
                    study.observed_temporal_order, study.observed_spatial_order);
    }
    return kExitOk;
}

int cmd_scan_discriminant(const CommonOpts& opts, int n_samples, double u_max_opt) {
    const SimulationConfig cfg = load(opts);
    const DerivedConstants cst = config_constants(cfg);
    const double u_max = u_max_opt > 0.0 ? u_max_opt : 2.0 * cst.K;

    std::string csv = "u,D\n";
    double max_K = -1e300, max_full = -1e300;
    for (int i = 0; i < n_samples; ++i) {
        const double u = n_samples == 1 ? 0.0 : u_max * i / (n_samples - 1);
        const double D = discriminant(cfg.params, cst.delta, cst.epsilon, u);
        csv += format_double(u) + "," + format_double(D) + "\n";
        max_full = std::max(max_full, D);
        if (u <= cst.K + 1e-15) max_K = std::max(max_K, D);
    }
    atomic_write(cfg.output_dir / "discriminant.csv", csv);

    const bool pass = max_K <= kAdmissibilitySlack;
    if (opts.as_json) {
        json j = {{"delta", cst.delta}, {"epsilon", cst.epsilon},   {"K", cst.K},
                  {"u_max", u_max},     {"n_samples", n_samples},   {"max_D_on_K", max_K},
                  {"max_D_full", max_full}, {"pass", pass}};
        std::cout << j.dump(2) << "\n";
    } else {
        echo_defaults(cfg);
        std::printf("delta = %.12g, epsilon = %.12g, K = %.6g\n", cst.delta, cst.epsilon, cst.K);
        std::printf("max D on [0, K]      = %.12g (%s)\n", max_K, pass ? "pass" : "FAIL");
        std::printf("max D on [0, %.4g] = %.12g\n", u_max, max_full);
        std::cout << "wrote " << (cfg.output_dir / "discriminant.csv").string() << "\n";
    }
    return pass ? kExitOk : kExitViolations;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"epidiffuse: cross-diffusion epidemic reaction-diffusion simulator "
                 "and bound-verification harness"};
    app.require_subcommand(1);

    CommonOpts run_opts, cc_opts, conv_opts, scan_opts;
    int cc_samples = 1001, scan_samples = 1001, levels = 3;
    double scan_umax = 0.0;

    CLI::App* c_run = app.add_subcommand("run", "simulate a scenario and monitor every bound");
    add_common(c_run, run_opts);
    CLI::App* c_cc = app.add_subcommand("check-constants",
                                        "derive K, delta, epsilon, gamma and verify admissibility");
    add_common(c_cc, cc_opts);
    c_cc->add_option("--samples", cc_samples, "sample count for the discriminant scan")
        ->check(CLI::PositiveNumber);
    CLI::App* c_conv =
        app.add_subcommand("convergence", "temporal and spatial refinement study");
    add_common(c_conv, conv_opts);
    c_conv->add_option("--levels", levels, "number of refinement levels (>= 2)");
    CLI::App* c_scan = app.add_subcommand("scan-discriminant",
                                          "tabulate the quadratic-form discriminant D(u)");
    add_common(c_scan, scan_opts);
    c_scan->add_option("--samples", scan_samples, "sample count")->check(CLI::PositiveNumber);
    c_scan->add_option("--umax", scan_umax, "scan upper limit (default 2K)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (c_run->parsed()) return cmd_run(run_opts);
        if (c_cc->parsed()) return cmd_check_constants(cc_opts, cc_samples);
        if (c_conv->parsed()) return cmd_convergence(conv_opts, levels);
        if (c_scan->parsed()) return cmd_scan_discriminant(scan_opts, scan_samples, scan_umax);
    } catch (const IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return kExitIo;
    } catch (const InputError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInput;
    } catch (const IntegrityError& e) {
        std::cerr << "integrity error: " << e.what() << "\n";
        return kExitIntegrity;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }
    return kExitInput;
}
