#pragma once

#include "epidiffuse/solver.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace epidiffuse {

struct MonitorSettings {
    double c_tol = 1.0;          // dissipation tolerance scale factor
    double invariant_tol = kInvariantTolDefault;
    double envelope_rel_tol = 1e-6;  // envelope slack as a fraction of J(0)
    bool track_w = false;            // add the parallel e^{eps w} series
};

/// Everything one run needs, as parsed from a flat `key = value` config file.
struct SimulationConfig {
    ModelParams params;
    Forcing forcing;
    Nonlinearity nonlinearity;
    InitialData initial;
    Grid grid;
    StepControl control;
    std::optional<double> delta_override;
    std::optional<double> epsilon_override;
    MonitorSettings monitor;
    std::filesystem::path output_dir = "out";
    int snapshot_every = 0;  // samples between field snapshots; 0 = first/last only
    std::uint64_t seed = 0;
    bool relaxed = false;  // acknowledgment that hypothesis failures are intended

    /// Keys that were absent and fell back to defaults (echoed to the run log).
    std::vector<std::string> defaulted;
};

/// Parses and validates a config file. Strict-mode configs must pass
/// validate_hypotheses unless `relaxed` (file key or CLI flag) acknowledges
/// the failure. Errors carry file:line positions.
SimulationConfig load_config(const std::filesystem::path& path, bool force_relaxed = false);

/// Parses config text (same grammar; `name` only labels error messages).
SimulationConfig parse_config(const std::string& text, const std::string& name = "<config>",
                              bool force_relaxed = false);

/// Serializes a config so that load_config(write_config(c)) reproduces it.
std::string write_config(const SimulationConfig& config);

/// Derived constants for a config (u0 sup and |Omega| from its grid/profile).
DerivedConstants config_constants(const SimulationConfig& config);

/// The thread cap from EPIDIFFUSE_THREADS (0 = serial, the default).
int thread_cap();

}  // namespace epidiffuse
