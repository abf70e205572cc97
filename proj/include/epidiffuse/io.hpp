#pragma once

#include "epidiffuse/config.hpp"
#include "epidiffuse/solver.hpp"

#include <filesystem>
#include <string>

namespace epidiffuse {

/// I/O failure while persisting results (distinct exit path from bad input).
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Writes content to `path` atomically (temp file in the same directory,
/// then rename) so an aborted run never leaves a truncated file.
void atomic_write(const std::filesystem::path& path, const std::string& content);

std::string format_double(double x);  // shortest round-trippable decimal

/// timeseries.csv: frozen column order
/// t,J,dJdt_estimate,rhs_34,min_u,max_u,min_v,lemma_margin,mass[,J_w]
std::string timeseries_csv(const MonitorReport& report, bool with_jw);

/// snapshot CSV: one row per cell — index,x[,y],u,v.
std::string snapshot_csv(const State& state);

/// single-field CSV: one row per cell — index,x[,y],value.
std::string field_csv(const Field& field);

std::string report_json(const SimulationConfig& config, const RunResult& result,
                        const AdmissibilityReport& adm, int exit_code);

std::string admissibility_json(const AdmissibilityReport& report);

std::string hypothesis_json(const HypothesisReport& report);

}  // namespace epidiffuse
