#include "epidiffuse/io.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>

namespace epidiffuse {

using nlohmann::json;

void atomic_write(const std::filesystem::path& path, const std::string& content) {
    std::error_code ec;
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path(), ec);
        if (ec) throw IoError("cannot create directory '" + path.parent_path().string() + "'");
    }
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open '" + tmp.string() + "' for writing");
        out << content;
        out.flush();
        if (!out) throw IoError("write failed for '" + tmp.string() + "'");
    }
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw IoError("cannot rename '" + tmp.string() + "' to '" + path.string() + "'");
    }
}

std::string format_double(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

std::string timeseries_csv(const MonitorReport& report, bool with_jw) {
    std::string out = "t,J,dJdt_estimate,rhs_34,min_u,max_u,min_v,lemma_margin,mass";
    if (with_jw) out += ",J_w";
    out += "\n";
    for (const auto& s : report.samples) {
        out += format_double(s.t);
        for (double v : {s.J, s.dJdt_estimate, s.rhs_34, s.min_u, s.max_u, s.min_v,
                         s.lemma_margin, s.mass})
            out += "," + format_double(v);
        if (with_jw) out += "," + format_double(s.J_w);
        out += "\n";
    }
    return out;
}

std::string snapshot_csv(const State& state) {
    const Grid& g = state.u.grid;
    std::string out = g.dim == 2 ? "index,x,y,u,v\n" : "index,x,u,v\n";
    const int ny = g.dim == 2 ? g.cells[1] : 1;
    for (int iy = 0; iy < ny; ++iy) {
        for (int ix = 0; ix < g.cells[0]; ++ix) {
            const int i = g.index(ix, iy);
            out += std::to_string(i) + "," + format_double(g.x_center(ix));
            if (g.dim == 2) out += "," + format_double(g.y_center(iy));
            out += "," + format_double(state.u.values[i]);
            out += "," + format_double(state.v.values[i]);
            out += "\n";
        }
    }
    return out;
}

std::string field_csv(const Field& field) {
    const Grid& g = field.grid;
    std::string out = g.dim == 2 ? "index,x,y,value\n" : "index,x,value\n";
    const int ny = g.dim == 2 ? g.cells[1] : 1;
    for (int iy = 0; iy < ny; ++iy) {
        for (int ix = 0; ix < g.cells[0]; ++ix) {
            const int i = g.index(ix, iy);
            out += std::to_string(i) + "," + format_double(g.x_center(ix));
            if (g.dim == 2) out += "," + format_double(g.y_center(iy));
            out += "," + format_double(field.values[i]) + "\n";
        }
    }
    return out;
}

namespace {

json violations_json(const std::vector<Violation>& violations) {
    json arr = json::array();
    for (const auto& v : violations)
        arr.push_back({{"id", v.id}, {"t", v.t}, {"witness", v.witness}, {"tol", v.tol}});
    return arr;
}

json admissibility_to_json(const AdmissibilityReport& r) {
    return {
        {"n_samples", r.n_samples},
        {"K", r.K},
        {"delta", r.delta},
        {"epsilon", r.epsilon},
        {"delta_max", r.delta_max},
        {"epsilon_max", r.epsilon_max},
        {"max_D", r.max_D},
        {"u_at_max_D", r.u_at_max_D},
        {"max_D_2K", r.max_D_2K},
        {"lhs_36", r.lhs_36},
        {"lhs_37", r.lhs_37},
        {"pass_D", r.pass_D},
        {"pass_36", r.pass_36},
        {"pass_37", r.pass_37},
        {"delta_in_range", r.delta_in_range},
        {"epsilon_in_range", r.eps_in_range},
        {"admissible", r.admissible()},
    };
}

}  // namespace

std::string report_json(const SimulationConfig& config, const RunResult& result,
                        const AdmissibilityReport& adm, int exit_code) {
    json j;
    j["constants"] = {{"K", result.constants.K},
                      {"delta", result.constants.delta},
                      {"epsilon", result.constants.epsilon},
                      {"gamma", result.constants.gamma},
                      {"delta_max", result.constants.delta_max},
                      {"epsilon_max", result.constants.epsilon_max},
                      {"mu_zero_relaxed", result.constants.mu_zero_relaxed}};
    j["admissibility"] = admissibility_to_json(adm);
    j["run"] = {{"t_end", config.control.t_end},
                {"dt", result.dt},
                {"steps", result.steps_taken},
                {"samples", result.report.samples.size()},
                {"path", config.control.path == SolverPath::direct ? "direct" : "transformed"},
                {"reaction_clamps", result.stats.reaction_clamps},
                {"seed", config.seed},
                {"relaxed", config.relaxed}};
    if (result.integrity_error) {
        j["integrity_error"] = {{"message", result.integrity_message},
                                {"step", result.integrity_step}};
    } else {
        j["integrity_error"] = nullptr;
    }
    j["disabled_monitors"] = result.report.disabled_monitors;
    j["violations"] = violations_json(result.report.violations);
    if (!result.report.samples.empty()) {
        const auto& last = result.report.samples.back();
        j["final"] = {{"t", last.t},      {"J", last.J},
                      {"min_u", last.min_u}, {"max_u", last.max_u},
                      {"min_v", last.min_v}, {"mass", last.mass}};
    }
    j["exit_code"] = exit_code;
    return j.dump(2) + "\n";
}

std::string admissibility_json(const AdmissibilityReport& report) {
    return admissibility_to_json(report).dump(2) + "\n";
}

std::string hypothesis_json(const HypothesisReport& report) {
    json arr = json::array();
    for (const auto& c : report.checks)
        arr.push_back({{"id", c.id},
                       {"pass", c.pass},
                       {"informational", c.informational},
                       {"witness", c.witness},
                       {"cell", c.cell},
                       {"detail", c.detail}});
    json j;
    j["checks"] = arr;
    j["all_pass"] = report.all_pass();
    return j.dump(2) + "\n";
}

}  // namespace epidiffuse
