#include "epidiffuse/config.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace epidiffuse {

namespace {

struct RawEntry {
    std::string value;
    int line = 0;
    bool used = false;
};

std::string trim(const std::string& s) {
    size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

[[noreturn]] void fail(const std::string& name, int line, const std::string& msg) {
    throw InputError(name + ":" + std::to_string(line) + ": " + msg);
}

class KeyTable {
public:
    KeyTable(std::string name, std::map<std::string, RawEntry> entries,
             std::vector<std::string>* defaulted)
        : name_(std::move(name)), entries_(std::move(entries)), defaulted_(defaulted) {}

    bool has(const std::string& key) {
        auto it = entries_.find(key);
        if (it == entries_.end()) return false;
        return true;
    }

    std::string required(const std::string& key) {
        auto it = entries_.find(key);
        if (it == entries_.end())
            throw InputError(name_ + ": missing required key '" + key + "'");
        it->second.used = true;
        return it->second.value;
    }

    std::string optional(const std::string& key, const std::string& def) {
        auto it = entries_.find(key);
        if (it == entries_.end()) {
            defaulted_->push_back(key + " = " + def);
            return def;
        }
        it->second.used = true;
        return it->second.value;
    }

    double required_double(const std::string& key) { return to_double(key, required(key)); }

    double optional_double(const std::string& key, double def) {
        std::ostringstream ss;
        ss.precision(17);
        ss << def;
        return to_double(key, optional(key, ss.str()));
    }

    long required_long(const std::string& key) { return to_long(key, required(key)); }

    long optional_long(const std::string& key, long def) {
        return to_long(key, optional(key, std::to_string(def)));
    }

    bool optional_bool(const std::string& key, bool def) {
        const std::string v = optional(key, def ? "true" : "false");
        if (v == "true" || v == "1") return true;
        if (v == "false" || v == "0") return false;
        fail(name_, line_of(key), "key '" + key + "': expected true/false, got '" + v + "'");
    }

    std::vector<double> required_list(const std::string& key) {
        return to_list(key, required(key));
    }

    int line_of(const std::string& key) const {
        auto it = entries_.find(key);
        return it == entries_.end() ? 0 : it->second.line;
    }

    void reject_unknown(const std::set<std::string>& known) const {
        for (const auto& [key, entry] : entries_)
            if (!known.count(key)) fail(name_, entry.line, "unknown key '" + key + "'");
    }

    void check_all_used() const {
        for (const auto& [key, entry] : entries_)
            if (!entry.used)
                fail(name_, entry.line,
                     "key '" + key + "' is not applicable to this configuration");
    }

    double to_double(const std::string& key, const std::string& v) {
        char* end = nullptr;
        const double x = std::strtod(v.c_str(), &end);
        if (end == v.c_str() || *end != '\0')
            fail(name_, line_of(key), "key '" + key + "': expected a number, got '" + v + "'");
        return x;
    }

    long to_long(const std::string& key, const std::string& v) {
        char* end = nullptr;
        const long x = std::strtol(v.c_str(), &end, 10);
        if (end == v.c_str() || *end != '\0')
            fail(name_, line_of(key), "key '" + key + "': expected an integer, got '" + v + "'");
        return x;
    }

    std::vector<double> to_list(const std::string& key, const std::string& v) {
        std::vector<double> out;
        std::istringstream ss(v);
        std::string tok;
        while (ss >> tok) out.push_back(to_double(key, tok));
        if (out.empty())
            fail(name_, line_of(key), "key '" + key + "': expected a list of numbers");
        return out;
    }

    const std::string& name() const { return name_; }

private:
    std::string name_;
    std::map<std::string, RawEntry> entries_;
    std::vector<std::string>* defaulted_;
};

FieldProfile parse_profile(KeyTable& table, const std::string& key) {
    const std::string text = table.required(key);
    std::istringstream ss(text);
    std::string kind;
    ss >> kind;
    auto next = [&](const char* what) {
        std::string tok;
        if (!(ss >> tok))
            fail(table.name(), table.line_of(key), "key '" + key + "': missing " + what);
        return table.to_double(key, tok);
    };
    if (kind == "constant") return FieldProfile::constant(next("value"));
    if (kind == "cosine") {
        const double base = next("base");
        const double amp = next("amplitude");
        const int mx = static_cast<int>(next("mode_x"));
        double my = 0;
        std::string tok;
        if (ss >> tok) my = table.to_double(key, tok);
        return FieldProfile::cosine(base, amp, mx, static_cast<int>(my));
    }
    if (kind == "random") {
        const double base = next("base");
        return FieldProfile::random_uniform(base, next("amplitude"));
    }
    if (kind == "values") {
        std::vector<double> vals;
        std::string tok;
        while (ss >> tok) vals.push_back(table.to_double(key, tok));
        if (vals.empty())
            fail(table.name(), table.line_of(key), "key '" + key + "': 'values' needs entries");
        return FieldProfile::explicit_values(std::move(vals));
    }
    fail(table.name(), table.line_of(key),
         "key '" + key + "': unknown profile kind '" + kind +
             "' (constant | cosine | random | values)");
}

std::string profile_to_string(const FieldProfile& p) {
    std::ostringstream ss;
    ss.precision(17);
    switch (p.kind) {
        case ProfileKind::constant:
            ss << "constant " << p.base;
            break;
        case ProfileKind::cosine:
            ss << "cosine " << p.base << " " << p.amplitude << " " << p.modes[0] << " "
               << p.modes[1];
            break;
        case ProfileKind::random_uniform:
            ss << "random " << p.base << " " << p.amplitude;
            break;
        case ProfileKind::values:
            ss << "values";
            for (double v : p.cell_values) ss << " " << v;
            break;
    }
    return ss.str();
}

}  // namespace

SimulationConfig parse_config(const std::string& text, const std::string& name,
                              bool force_relaxed) {
    std::map<std::string, RawEntry> entries;
    std::istringstream stream(text);
    std::string line;
    int lineno = 0;
    while (std::getline(stream, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) fail(name, lineno, "expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) fail(name, lineno, "empty key");
        if (value.empty()) fail(name, lineno, "empty value for key '" + key + "'");
        if (entries.count(key)) fail(name, lineno, "duplicate key '" + key + "'");
        entries[key] = {value, lineno, false};
    }

    static const std::set<std::string> known_keys = {
        "relaxed", "seed",
        "params.a", "params.b", "params.d", "params.Lambda", "params.mu", "params.lambda_hat",
        "forcing.kind", "forcing.value", "forcing.breakpoints", "forcing.values",
        "forcing.mean", "forcing.amplitude", "forcing.period",
        "nonlinearity.kind", "nonlinearity.m", "nonlinearity.alpha",
        "initial.u0", "initial.v0",
        "grid.dim", "grid.extent_x", "grid.extent_y", "grid.cells_x", "grid.cells_y",
        "control.t_end", "control.dt", "control.safety", "control.output_every", "control.path",
        "constants.delta", "constants.epsilon",
        "monitor.c_tol", "monitor.invariant_tol", "monitor.envelope_rel_tol", "monitor.track_w",
        "output.dir", "output.snapshot_every",
    };

    SimulationConfig cfg;
    KeyTable table(name, std::move(entries), &cfg.defaulted);
    table.reject_unknown(known_keys);

    cfg.relaxed = table.optional_bool("relaxed", false) || force_relaxed;

    cfg.params.a = table.required_double("params.a");
    cfg.params.b = table.required_double("params.b");
    cfg.params.d = table.required_double("params.d");
    cfg.params.Lambda = table.required_double("params.Lambda");
    cfg.params.mu = table.required_double("params.mu");
    cfg.params.lambda_hat = table.required_double("params.lambda_hat");
    cfg.params.strict_mode = !cfg.relaxed;

    const std::string fk = table.required("forcing.kind");
    if (fk == "constant") {
        cfg.forcing = Forcing::constant(table.required_double("forcing.value"));
    } else if (fk == "piecewise") {
        cfg.forcing = Forcing::piecewise(table.required_list("forcing.breakpoints"),
                                         table.required_list("forcing.values"));
    } else if (fk == "sinusoidal") {
        cfg.forcing = Forcing::sinusoidal(table.required_double("forcing.mean"),
                                          table.required_double("forcing.amplitude"),
                                          table.required_double("forcing.period"));
    } else {
        fail(name, table.line_of("forcing.kind"),
             "unknown forcing kind '" + fk + "' (constant | piecewise | sinusoidal)");
    }

    const std::string nk = table.required("nonlinearity.kind");
    if (nk == "product_power") {
        cfg.nonlinearity = Nonlinearity::product_power(table.optional_double("nonlinearity.m", 1.0));
    } else if (nk == "sub_exponential") {
        cfg.nonlinearity =
            Nonlinearity::sub_exponential(table.optional_double("nonlinearity.alpha", 0.5));
    } else if (nk == "exponential_violator") {
        cfg.nonlinearity = Nonlinearity::exponential_violator();
    } else {
        fail(name, table.line_of("nonlinearity.kind"),
             "unknown nonlinearity kind '" + nk +
                 "' (product_power | sub_exponential | exponential_violator)");
    }

    cfg.initial.u0 = parse_profile(table, "initial.u0");
    cfg.initial.v0 = parse_profile(table, "initial.v0");

    const long dim = table.required_long("grid.dim");
    if (dim == 1) {
        cfg.grid = Grid::line(table.required_double("grid.extent_x"),
                              static_cast<int>(table.required_long("grid.cells_x")));
    } else if (dim == 2) {
        cfg.grid = Grid::rect(table.required_double("grid.extent_x"),
                              table.required_double("grid.extent_y"),
                              static_cast<int>(table.required_long("grid.cells_x")),
                              static_cast<int>(table.required_long("grid.cells_y")));
    } else {
        fail(name, table.line_of("grid.dim"), "grid.dim must be 1 or 2");
    }

    cfg.control.t_end = table.required_double("control.t_end");
    cfg.control.dt = table.optional_double("control.dt", 0.0);
    cfg.control.safety = table.optional_double("control.safety", 0.9);
    cfg.control.output_every = static_cast<int>(table.optional_long("control.output_every", 100));
    const std::string path = table.optional("control.path", "direct");
    if (path == "direct") {
        cfg.control.path = SolverPath::direct;
    } else if (path == "transformed") {
        cfg.control.path = SolverPath::transformed;
    } else {
        fail(name, table.line_of("control.path"),
             "control.path must be 'direct' or 'transformed'");
    }

    if (table.has("constants.delta")) cfg.delta_override = table.required_double("constants.delta");
    if (table.has("constants.epsilon"))
        cfg.epsilon_override = table.required_double("constants.epsilon");

    cfg.monitor.c_tol = table.optional_double("monitor.c_tol", 1.0);
    cfg.monitor.invariant_tol = table.optional_double("monitor.invariant_tol", kInvariantTolDefault);
    cfg.monitor.envelope_rel_tol = table.optional_double("monitor.envelope_rel_tol", 1e-6);
    cfg.monitor.track_w = table.optional_bool("monitor.track_w", false);

    cfg.output_dir = table.optional("output.dir", "out");
    cfg.snapshot_every = static_cast<int>(table.optional_long("output.snapshot_every", 0));
    cfg.seed = static_cast<std::uint64_t>(table.optional_long("seed", 0));

    table.check_all_used();

    // Semantic validation beyond parse.
    if (!(cfg.control.t_end >= 0.0)) throw InputError(name + ": control.t_end must be >= 0");
    if (!(cfg.control.safety > 0.0 && cfg.control.safety <= 1.0))
        throw InputError(name + ": control.safety must be in (0, 1]");
    if (cfg.control.output_every < 1)
        throw InputError(name + ": control.output_every must be >= 1");
    if (cfg.snapshot_every < 0) throw InputError(name + ": output.snapshot_every must be >= 0");

    const HypothesisReport hyp =
        validate_hypotheses(cfg.params, cfg.initial, cfg.grid, cfg.seed);
    if (cfg.params.strict_mode && !hyp.all_pass()) {
        std::string msg = name + ": hypothesis validation failed:";
        for (const auto& c : hyp.checks)
            if (!c.informational && !c.pass)
                msg += "\n  " + c.id + " (" + c.detail + "), witness " + std::to_string(c.witness);
        msg += "\nset 'relaxed = true' (or pass --relaxed) to acknowledge";
        throw InputError(msg);
    }

    if (cfg.control.dt > 0.0) {
        const double limit = stable_dt(cfg.params, cfg.grid, 1.0, cfg.control.path);
        if (cfg.control.dt > limit)
            throw InputError(name + ": control.dt = " + std::to_string(cfg.control.dt) +
                             " exceeds the stability limit " + std::to_string(limit) +
                             " for the selected path");
    }
    return cfg;
}

SimulationConfig load_config(const std::filesystem::path& path, bool force_relaxed) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open config file '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path.string(), force_relaxed);
}

std::string write_config(const SimulationConfig& cfg) {
    std::ostringstream out;
    out.precision(17);
    out << "params.a = " << cfg.params.a << "\n";
    out << "params.b = " << cfg.params.b << "\n";
    out << "params.d = " << cfg.params.d << "\n";
    out << "params.Lambda = " << cfg.params.Lambda << "\n";
    out << "params.mu = " << cfg.params.mu << "\n";
    out << "params.lambda_hat = " << cfg.params.lambda_hat << "\n";
    switch (cfg.forcing.kind) {
        case ForcingKind::constant:
            out << "forcing.kind = constant\n";
            out << "forcing.value = " << cfg.forcing.value << "\n";
            break;
        case ForcingKind::piecewise_constant: {
            out << "forcing.kind = piecewise\n";
            out << "forcing.breakpoints =";
            for (double t : cfg.forcing.interval_starts) out << " " << t;
            out << "\nforcing.values =";
            for (double v : cfg.forcing.interval_values) out << " " << v;
            out << "\n";
            break;
        }
        case ForcingKind::sinusoidal_clamped:
            out << "forcing.kind = sinusoidal\n";
            out << "forcing.mean = " << cfg.forcing.mean << "\n";
            out << "forcing.amplitude = " << cfg.forcing.amplitude << "\n";
            out << "forcing.period = " << cfg.forcing.period << "\n";
            break;
    }
    switch (cfg.nonlinearity.kind) {
        case NonlinearityKind::product_power:
            out << "nonlinearity.kind = product_power\n";
            out << "nonlinearity.m = " << cfg.nonlinearity.m << "\n";
            break;
        case NonlinearityKind::sub_exponential:
            out << "nonlinearity.kind = sub_exponential\n";
            out << "nonlinearity.alpha = " << cfg.nonlinearity.alpha << "\n";
            break;
        case NonlinearityKind::exponential_violator:
            out << "nonlinearity.kind = exponential_violator\n";
            break;
    }
    out << "initial.u0 = " << profile_to_string(cfg.initial.u0) << "\n";
    out << "initial.v0 = " << profile_to_string(cfg.initial.v0) << "\n";
    out << "grid.dim = " << cfg.grid.dim << "\n";
    out << "grid.extent_x = " << cfg.grid.extent[0] << "\n";
    out << "grid.cells_x = " << cfg.grid.cells[0] << "\n";
    if (cfg.grid.dim == 2) {
        out << "grid.extent_y = " << cfg.grid.extent[1] << "\n";
        out << "grid.cells_y = " << cfg.grid.cells[1] << "\n";
    }
    out << "control.t_end = " << cfg.control.t_end << "\n";
    out << "control.dt = " << cfg.control.dt << "\n";
    out << "control.safety = " << cfg.control.safety << "\n";
    out << "control.output_every = " << cfg.control.output_every << "\n";
    out << "control.path = "
        << (cfg.control.path == SolverPath::direct ? "direct" : "transformed") << "\n";
    if (cfg.delta_override) out << "constants.delta = " << *cfg.delta_override << "\n";
    if (cfg.epsilon_override) out << "constants.epsilon = " << *cfg.epsilon_override << "\n";
    out << "monitor.c_tol = " << cfg.monitor.c_tol << "\n";
    out << "monitor.invariant_tol = " << cfg.monitor.invariant_tol << "\n";
    out << "monitor.envelope_rel_tol = " << cfg.monitor.envelope_rel_tol << "\n";
    out << "monitor.track_w = " << (cfg.monitor.track_w ? "true" : "false") << "\n";
    out << "output.dir = " << cfg.output_dir.string() << "\n";
    out << "output.snapshot_every = " << cfg.snapshot_every << "\n";
    out << "seed = " << cfg.seed << "\n";
    out << "relaxed = " << (cfg.relaxed ? "true" : "false") << "\n";
    return out.str();
}

DerivedConstants config_constants(const SimulationConfig& cfg) {
    const Field u0 = sample(cfg.initial.u0, cfg.grid, cfg.seed);
    return derive_constants(cfg.params, extrema(u0).second, cfg.grid.measure, cfg.delta_override,
                            cfg.epsilon_override);
}

int thread_cap() {
    const char* env = std::getenv("EPIDIFFUSE_THREADS");
    if (!env) return 0;
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || v < 0) return 0;
    return static_cast<int>(v);
}

}  // namespace epidiffuse
