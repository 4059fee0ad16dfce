#pragma once

#include "sspop/error.hpp"
#include "sspop/experiments.hpp"
#include "sspop/grid.hpp"
#include "sspop/hopf.hpp"
#include "sspop/presets.hpp"
#include "sspop/schemes.hpp"

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace sspop {

enum class Command { solve, convergence, discontinuity, weakstar, bifurcate, charroots };

inline std::string_view to_string(Command c) {
    switch (c) {
    case Command::solve: return "solve";
    case Command::convergence: return "convergence";
    case Command::discontinuity: return "discontinuity";
    case Command::weakstar: return "weakstar";
    case Command::bifurcate: return "bifurcate";
    case Command::charroots: return "charroots";
    }
    return "?";
}

inline Command parse_command(std::string_view name) {
    for (Command c : {Command::solve, Command::convergence, Command::discontinuity, Command::weakstar,
                      Command::bifurcate, Command::charroots})
        if (to_string(c) == name) return c;
    throw ConfigError("unknown command '" + std::string(name) + "'");
}

inline std::string_view to_string(CflPolicy p) { return p == CflPolicy::strict ? "strict" : "warn"; }

inline CflPolicy parse_cfl_policy(std::string_view name) {
    if (name == "strict") return CflPolicy::strict;
    if (name == "warn") return CflPolicy::warn;
    throw ConfigError("cfl_policy must be 'strict' or 'warn', got '" + std::string(name) + "'");
}

struct RunFlags {
    CflPolicy cfl_policy = CflPolicy::strict;
    std::size_t snapshot_stride = 1;

    friend bool operator==(const RunFlags&, const RunFlags&) = default;
};

/// Sweep parameters of the experiment commands. Only the keys of the selected command are
/// read and written.
struct ExperimentParams {
    std::size_t refinements = 7; // rows of the convergence table
    std::vector<double> m_values{1.0, 10.0, 100.0, 1000.0};
    double a = 1.01;
    std::vector<double> b_values{50.0, 75.0, 100.0};
    std::vector<double> a_values{6.0, 26.0, 46.0};
    double tail_fraction = kDefaultTailFraction;
    CharacteristicProblem problem;
    std::vector<Complex> guesses{{0.1, 9.0}};

    friend bool operator==(const ExperimentParams&, const ExperimentParams&) = default;
};

struct RunConfig {
    Command command = Command::solve;
    std::optional<Scheme> scheme;
    std::optional<PresetId> preset;
    std::optional<Mesh> mesh;
    std::filesystem::path output_dir = ".";
    RunFlags flags;
    ExperimentParams experiment;

    friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Mesh used by each experiment command when the config gives none.
inline std::optional<Mesh> default_mesh(Command c) {
    switch (c) {
    case Command::convergence: return Mesh(10, 40, 8.0);
    case Command::discontinuity: return Mesh(400, 800, 1.0);
    case Command::weakstar: return Mesh(8000, 12800, 0.8);
    case Command::bifurcate: return default_hopf_mesh();
    case Command::solve:
    case Command::charroots: break;
    }
    return std::nullopt;
}

namespace detail {

using nlohmann::json;

inline std::string join_path(const std::string& base, const std::string& key) {
    return base.empty() ? key : base + "." + key;
}

[[noreturn]] inline void config_fail(const std::string& where, const std::string& what) {
    throw ConfigError("config key '" + where + "': " + what);
}

// Runs f, re-raising its ConfigError as an error about the given key.
template <class F>
auto keyed(const std::string& where, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const ConfigError& e) {
        config_fail(where, e.what());
    }
}

inline void only_keys(const json& obj, const std::string& where, const std::set<std::string>& allowed) {
    if (!obj.is_object()) config_fail(where.empty() ? "<root>" : where, "expected an object");
    for (const auto& [key, value] : obj.items())
        if (!allowed.contains(key)) config_fail(join_path(where, key), "unknown key");
}

inline const json& need(const json& obj, const std::string& where, const std::string& key) {
    if (!obj.contains(key)) config_fail(join_path(where, key), "missing");
    return obj.at(key);
}

inline double as_real(const json& v, const std::string& where) {
    if (!v.is_number()) config_fail(where, "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) config_fail(where, "expected a finite number");
    return x;
}

inline std::size_t as_count(const json& v, const std::string& where) {
    if (!v.is_number_integer()) config_fail(where, "expected a nonnegative integer");
    if (v.is_number_unsigned()) return v.get<std::size_t>();
    const auto x = v.get<long long>();
    if (x < 0) config_fail(where, "expected a nonnegative integer");
    return static_cast<std::size_t>(x);
}

inline std::string as_string(const json& v, const std::string& where) {
    if (!v.is_string()) config_fail(where, "expected a string");
    return v.get<std::string>();
}

inline std::vector<double> as_reals(const json& v, const std::string& where) {
    if (!v.is_array() || v.empty()) config_fail(where, "expected a nonempty array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back(as_real(v[i], where + "[" + std::to_string(i) + "]"));
    return out;
}

inline std::set<std::string> experiment_keys(Command c) {
    switch (c) {
    case Command::solve: return {};
    case Command::convergence: return {"refinements"};
    case Command::discontinuity: return {"m_values"};
    case Command::weakstar: return {"a", "b_values"};
    case Command::bifurcate: return {"a_values", "tail_fraction"};
    case Command::charroots: return {"q", "s_c", "ln_r", "eps", "guesses"};
    }
    return {};
}

inline Mesh parse_mesh(const json& j) {
    only_keys(j, "mesh", {"n_cells", "n_steps", "horizon"});
    const std::size_t n = as_count(need(j, "mesh", "n_cells"), "mesh.n_cells");
    const std::size_t l = as_count(need(j, "mesh", "n_steps"), "mesh.n_steps");
    const double t = as_real(need(j, "mesh", "horizon"), "mesh.horizon");
    if (n < Mesh::kMinCells) config_fail("mesh.n_cells", "must be at least " + std::to_string(Mesh::kMinCells));
    if (!(t > 0.0)) config_fail("mesh.horizon", "must be positive");
    return {n, l, t};
}

inline PresetId parse_preset(const json& j) {
    only_keys(j, "preset", {"name", "params"});
    PresetId id;
    id.name = as_string(need(j, "preset", "name"), "preset.name");
    if (j.contains("params")) {
        const json& params = j.at("params");
        if (!params.is_object()) config_fail("preset.params", "expected an object");
        for (const auto& [key, value] : params.items())
            id.params[key] = as_real(value, "preset.params." + key);
    }
    keyed("preset", [&] { return make_preset(id); }); // completeness and ranges
    return id;
}

inline void parse_experiment(const json& j, Command c, ExperimentParams& e) {
    only_keys(j, "experiment", experiment_keys(c));
    const std::string w = "experiment";
    if (j.contains("refinements")) {
        e.refinements = as_count(j.at("refinements"), w + ".refinements");
        if (e.refinements == 0) config_fail(w + ".refinements", "must be at least 1");
    }
    if (j.contains("m_values")) e.m_values = as_reals(j.at("m_values"), w + ".m_values");
    if (j.contains("a")) e.a = as_real(j.at("a"), w + ".a");
    if (j.contains("b_values")) e.b_values = as_reals(j.at("b_values"), w + ".b_values");
    if (j.contains("a_values")) e.a_values = as_reals(j.at("a_values"), w + ".a_values");
    if (j.contains("tail_fraction")) e.tail_fraction = as_real(j.at("tail_fraction"), w + ".tail_fraction");
    if (j.contains("q")) e.problem.q = as_real(j.at("q"), w + ".q");
    if (j.contains("s_c")) e.problem.s_c = as_real(j.at("s_c"), w + ".s_c");
    if (j.contains("ln_r")) e.problem.ln_r = as_real(j.at("ln_r"), w + ".ln_r");
    if (j.contains("eps")) e.problem.eps = as_real(j.at("eps"), w + ".eps");
    if (j.contains("guesses")) {
        const json& g = j.at("guesses");
        if (!g.is_array() || g.empty()) config_fail(w + ".guesses", "expected a nonempty array of [re, im] pairs");
        e.guesses.clear();
        for (std::size_t i = 0; i < g.size(); ++i) {
            const std::string where = w + ".guesses[" + std::to_string(i) + "]";
            if (!g[i].is_array() || g[i].size() != 2) config_fail(where, "expected [re, im]");
            e.guesses.emplace_back(as_real(g[i][0], where), as_real(g[i][1], where));
        }
    }
}

inline void validate_experiment(Command c, const ExperimentParams& e) {
    const std::string w = "experiment";
    switch (c) {
    case Command::discontinuity:
        for (double m : e.m_values)
            if (!(m > 0.0)) config_fail(w + ".m_values", "values must be positive");
        break;
    case Command::weakstar:
        if (!(e.a > 1.0)) config_fail(w + ".a", "must exceed 1");
        for (double b : e.b_values)
            if (!(b > 1.0)) config_fail(w + ".b_values", "values must exceed 1");
        break;
    case Command::bifurcate:
        for (double a : e.a_values)
            if (!(a > 0.0)) config_fail(w + ".a_values", "values must be positive");
        if (!(e.tail_fraction > 0.0 && e.tail_fraction < 1.0))
            config_fail(w + ".tail_fraction", "must lie in (0, 1)");
        break;
    case Command::charroots:
        try {
            e.problem.validate();
        } catch (const DomainError& err) {
            config_fail(w, err.what());
        }
        break;
    case Command::solve:
    case Command::convergence: break;
    }
}

} // namespace detail

/// Reads and validates a JSON run configuration. Unknown keys are rejected.
inline RunConfig parse_config(std::string_view text) {
    using detail::json;
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    detail::only_keys(root, "", {"command", "scheme", "preset", "mesh", "flags", "output_dir", "experiment"});

    RunConfig cfg;
    const std::string command = detail::as_string(detail::need(root, "", "command"), "command");
    cfg.command = detail::keyed("command", [&] { return parse_command(command); });
    if (root.contains("scheme")) {
        const std::string scheme = detail::as_string(root.at("scheme"), "scheme");
        cfg.scheme = detail::keyed("scheme", [&] { return parse_scheme(scheme); });
    }
    if (root.contains("preset")) cfg.preset = detail::parse_preset(root.at("preset"));
    if (root.contains("mesh")) cfg.mesh = detail::parse_mesh(root.at("mesh"));
    if (root.contains("output_dir")) cfg.output_dir = detail::as_string(root.at("output_dir"), "output_dir");

    if (root.contains("flags")) {
        const json& f = root.at("flags");
        detail::only_keys(f, "flags", {"cfl_policy", "snapshot_stride"});
        if (f.contains("cfl_policy")) {
            const std::string policy = detail::as_string(f.at("cfl_policy"), "flags.cfl_policy");
            cfg.flags.cfl_policy = detail::keyed("flags.cfl_policy", [&] { return parse_cfl_policy(policy); });
        }
        if (f.contains("snapshot_stride")) {
            cfg.flags.snapshot_stride = detail::as_count(f.at("snapshot_stride"), "flags.snapshot_stride");
            if (cfg.flags.snapshot_stride == 0) detail::config_fail("flags.snapshot_stride", "must be at least 1");
        }
    }
    if (root.contains("experiment")) detail::parse_experiment(root.at("experiment"), cfg.command, cfg.experiment);

    // Command-specific requirements and defaults.
    switch (cfg.command) {
    case Command::solve:
        if (!cfg.scheme) detail::config_fail("scheme", "missing (required by solve)");
        if (!cfg.preset) detail::config_fail("preset", "missing (required by solve)");
        if (!cfg.mesh) detail::config_fail("mesh", "missing (required by solve)");
        detail::keyed("scheme", [&] { check_compatible(*cfg.scheme, make_preset(*cfg.preset)); });
        break;
    case Command::charroots:
        if (cfg.scheme) detail::config_fail("scheme", "not used by charroots");
        if (cfg.preset) detail::config_fail("preset", "not used by charroots");
        if (cfg.mesh) detail::config_fail("mesh", "not used by charroots");
        break;
    default:
        // Experiment commands fix their own presets and schemes.
        if (cfg.scheme) detail::config_fail("scheme", "not used by " + std::string(to_string(cfg.command)));
        if (cfg.preset) detail::config_fail("preset", "not used by " + std::string(to_string(cfg.command)));
        if (!cfg.mesh) cfg.mesh = default_mesh(cfg.command);
        break;
    }
    detail::validate_experiment(cfg.command, cfg.experiment);
    return cfg;
}

/// JSON form of a resolved config; parse_config(to_json(cfg).dump()) == cfg.
inline nlohmann::json to_json(const RunConfig& cfg) {
    using detail::json;
    json j;
    j["command"] = std::string(to_string(cfg.command));
    if (cfg.scheme) j["scheme"] = std::string(to_string(*cfg.scheme));
    if (cfg.preset) {
        json p;
        p["name"] = cfg.preset->name;
        p["params"] = json::object();
        for (const auto& [k, v] : cfg.preset->params) p["params"][k] = v;
        j["preset"] = p;
    }
    if (cfg.mesh)
        j["mesh"] = {{"n_cells", cfg.mesh->n_cells()}, {"n_steps", cfg.mesh->n_steps()}, {"horizon", cfg.mesh->horizon()}};
    j["output_dir"] = cfg.output_dir.generic_string();
    j["flags"] = {{"cfl_policy", std::string(to_string(cfg.flags.cfl_policy))},
                  {"snapshot_stride", cfg.flags.snapshot_stride}};

    const ExperimentParams& e = cfg.experiment;
    json x = json::object();
    switch (cfg.command) {
    case Command::solve: break;
    case Command::convergence: x["refinements"] = e.refinements; break;
    case Command::discontinuity: x["m_values"] = e.m_values; break;
    case Command::weakstar:
        x["a"] = e.a;
        x["b_values"] = e.b_values;
        break;
    case Command::bifurcate:
        x["a_values"] = e.a_values;
        x["tail_fraction"] = e.tail_fraction;
        break;
    case Command::charroots: {
        x["q"] = e.problem.q;
        x["s_c"] = e.problem.s_c;
        x["ln_r"] = e.problem.ln_r;
        x["eps"] = e.problem.eps;
        json g = json::array();
        for (const Complex& z : e.guesses) g.push_back({z.real(), z.imag()});
        x["guesses"] = g;
        break;
    }
    }
    if (!x.empty()) j["experiment"] = x;
    return j;
}

} // namespace sspop
