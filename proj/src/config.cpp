#include "nlt/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>

#include "nlt/grid.hpp"

namespace nlt {

namespace {

struct ScenarioName {
    ScenarioKind kind;
    const char* name;
};

constexpr ScenarioName kScenarios[] = {
    {ScenarioKind::inviscid_blowup, "inviscid_blowup"},
    {ScenarioKind::viscous_supercritical, "viscous_supercritical"},
    {ScenarioKind::critical_small, "critical_small"},
    {ScenarioKind::critical_large, "critical_large"},
    {ScenarioKind::subcritical_exploratory, "subcritical_exploratory"},
    {ScenarioKind::lemma_verify, "lemma_verify"},
    {ScenarioKind::regime_sweep, "regime_sweep"},
};

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value, const char* what) {
    throw ConfigError(key + ": " + what + ", got '" + value + "'");
}

// A real number, "inf", or a multiple of pi written as "8pi" / "pi" / "0.5pi".
double parse_real(const std::string& key, const std::string& raw) {
    std::string v = trim(raw);
    double scale = 1.0;
    if (v.size() >= 2 && v.compare(v.size() - 2, 2, "pi") == 0) {
        scale = std::numbers::pi;
        v = trim(v.substr(0, v.size() - 2));
        if (v.empty()) return scale;
    }
    double out = 0.0;
    const char* end = v.data() + v.size();
    const auto [ptr, ec] = std::from_chars(v.data(), end, out);
    if (ec != std::errc() || ptr != end || std::isnan(out)) bad_value(key, raw, "expected a number");
    return out * scale;
}

std::uint64_t parse_unsigned(const std::string& key, const std::string& raw) {
    const std::string v = trim(raw);
    std::uint64_t out = 0;
    const char* end = v.data() + v.size();
    const auto [ptr, ec] = std::from_chars(v.data(), end, out);
    if (ec != std::errc() || ptr != end) bad_value(key, raw, "expected a nonnegative integer");
    return out;
}

bool parse_bool(const std::string& key, const std::string& raw) {
    const std::string v = trim(raw);
    if (v == "true" || v == "on" || v == "yes" || v == "1") return true;
    if (v == "false" || v == "off" || v == "no" || v == "0") return false;
    bad_value(key, raw, "expected true or false");
}

std::vector<double> parse_list(const std::string& key, const std::string& raw) {
    std::vector<double> out;
    if (trim(raw).empty()) return out;
    std::stringstream ss(raw);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_real(key, item));
    return out;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt_list(const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + fmt(v[i]);
    return s;
}

struct Setting {
    const char* key;
    std::function<void(ScenarioSpec&, const std::string&)> set;
    std::function<std::string(const ScenarioSpec&)> get;
};

const std::vector<Setting>& settings() {
    static const std::vector<Setting> table = {
        {"scenario", [](ScenarioSpec& s, const std::string& v) { s.kind = scenario_from_string(trim(v)); },
         [](const ScenarioSpec& s) { return to_string(s.kind); }},
        {"output_dir", [](ScenarioSpec& s, const std::string& v) { s.output_dir = trim(v); },
         [](const ScenarioSpec& s) { return s.output_dir; }},
        {"grid.n", [](ScenarioSpec& s, const std::string& v) { s.n = parse_unsigned("grid.n", v); },
         [](const ScenarioSpec& s) { return std::to_string(s.n); }},
        {"grid.half_length",
         [](ScenarioSpec& s, const std::string& v) { s.half_length = parse_real("grid.half_length", v); },
         [](const ScenarioSpec& s) { return fmt(s.half_length); }},
        {"solver.nu", [](ScenarioSpec& s, const std::string& v) { s.solver.nu = parse_real("solver.nu", v); },
         [](const ScenarioSpec& s) { return fmt(s.solver.nu); }},
        {"solver.alpha",
         [](ScenarioSpec& s, const std::string& v) { s.solver.alpha = parse_real("solver.alpha", v); },
         [](const ScenarioSpec& s) { return fmt(s.solver.alpha); }},
        {"solver.cfl", [](ScenarioSpec& s, const std::string& v) { s.solver.cfl = parse_real("solver.cfl", v); },
         [](const ScenarioSpec& s) { return fmt(s.solver.cfl); }},
        {"solver.dt_max",
         [](ScenarioSpec& s, const std::string& v) { s.solver.dt_max = parse_real("solver.dt_max", v); },
         [](const ScenarioSpec& s) { return fmt(s.solver.dt_max); }},
        {"solver.dt_min",
         [](ScenarioSpec& s, const std::string& v) { s.solver.dt_min = parse_real("solver.dt_min", v); },
         [](const ScenarioSpec& s) { return fmt(s.solver.dt_min); }},
        {"solver.t_end",
         [](ScenarioSpec& s, const std::string& v) { s.solver.t_end = parse_real("solver.t_end", v); },
         [](const ScenarioSpec& s) { return fmt(s.solver.t_end); }},
        {"solver.grad_threshold",
         [](ScenarioSpec& s, const std::string& v) {
             s.solver.grad_threshold = parse_real("solver.grad_threshold", v);
         },
         [](const ScenarioSpec& s) { return fmt(s.solver.grad_threshold); }},
        {"solver.record_interval",
         [](ScenarioSpec& s, const std::string& v) {
             s.solver.record_interval = parse_real("solver.record_interval", v);
         },
         [](const ScenarioSpec& s) { return fmt(s.solver.record_interval); }},
        {"solver.dealias",
         [](ScenarioSpec& s, const std::string& v) { s.solver.dealias_on = parse_bool("solver.dealias", v); },
         [](const ScenarioSpec& s) { return std::string(s.solver.dealias_on ? "true" : "false"); }},
        {"solver.seed",
         [](ScenarioSpec& s, const std::string& v) { s.solver.seed = parse_unsigned("solver.seed", v); },
         [](const ScenarioSpec& s) { return std::to_string(s.solver.seed); }},
        {"initial.kind",
         [](ScenarioSpec& s, const std::string& v) {
             try {
                 s.initial.kind = initial_kind_from_string(trim(v));
             } catch (const std::invalid_argument& e) {
                 throw ConfigError(std::string("initial.kind: ") + e.what());
             }
         },
         [](const ScenarioSpec& s) { return to_string(s.initial.kind); }},
        {"initial.amplitude",
         [](ScenarioSpec& s, const std::string& v) { s.initial.amplitude = parse_real("initial.amplitude", v); },
         [](const ScenarioSpec& s) { return fmt(s.initial.amplitude); }},
        {"initial.width",
         [](ScenarioSpec& s, const std::string& v) { s.initial.width = parse_real("initial.width", v); },
         [](const ScenarioSpec& s) { return fmt(s.initial.width); }},
        {"initial.shift",
         [](ScenarioSpec& s, const std::string& v) { s.initial.shift = parse_real("initial.shift", v); },
         [](const ScenarioSpec& s) { return fmt(s.initial.shift); }},
        {"initial.mode",
         [](ScenarioSpec& s, const std::string& v) {
             s.initial.mode = static_cast<int>(parse_unsigned("initial.mode", v));
         },
         [](const ScenarioSpec& s) { return std::to_string(s.initial.mode); }},
        {"initial.samples", [](ScenarioSpec& s, const std::string& v) { s.initial.samples_path = trim(v); },
         [](const ScenarioSpec& s) { return s.initial.samples_path; }},
        {"j.delta", [](ScenarioSpec& s, const std::string& v) { s.j.delta = parse_real("j.delta", v); },
         [](const ScenarioSpec& s) { return fmt(s.j.delta); }},
        {"j.support", [](ScenarioSpec& s, const std::string& v) { s.j.support = parse_real("j.support", v); },
         [](const ScenarioSpec& s) { return fmt(s.j.support); }},
        {"output.snapshot_times",
         [](ScenarioSpec& s, const std::string& v) {
             s.snapshot_times = parse_list("output.snapshot_times", v);
         },
         [](const ScenarioSpec& s) { return fmt_list(s.snapshot_times); }},
        {"output.snapshot_count",
         [](ScenarioSpec& s, const std::string& v) {
             s.snapshot_count = parse_unsigned("output.snapshot_count", v);
         },
         [](const ScenarioSpec& s) { return std::to_string(s.snapshot_count); }},
        {"sweep.nu", [](ScenarioSpec& s, const std::string& v) { s.sweep.nu = parse_list("sweep.nu", v); },
         [](const ScenarioSpec& s) { return fmt_list(s.sweep.nu); }},
        {"sweep.alpha",
         [](ScenarioSpec& s, const std::string& v) { s.sweep.alpha = parse_list("sweep.alpha", v); },
         [](const ScenarioSpec& s) { return fmt_list(s.sweep.alpha); }},
        {"sweep.threads",
         [](ScenarioSpec& s, const std::string& v) {
             s.sweep.threads = static_cast<unsigned>(parse_unsigned("sweep.threads", v));
         },
         [](const ScenarioSpec& s) { return std::to_string(s.sweep.threads); }},
        {"lemma.delta",
         [](ScenarioSpec& s, const std::string& v) { s.lemma.deltas = parse_list("lemma.delta", v); },
         [](const ScenarioSpec& s) { return fmt_list(s.lemma.deltas); }},
        {"lemma.seed", [](ScenarioSpec& s, const std::string& v) { s.lemma.seed = parse_unsigned("lemma.seed", v); },
         [](const ScenarioSpec& s) { return std::to_string(s.lemma.seed); }},
        {"lemma.lambda_half_width",
         [](ScenarioSpec& s, const std::string& v) {
             s.lemma.lambda_half_width = parse_real("lemma.lambda_half_width", v);
         },
         [](const ScenarioSpec& s) { return fmt(s.lemma.lambda_half_width); }},
        {"lemma.lambda_spacing",
         [](ScenarioSpec& s, const std::string& v) {
             s.lemma.lambda_spacing = parse_real("lemma.lambda_spacing", v);
         },
         [](const ScenarioSpec& s) { return fmt(s.lemma.lambda_spacing); }},
        {"lemma.scan_lambda_max",
         [](ScenarioSpec& s, const std::string& v) {
             s.lemma.scan_lambda_max = parse_real("lemma.scan_lambda_max", v);
         },
         [](const ScenarioSpec& s) { return fmt(s.lemma.scan_lambda_max); }},
        {"lemma.dilation",
         [](ScenarioSpec& s, const std::string& v) { s.lemma.dilation = parse_real("lemma.dilation", v); },
         [](const ScenarioSpec& s) { return fmt(s.lemma.dilation); }},
    };
    return table;
}

}  // namespace

std::string to_string(ScenarioKind k) {
    for (const auto& e : kScenarios) {
        if (e.kind == k) return e.name;
    }
    throw std::logic_error("unhandled scenario kind");
}

ScenarioKind scenario_from_string(const std::string& name) {
    for (const auto& e : kScenarios) {
        if (name == e.name) return e.kind;
    }
    throw ConfigError("scenario: unknown scenario '" + name + "'");
}

ScenarioSpec default_spec(ScenarioKind kind) {
    ScenarioSpec s;
    s.kind = kind;
    s.n = 4096;
    s.half_length = 8.0 * std::numbers::pi;
    s.solver.cfl = 0.4;
    s.solver.dt_max = 1e-2;
    s.solver.dt_min = 1e-10;
    s.solver.grad_threshold = 1e4;
    s.solver.record_interval = 5e-3;
    s.solver.dealias_on = true;
    switch (kind) {
        case ScenarioKind::inviscid_blowup:
            // The 2/3 rule caps the resolvable gradient well below 100x growth at n = 4096,
            // so this run keeps every mode and stops at an absolute gradient of 200.
            s.solver.nu = 0.0;
            s.solver.alpha = 1.0;
            s.solver.t_end = 3.0;
            s.solver.dealias_on = false;
            s.solver.grad_threshold = 200.0;
            break;
        case ScenarioKind::viscous_supercritical:
            s.solver.nu = 0.5;
            s.solver.alpha = 1.5;
            s.solver.t_end = 10.0;
            break;
        case ScenarioKind::critical_small:
            s.solver.nu = 2.0;
            s.solver.alpha = 1.0;
            s.solver.t_end = 10.0;
            break;
        case ScenarioKind::critical_large:
            s.solver.nu = 0.5;
            s.solver.alpha = 1.0;
            s.solver.t_end = 10.0;
            s.exploratory = true;
            break;
        case ScenarioKind::subcritical_exploratory:
            s.solver.nu = 0.5;
            s.solver.alpha = 0.5;
            s.solver.t_end = 5.0;
            s.exploratory = true;
            break;
        case ScenarioKind::lemma_verify:
            break;
        case ScenarioKind::regime_sweep:
            s.n = 1024;
            s.solver.t_end = 3.0;
            s.solver.record_interval = 1e-2;
            s.solver.dealias_on = false;
            s.solver.grad_threshold = 200.0;
            s.sweep.nu = {0.0, 0.5, 1.0, 2.0};
            s.sweep.alpha = {0.5, 1.0, 1.5, 2.0};
            break;
    }
    return s;
}

void ScenarioSpec::validate() const {
    try {
        Grid(n, half_length);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("grid: ") + e.what());
    }
    try {
        solver.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("solver: ") + e.what());
    }
    if (!(j.delta >= 0.05 && j.delta <= 0.95)) throw ConfigError("j.delta must lie in [0.05, 0.95]");
    if (!(j.support > 0.0)) throw ConfigError("j.support must be positive");
    if (!(j.support <= half_length - 2.0 * half_length / static_cast<double>(n))) {
        throw ConfigError("j.support must stay inside the grid half-length");
    }
    for (double t : snapshot_times) {
        if (!(t >= 0.0 && t <= solver.t_end)) {
            throw ConfigError("output.snapshot_times: " + fmt(t) + " outside [0, t_end]");
        }
    }
    if (snapshot_count < 2) throw ConfigError("output.snapshot_count must be at least 2");
    if (kind == ScenarioKind::regime_sweep) {
        if (sweep.nu.empty() || sweep.alpha.empty()) throw ConfigError("sweep: grid must be nonempty");
        for (double v : sweep.nu) {
            if (!(v >= 0.0 && std::isfinite(v))) throw ConfigError("sweep.nu: values must be >= 0");
        }
        for (double a : sweep.alpha) {
            if (!(a >= 0.0 && a <= 2.0)) throw ConfigError("sweep.alpha: values must lie in [0, 2]");
        }
    }
    if (kind == ScenarioKind::lemma_verify) {
        if (lemma.deltas.empty()) throw ConfigError("lemma.delta: need at least one value");
        for (double d : lemma.deltas) {
            if (!(d > 0.0 && d < 1.0)) throw ConfigError("lemma.delta: values must lie in (0, 1)");
        }
        if (!(lemma.lambda_half_width > 0.0 && lemma.lambda_spacing > 0.0 &&
              lemma.lambda_spacing < lemma.lambda_half_width)) {
            throw ConfigError("lemma: lambda grid must have 0 < spacing < half width");
        }
        if (!(lemma.scan_lambda_max > 0.0)) throw ConfigError("lemma.scan_lambda_max must be positive");
        if (!(lemma.dilation > 0.0)) throw ConfigError("lemma.dilation must be positive");
    }
}

void apply_setting(ScenarioSpec& spec, const std::string& key, const std::string& value) {
    for (const Setting& s : settings()) {
        if (key == s.key) {
            s.set(spec, value);
            return;
        }
    }
    throw ConfigError("unknown key '" + key + "'");
}

std::vector<std::pair<std::string, std::string>> config_echo(const ScenarioSpec& spec) {
    std::vector<std::pair<std::string, std::string>> out;
    for (const Setting& s : settings()) out.emplace_back(s.key, s.get(spec));
    return out;
}

ScenarioSpec parse_config(const std::string& text, const std::filesystem::path& origin) {
    namespace pt = boost::property_tree;
    pt::ptree tree;
    std::istringstream in(text);
    try {
        pt::ini_parser::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError(origin.string() + ":" + std::to_string(e.line()) + ": " + e.message());
    }

    // Flatten to dotted keys in file order.
    std::vector<std::pair<std::string, std::string>> entries;
    for (const auto& [name, node] : tree) {
        if (node.empty()) {
            entries.emplace_back(name, node.data());
        } else {
            for (const auto& [sub, leaf] : node) entries.emplace_back(name + "." + sub, leaf.data());
        }
    }
    const auto scen = std::find_if(entries.begin(), entries.end(),
                                   [](const auto& e) { return e.first == "scenario"; });
    if (scen == entries.end()) throw ConfigError(origin.string() + ": missing required key 'scenario'");

    ScenarioSpec spec = default_spec(scenario_from_string(trim(scen->second)));
    for (const auto& [key, value] : entries) {
        if (key == "scenario") continue;
        apply_setting(spec, key, value);
    }
    if (!spec.initial.samples_path.empty() && std::filesystem::path(spec.initial.samples_path).is_relative()) {
        spec.initial.samples_path = (origin.parent_path() / spec.initial.samples_path).string();
    }
    spec.validate();
    return spec;
}

ScenarioSpec load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path);
}

}  // namespace nlt
