#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "nlt/diagnostics.hpp"
#include "nlt/initial_data.hpp"
#include "nlt/solver_config.hpp"

namespace nlt {

enum class ScenarioKind {
    inviscid_blowup,
    viscous_supercritical,
    critical_small,
    critical_large,
    subcritical_exploratory,
    lemma_verify,
    regime_sweep,
};

std::string to_string(ScenarioKind k);

/// Bad configuration: unparsable text, unknown key or invalid value.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Throws ConfigError on an unknown name.
ScenarioKind scenario_from_string(const std::string& name);

struct SweepSpec {
    std::vector<double> nu;
    std::vector<double> alpha;
    unsigned threads = 0;  // 0: hardware concurrency
};

struct LemmaSpec {
    std::vector<double> deltas{0.5};
    std::uint64_t seed = 2024;
    double lambda_half_width = 60.0;
    double lambda_spacing = 0.01;
    double scan_lambda_max = 50.0;
    double dilation = 2.0;
};

struct ScenarioSpec {
    ScenarioKind kind = ScenarioKind::inviscid_blowup;
    std::size_t n = 4096;
    double half_length = 0.0;
    SolverConfig solver;
    InitialData initial;
    JParams j;
    /// Empty: <output root>/<scenario name>.
    std::string output_dir;
    /// Empty: the scenario's default snapshot policy with snapshot_count entries.
    std::vector<double> snapshot_times;
    std::size_t snapshot_count = 9;
    /// No paper theorem covers the regime; monitors are reported but not enforced.
    bool exploratory = false;
    SweepSpec sweep;
    LemmaSpec lemma;

    /// Throws ConfigError naming the offending field.
    void validate() const;
};

ScenarioSpec default_spec(ScenarioKind kind);

/// Flat `key = value` text with optional [section] headers. The top-level key `scenario`
/// is required and selects the defaults; every other key overrides one of them.
/// `origin` labels parse errors and anchors relative file paths.
ScenarioSpec parse_config(const std::string& text, const std::filesystem::path& origin = "config");
ScenarioSpec load_config(const std::filesystem::path& path);

/// Sets one dotted key (e.g. "solver.nu") from its text value. Throws ConfigError.
void apply_setting(ScenarioSpec& spec, const std::string& key, const std::string& value);

/// Every settable key with its current value, in a fixed order (the run.json echo).
std::vector<std::pair<std::string, std::string>> config_echo(const ScenarioSpec& spec);

}  // namespace nlt
