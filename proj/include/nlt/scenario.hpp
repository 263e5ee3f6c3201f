#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nlt/config.hpp"
#include "nlt/diagnostics.hpp"
#include "nlt/mellin.hpp"
#include "nlt/solver.hpp"

namespace nlt {

/// Monitor outcome as written to run.json. Exploratory runs report without enforcing.
struct ScenarioVerdict {
    MonitorVerdict verdict;
    bool enforced = true;
};

struct Snapshot {
    std::size_t index = 0;
    double t = 0.0;
    double max_grad = 0.0;
    RealField theta;
};

enum class ExitCode : int { pass = 0, monitor_violation = 1, numerical_abort = 2, config_error = 3 };

struct SimulationResult {
    explicit SimulationResult(RunOutcome o) : outcome(std::move(o)) {}

    RunOutcome outcome;
    std::vector<DiagRecord> records;
    std::vector<Snapshot> snapshots;
    std::vector<ScenarioVerdict> verdicts;
    std::optional<BlowUpFit> fit;
    std::vector<std::string> warnings;
    bool exploratory = false;
    ExitCode exit_code = ExitCode::pass;
};

/// Runs one PDE scenario in memory: solver, records, snapshots and monitor verdicts.
/// Throws ConfigError when the initial data violate the scenario's hypotheses.
SimulationResult simulate(const ScenarioSpec& spec);

/// Monitor verdicts for a finished run (also used by simulate).
std::vector<ScenarioVerdict> scenario_verdicts(const ScenarioSpec& spec,
                                               const std::vector<DiagRecord>& records,
                                               const RunOutcome& outcome, double max_asymmetry,
                                               bool exploratory);

/// Window on which the record series resolves the dynamics:
///  space: the leading uniform segment whose spectral tail stays below `tail_limit`;
///  time:  from the first record after which the dissipation rate pos_int/2 + nu diss
///         changes by at most `change_limit` (relative) between consecutive records.
/// The second condition drops the initial layer of fast-decaying high modes.
std::vector<DiagRecord> resolved_window(const std::vector<DiagRecord>& records, double nu,
                                        double interval, double tail_limit, double change_limit);

struct RegimeMapEntry {
    double nu = 0.0;
    double alpha = 0.0;
    std::string status;  // run status, or "error"
    double final_time = 0.0;
    /// Time of the blow-up trigger, NaN if the run did not trigger.
    double trigger_time = 0.0;
    double max_grad = 0.0;
    double linf = 0.0;
    double hhalf = 0.0;
    bool hhalf_nonincreasing = false;
    /// Theorem covering the point: "blow-up" (nu = 0), "global" (alpha > 1),
    /// "small-data" (alpha = 1, max theta0 < nu) or "none".
    std::string regime;
    bool exploratory = false;
    std::string error;
};

/// One entry per (nu, alpha) grid point in grid order (nu outer, alpha inner). Points run
/// concurrently on `threads` workers (0: hardware concurrency); failures land in `error`.
std::vector<RegimeMapEntry> run_sweep(const ScenarioSpec& base);

struct LemmaResult {
    std::vector<mellin::InequalityReport> reports;
    struct Constant {
        double delta = 0.0;
        mellin::ConstantScan scan;
    };
    std::vector<Constant> constants;
    struct Dilation {
        double delta = 0.0;
        double s = 0.0;
        double measured = 0.0;  // I(f(s.)) / I(f)
        double expected = 0.0;  // s^(1 + delta)
        bool pass = false;
    };
    std::vector<Dilation> dilations;
    /// Rows for functions whose evaluation threw (exploratory ones included).
    std::vector<std::pair<std::string, std::string>> errors;
    bool pass = true;
};

/// Verifies the weighted inequality on the seeded corpus (plus the exploratory bounded-tail
/// function) for every configured delta, and the dilation law on x^2 exp(-x^2).
LemmaResult verify_lemma(const ScenarioSpec& spec);

}  // namespace nlt
