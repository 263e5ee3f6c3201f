#pragma once

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>

#include "nlt/diagnostics.hpp"
#include "nlt/field.hpp"
#include "nlt/solver_config.hpp"

namespace nlt {

struct SimState {
    double t = 0.0;
    RealField theta;
    std::size_t step_count = 0;
};

enum class RunStatus { completed, blow_up_suspected, step_floor_reached, nonfinite_abort };

std::string to_string(RunStatus s);

struct RunOutcome {
    RunStatus status = RunStatus::completed;
    double final_time = 0.0;
    std::string reason;
    /// Last finite state reached.
    SimState last_state;
};

/// Thrown by step() when a mode of the new state is not finite.
class NonfiniteError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// (H theta) theta_x. With dealiasing, both factors and the product are truncated by
/// the 2/3 rule.
RealField nonlinear_rhs(const RealField& theta, bool dealias_on);

/// CFL step cfl * dx / max(|H theta|, 1e-12) clamped to [dt_min, dt_max] and to the
/// time left before the next record point, extra stop or t_end.
double choose_dt(const SimState& state, const SolverConfig& config);

/// Unclamped CFL step cfl * dx / max(|H theta|, 1e-12).
double cfl_dt(const RealField& theta, double cfl);

/// One integrating-factor RK4 step: the linear term -nu |k|^alpha is absorbed through
/// exp(-nu |k|^alpha t) and classical RK4 runs on the transformed nonlinearity.
SimState step(const SimState& state, double dt, const SolverConfig& config);

struct RunObserver {
    /// Receives the t = 0 record, one per record_interval and one at termination.
    std::function<void(const DiagRecord&)> on_record;
    /// Receives the initial state and every accepted step together with max|theta_x|.
    std::function<void(const SimState&, double max_grad)> on_step;
};

RunOutcome run(const SolverConfig& config, const RealField& theta0, const JParams& jparams,
               const RunObserver& observer = {});

}  // namespace nlt
