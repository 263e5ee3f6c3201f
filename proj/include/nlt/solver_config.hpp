#pragma once

#include <cstdint>
#include <limits>
#include <vector>

namespace nlt {

/// Parameters of one run of theta_t = (H theta) theta_x - nu Lambda^alpha theta.
struct SolverConfig {
    double nu = 0.0;
    double alpha = 1.0;
    double cfl = 0.4;
    double dt_max = 1e-2;
    double dt_min = 1e-10;
    double t_end = 1.0;
    /// Stop with blow_up_suspected once max|theta_x| reaches this level.
    double grad_threshold = 1e4;
    double record_interval = 1e-2;
    bool dealias_on = true;
    /// Test hook: false drops (H theta) theta_x and leaves the linear flow.
    bool nonlinear_on = true;
    std::uint64_t seed = 0;
    /// Times the stepper lands on exactly, in addition to the record grid.
    std::vector<double> extra_stops;

    /// Throws std::invalid_argument naming the first offending field.
    void validate() const;
};

}  // namespace nlt
