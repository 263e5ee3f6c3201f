#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nlt/field.hpp"
#include "nlt/solver_config.hpp"

namespace nlt {

/// Weight exponent and support half-width of the blow-up functional
/// J = int_0^L (max theta - theta) / x^(1+delta) dx.
struct JParams {
    double delta = 0.5;
    double support = 1.0;

    void validate() const;
};

/// One snapshot of every monitored quantity. Column order of series.csv follows
/// the member order.
struct DiagRecord {
    double t = 0.0;
    double l1 = 0.0;
    double l2 = 0.0;
    double linf = 0.0;      // max theta
    double min_val = 0.0;   // min theta
    double max_grad = 0.0;  // max |theta_x|
    double hhalf = 0.0;     // ||Lambda^(1/2) theta||
    double h1 = 0.0;        // ||Lambda theta||
    double h2 = 0.0;        // ||Laplacian theta||
    double diss = 0.0;      // ||Lambda^(alpha/2) theta||^2
    double cum_diss = 0.0;  // time integral of diss
    double pos_int = 0.0;   // int theta^2 Lambda theta
    double j_val = 0.0;
    double dj_rhs = 0.0;
    /// Spectral energy fraction above the 2/3 cutoff, as an RMS ratio.
    double spectral_tail = 0.0;
    /// int_0^P (m_t - theta)^2 / x^(2+delta) dx, right side of the Cauchy-Schwarz chain.
    double weighted_sq = 0.0;
};

/// Column names of series.csv, in DiagRecord member order.
const std::vector<std::string>& diag_record_columns();
std::vector<double> diag_record_values(const DiagRecord& r);

/// Norm fields only (l1 .. diss, pos_int, spectral_tail); the rest stay zero.
DiagRecord compute_norms(const RealField& theta, double alpha);

/// int_0^L (m_t - theta)/x^(1+delta) dx with m_t = max theta.
double j_functional(const RealField& theta, const JParams& p);

/// Right side of dJ/dt: -int_0^P theta_x H theta / x^(1+delta) dx.
double dj_rhs(const RealField& theta, const JParams& p);

/// int_0^P (m_t - theta)^2 / x^(2+delta) dx, the weighted norm in the Cauchy-Schwarz step.
double weighted_square_integral(const RealField& theta, const JParams& p);

/// Set when |max theta - 1| > 0.05, where J loses its normalization.
std::optional<std::string> normalization_warning(const RealField& theta);

/// int theta^2 Lambda theta dx, evaluated spectrally.
double positivity_integral(const RealField& theta);

/// Full record: norms plus J terms. cum_diss is supplied by the integrator.
DiagRecord make_record(const RealField& theta, double t, double alpha, const JParams& p,
                       double cum_diss);

struct MonitorTolerances {
    double abs = 1e-8;  // on min theta and max theta
    double rel = 1e-6;  // on L1, L2 and the dissipation budget
};

struct Violation {
    std::string monitor;
    double t = 0.0;
    double value = 0.0;
    double limit = 0.0;
};

/// Checks the maximum principle, L1/L2 decay and (nu > 0) the dissipation budget
/// l2_0^2 / (2 nu). Records must be in time order.
std::vector<Violation> monotonicity_report(std::span<const DiagRecord> records,
                                           const SolverConfig& config,
                                           const MonitorTolerances& tol = {});

/// One monitor outcome with the extremal measured value and the limit it was held to.
struct MonitorVerdict {
    std::string monitor;
    bool pass = true;
    double value = 0.0;
    double limit = 0.0;
};

/// Extremal values of the monotonicity_report monitors: min_theta, max_theta,
/// l1_nonincreasing, l2_nonincreasing (largest relative increase between records) and,
/// for nu > 0, dissipation_budget.
std::vector<MonitorVerdict> monotonicity_verdicts(std::span<const DiagRecord> records,
                                                  const SolverConfig& config,
                                                  const MonitorTolerances& tol = {});

/// |d(l2^2/2)/dt + pos_int/2 + nu diss| per record. Records must be equispaced in t,
/// at least three of them. Interior points use centered differences, endpoints the
/// second-order one-sided formula.
std::vector<double> energy_balance_residual(std::span<const DiagRecord> records, double nu);

/// Leading records whose times sit on the uniform grid k * interval.
std::span<const DiagRecord> uniform_prefix(std::span<const DiagRecord> records,
                                           double interval);

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double t_star = 0.0;  // root of the fitted line
    double r2 = 0.0;
};

struct BlowUpFit {
    LineFit inverse_grad;  // fit of (t, 1/max_grad)
    LineFit inverse_j;     // fit of (t, 1/j_val)
};

/// Least-squares lines through the last `window` records. Requires window >= 3 and
/// strictly increasing max_grad across the window.
BlowUpFit blow_up_fit(std::span<const DiagRecord> records, std::size_t window);

LineFit fit_line(std::span<const double> t, std::span<const double> y);

}  // namespace nlt
