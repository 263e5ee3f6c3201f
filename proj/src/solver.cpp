#include "nlt/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "nlt/spectral.hpp"

namespace nlt {

void SolverConfig::validate() const {
    auto fail = [](const char* what) { throw std::invalid_argument(what); };
    if (!(nu >= 0.0) || !std::isfinite(nu)) fail("nu must be finite and >= 0");
    if (!(alpha >= 0.0 && alpha <= 2.0)) fail("alpha must lie in [0, 2]");
    if (!(cfl > 0.0 && cfl <= 1.0)) fail("cfl must lie in (0, 1]");
    if (!(dt_min > 0.0)) fail("dt_min must be positive");
    if (!(dt_max >= dt_min)) fail("dt_max must be >= dt_min");
    if (!(t_end > 0.0) || !std::isfinite(t_end)) fail("t_end must be positive and finite");
    if (!(grad_threshold > 0.0)) fail("grad_threshold must be positive");
    if (!(record_interval > 0.0)) fail("record_interval must be positive");
    for (double s : extra_stops) {
        if (!(s >= 0.0 && s <= t_end)) fail("extra stop times must lie in [0, t_end]");
    }
}

std::string to_string(RunStatus s) {
    switch (s) {
        case RunStatus::completed: return "completed";
        case RunStatus::blow_up_suspected: return "blow_up_suspected";
        case RunStatus::step_floor_reached: return "step_floor_reached";
        case RunStatus::nonfinite_abort: return "nonfinite_abort";
    }
    return "unknown";
}

namespace {

constexpr double kVelocityFloor = 1e-12;

double max_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

/// Spectral-space integrator working on the half spectrum of theta.
class Stepper {
public:
    Stepper(const Grid& grid, const SolverConfig& config) : grid_(grid), config_(config) {
        const std::size_t ns = grid.spectrum_size();
        rate_.resize(ns);
        for (std::size_t m = 0; m < ns; ++m) {
            rate_[m] = (config.nu > 0.0 && m > 0)
                           ? config.nu * std::pow(grid.wavenumber(m), config.alpha)
                           : 0.0;
        }
        if (config.nu > 0.0 && config.alpha == 0.0) {
            // Lambda^0 is the identity, including the zero mode.
            for (double& r : rate_) r = config.nu;
        }
    }

    Spectrum nonlinear(const Spectrum& v) const {
        Spectrum out(v.size(), 0.0);
        if (!config_.nonlinear_on) return out;
        Spectrum base = v;
        if (config_.dealias_on) apply_dealias(grid_, base);
        Spectrum h = base;
        apply_hilbert(grid_, h);
        Spectrum d = std::move(base);
        apply_deriv(grid_, d);
        const std::vector<double> hv = inverse_transform(grid_, std::move(h));
        const std::vector<double> dv = inverse_transform(grid_, std::move(d));
        std::vector<double> prod(hv.size());
        for (std::size_t j = 0; j < prod.size(); ++j) prod[j] = hv[j] * dv[j];
        out = forward_transform(grid_, prod);
        if (config_.dealias_on) apply_dealias(grid_, out);
        return out;
    }

    Spectrum advance(const Spectrum& v, double dt) const {
        const std::size_t ns = v.size();
        std::vector<double> e_half(ns);
        std::vector<double> e_full(ns);
        for (std::size_t m = 0; m < ns; ++m) {
            e_half[m] = std::exp(-rate_[m] * 0.5 * dt);
            e_full[m] = e_half[m] * e_half[m];
        }
        const Spectrum k1 = nonlinear(v);
        Spectrum tmp(ns);
        for (std::size_t m = 0; m < ns; ++m) tmp[m] = e_half[m] * (v[m] + 0.5 * dt * k1[m]);
        const Spectrum k2 = nonlinear(tmp);
        for (std::size_t m = 0; m < ns; ++m) tmp[m] = e_half[m] * v[m] + 0.5 * dt * k2[m];
        const Spectrum k3 = nonlinear(tmp);
        for (std::size_t m = 0; m < ns; ++m) {
            tmp[m] = e_full[m] * v[m] + dt * e_half[m] * k3[m];
        }
        const Spectrum k4 = nonlinear(tmp);
        Spectrum out(ns);
        for (std::size_t m = 0; m < ns; ++m) {
            out[m] = e_full[m] * v[m] +
                     dt / 6.0 *
                         (e_full[m] * k1[m] + 2.0 * e_half[m] * (k2[m] + k3[m]) + k4[m]);
            if (!std::isfinite(out[m].real()) || !std::isfinite(out[m].imag())) {
                throw NonfiniteError("nonfinite Fourier mode after step");
            }
        }
        return out;
    }

    double max_velocity(const Spectrum& v) const {
        Spectrum h = v;
        apply_hilbert(grid_, h);
        return max_abs(inverse_transform(grid_, std::move(h)));
    }

    double max_gradient(const Spectrum& v) const {
        Spectrum d = v;
        apply_deriv(grid_, d);
        return max_abs(inverse_transform(grid_, std::move(d)));
    }

    double dissipation(const Spectrum& v) const {
        return sobolev_seminorm_squared(grid_, v, 0.5 * config_.alpha);
    }

private:
    Grid grid_;
    const SolverConfig& config_;
    std::vector<double> rate_;
};

/// Next time after t on the record grid, the extra stops or t_end.
double next_stop(double t, const SolverConfig& config) {
    const double ri = config.record_interval;
    double k = std::floor(t / ri + 1e-9);
    double next = (k + 1.0) * ri;
    if (next <= t * (1.0 + 1e-12) + 1e-14) next += ri;
    next = std::min(next, config.t_end);
    for (double s : config.extra_stops) {
        if (s > t + 1e-12 * std::max(1.0, t) && s < next) next = s;
    }
    return next;
}

bool on_record_grid(double t, double interval) {
    const double k = std::round(t / interval);
    return std::abs(t - k * interval) <= 1e-9 * std::max(1.0, t);
}

}  // namespace

RealField nonlinear_rhs(const RealField& theta, bool dealias_on) {
    SolverConfig config;
    config.dealias_on = dealias_on;
    Stepper stepper(theta.grid(), config);
    return from_spectrum(theta.grid(), stepper.nonlinear(to_spectrum(theta)));
}

double cfl_dt(const RealField& theta, double cfl) {
    const double v = hilbert(theta).max_abs();
    return cfl * theta.grid().dx() / std::max(v, kVelocityFloor);
}

double choose_dt(const SimState& state, const SolverConfig& config) {
    double dt = std::clamp(cfl_dt(state.theta, config.cfl), config.dt_min, config.dt_max);
    const double remaining = next_stop(state.t, config) - state.t;
    if (remaining > 0.0) dt = std::min(dt, remaining);
    return dt;
}

SimState step(const SimState& state, double dt, const SolverConfig& config) {
    if (!(dt > 0.0)) throw std::invalid_argument("time step must be positive");
    const Grid& grid = state.theta.grid();
    Stepper stepper(grid, config);
    Spectrum next = stepper.advance(to_spectrum(state.theta), dt);
    std::vector<double> values = inverse_transform(grid, std::move(next));
    for (double v : values) {
        if (!std::isfinite(v)) throw NonfiniteError("nonfinite sample after step");
    }
    return SimState{state.t + dt, RealField(grid, std::move(values)), state.step_count + 1};
}

RunOutcome run(const SolverConfig& config, const RealField& theta0, const JParams& jparams,
               const RunObserver& observer) {
    config.validate();
    jparams.validate();
    const Grid& grid = theta0.grid();
    Stepper stepper(grid, config);

    Spectrum v = to_spectrum(theta0);
    SimState state{0.0, theta0, 0};
    double cum_diss = 0.0;
    double diss_prev = stepper.dissipation(v);
    double last_record_t = -1.0;

    auto emit_record = [&] {
        if (observer.on_record && state.t != last_record_t) {
            observer.on_record(make_record(state.theta, state.t, config.alpha, jparams, cum_diss));
        }
        last_record_t = state.t;
    };
    auto finish = [&](RunStatus status, std::string reason) {
        emit_record();
        return RunOutcome{status, state.t, std::move(reason), state};
    };

    double grad = stepper.max_gradient(v);
    if (observer.on_step) observer.on_step(state, grad);
    emit_record();
    if (grad >= config.grad_threshold) {
        return finish(RunStatus::blow_up_suspected, "initial max|theta_x| above threshold");
    }

    const double end_tol = 1e-12 * std::max(1.0, config.t_end);
    while (state.t < config.t_end - end_tol) {
        const double velocity = stepper.max_velocity(v);
        const double raw = config.cfl * grid.dx() / std::max(velocity, kVelocityFloor);
        if (raw < config.dt_min) {
            return finish(RunStatus::step_floor_reached,
                          "CFL step " + std::to_string(raw) + " below dt_min");
        }
        double dt = std::min(raw, config.dt_max);
        dt = std::min(dt, next_stop(state.t, config) - state.t);

        Spectrum next;
        try {
            next = stepper.advance(v, dt);
        } catch (const NonfiniteError& e) {
            return finish(RunStatus::nonfinite_abort, e.what());
        }
        std::vector<double> values = inverse_transform(grid, next);
        if (std::any_of(values.begin(), values.end(), [](double x) { return !std::isfinite(x); })) {
            return finish(RunStatus::nonfinite_abort, "nonfinite sample after step");
        }

        v = std::move(next);
        double t_new = state.t + dt;
        const double snapped = std::round(t_new / config.record_interval) * config.record_interval;
        if (std::abs(t_new - snapped) <= 1e-9 * std::max(1.0, t_new)) t_new = snapped;
        if (std::abs(t_new - config.t_end) <= end_tol) t_new = config.t_end;

        const double diss = stepper.dissipation(v);
        cum_diss += 0.5 * dt * (diss + diss_prev);
        diss_prev = diss;
        state = SimState{t_new, RealField(grid, std::move(values)), state.step_count + 1};

        grad = stepper.max_gradient(v);
        if (observer.on_step) observer.on_step(state, grad);
        if (grad >= config.grad_threshold) {
            return finish(RunStatus::blow_up_suspected,
                          "max|theta_x| = " + std::to_string(grad) + " reached threshold " +
                              std::to_string(config.grad_threshold));
        }
        if (on_record_grid(state.t, config.record_interval)) emit_record();
    }
    return finish(RunStatus::completed, "reached t_end");
}

}  // namespace nlt
