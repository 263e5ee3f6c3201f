#include "nlt/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "nlt/quadrature.hpp"
#include "nlt/spectral.hpp"

namespace nlt {

void JParams::validate() const {
    if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0, 1)");
    if (!(support > 0.0)) throw std::invalid_argument("support half-width L must be positive");
}

const std::vector<std::string>& diag_record_columns() {
    static const std::vector<std::string> cols = {
        "t",    "l1",   "l2",       "linf",    "min_val", "max_grad", "hhalf",         "h1",
        "h2",   "diss", "cum_diss", "pos_int", "j_val",   "dj_rhs",   "spectral_tail", "weighted_sq"};
    return cols;
}

std::vector<double> diag_record_values(const DiagRecord& r) {
    return {r.t,  r.l1,   r.l2,       r.linf,    r.min_val, r.max_grad, r.hhalf,         r.h1,
            r.h2, r.diss, r.cum_diss, r.pos_int, r.j_val,   r.dj_rhs,   r.spectral_tail, r.weighted_sq};
}

namespace {

double tail_ratio(const Grid& grid, const Spectrum& s) {
    const std::size_t half = grid.size() / 2;
    const std::size_t cut = dealias_cutoff(grid);
    double total = 0.0;
    double tail = 0.0;
    for (std::size_t m = 0; m <= half; ++m) {
        const double w = (m == 0 || m == half) ? 1.0 : 2.0;
        const double e = w * std::norm(s[m]);
        total += e;
        if (m > cut) tail += e;
    }
    return total > 0.0 ? std::sqrt(tail / total) : 0.0;
}

RealField field_from(const Grid& grid, const Spectrum& s,
                     const std::function<void(const Grid&, Spectrum&)>& op) {
    Spectrum copy = s;
    op(grid, copy);
    return from_spectrum(grid, std::move(copy));
}

// Samples g(x_j) at nodes x_j > 0 of the (symmetric) grid.
template <class Integrand>
std::vector<double> positive_half(const Grid& grid, Integrand g) {
    std::vector<double> out;
    out.reserve(grid.size() / 2);
    for (std::size_t j = grid.origin_index() + 1; j < grid.size(); ++j) out.push_back(g(j));
    return out;
}

}  // namespace

DiagRecord compute_norms(const RealField& theta, double alpha) {
    const Grid& grid = theta.grid();
    const double dx = grid.dx();
    const Spectrum s = to_spectrum(theta);

    DiagRecord r;
    double l1 = 0.0;
    double l2 = 0.0;
    for (double v : theta.values()) {
        l1 += std::abs(v);
        l2 += v * v;
    }
    r.l1 = l1 * dx;
    r.l2 = std::sqrt(l2 * dx);
    r.linf = theta.max();
    r.min_val = theta.min();
    r.max_grad = field_from(grid, s, apply_deriv).max_abs();
    r.hhalf = std::sqrt(sobolev_seminorm_squared(grid, s, 0.5));
    r.h1 = std::sqrt(sobolev_seminorm_squared(grid, s, 1.0));
    r.h2 = std::sqrt(sobolev_seminorm_squared(grid, s, 2.0));
    r.diss = sobolev_seminorm_squared(grid, s, 0.5 * alpha);
    const RealField lam = field_from(grid, s, [](const Grid& g, Spectrum& x) {
        apply_frac_laplacian(g, x, 1.0);
    });
    double pos = 0.0;
    for (std::size_t j = 0; j < theta.size(); ++j) pos += theta[j] * theta[j] * lam[j];
    r.pos_int = pos * dx;
    r.spectral_tail = tail_ratio(grid, s);
    return r;
}

double j_functional(const RealField& theta, const JParams& p) {
    p.validate();
    const Grid& grid = theta.grid();
    if (p.support > grid.half_length() - grid.dx()) {
        throw std::invalid_argument("J support exceeds the grid half-length");
    }
    const double top = theta.max();
    const auto g = positive_half(grid, [&](std::size_t j) {
        const double x = grid.node(j);
        return (top - theta[j]) / std::pow(x, 1.0 + p.delta);
    });
    return origin_corrected_trapezoid(g, grid.dx(), p.support, 1.0 - p.delta);
}

double dj_rhs(const RealField& theta, const JParams& p) {
    p.validate();
    const Grid& grid = theta.grid();
    const Spectrum s = to_spectrum(theta);
    const RealField dtheta = field_from(grid, s, apply_deriv);
    const RealField htheta = field_from(grid, s, apply_hilbert);
    const auto g = positive_half(grid, [&](std::size_t j) {
        return dtheta[j] * htheta[j] / std::pow(grid.node(j), 1.0 + p.delta);
    });
    const double upper = grid.half_length() - grid.dx();
    return -origin_corrected_trapezoid(g, grid.dx(), upper, 1.0 - p.delta);
}

double weighted_square_integral(const RealField& theta, const JParams& p) {
    p.validate();
    const Grid& grid = theta.grid();
    const double top = theta.max();
    const auto g = positive_half(grid, [&](std::size_t j) {
        const double d = top - theta[j];
        return d * d / std::pow(grid.node(j), 2.0 + p.delta);
    });
    const double upper = grid.half_length() - grid.dx();
    return origin_corrected_trapezoid(g, grid.dx(), upper, 2.0 - p.delta);
}

std::optional<std::string> normalization_warning(const RealField& theta) {
    const double top = theta.max();
    if (std::abs(top - 1.0) > 0.05) {
        std::ostringstream os;
        os << "J assumes max theta = 1, got " << top;
        return os.str();
    }
    return std::nullopt;
}

double positivity_integral(const RealField& theta) {
    const RealField lam = frac_laplacian(theta, 1.0);
    double s = 0.0;
    for (std::size_t j = 0; j < theta.size(); ++j) s += theta[j] * theta[j] * lam[j];
    return s * theta.grid().dx();
}

DiagRecord make_record(const RealField& theta, double t, double alpha, const JParams& p,
                       double cum_diss) {
    DiagRecord r = compute_norms(theta, alpha);
    r.t = t;
    r.cum_diss = cum_diss;
    r.j_val = j_functional(theta, p);
    r.dj_rhs = dj_rhs(theta, p);
    r.weighted_sq = weighted_square_integral(theta, p);
    return r;
}

// ---------------------------------------------------------------- monitors

std::vector<Violation> monotonicity_report(std::span<const DiagRecord> records,
                                           const SolverConfig& config,
                                           const MonitorTolerances& tol) {
    std::vector<Violation> out;
    if (records.empty()) return out;
    const DiagRecord& first = records.front();
    const double budget = config.nu > 0.0
                              ? first.l2 * first.l2 / (2.0 * config.nu) * (1.0 + tol.rel)
                              : 0.0;
    for (std::size_t i = 0; i < records.size(); ++i) {
        const DiagRecord& r = records[i];
        if (r.min_val < -tol.abs) out.push_back({"min_theta", r.t, r.min_val, -tol.abs});
        if (r.linf > first.linf + tol.abs) {
            out.push_back({"max_theta", r.t, r.linf, first.linf + tol.abs});
        }
        if (i > 0) {
            const DiagRecord& prev = records[i - 1];
            if (r.l1 > prev.l1 * (1.0 + tol.rel)) {
                out.push_back({"l1_nonincreasing", r.t, r.l1, prev.l1 * (1.0 + tol.rel)});
            }
            if (r.l2 > prev.l2 * (1.0 + tol.rel)) {
                out.push_back({"l2_nonincreasing", r.t, r.l2, prev.l2 * (1.0 + tol.rel)});
            }
        }
        if (config.nu > 0.0 && r.cum_diss > budget) {
            out.push_back({"dissipation_budget", r.t, r.cum_diss, budget});
        }
    }
    return out;
}

std::vector<MonitorVerdict> monotonicity_verdicts(std::span<const DiagRecord> records,
                                                  const SolverConfig& config,
                                                  const MonitorTolerances& tol) {
    if (records.empty()) throw std::invalid_argument("no records to check");
    const DiagRecord& first = records.front();
    double lowest = first.min_val;
    double highest = first.linf;
    double l1_rise = -std::numeric_limits<double>::infinity();
    double l2_rise = -std::numeric_limits<double>::infinity();
    double spent = 0.0;
    auto rise = [](double now, double before) {
        return before > 0.0 ? (now - before) / before : now - before;
    };
    for (std::size_t i = 0; i < records.size(); ++i) {
        const DiagRecord& r = records[i];
        lowest = std::min(lowest, r.min_val);
        highest = std::max(highest, r.linf);
        spent = std::max(spent, r.cum_diss);
        if (i > 0) {
            l1_rise = std::max(l1_rise, rise(r.l1, records[i - 1].l1));
            l2_rise = std::max(l2_rise, rise(r.l2, records[i - 1].l2));
        }
    }
    if (records.size() == 1) l1_rise = l2_rise = 0.0;

    std::vector<MonitorVerdict> out;
    out.push_back({"min_theta", lowest >= -tol.abs, lowest, -tol.abs});
    out.push_back({"max_theta", highest <= first.linf + tol.abs, highest, first.linf + tol.abs});
    out.push_back({"l1_nonincreasing", l1_rise <= tol.rel, l1_rise, tol.rel});
    out.push_back({"l2_nonincreasing", l2_rise <= tol.rel, l2_rise, tol.rel});
    if (config.nu > 0.0) {
        const double budget = first.l2 * first.l2 / (2.0 * config.nu) * (1.0 + tol.rel);
        out.push_back({"dissipation_budget", spent <= budget, spent, budget});
    }
    return out;
}

std::span<const DiagRecord> uniform_prefix(std::span<const DiagRecord> records,
                                           double interval) {
    std::size_t count = 0;
    for (const DiagRecord& r : records) {
        const double k = std::round(r.t / interval);
        if (std::abs(r.t - k * interval) > 1e-9 * std::max(1.0, std::abs(r.t))) break;
        if (static_cast<std::size_t>(k) != count) break;
        ++count;
    }
    return records.first(count);
}

std::vector<double> energy_balance_residual(std::span<const DiagRecord> records, double nu) {
    const std::size_t n = records.size();
    if (n < 3) throw std::invalid_argument("energy balance needs at least three records");
    const double dt = records[1].t - records[0].t;
    if (!(dt > 0.0)) throw std::invalid_argument("records must be strictly increasing in t");
    for (std::size_t i = 1; i < n; ++i) {
        const double gap = records[i].t - records[i - 1].t;
        if (std::abs(gap - dt) > 1e-9 * dt) {
            throw std::invalid_argument("energy balance needs equispaced records");
        }
    }
    std::vector<double> e(n);
    for (std::size_t i = 0; i < n; ++i) e[i] = 0.5 * records[i].l2 * records[i].l2;

    std::vector<double> res(n);
    for (std::size_t i = 0; i < n; ++i) {
        double de = 0.0;
        if (i == 0) {
            de = (-3.0 * e[0] + 4.0 * e[1] - e[2]) / (2.0 * dt);
        } else if (i == n - 1) {
            de = (3.0 * e[n - 1] - 4.0 * e[n - 2] + e[n - 3]) / (2.0 * dt);
        } else {
            de = (e[i + 1] - e[i - 1]) / (2.0 * dt);
        }
        res[i] = std::abs(de + 0.5 * records[i].pos_int + nu * records[i].diss);
    }
    return res;
}

LineFit fit_line(std::span<const double> t, std::span<const double> y) {
    const std::size_t n = t.size();
    if (n < 2 || y.size() != n) throw std::invalid_argument("line fit needs matching samples");
    double tm = 0.0;
    double ym = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        tm += t[i];
        ym += y[i];
    }
    tm /= static_cast<double>(n);
    ym /= static_cast<double>(n);
    double stt = 0.0;
    double sty = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        stt += (t[i] - tm) * (t[i] - tm);
        sty += (t[i] - tm) * (y[i] - ym);
        syy += (y[i] - ym) * (y[i] - ym);
    }
    LineFit fit;
    fit.slope = sty / stt;
    fit.intercept = ym - fit.slope * tm;
    fit.t_star = -fit.intercept / fit.slope;
    double sse = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double e = y[i] - (fit.intercept + fit.slope * t[i]);
        sse += e * e;
    }
    fit.r2 = syy > 0.0 ? 1.0 - sse / syy : 1.0;
    return fit;
}

BlowUpFit blow_up_fit(std::span<const DiagRecord> records, std::size_t window) {
    if (window < 3) throw std::invalid_argument("blow-up fit window must be at least 3");
    if (records.size() < window) throw std::invalid_argument("fewer records than fit window");
    const auto tail = records.last(window);
    std::vector<double> t;
    std::vector<double> inv_grad;
    std::vector<double> inv_j;
    for (std::size_t i = 0; i < tail.size(); ++i) {
        if (i > 0 && !(tail[i].max_grad > tail[i - 1].max_grad)) {
            throw std::invalid_argument("max_grad is not strictly increasing over the window");
        }
        t.push_back(tail[i].t);
        inv_grad.push_back(1.0 / tail[i].max_grad);
        inv_j.push_back(1.0 / tail[i].j_val);
    }
    return {fit_line(t, inv_grad), fit_line(t, inv_j)};
}

}  // namespace nlt
