#include "nlt/mellin.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <random>
#include <sstream>

namespace nlt::mellin {

namespace {

using std::numbers::pi;

constexpr double kEnvelopeCut = 1e-12;
constexpr double kSpectrumCut = 1e-10;

// ------------------------------------------------------------ GSL helpers

struct WorkspaceDeleter {
    void operator()(gsl_integration_workspace* w) const { gsl_integration_workspace_free(w); }
};

class Integrator {
public:
    explicit Integrator(std::size_t limit = 2000)
        : limit_(limit), ws_(gsl_integration_workspace_alloc(limit)) {
        static const bool handler_off = [] {
            gsl_set_error_handler_off();
            return true;
        }();
        (void)handler_off;
    }

    template <class F>
    double finite(F&& f, double a, double b, double epsabs, double epsrel) {
        if (!(b > a)) return 0.0;
        gsl_function gf{&trampoline<F>, &f};
        double result = 0.0;
        double err = 0.0;
        gsl_integration_qags(&gf, a, b, epsabs, epsrel, limit_, ws_.get(), &result, &err);
        return result;
    }

    template <class F>
    double upper(F&& f, double a, double epsabs, double epsrel) {
        gsl_function gf{&trampoline<F>, &f};
        double result = 0.0;
        double err = 0.0;
        gsl_integration_qagiu(&gf, a, epsabs, epsrel, limit_, ws_.get(), &result, &err);
        return result;
    }

private:
    template <class F>
    static double trampoline(double x, void* p) {
        return (*static_cast<std::remove_reference_t<F>*>(p))(x);
    }

    std::size_t limit_;
    std::unique_ptr<gsl_integration_workspace, WorkspaceDeleter> ws_;
};

double envelope(const TestFunction& f, double rate, double u) {
    const double v = f.value(std::exp(u));
    return std::exp(-rate * u) * std::abs(v);
}

}  // namespace

// ------------------------------------------------------------ lambda grid

std::size_t LambdaGrid::size() const {
    return 2 * static_cast<std::size_t>(std::llround(half_width / spacing)) + 1;
}

double LambdaGrid::at(std::size_t i) const {
    const auto half = static_cast<double>((size() - 1) / 2);
    return (static_cast<double>(i) - half) * spacing;
}

// ------------------------------------------------------------ transforms

LogWindow log_window(const TestFunction& f, double rate) {
    constexpr double kStep = 0.5;
    constexpr double kLimit = 700.0;
    constexpr int kConfirm = 6;

    double peak = 0.0;
    for (double u = -40.0; u <= 40.0; u += 0.05) peak = std::max(peak, envelope(f, rate, u));
    const double upper_edge = std::isfinite(f.support_end) ? std::log(f.support_end) : kLimit;
    if (peak == 0.0) return {-1.0, std::min(0.0, upper_edge)};

    auto walk = [&](double start, double dir, double edge) {
        int quiet = 0;
        double u = start;
        double first_quiet = start;
        double prev = std::numeric_limits<double>::infinity();
        double top = peak;
        while (std::abs(u) <= kLimit) {
            const double e = envelope(f, rate, u);
            top = std::max(top, e);
            // Quiet only while the envelope keeps falling; a growing tail is never cut.
            const bool falling = e <= prev;
            prev = e;
            if (falling && e < kEnvelopeCut * top) {
                if (quiet == 0) first_quiet = u;
                if (++quiet >= kConfirm) return first_quiet;
            } else {
                quiet = 0;
            }
            if (dir > 0 && u >= edge) return edge;
            u += dir * kStep;
        }
        std::ostringstream os;
        os << "envelope of " << f.name << " does not decay below " << kEnvelopeCut
           << " of its peak towards " << (dir < 0 ? "0" : "infinity");
        throw QuadratureError(os.str());
    };

    LogWindow w;
    w.u_min = walk(0.0, -1.0, -kLimit);
    w.u_max = std::isfinite(f.support_end) ? upper_edge : walk(0.0, 1.0, kLimit);
    if (std::isfinite(f.support_end) && w.u_min >= w.u_max) w.u_min = w.u_max - 1.0;
    return w;
}

MellinSpectrum mellin_transform(const TestFunction& f, double delta, const LambdaGrid& grid,
                                double du) {
    if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0, 1)");
    const double rate = 0.5 + 0.5 * delta;
    const LogWindow w = log_window(f, rate);

    MellinSpectrum spec;
    spec.delta = delta;
    spec.grid = grid;
    const std::size_t nl = grid.size();
    spec.values.assign(nl, {0.0, 0.0});

    const auto nu = static_cast<std::size_t>(std::ceil((w.u_max - w.u_min) / du));
    const double h = (w.u_max - w.u_min) / static_cast<double>(nu);
    const double lam0 = grid.at(0);
    for (std::size_t j = 0; j <= nu; ++j) {
        const double u = w.u_min + static_cast<double>(j) * h;
        const double weight = (j == 0 || j == nu) ? 0.5 * h : h;
        const double g = weight * std::exp(-rate * u) * f.value(std::exp(u));
        if (g == 0.0) continue;
        std::complex<double> z = g * std::polar(1.0, lam0 * u);
        const std::complex<double> rot = std::polar(1.0, grid.spacing * u);
        for (std::size_t i = 0; i < nl; ++i) {
            spec.values[i] += z;
            z *= rot;
        }
    }
    return spec;
}

std::complex<double> multiplier(double lambda, double delta) {
    const double a = (0.5 + 0.5 * delta) * pi;
    const double b = lambda * pi;
    // Numerator and denominator divided by cosh b.
    const double e = std::exp(-2.0 * std::abs(b));
    const double sech = 2.0 * std::exp(-std::abs(b)) / (1.0 + e);
    const double tanh = std::tanh(b);
    const double den = 1.0 + std::cos(a) * sech;
    const double re = (a * std::sin(a) * sech + b * tanh) / den;
    const double im = (-a * tanh + b * std::sin(a) * sech) / den;
    return {re, im};
}

namespace {

void require_resolved(const MellinSpectrum& spec) {
    double peak = 0.0;
    for (const auto& v : spec.values) peak = std::max(peak, std::abs(v));
    if (peak == 0.0) return;
    const double edge = std::max(std::abs(spec.values.front()), std::abs(spec.values.back()));
    if (edge > kSpectrumCut * peak) {
        std::ostringstream os;
        os << "Mellin spectrum unresolved: |F| at lambda = +-" << spec.grid.half_width << " is "
           << edge / peak << " of its peak";
        throw QuadratureError(os.str());
    }
}

template <class Weight>
double lambda_trapezoid(const MellinSpectrum& spec, Weight weight, std::size_t stride) {
    const std::size_t n = spec.values.size();
    double sum = 0.0;
    for (std::size_t i = 0; i < n; i += stride) {
        const double w = (i == 0 || i + stride >= n) ? 0.5 : 1.0;
        sum += w * weight(spec.grid.at(i)) * std::norm(spec.values[i]);
    }
    return sum * spec.grid.spacing * static_cast<double>(stride);
}

double lhs_mellin_strided(const MellinSpectrum& spec, std::size_t stride) {
    const double delta = spec.delta;
    return lambda_trapezoid(
               spec, [delta](double l) { return multiplier(l, delta).real(); }, stride) /
           (2.0 * pi * pi);
}

}  // namespace

double lhs_mellin(const MellinSpectrum& spec) {
    require_resolved(spec);
    return lhs_mellin_strided(spec, 1);
}

double plancherel_norm(const MellinSpectrum& spec) {
    require_resolved(spec);
    return lambda_trapezoid(spec, [](double) { return 1.0; }, 1) / (2.0 * pi);
}

ResolvedMellin resolved_lhs_mellin(const TestFunction& f, double delta, LambdaGrid grid) {
    for (int attempt = 0; attempt < 4; ++attempt) {
        // An even number of intervals per side lets the 2h rule reuse every other node.
        const auto half = std::llround(grid.half_width / grid.spacing);
        if (half % 2 != 0) grid.spacing = grid.half_width / static_cast<double>(half + 1);
        MellinSpectrum spec = mellin_transform(f, delta, grid);
        const double fine = lhs_mellin(spec);
        const double coarse = lhs_mellin_strided(spec, 2);
        if (std::abs(fine - coarse) <= 1e-3 * std::abs(fine) || fine == 0.0) {
            return {std::move(spec), fine};
        }
        grid.spacing *= 0.5;
    }
    throw QuadratureError("lhs_mellin did not settle under lambda-grid refinement for " + f.name);
}

// ------------------------------------------------------------ direct side

double hilbert_even(const TestFunction& f, double x) {
    if (!(x > 0.0)) throw std::invalid_argument("hilbert_even needs x > 0");
    Integrator quad;
    // H of the even extension: (1/pi) PV int_0^inf f(xi) 2x / (x^2 - xi^2) dxi.
    auto kernel = [&](double xi) { return f.value(xi) * 2.0 * x / ((x - xi) * (x + xi)); };
    const double far = std::isfinite(f.support_end) ? f.support_end : x + std::max(1.0, x);

    auto excised = [&](double eps) {
        double s = quad.finite(kernel, 0.0, x - eps, 1e-15, 1e-12);
        if (x + eps < far) s += quad.finite(kernel, x + eps, far, 1e-15, 1e-12);
        if (!std::isfinite(f.support_end)) s += quad.upper(kernel, far, 1e-15, 1e-12);
        return s;
    };

    double eps = 0.25 * std::min(1.0, x);
    if (std::isfinite(f.support_end) && x < f.support_end) {
        eps = std::min(eps, 0.25 * (f.support_end - x));
    }
    // The excision error is odd in eps; one Richardson step removes the linear term.
    double i_prev = excised(eps);
    double i_cur = excised(0.5 * eps);
    double r_prev = 2.0 * i_cur - i_prev;
    for (int level = 2; level < 14; ++level) {
        eps *= 0.5;
        const double i_next = excised(0.5 * eps);
        const double r_cur = 2.0 * i_next - i_cur;
        if (std::abs(r_cur - r_prev) <= 1e-6 * std::abs(r_cur) + 1e-13) {
            return (8.0 * r_cur - r_prev) / 7.0 / pi;
        }
        r_prev = r_cur;
        i_cur = i_next;
    }
    std::ostringstream os;
    os << "principal-value excision did not converge for " << f.name << " at x = " << x;
    throw QuadratureError(os.str());
}

double lhs_direct(const TestFunction& f, double delta) {
    if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0, 1)");
    Integrator quad(4000);
    auto integrand = [&](double x) {
        const double fx = f.derivative(x);
        if (fx == 0.0) return 0.0;
        return -fx * hilbert_even(f, x) / std::pow(x, 1.0 + delta);
    };
    if (std::isfinite(f.support_end)) return quad.finite(integrand, 0.0, f.support_end, 1e-13, 1e-9);
    return quad.finite(integrand, 0.0, 1.0, 1e-13, 1e-9) + quad.upper(integrand, 1.0, 1e-13, 1e-9);
}

double rhs_weighted(const TestFunction& f, double delta) {
    if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0, 1)");
    const double rate = 0.5 + 0.5 * delta;
    LogWindow w;
    try {
        w = log_window(f, rate);
    } catch (const QuadratureError& e) {
        throw QuadratureError(std::string("weighted norm diverges: ") + e.what());
    }
    constexpr double kStep = 0.005;
    const auto n = static_cast<std::size_t>(std::ceil((w.u_max - w.u_min) / kStep));
    const double h = (w.u_max - w.u_min) / static_cast<double>(n);
    double sum = 0.0;
    for (std::size_t j = 0; j <= n; ++j) {
        const double u = w.u_min + static_cast<double>(j) * h;
        const double v = f.value(std::exp(u));
        const double g = std::exp(-2.0 * rate * u) * v * v;
        sum += (j == 0 || j == n) ? 0.5 * g : g;
    }
    return sum * h;
}

// ------------------------------------------------------------ constant

ConstantScan best_constant(double delta, double lambda_max) {
    if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0, 1)");
    if (!(lambda_max > 0.0)) throw std::invalid_argument("lambda_max must be positive");
    auto re = [delta](double l) { return multiplier(l, delta).real(); };
    const auto n = static_cast<std::size_t>(std::ceil(lambda_max / 1e-3));
    const double h = lambda_max / static_cast<double>(n);
    std::size_t best = 0;
    double best_val = re(0.0);
    for (std::size_t i = 1; i <= n; ++i) {
        const double v = re(static_cast<double>(i) * h);
        if (v < best_val) {
            best_val = v;
            best = i;
        }
    }
    ConstantScan out;
    out.at_boundary = best == 0 || best == n;
    double lo = static_cast<double>(best == 0 ? 0 : best - 1) * h;
    double hi = static_cast<double>(best == n ? n : best + 1) * h;
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = hi - g * (hi - lo);
    double d = lo + g * (hi - lo);
    for (int it = 0; it < 80; ++it) {
        if (re(c) < re(d)) {
            hi = d;
        } else {
            lo = c;
        }
        c = hi - g * (hi - lo);
        d = lo + g * (hi - lo);
    }
    const double arg = 0.5 * (lo + hi);
    const double refined = std::min(best_val, re(arg));
    out.argmin = refined < best_val ? arg : static_cast<double>(best) * h;
    out.value = refined / pi;
    return out;
}

// ------------------------------------------------------------ verification

InequalityReport verify_inequality(const TestFunction& f, double delta,
                                   const VerifyOptions& options) {
    InequalityReport r;
    r.name = f.name;
    r.delta = delta;
    r.exploratory = f.exploratory;
    r.c_delta = best_constant(delta, options.grid.half_width).value;
    r.rhs = rhs_weighted(f, delta);
    if (r.rhs == 0.0) {
        r.degenerate = true;
        r.pass = true;
        return r;
    }
    const ResolvedMellin m = resolved_lhs_mellin(f, delta, options.grid);
    r.lhs_mellin = m.lhs;
    r.plancherel = plancherel_norm(m.spectrum);
    r.lhs_direct = lhs_direct(f, delta);
    r.ratio = r.lhs_direct / r.rhs;
    r.cross_rel_err = std::abs(r.lhs_direct - r.lhs_mellin) / std::abs(r.lhs_mellin);
    r.plancherel_rel_err = std::abs(r.plancherel - r.rhs) / r.rhs;
    r.pass = r.ratio >= r.c_delta * (1.0 - options.ratio_slack) &&
             r.cross_rel_err <= options.cross_tol;
    return r;
}

// ------------------------------------------------------------ test functions

TestFunction dilate(const TestFunction& f, double s) {
    if (!(s > 0.0)) throw std::invalid_argument("dilation factor must be positive");
    TestFunction g;
    std::ostringstream os;
    os << f.name << "(" << s << "x)";
    g.name = os.str();
    g.value = [v = f.value, s](double x) { return v(s * x); };
    g.derivative = [d = f.derivative, s](double x) { return s * d(s * x); };
    g.support_end = f.support_end / s;
    g.exploratory = f.exploratory;
    return g;
}

TestFunction gaussian_weighted(double power, double width) {
    std::ostringstream os;
    os << "x^" << power << "*exp(-x^2/" << width * width << ")";
    const double c = 1.0 / (width * width);
    TestFunction f;
    f.name = os.str();
    f.value = [power, c](double x) { return std::pow(x, power) * std::exp(-c * x * x); };
    f.derivative = [power, c](double x) {
        return (power * std::pow(x, power - 1.0) - 2.0 * c * std::pow(x, power + 1.0)) *
               std::exp(-c * x * x);
    };
    return f;
}

TestFunction rational_bump() {
    TestFunction f;
    f.name = "x^2/(1+x^2)^3";
    f.value = [](double x) { return x * x / std::pow(1.0 + x * x, 3); };
    f.derivative = [](double x) {
        const double q = 1.0 + x * x;
        return (2.0 * x * q - 6.0 * x * x * x) / std::pow(q, 4);
    };
    return f;
}

TestFunction sech_bump() {
    TestFunction f;
    f.name = "x^2*sech(x)";
    f.value = [](double x) { return x * x / std::cosh(x); };
    f.derivative = [](double x) {
        return (2.0 * x - x * x * std::tanh(x)) / std::cosh(x);
    };
    return f;
}

TestFunction bounded_tail() {
    TestFunction f;
    f.name = "1-exp(-x^2)";
    f.value = [](double x) { return -std::expm1(-x * x); };
    f.derivative = [](double x) { return 2.0 * x * std::exp(-x * x); };
    f.exploratory = true;
    return f;
}

TestFunction ramp_on_unit() {
    TestFunction f;
    f.name = "x on (0,1]";
    f.value = [](double x) { return x <= 1.0 ? x : 0.0; };
    f.derivative = [](double x) { return x < 1.0 ? 1.0 : 0.0; };
    f.support_end = 1.0;
    return f;
}

TestFunction zero_function() {
    TestFunction f;
    f.name = "zero";
    f.value = [](double) { return 0.0; };
    f.derivative = [](double) { return 0.0; };
    return f;
}

TestFunction random_gaussian_sum(std::uint64_t seed, int terms) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> amp(0.2, 1.0);
    std::uniform_real_distribution<double> rate(0.3, 3.0);
    std::vector<std::pair<double, double>> coeffs;
    std::ostringstream os;
    os << "gauss_sum[" << seed << "]";
    for (int i = 0; i < terms; ++i) coeffs.emplace_back(amp(rng), rate(rng));
    TestFunction f;
    f.name = os.str();
    f.value = [coeffs](double x) {
        double s = 0.0;
        for (auto [a, c] : coeffs) s += a * x * x * std::exp(-c * x * x);
        return s;
    };
    f.derivative = [coeffs](double x) {
        double s = 0.0;
        for (auto [a, c] : coeffs) s += a * (2.0 * x - 2.0 * c * x * x * x) * std::exp(-c * x * x);
        return s;
    };
    return f;
}

std::vector<TestFunction> standard_corpus(std::uint64_t seed) {
    std::vector<TestFunction> out = {gaussian_weighted(2.0, 1.0), gaussian_weighted(4.0, 1.0),
                                     gaussian_weighted(2.0, 2.0), rational_bump(), sech_bump()};
    for (std::uint64_t i = 0; i < 5; ++i) out.push_back(random_gaussian_sum(seed + i));
    return out;
}

}  // namespace nlt::mellin
