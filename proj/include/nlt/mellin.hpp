#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace nlt::mellin {

/// Raised when a truncation, excision or resolution criterion cannot be met.
class QuadratureError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Function on (0, support_end] with f(0+) = 0, extended evenly to the real line.
struct TestFunction {
    std::string name;
    std::function<double(double)> value;
    std::function<double(double)> derivative;
    /// f vanishes beyond this point; infinity for unbounded support.
    double support_end = std::numeric_limits<double>::infinity();
    /// Outside the class covered by the inequality (e.g. f -> 1 at infinity).
    bool exploratory = false;
};

/// Symmetric uniform grid lambda_i = -half_width + i * spacing.
struct LambdaGrid {
    double half_width = 60.0;
    double spacing = 0.01;

    std::size_t size() const;
    double at(std::size_t i) const;
};

/// F(lambda) = int_0^inf xi^(i lambda - 3/2 - delta/2) f(xi) dxi on a lambda grid.
struct MellinSpectrum {
    double delta = 0.5;
    LambdaGrid grid;
    std::vector<std::complex<double>> values;
};

/// Log-variable window [u_min, u_max] outside which e^(-rate u) |f(e^u)| has dropped
/// below 1e-12 of its peak.
struct LogWindow {
    double u_min = 0.0;
    double u_max = 0.0;
};

LogWindow log_window(const TestFunction& f, double rate);

/// Trapezoid rule in u = log xi with step about `du`.
MellinSpectrum mellin_transform(const TestFunction& f, double delta, const LambdaGrid& grid,
                                double du = 0.01);

/// M(lambda) = z (1 - cos conj z) / sin conj z with z = (1/2 + delta/2) pi + i lambda pi,
/// in the real form that stays finite for large |lambda|.
std::complex<double> multiplier(double lambda, double delta);

/// (1 / 2 pi^2) int Re M |F|^2 dlambda. Throws if |F| has not decayed below 1e-10 of its
/// peak at the grid ends.
double lhs_mellin(const MellinSpectrum& spec);

/// (1 / 2 pi) int |F|^2 dlambda, the Plancherel side of the weighted norm.
double plancherel_norm(const MellinSpectrum& spec);

/// Re-evaluates the spectrum, halving the lambda spacing until lhs_mellin moves by less
/// than 0.1% between spacing h and 2h.
struct ResolvedMellin {
    MellinSpectrum spectrum;
    double lhs = 0.0;
};
ResolvedMellin resolved_lhs_mellin(const TestFunction& f, double delta, LambdaGrid grid);

/// Hilbert transform of the even extension of f at x > 0, by symmetric excision of the
/// principal value with Richardson extrapolation in the excision radius.
double hilbert_even(const TestFunction& f, double x);

/// -int_0^inf f_x (Hf) / x^(1+delta) dx with Hf from hilbert_even.
double lhs_direct(const TestFunction& f, double delta);

/// int_0^inf f^2 / x^(2+delta) dx by trapezoid in the log variable.
double rhs_weighted(const TestFunction& f, double delta);

struct ConstantScan {
    double value = 0.0;   // (1/pi) min Re M
    double argmin = 0.0;  // lambda >= 0 of the minimum
    bool at_boundary = false;
};

/// (1/pi) inf of Re M over [0, lambda_max] from a dense scan refined by golden section.
ConstantScan best_constant(double delta, double lambda_max);

struct InequalityReport {
    std::string name;
    double delta = 0.0;
    double lhs_direct = 0.0;
    double lhs_mellin = 0.0;
    double rhs = 0.0;
    double plancherel = 0.0;
    double ratio = 0.0;  // lhs_direct / rhs
    double c_delta = 0.0;
    double cross_rel_err = 0.0;
    double plancherel_rel_err = 0.0;
    bool degenerate = false;  // f == 0, ratio undefined
    bool exploratory = false;
    bool pass = false;
};

struct VerifyOptions {
    LambdaGrid grid;
    double cross_tol = 1e-2;
    double ratio_slack = 1e-2;
};

InequalityReport verify_inequality(const TestFunction& f, double delta,
                                   const VerifyOptions& options = {});

/// f(s x), with derivative s f'(s x).
TestFunction dilate(const TestFunction& f, double s);

TestFunction gaussian_weighted(double power, double width);  // x^power exp(-x^2/width^2)
TestFunction rational_bump();                                 // x^2 / (1 + x^2)^3
TestFunction sech_bump();                                     // x^2 sech(x)
TestFunction bounded_tail();                                  // 1 - exp(-x^2)
TestFunction ramp_on_unit();                                  // x on (0, 1], 0 beyond
TestFunction zero_function();

/// Sum of a_i x^2 exp(-c_i x^2), a_i in [0.2, 1], c_i in [0.3, 3], `terms` terms.
TestFunction random_gaussian_sum(std::uint64_t seed, int terms = 3);

/// Five named functions and five seeded random sums.
std::vector<TestFunction> standard_corpus(std::uint64_t seed);

}  // namespace nlt::mellin
