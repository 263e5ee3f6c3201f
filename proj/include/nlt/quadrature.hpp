#pragma once

#include <span>

namespace nlt {

/// Integral over [0, upper] of g sampled at x_j = (j + 1) h, assuming g(0) = 0 and
/// g(x) ~ C x^power near the origin (power > 0).
///
/// Trapezoid rule plus the generalized Euler-Maclaurin term -zeta(-power) C h^(1+power)
/// for the algebraic behaviour at 0, with C estimated from the first sample. An upper
/// limit between nodes is closed with linear interpolation.
double origin_corrected_trapezoid(std::span<const double> g, double h, double upper,
                                  double power);

}  // namespace nlt
