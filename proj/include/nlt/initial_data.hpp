#pragma once

#include <string>

#include "nlt/field.hpp"

namespace nlt {

enum class InitialKind { quartic_bump, smooth_bump, scaled, shifted_trig, custom_samples };

std::string to_string(InitialKind k);
/// Throws std::invalid_argument on an unknown name.
InitialKind initial_kind_from_string(const std::string& name);

/// Initial profile descriptor.
///  quartic_bump    (1 - x^2)^2 on [-1, 1], the reference datum; parameters ignored
///  scaled          amplitude * (1 - (x/width)^2)^2 on [-width, width]
///  smooth_bump     amplitude * exp(1 - 1/(1 - (x/width)^2)) on (-width, width)
///  shifted_trig    shift + amplitude * cos(mode * pi * x / P)
///  custom_samples  n values read from samples_path, one per line ('#' starts a comment)
struct InitialData {
    InitialKind kind = InitialKind::quartic_bump;
    double amplitude = 1.0;
    double width = 1.0;
    double shift = 0.0;
    int mode = 1;
    std::string samples_path;
};

RealField make_initial(const Grid& grid, const InitialData& data);

/// Checks the hypotheses a scenario relies on. Throws std::invalid_argument.
///  nonnegative: min theta >= 0 (maximum principle scenarios)
///  even_peak:   theta(x) = theta(-x) to 1e-12 and max theta at x = 0 (blow-up scenarios)
void check_initial(const RealField& theta, bool nonnegative, bool even_peak);

}  // namespace nlt
