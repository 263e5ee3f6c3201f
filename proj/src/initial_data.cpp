#include "nlt/initial_data.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace nlt {

namespace {

struct KindName {
    InitialKind kind;
    const char* name;
};

constexpr KindName kKinds[] = {
    {InitialKind::quartic_bump, "quartic_bump"},
    {InitialKind::smooth_bump, "smooth_bump"},
    {InitialKind::scaled, "scaled"},
    {InitialKind::shifted_trig, "shifted_trig"},
    {InitialKind::custom_samples, "custom_samples"},
};

double quartic(double x, double width) {
    const double s = x / width;
    return std::abs(s) <= 1.0 ? (1.0 - s * s) * (1.0 - s * s) : 0.0;
}

std::vector<double> read_samples(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open initial samples file " + path);
    std::vector<double> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream is(line);
        double v = 0.0;
        if (!(is >> v)) {
            if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
            throw std::invalid_argument(path + ":" + std::to_string(line_no) + ": not a number");
        }
        std::string rest;
        if (is >> rest) {
            throw std::invalid_argument(path + ":" + std::to_string(line_no) +
                                        ": expected one value per line");
        }
        out.push_back(v);
    }
    return out;
}

}  // namespace

std::string to_string(InitialKind k) {
    for (const auto& e : kKinds) {
        if (e.kind == k) return e.name;
    }
    throw std::logic_error("unhandled initial kind");
}

InitialKind initial_kind_from_string(const std::string& name) {
    for (const auto& e : kKinds) {
        if (name == e.name) return e.kind;
    }
    throw std::invalid_argument("unknown initial data kind '" + name + "'");
}

RealField make_initial(const Grid& grid, const InitialData& d) {
    if (d.kind != InitialKind::quartic_bump && d.kind != InitialKind::custom_samples) {
        if (!std::isfinite(d.amplitude)) throw std::invalid_argument("initial.amplitude must be finite");
    }
    switch (d.kind) {
        case InitialKind::quartic_bump:
            return RealField::sample(grid, [](double x) { return quartic(x, 1.0); });
        case InitialKind::scaled:
            if (!(d.width > 0.0)) throw std::invalid_argument("initial.width must be positive");
            return RealField::sample(grid, [&](double x) { return d.amplitude * quartic(x, d.width); });
        case InitialKind::smooth_bump:
            if (!(d.width > 0.0)) throw std::invalid_argument("initial.width must be positive");
            return RealField::sample(grid, [&](double x) {
                const double s = x / d.width;
                return std::abs(s) < 1.0 ? d.amplitude * std::exp(1.0 - 1.0 / (1.0 - s * s)) : 0.0;
            });
        case InitialKind::shifted_trig: {
            if (d.mode < 0) throw std::invalid_argument("initial.mode must be nonnegative");
            const double k = d.mode * std::numbers::pi / grid.half_length();
            return RealField::sample(grid,
                                     [&](double x) { return d.shift + d.amplitude * std::cos(k * x); });
        }
        case InitialKind::custom_samples: {
            if (d.samples_path.empty()) throw std::invalid_argument("initial.samples is required");
            std::vector<double> v = read_samples(d.samples_path);
            if (v.size() != grid.size()) {
                throw std::invalid_argument("initial.samples holds " + std::to_string(v.size()) +
                                            " values, grid has " + std::to_string(grid.size()));
            }
            return RealField(grid, std::move(v));
        }
    }
    throw std::logic_error("unhandled initial kind");
}

void check_initial(const RealField& theta, bool nonnegative, bool even_peak) {
    if (nonnegative && theta.min() < 0.0) {
        throw std::invalid_argument("initial data must be nonnegative for this scenario");
    }
    if (even_peak) {
        const std::size_t n = theta.size();
        const std::size_t o = theta.grid().origin_index();
        const double scale = std::max(1.0, theta.max_abs());
        for (std::size_t j = 1; j < n; ++j) {
            if (std::abs(theta[j] - theta[n - j]) > 1e-12 * scale) {
                throw std::invalid_argument("initial data must be even about x = 0 for this scenario");
            }
        }
        if (theta[o] < theta.max()) {
            throw std::invalid_argument("initial data must peak at x = 0 for this scenario");
        }
    }
}

}  // namespace nlt
