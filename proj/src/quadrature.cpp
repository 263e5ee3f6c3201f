#include "nlt/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace nlt {

double origin_corrected_trapezoid(std::span<const double> g, double h, double upper,
                                  double power) {
    if (g.empty() || !(h > 0.0)) throw std::invalid_argument("empty quadrature grid");
    if (!(power > 0.0)) throw std::invalid_argument("origin exponent must be positive");
    if (upper < h) throw std::invalid_argument("upper limit below first node");
    const auto count = static_cast<double>(g.size());
    if (upper > h * count * (1.0 + 1e-12)) {
        throw std::invalid_argument("upper limit beyond sampled range");
    }
    // Nodes x = h .. K h lie in (0, upper].
    auto last = static_cast<std::size_t>(std::floor(upper / h * (1.0 + 1e-12)));
    if (last > g.size()) last = g.size();

    double sum = 0.0;
    for (std::size_t j = 0; j + 1 < last; ++j) sum += g[j];
    sum += 0.5 * g[last - 1];
    sum *= h;

    const double leading = g[0] / std::pow(h, power);
    sum -= std::riemann_zeta(-power) * leading * std::pow(h, 1.0 + power);

    const double rest = upper - static_cast<double>(last) * h;
    if (rest > 1e-14 * h && last < g.size()) {
        const double g_end = g[last - 1] + (g[last] - g[last - 1]) * rest / h;
        sum += 0.5 * rest * (g[last - 1] + g_end);
    }
    return sum;
}

}  // namespace nlt
