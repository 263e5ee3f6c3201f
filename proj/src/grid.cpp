#include "nlt/grid.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace nlt {

namespace {

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

}  // namespace

Grid::Grid(std::size_t n, double half_length) : n_(n), half_length_(half_length) {
    if (!is_power_of_two(n) || n < 16) {
        throw std::invalid_argument("grid size must be a power of two >= 16, got " +
                                    std::to_string(n));
    }
    if (!(half_length > 0.0) || !std::isfinite(half_length)) {
        throw std::invalid_argument("grid half-length must be positive and finite");
    }
}

std::vector<double> Grid::nodes() const {
    std::vector<double> x(n_);
    for (std::size_t j = 0; j < n_; ++j) x[j] = node(j);
    return x;
}

double Grid::wavenumber(std::size_t m) const {
    return static_cast<double>(m) * std::numbers::pi / half_length_;
}

Grid make_grid(std::size_t n, double half_length) { return Grid(n, half_length); }

}  // namespace nlt
