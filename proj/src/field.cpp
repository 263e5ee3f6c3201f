#include "nlt/field.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <stdexcept>

namespace nlt {

RealField::RealField(Grid grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.size()) {
        throw std::invalid_argument("field length does not match grid size");
    }
    for (double v : values_) {
        if (!std::isfinite(v)) throw std::invalid_argument("field sample is not finite");
    }
}

RealField RealField::constant(const Grid& grid, double value) {
    return RealField(grid, std::vector<double>(grid.size(), value));
}

RealField RealField::sample(const Grid& grid, const std::function<double(double)>& f) {
    std::vector<double> v(grid.size());
    for (std::size_t j = 0; j < v.size(); ++j) v[j] = f(grid.node(j));
    return RealField(grid, std::move(v));
}

double RealField::mean() const {
    return std::accumulate(values_.begin(), values_.end(), 0.0) /
           static_cast<double>(values_.size());
}

double RealField::max() const { return *std::max_element(values_.begin(), values_.end()); }
double RealField::min() const { return *std::min_element(values_.begin(), values_.end()); }

double RealField::max_abs() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
}

double RealField::integral() const {
    return std::accumulate(values_.begin(), values_.end(), 0.0) * grid_.dx();
}

namespace {

void require_same_grid(const RealField& a, const RealField& b) {
    if (!(a.grid() == b.grid())) throw std::invalid_argument("fields live on different grids");
}

template <class Op>
RealField combine(const RealField& a, const RealField& b, Op op) {
    require_same_grid(a, b);
    std::vector<double> out(a.size());
    for (std::size_t j = 0; j < out.size(); ++j) out[j] = op(a[j], b[j]);
    return RealField(a.grid(), std::move(out));
}

}  // namespace

double max_abs_diff(const RealField& a, const RealField& b) {
    require_same_grid(a, b);
    double m = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) m = std::max(m, std::abs(a[j] - b[j]));
    return m;
}

double l2_norm(const RealField& f) {
    double s = 0.0;
    for (double v : f.values()) s += v * v;
    return std::sqrt(s * f.grid().dx());
}

RealField operator+(const RealField& a, const RealField& b) {
    return combine(a, b, std::plus<>());
}
RealField operator-(const RealField& a, const RealField& b) {
    return combine(a, b, std::minus<>());
}
RealField operator*(double s, const RealField& a) {
    std::vector<double> out(a.values().begin(), a.values().end());
    for (double& v : out) v *= s;
    return RealField(a.grid(), std::move(out));
}
RealField pointwise_product(const RealField& a, const RealField& b) {
    return combine(a, b, std::multiplies<>());
}

}  // namespace nlt
