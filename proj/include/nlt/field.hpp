#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "nlt/grid.hpp"

namespace nlt {

/// Real samples of a function on a periodic grid. Every sample is finite.
class RealField {
public:
    RealField(Grid grid, std::vector<double> values);

    static RealField constant(const Grid& grid, double value);
    static RealField sample(const Grid& grid, const std::function<double(double)>& f);

    const Grid& grid() const { return grid_; }
    std::size_t size() const { return values_.size(); }
    std::span<const double> values() const { return values_; }
    double operator[](std::size_t j) const { return values_[j]; }

    double mean() const;
    double max() const;
    double min() const;
    double max_abs() const;

    /// Rectangle-rule integral over one period.
    double integral() const;

private:
    Grid grid_;
    std::vector<double> values_;
};

/// Largest absolute pointwise difference. Fields must share a grid.
double max_abs_diff(const RealField& a, const RealField& b);

/// Rectangle-rule L2 norm.
double l2_norm(const RealField& f);

RealField operator+(const RealField& a, const RealField& b);
RealField operator-(const RealField& a, const RealField& b);
RealField operator*(double s, const RealField& a);
/// Pointwise product (no dealiasing).
RealField pointwise_product(const RealField& a, const RealField& b);

}  // namespace nlt
