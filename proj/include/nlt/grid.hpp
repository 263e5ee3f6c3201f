#pragma once

#include <cstddef>
#include <vector>

namespace nlt {

/// Uniform periodic grid on [-P, P) with n nodes.
///
/// Nodes are x_j = -P + j * dx with dx = 2P/n, so x = 0 is node n/2.
/// Mode index m runs over [-n/2, n/2) with wavenumber k_m = m * pi / P.
class Grid {
public:
    Grid(std::size_t n, double half_length);

    std::size_t size() const { return n_; }
    double half_length() const { return half_length_; }
    double dx() const { return 2.0 * half_length_ / static_cast<double>(n_); }

    double node(std::size_t j) const { return -half_length_ + static_cast<double>(j) * dx(); }
    std::vector<double> nodes() const;

    /// Index of the node at x = 0.
    std::size_t origin_index() const { return n_ / 2; }

    /// Wavenumber of half-spectrum slot m (0 <= m <= n/2).
    double wavenumber(std::size_t m) const;

    /// Number of half-spectrum slots of a real transform, n/2 + 1.
    std::size_t spectrum_size() const { return n_ / 2 + 1; }

    bool operator==(const Grid& other) const = default;

private:
    std::size_t n_;
    double half_length_;
};

/// Validated constructor; throws std::invalid_argument on a bad layout.
Grid make_grid(std::size_t n, double half_length);

}  // namespace nlt
