#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "nlt/grid.hpp"
#include "nlt/spectral.hpp"
#include "oracles.hpp"

using namespace nlt;
using std::numbers::pi;

namespace {

double rel_err(const RealField& got, const RealField& want) {
    return max_abs_diff(got, want) / std::max(want.max_abs(), 1e-300);
}

}  // namespace

TEST_CASE("make_grid layout") {
    const Grid g = make_grid(16, pi);
    CHECK(g.dx() == doctest::Approx(pi / 8).epsilon(1e-15));
    CHECK(g.node(0) == doctest::Approx(-pi));
    CHECK(g.node(g.origin_index()) == 0.0);
    CHECK(g.spectrum_size() == 9);
    CHECK(g.wavenumber(8) == doctest::Approx(8.0));

    CHECK(make_grid(1024, 4 * pi).dx() == doctest::Approx(pi / 128).epsilon(1e-15));
    CHECK_THROWS_AS(make_grid(12, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(make_grid(8, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(make_grid(64, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(make_grid(64, -1.0), std::invalid_argument);
}

TEST_CASE("RealField rejects nonfinite samples and wrong lengths") {
    const Grid g(16, pi);
    CHECK_THROWS_AS(RealField(g, std::vector<double>(15, 0.0)), std::invalid_argument);
    std::vector<double> v(16, 0.0);
    v[3] = std::nan("");
    CHECK_THROWS_AS(RealField(g, v), std::invalid_argument);
}

TEST_CASE("single-mode multiplier actions") {
    // Round-off in the top modes is amplified by k_max^alpha, so exactness is checked on a
    // grid where that floor stays below 1e-12 relative.
    const Grid g(64, 4 * pi);
    for (std::size_t m : {1u, 3u, 7u, 20u, 31u}) {
        const double k = g.wavenumber(m);
        const auto c = RealField::sample(g, [k](double x) { return std::cos(k * x); });
        const auto s = RealField::sample(g, [k](double x) { return std::sin(k * x); });
        CHECK(rel_err(hilbert(c), s) <= 1e-12);
        CHECK(rel_err(deriv(s), k * c) <= 1e-12);
        for (double alpha : {0.5, 1.0, 1.5, 2.0}) {
            CHECK(rel_err(frac_laplacian(c, alpha), std::pow(k, alpha) * c) <= 1e-12);
        }
    }
}

TEST_CASE("constants are annihilated") {
    const Grid g(64, 2.0);
    const auto c = RealField::constant(g, 3.5);
    CHECK(hilbert(c).max_abs() <= 1e-14);
    CHECK(deriv(c).max_abs() <= 1e-14);
    CHECK(frac_laplacian(c, 1.0).max_abs() <= 1e-14);
    CHECK(max_abs_diff(frac_laplacian(c, 0.0), c) <= 1e-14);
    CHECK_THROWS_AS(frac_laplacian(c, 2.5), std::invalid_argument);
    CHECK_THROWS_AS(frac_laplacian(c, -0.1), std::invalid_argument);
}

TEST_CASE("operator identities on band-limited fields") {
    const Grid g(512, 8 * pi);
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const auto f = oracle::random_band_limited(g, 100, seed, 0.7);
        const auto f0 = f - RealField::constant(g, f.mean());
        // H^2 = -Id on mean-zero fields.
        CHECK((hilbert(hilbert(f)) + f0).max_abs() <= 1e-12 * f0.max_abs());
        // Isometry.
        CHECK(std::abs(l2_norm(hilbert(f)) - l2_norm(f0)) <= 1e-12 * l2_norm(f0));
        // Lambda = H d/dx, and Lambda^2 = -d^2/dx^2.
        const auto lam = frac_laplacian(f, 1.0);
        CHECK(max_abs_diff(hilbert(deriv(f)), lam) <= 1e-12 * lam.max_abs());
        const auto lap = frac_laplacian(f, 2.0);
        CHECK(max_abs_diff(-1.0 * deriv(deriv(f)), lap) <= 1e-12 * lap.max_abs());
        CHECK(std::abs(hilbert(f).mean()) <= 1e-14);
    }
}

TEST_CASE("Hilbert transform maps even fields to odd fields") {
    const Grid g(1024, 8 * pi);
    const auto f = RealField::sample(g, [](double x) { return std::exp(-x * x) * (1 + x * x); });
    const auto h = hilbert(f);
    const std::size_t n = g.size();
    double worst = 0.0;
    // Node j mirrors to n - j about x = 0.
    for (std::size_t j = 1; j < n; ++j) worst = std::max(worst, std::abs(h[j] + h[n - j]));
    CHECK(worst <= 1e-12);
}

TEST_CASE("periodic Hilbert transform of 1/(1+x^2) approaches the whole-line transform") {
    const Grid g(4096, 32 * pi);
    const auto f = RealField::sample(g, [](double x) { return 1.0 / (1.0 + x * x); });
    const auto h = hilbert(f);
    // The whole-line transform is x/(1+x^2); confirm with PV quadrature first.
    for (double x : {-2.0, -0.5, 0.3, 1.0, 3.5}) {
        const double pv = oracle::whole_line_hilbert([](double y) { return 1.0 / (1.0 + y * y); }, x);
        CHECK(pv == doctest::Approx(x / (1.0 + x * x)).epsilon(1e-8));
    }
    double worst = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j) {
        const double x = g.node(j);
        if (std::abs(x) > 4.0) continue;
        worst = std::max(worst, std::abs(h[j] - x / (1.0 + x * x)));
    }
    MESSAGE("periodization error on |x| <= 4: " << worst);
    CHECK(worst <= 1e-3);
}

TEST_CASE("dealias keeps the lower two thirds") {
    const Grid g(256, pi);
    const auto c = RealField::sample(g, [](double x) { return std::cos(x); });
    CHECK(max_abs_diff(dealias(c), c) <= 1e-12);
    const double k = g.wavenumber(g.size() / 2 - 1);
    const auto hi = RealField::sample(g, [k](double x) { return std::cos(k * x); });
    CHECK(dealias(hi).max_abs() <= 1e-12);
    const auto r = oracle::random_band_limited(g, 127, 9);
    const auto once = dealias(r);
    CHECK(max_abs_diff(dealias(once), once) <= 1e-12);
    const double kc = g.wavenumber(dealias_cutoff(g));
    const auto edge = RealField::sample(g, [kc](double x) { return std::sin(kc * x); });
    CHECK(max_abs_diff(dealias(edge), edge) <= 1e-12);
}

TEST_CASE("Hilbert product identity") {
    const Grid g(256, pi);
    const auto c = RealField::sample(g, [](double x) { return std::cos(x); });
    CHECK(hilbert_identity_residual(c) <= 1e-12);
    CHECK(hilbert_identity_residual(RealField::constant(g, 2.0)) <= 1e-12);
    for (std::uint64_t seed = 100; seed < 110; ++seed) {
        const auto f = oracle::random_band_limited(g, g.size() / 6, seed, 0.3);
        CHECK(hilbert_identity_residual(f) <= 1e-10);
    }
}

TEST_CASE("Parseval seminorms") {
    const Grid g(64, pi);
    const auto c = RealField::sample(g, [](double x) { return std::cos(x); });
    const auto s = to_spectrum(c);
    CHECK(sobolev_seminorm_squared(g, s, 0.0) == doctest::Approx(pi).epsilon(1e-13));
    CHECK(sobolev_seminorm_squared(g, s, 0.5) == doctest::Approx(pi).epsilon(1e-13));
    const auto c3 = RealField::sample(g, [](double x) { return std::cos(3 * x); });
    CHECK(sobolev_seminorm_squared(g, to_spectrum(c3), 1.0) == doctest::Approx(9 * pi).epsilon(1e-13));
}
