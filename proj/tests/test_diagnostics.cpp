#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <vector>

#include "nlt/diagnostics.hpp"
#include "nlt/solver.hpp"
#include "nlt/spectral.hpp"
#include "oracles.hpp"

using namespace nlt;
using std::numbers::pi;

namespace {

double quartic_bump(double x) {
    return std::abs(x) <= 1.0 ? (1.0 - x * x) * (1.0 - x * x) : 0.0;
}

const Grid& bump_grid() {
    static const Grid g(4096, 8 * pi);
    return g;
}

// Records of theta(t) = e^{-t} phi for a fixed profile phi with l2 = 1.
std::vector<DiagRecord> decaying_series(std::size_t count, double dt) {
    std::vector<DiagRecord> recs;
    for (std::size_t i = 0; i < count; ++i) {
        const double t = dt * static_cast<double>(i);
        const double a = std::exp(-t);
        DiagRecord r;
        r.t = t;
        r.l1 = 2.0 * a;
        r.l2 = a;
        r.linf = a;
        r.min_val = 0.0;
        r.max_grad = 3.0 * a;
        recs.push_back(r);
    }
    return recs;
}

}  // namespace

TEST_CASE("norms of a single mode") {
    const Grid g(64, pi);
    const auto c = RealField::sample(g, [](double x) { return std::cos(x); });
    const DiagRecord r = compute_norms(c, 1.0);
    const double rp = std::sqrt(pi);
    CHECK(r.l2 == doctest::Approx(rp).epsilon(1e-13));
    CHECK(r.hhalf == doctest::Approx(rp).epsilon(1e-13));
    CHECK(r.h1 == doctest::Approx(rp).epsilon(1e-13));
    CHECK(r.h2 == doctest::Approx(rp).epsilon(1e-13));
    CHECK(r.diss == doctest::Approx(pi).epsilon(1e-13));
    // |cos| has kinks, so the rectangle rule is only first order here.
    CHECK(r.l1 == doctest::Approx(4.0).epsilon(1e-2));
    CHECK(r.max_grad == doctest::Approx(1.0).epsilon(1e-2));
    CHECK(r.spectral_tail <= 1e-14);
}

TEST_CASE("norms of zero data vanish") {
    const DiagRecord r = compute_norms(RealField::constant(Grid(64, pi), 0.0), 1.5);
    for (double v : diag_record_values(r)) CHECK(v == 0.0);
}

TEST_CASE("quartic bump integrals") {
    const auto th = RealField::sample(bump_grid(), quartic_bump);
    const DiagRecord r = compute_norms(th, 1.0);
    CHECK(r.l1 == doctest::Approx(16.0 / 15.0).epsilon(1e-6));
    CHECK(r.l2 * r.l2 == doctest::Approx(256.0 / 315.0).epsilon(1e-6));
    CHECK(r.linf == 1.0);
    CHECK(r.min_val == 0.0);
}

TEST_CASE("record column layout") {
    const auto& cols = diag_record_columns();
    CHECK(cols.size() == diag_record_values(DiagRecord{}).size());
    CHECK(cols.front() == "t");
    CHECK(cols[12] == "j_val");
}

TEST_CASE("J functional anchors") {
    const JParams p;
    const Grid& g = bump_grid();
    CHECK(j_functional(RealField::constant(g, 1.0), p) == 0.0);
    const double parabola = j_functional(RealField::sample(g, [](double x) { return 1.0 - x * x; }), p);
    CHECK(std::abs(parabola - 2.0 / 3.0) <= 1e-4);
    const double quartic = j_functional(RealField::sample(g, quartic_bump), p);
    CHECK(std::abs(quartic - 22.0 / 21.0) <= 1e-4);
    MESSAGE("J errors: " << parabola - 2.0 / 3.0 << ", " << quartic - 22.0 / 21.0);

    // Refinement moves the value by less than 1e-4.
    const double fine = j_functional(RealField::sample(Grid(8192, 8 * pi), quartic_bump), p);
    CHECK(std::abs(fine - quartic) < 1e-4);
}

TEST_CASE("J functional rejects bad parameters") {
    const auto th = RealField::sample(Grid(256, pi), quartic_bump);
    CHECK_THROWS_AS(j_functional(th, {1.0, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(j_functional(th, {0.5, -1.0}), std::invalid_argument);
    CHECK_THROWS_AS(j_functional(th, {0.5, 10.0}), std::invalid_argument);
}

TEST_CASE("normalization warning") {
    const Grid g(256, pi);
    CHECK_FALSE(normalization_warning(RealField::constant(g, 1.02)).has_value());
    CHECK(normalization_warning(RealField::constant(g, 0.9)).has_value());
}

TEST_CASE("dJ/dt right side") {
    const JParams p;
    CHECK(dj_rhs(RealField::constant(bump_grid(), 0.7), p) == 0.0);
    // The initial bump focuses mass at the origin, so J grows.
    CHECK(dj_rhs(RealField::sample(bump_grid(), quartic_bump), p) > 0.0);
}

TEST_CASE("dJ/dt matches finite differences of J along a resolved run") {
    const Grid& g = bump_grid();
    SolverConfig cfg;
    cfg.dealias_on = true;
    const JParams p;
    SimState s{0.0, RealField::sample(g, quartic_bump), 0};
    const double h = 1e-3;
    for (int i = 0; i < 199; ++i) s = step(s, h, cfg);
    const SimState back = s;
    const SimState before = step(back, h, cfg);
    const SimState after = step(before, h, cfg);
    const double fd = (j_functional(after.theta, p) - j_functional(back.theta, p)) / (2 * h);
    const double rhs = dj_rhs(before.theta, p);
    MESSAGE("dJ/dt at t=0.2: finite difference " << fd << ", right side " << rhs);
    CHECK(fd == doctest::Approx(rhs).epsilon(1e-3));
}

TEST_CASE("bounding chain and Cauchy-Schwarz chain on the initial bump") {
    const JParams p;
    const auto th = RealField::sample(bump_grid(), quartic_bump);
    const double j = j_functional(th, p);
    const double factor = std::pow(p.support, 1.0 - p.delta) / (1.0 - p.delta);
    CHECK(j <= factor * deriv(th).max_abs());
    CHECK(j * j <= factor * weighted_square_integral(th, p));
}

TEST_CASE("positivity integral") {
    const Grid g(128, pi);
    CHECK(std::abs(positivity_integral(RealField::constant(g, 3.0))) <= 1e-12);
    auto f = [](double x) { return 1.0 + 0.5 * std::cos(x); };
    auto df = [](double x) { return -0.5 * std::sin(x); };
    const double spectral = positivity_integral(RealField::sample(g, f));
    const double direct = oracle::positivity_double_sum(g, f, df);
    CHECK(spectral >= 0.0);
    CHECK(spectral == doctest::Approx(direct).epsilon(1e-10));
    // Closed form: int (1 + cos/2)^2 (cos/2) dx = pi/2.
    CHECK(spectral == doctest::Approx(pi / 2).epsilon(1e-12));

    const Grid wide(128, 4 * pi);
    auto bump = [](double x) { return std::exp(-x * x); };
    auto dbump = [](double x) { return -2 * x * std::exp(-x * x); };
    CHECK(positivity_integral(RealField::sample(wide, bump)) ==
          doctest::Approx(oracle::positivity_double_sum(wide, bump, dbump)).epsilon(1e-8));
}

TEST_CASE("monotonicity report") {
    SolverConfig cfg;
    const auto clean = decaying_series(50, 0.1);
    CHECK(monotonicity_report(clean, cfg).empty());

    auto bumped = clean;
    bumped[20].l2 = bumped[19].l2 + 1e-3;
    const auto v = monotonicity_report(bumped, cfg);
    REQUIRE(v.size() == 1);
    CHECK(v[0].monitor == "l2_nonincreasing");
    CHECK(v[0].t == doctest::Approx(2.0));

    auto negative = clean;
    negative[5].min_val = -1e-6;
    const auto vn = monotonicity_report(negative, cfg);
    REQUIRE(vn.size() == 1);
    CHECK(vn[0].monitor == "min_theta");

    auto over = clean;
    over[7].linf = 1.0 + 1e-6;
    const auto vo = monotonicity_report(over, cfg);
    REQUIRE(vo.size() == 1);
    CHECK(vo[0].monitor == "max_theta");

    // Dissipation budget l2_0^2 / (2 nu) = 0.5 for nu = 1.
    cfg.nu = 1.0;
    auto spent = clean;
    spent.back().cum_diss = 0.5 * (1 + 1e-3);
    const auto vd = monotonicity_report(spent, cfg);
    REQUIRE(vd.size() == 1);
    CHECK(vd[0].monitor == "dissipation_budget");
}

TEST_CASE("monotonicity verdicts carry extremal values") {
    SolverConfig cfg;
    cfg.nu = 1.0;
    auto recs = decaying_series(20, 0.1);
    recs[4].min_val = -3e-9;
    recs[9].l1 = recs[8].l1 * (1 + 2e-6);
    recs.back().cum_diss = 0.25;
    const auto v = monotonicity_verdicts(recs, cfg);
    REQUIRE(v.size() == 5);
    CHECK(v[0].monitor == "min_theta");
    CHECK(v[0].pass);
    CHECK(v[0].value == -3e-9);
    CHECK(v[1].pass);
    CHECK(v[1].value == 1.0);
    CHECK(v[2].monitor == "l1_nonincreasing");
    CHECK_FALSE(v[2].pass);
    CHECK(v[2].value == doctest::Approx(2e-6));
    CHECK(v[3].pass);
    CHECK(v[3].value < 0.0);
    CHECK(v[4].pass);
    CHECK(v[4].value == 0.25);
    CHECK(monotonicity_verdicts(recs, SolverConfig{}).size() == 4);
}

TEST_CASE("energy balance residual") {
    const Grid g(64, pi);
    std::vector<DiagRecord> steady;
    for (int i = 0; i < 5; ++i) {
        steady.push_back(make_record(RealField::constant(g, 0.3), 0.1 * i, 1.0, {0.5, 1.0}, 0.0));
    }
    for (double r : energy_balance_residual(steady, 0.0)) CHECK(std::abs(r) <= 1e-12);

    // Linear heat flow theta = e^{-t} cos x with nu = 1, alpha = 2 (pos_int vanishes for cos x).
    auto linear = [&](double dt) {
        std::vector<DiagRecord> recs;
        for (int i = 0; i <= static_cast<int>(std::llround(1.0 / dt)); ++i) {
            const double t = dt * i;
            const auto th = RealField::sample(g, [&](double x) { return std::exp(-t) * std::cos(x); });
            recs.push_back(make_record(th, t, 2.0, {0.5, 1.0}, 0.0));
        }
        double worst = 0.0;
        for (double r : energy_balance_residual(recs, 1.0)) worst = std::max(worst, std::abs(r));
        return worst;
    };
    const double coarse = linear(0.1);
    const double fine = linear(0.05);
    MESSAGE("energy residual " << coarse << " -> " << fine);
    CHECK(std::log2(coarse / fine) >= 1.8);

    CHECK_THROWS_AS(energy_balance_residual(std::span(steady).first(2), 0.0), std::invalid_argument);
}

TEST_CASE("uniform prefix") {
    auto recs = decaying_series(10, 0.1);
    CHECK(uniform_prefix(recs, 0.1).size() == 10);
    recs.push_back(recs.back());
    recs.back().t = 0.95;
    CHECK(uniform_prefix(recs, 0.1).size() == 10);
}

TEST_CASE("blow-up fit on synthetic data") {
    std::vector<DiagRecord> exact;
    std::vector<DiagRecord> sqrt_law;
    for (int i = 0; i < 20; ++i) {
        const double t = 1.0 + 0.05 * i;
        DiagRecord r;
        r.t = t;
        r.max_grad = 1.0 / (2.0 - t);
        r.j_val = 2.0 / (2.0 - t);
        exact.push_back(r);
        r.max_grad = 1.0 / std::sqrt(2.0 - t);
        sqrt_law.push_back(r);
    }
    const BlowUpFit f = blow_up_fit(exact, 10);
    CHECK(std::abs(f.inverse_grad.t_star - 2.0) <= 1e-10);
    CHECK(f.inverse_grad.r2 == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(f.inverse_j.t_star - 2.0) <= 1e-10);

    const BlowUpFit s = blow_up_fit(sqrt_law, 10);
    CHECK(s.inverse_grad.r2 < 1.0);

    CHECK_THROWS_AS(blow_up_fit(exact, 2), std::invalid_argument);
    auto flat = exact;
    flat[18].max_grad = flat[19].max_grad;
    CHECK_THROWS_AS(blow_up_fit(flat, 5), std::invalid_argument);
}
