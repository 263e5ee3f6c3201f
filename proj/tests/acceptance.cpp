// Acceptance harness: prints one PASS/FAIL line per criterion and exits nonzero if any
// criterion fails. Tolerances are fixed here, not read from configs.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "nlt/diagnostics.hpp"
#include "nlt/mellin.hpp"
#include "nlt/output.hpp"
#include "nlt/scenario.hpp"
#include "nlt/solver.hpp"
#include "nlt/spectral.hpp"
#include "oracles.hpp"

using namespace nlt;
using std::numbers::pi;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void report(int id, const std::string& name, bool pass, const std::string& detail) {
    std::printf("criterion %2d: %s  %s  [%s]\n", id, pass ? "PASS" : "FAIL", name.c_str(),
                detail.c_str());
    std::fflush(stdout);
    if (!pass) ++failures;
}

// Runs a criterion body, turning an escaped exception into a FAIL line.
void criterion(int id, const std::string& name, const std::function<bool(std::string&)>& body) {
    std::string detail;
    bool pass = false;
    try {
        pass = body(detail);
    } catch (const std::exception& e) {
        detail += std::string(" exception: ") + e.what();
    }
    report(id, name, pass, detail);
}

std::string fmt(const char* f, double a) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

double rel_err(const RealField& got, const RealField& want) {
    return max_abs_diff(got, want) / std::max(want.max_abs(), 1e-300);
}

double quartic_bump(double x) {
    return std::abs(x) <= 1.0 ? (1.0 - x * x) * (1.0 - x * x) : 0.0;
}

SimState integrate_fixed(const SimState& start, double t_end, double dt, const SolverConfig& cfg) {
    SimState s = start;
    const auto steps = std::llround(t_end / dt);
    for (long long i = 0; i < steps; ++i) s = step(s, dt, cfg);
    return s;
}

const MonitorVerdict* find(const SimulationResult& r, const std::string& name) {
    for (const auto& v : r.verdicts) {
        if (v.verdict.monitor == name) return &v.verdict;
    }
    return nullptr;
}

bool monitor_pass(const SimulationResult& r, const std::string& name, std::string& detail) {
    const MonitorVerdict* v = find(r, name);
    if (v == nullptr) {
        detail += " " + name + "=missing";
        return false;
    }
    detail += " " + name + "=" + fmt("%.4g", v->value) + (v->pass ? "" : "(fail)");
    return v->pass;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct NamedRun {
    std::string name;
    ScenarioSpec spec;
    SimulationResult result;
};

}  // namespace

int main() {
    // Scenario runs shared by several criteria.
    std::vector<NamedRun> runs;
    for (ScenarioKind k : {ScenarioKind::inviscid_blowup, ScenarioKind::viscous_supercritical,
                           ScenarioKind::critical_small, ScenarioKind::critical_large,
                           ScenarioKind::subcritical_exploratory}) {
        const ScenarioSpec spec = default_spec(k);
        runs.push_back({to_string(k), spec, simulate(spec)});
    }
    const SimulationResult& blowup = runs[0].result;

    criterion(1, "spectral exactness", [](std::string& d) {
        double worst = 0.0;
        const Grid g(64, 4 * pi);
        for (std::size_t m = 1; m < g.size() / 2; ++m) {
            const double k = g.wavenumber(m);
            const auto c = RealField::sample(g, [k](double x) { return std::cos(k * x); });
            const auto s = RealField::sample(g, [k](double x) { return std::sin(k * x); });
            worst = std::max(worst, rel_err(hilbert(c), s));
            worst = std::max(worst, rel_err(hilbert(s), -1.0 * c));
            worst = std::max(worst, rel_err(deriv(s), k * c));
            worst = std::max(worst, rel_err(deriv(c), -k * s));
            for (double alpha : {0.5, 1.0, 1.5, 2.0}) {
                worst = std::max(worst, rel_err(frac_laplacian(c, alpha), std::pow(k, alpha) * c));
            }
        }
        double ident = 0.0;
        const Grid big(512, 8 * pi);
        for (std::uint64_t seed = 1; seed <= 10; ++seed) {
            const auto f = oracle::random_band_limited(big, 100, seed, 0.7);
            const auto f0 = f - RealField::constant(big, f.mean());
            ident = std::max(ident, (hilbert(hilbert(f)) + f0).max_abs() / f0.max_abs());
            ident = std::max(ident, std::abs(l2_norm(hilbert(f)) - l2_norm(f0)) / l2_norm(f0));
        }
        d = "modes " + fmt("%.2e", worst) + ", H^2/isometry " + fmt("%.2e", ident) + " <= 1e-12";
        return worst <= 1e-12 && ident <= 1e-12;
    });

    criterion(2, "Hilbert product identity", [](std::string& d) {
        const Grid g(1024, 8 * pi);
        double worst = 0.0;
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            const auto f = oracle::random_band_limited(g, g.size() / 6, 1000 + seed, 0.3);
            worst = std::max(worst, hilbert_identity_residual(f));
        }
        d = "max residual over 20 fields " + fmt("%.2e", worst) + " <= 1e-10";
        return worst <= 1e-10;
    });

    criterion(3, "inviscid blow-up", [&](std::string& d) {
        const auto& recs = blowup.records;
        const double growth = recs.back().max_grad / recs.front().max_grad;
        const BlowUpFit fit = blow_up_fit(recs, 10);
        bool j_increasing = true;
        double riccati = std::numeric_limits<double>::infinity();
        double bound = 0.0;  // max of J / (L^(1-delta)/(1-delta) max_grad)
        const JParams jp = runs[0].spec.j;
        const double factor = std::pow(jp.support, 1.0 - jp.delta) / (1.0 - jp.delta);
        for (std::size_t i = 0; i < recs.size(); ++i) {
            bound = std::max(bound, recs[i].j_val / (factor * recs[i].max_grad));
            if (i == 0) continue;
            const double dj = recs[i].j_val - recs[i - 1].j_val;
            j_increasing = j_increasing && dj > 0.0;
            const double jm = 0.5 * (recs[i].j_val + recs[i - 1].j_val);
            riccati = std::min(riccati, dj / (recs[i].t - recs[i - 1].t) / (jm * jm));
        }
        d = "status " + to_string(blowup.outcome.status) + ", growth " + fmt("%.1f", growth) +
            "x, r2 " + fmt("%.6f", fit.inverse_grad.r2) + ", J increasing " +
            (j_increasing ? "yes" : "no") + ", min (dJ/dt)/J^2 " + fmt("%.3g", riccati) +
            ", max J/bound " + fmt("%.3f", bound);
        return blowup.outcome.status == RunStatus::blow_up_suspected && growth >= 100.0 &&
               fit.inverse_grad.r2 >= 0.99 && j_increasing && riccati > 0.0 && bound <= 1.0;
    });

    criterion(4, "quadrature anchors", [](std::string& d) {
        const Grid g(4096, 8 * pi);
        const JParams p;
        const double a = j_functional(RealField::sample(g, [](double x) { return 1.0 - x * x; }), p);
        const double b = j_functional(RealField::sample(g, quartic_bump), p);
        const double ea = std::abs(a - 2.0 / 3.0);
        const double eb = std::abs(b - 22.0 / 21.0);
        d = "errors " + fmt("%.2e", ea) + ", " + fmt("%.2e", eb) + " <= 1e-4";
        return ea <= 1e-4 && eb <= 1e-4;
    });

    criterion(5, "maximum principle and decay", [&](std::string& d) {
        bool all = true;
        for (const NamedRun& r : runs) {
            if (r.result.exploratory) continue;
            const auto& recs = r.result.records;
            const DiagRecord& first = recs.front();
            double min_theta = first.min_val;
            double max_theta = first.linf;
            double l1_rise = 0.0;
            double l2_rise = 0.0;
            for (std::size_t i = 1; i < recs.size(); ++i) {
                min_theta = std::min(min_theta, recs[i].min_val);
                max_theta = std::max(max_theta, recs[i].linf);
                l1_rise = std::max(l1_rise, (recs[i].l1 - recs[i - 1].l1) / recs[i - 1].l1);
                l2_rise = std::max(l2_rise, (recs[i].l2 - recs[i - 1].l2) / recs[i - 1].l2);
            }
            bool ok = min_theta >= -1e-8 && max_theta <= first.linf + 1e-8 && l1_rise <= 1e-6 &&
                      l2_rise <= 1e-6;
            const double nu = r.spec.solver.nu;
            std::string budget;
            if (nu > 0.0) {
                const double ratio = recs.back().cum_diss / (first.l2 * first.l2 / (2.0 * nu));
                ok = ok && ratio <= 1.0 + 1e-6;
                budget = " budget " + fmt("%.3f", ratio);
            }
            d += r.name + ": min " + fmt("%.3g", min_theta) + " max-rise " +
                 fmt("%.2g", max_theta - first.linf) + " l1-rise " + fmt("%.2g", l1_rise) +
                 " l2-rise " + fmt("%.2g", l2_rise) + budget + (ok ? " ok; " : " VIOLATED; ");
            all = all && ok;
        }
        return all;
    });

    criterion(6, "energy balance", [&](std::string& d) {
        bool all = true;
        for (const NamedRun& r : runs) {
            if (r.result.exploratory) continue;
            const SolverConfig& cfg = r.spec.solver;
            const auto window =
                resolved_window(r.result.records, cfg.nu, cfg.record_interval, 1e-5, 1e-2);
            const double l2sq = r.result.records.front().l2 * r.result.records.front().l2;
            if (window.size() < 3) {
                d += r.name + ": no resolved window; ";
                all = false;
                continue;
            }
            const auto res = energy_balance_residual(window, cfg.nu);
            const double worst = *std::max_element(res.begin(), res.end()) / l2sq;
            d += r.name + " " + fmt("%.2e", worst) + " over [" + fmt("%.3g", window.front().t) +
                 ", " + fmt("%.3g", window.back().t) + "]; ";
            all = all && worst <= 1e-5;
        }
        // Linear flow: theta = e^{-t} cos x under nu = 1, alpha = 2.
        auto linear = [](double interval) {
            SolverConfig cfg;
            cfg.nu = 1.0;
            cfg.alpha = 2.0;
            cfg.nonlinear_on = false;
            cfg.t_end = 1.0;
            cfg.dt_max = 1e-3;
            cfg.record_interval = interval;
            std::vector<DiagRecord> recs;
            const Grid g(64, pi);
            run(cfg, RealField::sample(g, [](double x) { return std::cos(x); }), {},
                {[&](const DiagRecord& rec) { recs.push_back(rec); }, nullptr});
            const auto res = energy_balance_residual(recs, 1.0);
            return *std::max_element(res.begin(), res.end());
        };
        const double order = std::log2(linear(0.1) / linear(0.05));
        d += "linear-flow order " + fmt("%.3f", order) + " >= 1.8";
        return all && order >= 1.8;
    });

    criterion(7, "viscous global existence", [](std::string& d) {
        bool all = true;
        for (double alpha : {1.25, 1.5, 2.0}) {
            ScenarioSpec spec = default_spec(ScenarioKind::viscous_supercritical);
            spec.solver.nu = 0.5;
            spec.solver.alpha = alpha;
            spec.solver.t_end = 10.0;
            spec.solver.grad_threshold = std::numeric_limits<double>::infinity();
            const SimulationResult r = simulate(spec);
            d += "alpha " + fmt("%.2f", alpha) + ":";
            bool ok = r.outcome.status == RunStatus::completed && r.outcome.final_time == 10.0;
            ok = monitor_pass(r, "hhalf_bounded", d) && ok;
            ok = monitor_pass(r, "h1_linear_bound", d) && ok;
            ok = monitor_pass(r, "h2_finite", d) && ok;
            d += ok ? " ok; " : " VIOLATED; ";
            all = all && ok;
        }
        return all;
    });

    criterion(8, "critical threshold", [&](std::string& d) {
        const SimulationResult& small = runs[2].result;
        const SimulationResult& large = runs[3].result;
        const MonitorVerdict* v = find(small, "hhalf_nonincreasing");
        bool enforced = false;
        for (const auto& sv : small.verdicts) {
            if (sv.verdict.monitor == "hhalf_nonincreasing") enforced = sv.enforced;
        }
        const bool ok = v != nullptr && v->pass && enforced && !small.exploratory &&
                        small.outcome.status == RunStatus::completed;
        d = "nu=2: status " + to_string(small.outcome.status) + ", hhalf max rise " +
            fmt("%.2e", v ? v->value : NAN) + " <= 1e-6; nu=0.5: exploratory " +
            (large.exploratory ? "yes" : "no") + ", status " + to_string(large.outcome.status);
        return ok && large.exploratory;
    });

    criterion(9, "Mellin multiplier", [](std::string& d) {
        auto direct = [](double lambda, double delta) {
            const std::complex<double> z((0.5 + 0.5 * delta) * pi, lambda * pi);
            const std::complex<double> zb = std::conj(z);
            return z * (1.0 - std::cos(zb)) / std::sin(zb);
        };
        const auto m0 = mellin::multiplier(0.0, 0.5);
        const double at0 = std::abs(m0 - direct(0.0, 0.5)) / std::abs(direct(0.0, 0.5));
        double parity = 0.0;
        double lo = std::numeric_limits<double>::infinity();
        double hi = 0.0;
        for (double delta : {0.25, 0.5, 0.75}) {
            for (int i = 0; i <= 5000; ++i) {
                const double lam = 0.01 * i;
                const auto p = mellin::multiplier(lam, delta);
                const auto q = mellin::multiplier(-lam, delta);
                parity = std::max(parity, std::abs(p.real() - q.real()) / std::abs(p));
                parity = std::max(parity, std::abs(p.imag() + q.imag()) / std::abs(p));
                const double ratio = p.real() / (1.0 + lam);
                lo = std::min(lo, ratio);
                hi = std::max(hi, ratio);
            }
        }
        d = "M(0,0.5) rel err " + fmt("%.2e", at0) + ", parity " + fmt("%.2e", parity) +
            ", Re M/(1+|l|) in [" + fmt("%.4f", lo) + ", " + fmt("%.4f", hi) + "]";
        return at0 <= 1e-12 && parity <= 1e-12 && lo > 0.0 && std::isfinite(hi);
    });

    criterion(10, "weighted inequality on the corpus", [](std::string& d) {
        const LemmaResult r = verify_lemma(default_spec(ScenarioKind::lemma_verify));
        double cross = 0.0;
        double plancherel = 0.0;
        double slack = std::numeric_limits<double>::infinity();
        int checked = 0;
        bool all = r.errors.empty();
        for (const auto& rep : r.reports) {
            if (rep.exploratory) continue;
            ++checked;
            cross = std::max(cross, rep.cross_rel_err);
            plancherel = std::max(plancherel, rep.plancherel_rel_err);
            if (!rep.degenerate) slack = std::min(slack, rep.ratio / (0.99 * rep.c_delta));
            all = all && rep.cross_rel_err <= 1e-2 && rep.plancherel_rel_err <= 5e-3 &&
                  (rep.degenerate || rep.ratio >= 0.99 * rep.c_delta);
        }
        double dil = 0.0;
        for (const auto& dl : r.dilations) {
            dil = std::max(dil, std::abs(dl.measured / dl.expected - 1.0));
            all = all && std::abs(dl.measured / dl.expected - 1.0) <= 1e-2;
        }
        d = std::to_string(checked) + " functions, cross " + fmt("%.2e", cross) + ", Plancherel " +
            fmt("%.2e", plancherel) + ", min ratio/(0.99 C) " + fmt("%.3f", slack) +
            ", C_0.5 " + fmt("%.6f", r.constants.empty() ? NAN : r.constants[0].scan.value) +
            ", dilation vs s^(1+delta) " + fmt("%.2e", dil);
        return all && checked == 10 && !r.dilations.empty();
    });

    criterion(11, "determinism", [&](std::string& d) {
        bool all = true;
        const fs::path root = fs::temp_directory_path() / "nlt_acceptance";
        for (std::size_t i = 0; i < 3; ++i) {
            fs::remove_all(root);
            write_run_artifacts(root / "a", runs[i].spec, runs[i].result);
            write_run_artifacts(root / "b", runs[i].spec, simulate(runs[i].spec));
            const bool same = slurp(root / "a" / "series.csv") == slurp(root / "b" / "series.csv");
            d += runs[i].name + (same ? " identical; " : " DIFFERS; ");
            all = all && same;
        }
        fs::remove_all(root);
        return all;
    });

    criterion(12, "convergence", [&](std::string& d) {
        // Temporal: Richardson triplet on the scenario grid before the blow-up window.
        const ScenarioSpec& spec = runs[0].spec;
        SolverConfig cfg = spec.solver;
        const Grid g(spec.n, spec.half_length);
        const SimState start{0.0, make_initial(g, spec.initial), 0};
        const double t = 0.3;
        const double dt = 0.004;
        const auto u1 = integrate_fixed(start, t, dt, cfg).theta;
        const auto u2 = integrate_fixed(start, t, dt / 2, cfg).theta;
        const auto u4 = integrate_fixed(start, t, dt / 4, cfg).theta;
        const double order = std::log2(max_abs_diff(u1, u2) / max_abs_diff(u2, u4));

        // Spatial: n versus 2n with dealiasing at the same resolved time.
        auto final_record = [&](std::size_t n) {
            ScenarioSpec s = spec;
            s.n = n;
            s.solver.dealias_on = true;
            s.solver.t_end = t;
            s.solver.record_interval = t;
            s.solver.dt_max = 1e-3;
            DiagRecord last;
            const Grid grid(n, s.half_length);
            run(s.solver, make_initial(grid, s.initial), s.j,
                {[&](const DiagRecord& r) { last = r; }, nullptr});
            return last;
        };
        const auto a = diag_record_values(final_record(spec.n));
        const auto b = diag_record_values(final_record(2 * spec.n));
        const auto& cols = diag_record_columns();
        const double scale = std::abs(b[3]);  // max theta, floor for near-zero columns
        double worst = 0.0;
        std::string worst_col;
        std::string over;
        for (std::size_t i = 1; i < cols.size(); ++i) {
            if (cols[i] == "spectral_tail") continue;  // resolution indicator, not a diagnostic
            const double rel = std::abs(b[i] - a[i]) / std::max({std::abs(b[i]), 1e-8 * scale});
            if (rel > 1e-6) over += " " + cols[i] + "=" + fmt("%.1e", rel);
            if (rel > worst) {
                worst = rel;
                worst_col = cols[i];
            }
        }
        d = "Richardson order " + fmt("%.3f", order) + " >= 3.8; n-doubling at t=0.3 worst " +
            worst_col + " " + fmt("%.2e", worst) + " <= 1e-6" +
            (over.empty() ? "" : "; above limit:" + over);
        return order >= 3.8 && worst <= 1e-6;
    });

    std::printf("%d of 12 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
