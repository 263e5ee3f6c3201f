#include "nlt/scenario.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include "nlt/initial_data.hpp"
#include "nlt/spectral.hpp"

namespace nlt {

namespace {

constexpr double kEnergyLimit = 1e-5;    // residual / l2_0^2
constexpr double kResolvedTail = 1e-5;   // spectral_tail bound of the resolved window
constexpr double kRateChange = 1e-2;     // dissipation-rate change per record in that window
constexpr double kSymmetryLimit = 1e-8;
constexpr double kGrowthTarget = 100.0;
constexpr double kFitR2 = 0.99;
constexpr std::size_t kFitWindow = 10;
constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

bool is_pde(ScenarioKind k) {
    return k != ScenarioKind::lemma_verify && k != ScenarioKind::regime_sweep;
}

double max_asymmetry(const RealField& theta) {
    const std::size_t n = theta.size();
    double worst = 0.0;
    for (std::size_t j = 1; j < n; ++j) worst = std::max(worst, std::abs(theta[j] - theta[n - j]));
    return worst;
}

double max_relative_rise(const std::vector<DiagRecord>& recs, double DiagRecord::*field) {
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < recs.size(); ++i) {
        const double before = recs[i - 1].*field;
        const double now = recs[i].*field;
        worst = std::max(worst, before > 0.0 ? (now - before) / before : now - before);
    }
    return recs.size() > 1 ? worst : 0.0;
}

bool covered_small_data(const ScenarioSpec& spec, double theta0_max) {
    return spec.solver.alpha == 1.0 && spec.solver.nu > 0.0 && theta0_max < spec.solver.nu;
}

std::string regime_label(double nu, double alpha, double theta0_max) {
    if (nu == 0.0) return "blow-up";
    if (alpha > 1.0) return "global";
    if (alpha == 1.0 && theta0_max < nu) return "small-data";
    return "none";
}

void add(std::vector<ScenarioVerdict>& out, const std::string& name, bool pass, double value,
         double limit, bool enforced) {
    out.push_back({MonitorVerdict{name, pass, value, limit}, enforced});
}

std::vector<double> snapshot_schedule(const ScenarioSpec& spec) {
    if (!spec.snapshot_times.empty()) {
        std::vector<double> t = spec.snapshot_times;
        std::sort(t.begin(), t.end());
        t.erase(std::unique(t.begin(), t.end()), t.end());
        return t;
    }
    std::vector<double> t;
    const std::size_t m = spec.snapshot_count;
    for (std::size_t i = 0; i < m; ++i) {
        t.push_back(spec.solver.t_end * static_cast<double>(i) / static_cast<double>(m - 1));
    }
    return t;
}

}  // namespace

std::vector<DiagRecord> resolved_window(const std::vector<DiagRecord>& records, double nu,
                                        double interval, double tail_limit, double change_limit) {
    const auto uniform = uniform_prefix(records, interval);
    std::size_t end = 0;
    while (end < uniform.size() && uniform[end].spectral_tail <= tail_limit) ++end;
    auto rate = [nu](const DiagRecord& r) { return 0.5 * r.pos_int + nu * r.diss; };
    std::size_t begin = end;
    while (begin > 0) {
        const double a = rate(uniform[begin - 1]);
        const double b = begin < end ? rate(uniform[begin]) : a;
        if (begin < end && !(std::abs(b - a) <= change_limit * std::abs(a))) break;
        --begin;
    }
    return {uniform.begin() + static_cast<std::ptrdiff_t>(begin),
            uniform.begin() + static_cast<std::ptrdiff_t>(end)};
}

std::vector<ScenarioVerdict> scenario_verdicts(const ScenarioSpec& spec,
                                               const std::vector<DiagRecord>& records,
                                               const RunOutcome& outcome, double asymmetry,
                                               bool exploratory) {
    if (records.empty()) throw std::invalid_argument("no records to check");
    const bool enforce = !exploratory;
    const SolverConfig& cfg = spec.solver;
    const DiagRecord& first = records.front();
    const DiagRecord& last = records.back();
    std::vector<ScenarioVerdict> out;

    for (const MonitorVerdict& v : monotonicity_verdicts(records, cfg)) out.push_back({v, enforce});

    const auto window = resolved_window(records, cfg.nu, cfg.record_interval, kResolvedTail, kRateChange);
    const double l2sq = first.l2 * first.l2;
    if (window.size() >= 3 && l2sq > 0.0) {
        const auto res = energy_balance_residual(window, cfg.nu);
        const double worst = *std::max_element(res.begin(), res.end()) / l2sq;
        add(out, "energy_balance", worst <= kEnergyLimit, worst, kEnergyLimit, enforce);
    } else {
        // Nothing resolved to check (or zero data): reported, not enforced.
        add(out, "energy_balance", true, 0.0, kEnergyLimit, false);
    }

    if (spec.kind == ScenarioKind::inviscid_blowup) {
        add(out, "outcome_blow_up", outcome.status == RunStatus::blow_up_suspected, outcome.final_time,
            cfg.t_end, enforce);
        const double growth = first.max_grad > 0.0 ? last.max_grad / first.max_grad : 0.0;
        add(out, "grad_growth", growth >= kGrowthTarget, growth, kGrowthTarget, enforce);
        double r2 = 0.0;
        if (records.size() >= kFitWindow) {
            try {
                r2 = blow_up_fit(records, kFitWindow).inverse_grad.r2;
            } catch (const std::invalid_argument&) {
                r2 = 0.0;
            }
        }
        add(out, "inverse_grad_fit", r2 >= kFitR2, r2, kFitR2, enforce);

        double min_rise = std::numeric_limits<double>::infinity();
        double min_riccati = std::numeric_limits<double>::infinity();
        for (std::size_t i = 1; i < records.size(); ++i) {
            const double dj = records[i].j_val - records[i - 1].j_val;
            const double dt = records[i].t - records[i - 1].t;
            min_rise = std::min(min_rise, dj);
            // (1/J_{i-1} - 1/J_i)/dt, the discrete form of J'/J^2.
            min_riccati = std::min(min_riccati, dj / (dt * records[i].j_val * records[i - 1].j_val));
        }
        add(out, "j_increasing", min_rise > 0.0, min_rise, 0.0, enforce);
        add(out, "j_riccati", min_riccati > 0.0, min_riccati, 0.0, enforce);

        const double factor = std::pow(spec.j.support, 1.0 - spec.j.delta) / (1.0 - spec.j.delta);
        double bound = 0.0;
        double cs = 0.0;
        for (const DiagRecord& r : records) {
            bound = std::max(bound, r.j_val / (factor * r.max_grad));
            cs = std::max(cs, r.j_val * r.j_val / (factor * r.weighted_sq));
        }
        add(out, "bounding_chain", bound <= 1.0, bound, 1.0, enforce);
        add(out, "cauchy_schwarz_chain", cs <= 1.0, cs, 1.0, enforce);
        add(out, "even_symmetry", asymmetry <= kSymmetryLimit, asymmetry, kSymmetryLimit, enforce);
        return out;
    }

    add(out, "outcome_completed", outcome.status == RunStatus::completed, outcome.final_time,
        cfg.t_end, enforce);
    const std::size_t half = records.size() / 2;
    if (cfg.alpha > 1.0 && half >= 1) {
        double early_h = 0.0;
        double late_h = 0.0;
        double c1 = 0.0;
        double late_c = 0.0;
        double h2max = 0.0;
        for (std::size_t i = 0; i < records.size(); ++i) {
            const DiagRecord& r = records[i];
            const double lin = r.h1 / (1.0 + r.t);
            if (i < half) {
                early_h = std::max(early_h, r.hhalf);
                c1 = std::max(c1, lin);
            } else {
                late_h = std::max(late_h, r.hhalf);
                late_c = std::max(late_c, lin);
            }
            h2max = std::max(h2max, std::isfinite(r.h2) ? r.h2 : std::numeric_limits<double>::infinity());
        }
        const double hb = early_h > 0.0 ? late_h / early_h : 0.0;
        add(out, "hhalf_bounded", hb <= 1.0 + 1e-6, hb, 1.0 + 1e-6, enforce);
        const double hc = c1 > 0.0 ? late_c / c1 : 0.0;
        add(out, "h1_linear_bound", hc <= 2.0, hc, 2.0, enforce);
        add(out, "h2_finite", std::isfinite(h2max), h2max, std::numeric_limits<double>::infinity(),
            enforce);
    }
    if (cfg.alpha == 1.0) {
        const double rise = max_relative_rise(records, &DiagRecord::hhalf);
        const bool covered = covered_small_data(spec, first.linf);
        add(out, "hhalf_nonincreasing", rise <= 1e-6, rise, 1e-6, enforce && covered);
    }
    return out;
}

SimulationResult simulate(const ScenarioSpec& spec) {
    if (!is_pde(spec.kind)) throw ConfigError("scenario " + to_string(spec.kind) + " is not a single run");
    spec.validate();
    const Grid grid(spec.n, spec.half_length);
    const bool blowup = spec.kind == ScenarioKind::inviscid_blowup;
    RealField theta0 = RealField::constant(grid, 0.0);
    try {
        theta0 = make_initial(grid, spec.initial);
        check_initial(theta0, true, blowup);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("initial: ") + e.what());
    }

    SimulationResult res(RunOutcome{RunStatus::completed, 0.0, {}, SimState{0.0, theta0, 0}});
    // With nu > 0, only alpha > 1 and the small-data case alpha = 1 are covered by a theorem.
    const bool viscous = spec.solver.nu > 0.0;
    res.exploratory = spec.exploratory ||
                      (viscous && (spec.solver.alpha < 1.0 ||
                                   (spec.solver.alpha == 1.0 && !covered_small_data(spec, theta0.max()))));
    if (auto w = normalization_warning(theta0)) res.warnings.push_back(*w);

    SolverConfig cfg = spec.solver;
    const double g0 = deriv(theta0).max_abs();
    // Blow-up runs without explicit times snapshot at log-equispaced gradient levels
    // g0 (G/g0)^(i/(m-1)), the last one being the trigger G.
    const bool by_growth = blowup && spec.snapshot_times.empty() && g0 > 0.0;
    std::vector<double> levels;
    std::vector<double> times;
    if (by_growth) {
        const double m = static_cast<double>(spec.snapshot_count - 1);
        for (std::size_t i = 0; i < spec.snapshot_count; ++i) {
            levels.push_back(g0 * std::pow(cfg.grad_threshold / g0, static_cast<double>(i) / m));
        }
    } else {
        times = snapshot_schedule(spec);
        cfg.extra_stops = times;
    }

    double asym = 0.0;
    std::size_t next = 0;
    RunObserver obs;
    obs.on_record = [&](const DiagRecord& r) { res.records.push_back(r); };
    obs.on_step = [&](const SimState& s, double grad) {
        if (blowup) asym = std::max(asym, max_asymmetry(s.theta));
        if (by_growth) {
            // One snapshot per level crossed; a big step may cross several at once.
            bool taken = false;
            while (next < levels.size() && (grad >= levels[next] * (1.0 - 1e-12) || next == 0)) {
                if (!taken) res.snapshots.push_back({next, s.t, grad, s.theta});
                taken = true;
                ++next;
            }
        } else {
            while (next < times.size() &&
                   std::abs(s.t - times[next]) <= 1e-9 * std::max(1.0, times[next])) {
                res.snapshots.push_back({next, s.t, grad, s.theta});
                ++next;
            }
        }
    };

    res.outcome = run(cfg, theta0, spec.j, obs);
    if (by_growth && next < levels.size()) {
        res.warnings.push_back("run ended before max|theta_x| reached snapshot level " +
                               std::to_string(next));
    }
    if (!by_growth && next < times.size()) {
        res.warnings.push_back("run ended before snapshot time index " + std::to_string(next));
    }
    const auto lost = std::find_if(res.records.begin(), res.records.end(), [](const DiagRecord& r) {
        return !(r.spectral_tail <= kResolvedTail);
    });
    if (lost != res.records.end()) {
        res.warnings.push_back("spectral tail above " + std::to_string(kResolvedTail) + " from t = " +
                               std::to_string(lost->t) + "; later records are not resolved");
    }
    if (blowup && res.records.size() >= 3) {
        try {
            res.fit = blow_up_fit(res.records, std::min(kFitWindow, res.records.size()));
        } catch (const std::invalid_argument& e) {
            res.warnings.push_back(std::string("blow-up fit unavailable: ") + e.what());
        }
    }
    res.verdicts = scenario_verdicts(spec, res.records, res.outcome, asym, res.exploratory);

    const RunStatus st = res.outcome.status;
    if (st == RunStatus::step_floor_reached || st == RunStatus::nonfinite_abort) {
        res.exit_code = ExitCode::numerical_abort;
    } else if (std::any_of(res.verdicts.begin(), res.verdicts.end(),
                           [](const ScenarioVerdict& v) { return v.enforced && !v.verdict.pass; })) {
        res.exit_code = ExitCode::monitor_violation;
    }
    return res;
}

std::vector<RegimeMapEntry> run_sweep(const ScenarioSpec& base) {
    base.validate();
    const Grid grid(base.n, base.half_length);
    RealField theta0 = RealField::constant(grid, 0.0);
    try {
        theta0 = make_initial(grid, base.initial);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("initial: ") + e.what());
    }
    const double top = theta0.max();

    std::vector<RegimeMapEntry> entries;
    for (double nu : base.sweep.nu) {
        for (double alpha : base.sweep.alpha) {
            RegimeMapEntry e;
            e.nu = nu;
            e.alpha = alpha;
            e.regime = regime_label(nu, alpha, top);
            e.exploratory = e.regime == "none";
            entries.push_back(e);
        }
    }

    auto work = [&](RegimeMapEntry& e) {
        SolverConfig cfg = base.solver;
        cfg.nu = e.nu;
        cfg.alpha = e.alpha;
        std::vector<DiagRecord> recs;
        try {
            const RunOutcome out = run(cfg, theta0, base.j, {[&](const DiagRecord& r) { recs.push_back(r); }, nullptr});
            e.status = to_string(out.status);
            e.final_time = out.final_time;
            e.trigger_time = out.status == RunStatus::blow_up_suspected ? out.final_time : kNan;
            e.max_grad = recs.back().max_grad;
            e.linf = recs.back().linf;
            e.hhalf = recs.back().hhalf;
            e.hhalf_nonincreasing = max_relative_rise(recs, &DiagRecord::hhalf) <= 1e-6;
        } catch (const std::exception& ex) {
            e.status = "error";
            e.trigger_time = kNan;
            e.error = ex.what();
        }
    };

    unsigned workers = base.sweep.threads ? base.sweep.threads : std::thread::hardware_concurrency();
    workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(entries.size())));
    std::atomic<std::size_t> cursor{0};
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = cursor++; i < entries.size(); i = cursor++) work(entries[i]);
        });
    }
    for (auto& t : pool) t.join();
    return entries;
}

LemmaResult verify_lemma(const ScenarioSpec& spec) {
    spec.validate();
    LemmaResult out;
    mellin::VerifyOptions opt;
    opt.grid = mellin::LambdaGrid{spec.lemma.lambda_half_width, spec.lemma.lambda_spacing};
    for (double delta : spec.lemma.deltas) {
        out.constants.push_back({delta, mellin::best_constant(delta, spec.lemma.scan_lambda_max)});
        std::vector<mellin::TestFunction> corpus = mellin::standard_corpus(spec.lemma.seed);
        corpus.push_back(mellin::bounded_tail());
        for (const mellin::TestFunction& f : corpus) {
            try {
                mellin::InequalityReport r = mellin::verify_inequality(f, delta, opt);
                if (!r.pass && !r.exploratory) out.pass = false;
                out.reports.push_back(std::move(r));
            } catch (const std::exception& e) {
                out.errors.emplace_back(f.name, e.what());
                if (!f.exploratory) out.pass = false;
            }
        }
        const mellin::TestFunction g = mellin::gaussian_weighted(2.0, 1.0);
        const double s = spec.lemma.dilation;
        LemmaResult::Dilation d;
        d.delta = delta;
        d.s = s;
        d.measured = mellin::lhs_direct(mellin::dilate(g, s), delta) / mellin::lhs_direct(g, delta);
        d.expected = std::pow(s, 1.0 + delta);
        d.pass = std::abs(d.measured - d.expected) <= 1e-2 * d.expected;
        if (!d.pass) out.pass = false;
        out.dilations.push_back(d);
    }
    return out;
}

}  // namespace nlt
