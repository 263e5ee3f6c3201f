// Command-line driver: run, sweep, verify-lemma, plot.
//
// Exit codes: 0 pass, 1 monitor violation, 2 numerical abort, 3 configuration error.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "nlt/config.hpp"
#include "nlt/output.hpp"
#include "nlt/scenario.hpp"

namespace fs = std::filesystem;
using namespace nlt;

namespace {

struct Common {
    std::string config;
    std::vector<std::string> sets;
    std::string out;
};

ScenarioSpec load(const Common& c) {
    ScenarioSpec spec = load_config(c.config);
    for (const std::string& s : c.sets) {
        const auto eq = s.find('=');
        if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + s + "'");
        apply_setting(spec, s.substr(0, eq), s.substr(eq + 1));
    }
    if (!c.out.empty()) spec.output_dir = c.out;
    spec.validate();
    return spec;
}

int do_sweep(const ScenarioSpec& spec) {
    const auto entries = run_sweep(spec);
    const fs::path dir = resolve_output_dir(spec);
    write_sweep_artifacts(dir, spec, entries);
    std::size_t failed = 0;
    for (const auto& e : entries) {
        std::printf("nu=%-6g alpha=%-5g %-20s regime=%s%s\n", e.nu, e.alpha, e.status.c_str(), e.regime.c_str(),
                    e.error.empty() ? "" : (" error: " + e.error).c_str());
        failed += e.error.empty() ? 0 : 1;
    }
    std::printf("wrote %s\n", (dir / "regime_map.csv").string().c_str());
    return failed ? static_cast<int>(ExitCode::numerical_abort) : 0;
}

int do_lemma(const ScenarioSpec& spec) {
    const LemmaResult r = verify_lemma(spec);
    const fs::path dir = resolve_output_dir(spec);
    write_lemma_artifacts(dir, spec, r);
    for (const auto& c : r.constants) {
        std::printf("delta=%g  C_delta=%.6f (min of Re M/pi at lambda=%.4f)\n", c.delta, c.scan.value,
                    c.scan.argmin);
    }
    for (const auto& q : r.reports) {
        std::printf("%-28s delta=%-4g ratio=%.5f cross=%.2e %s%s\n", q.name.c_str(), q.delta, q.ratio,
                    q.cross_rel_err, q.pass ? "pass" : "FAIL", q.exploratory ? " (exploratory)" : "");
    }
    for (const auto& [name, what] : r.errors) std::printf("%-28s error: %s\n", name.c_str(), what.c_str());
    for (const auto& d : r.dilations) {
        std::printf("dilation s=%g delta=%g: %.6f vs s^(1+delta)=%.6f %s\n", d.s, d.delta, d.measured,
                    d.expected, d.pass ? "pass" : "FAIL");
    }
    std::printf("wrote %s\n", (dir / "lemma_verification.csv").string().c_str());
    return r.pass ? 0 : static_cast<int>(ExitCode::monitor_violation);
}

int do_run(const ScenarioSpec& spec) {
    if (spec.kind == ScenarioKind::regime_sweep) return do_sweep(spec);
    if (spec.kind == ScenarioKind::lemma_verify) return do_lemma(spec);
    const SimulationResult r = simulate(spec);
    const fs::path dir = resolve_output_dir(spec);
    write_run_artifacts(dir, spec, r);
    std::printf("%s: %s at t=%.6g (%s)\n", to_string(spec.kind).c_str(), to_string(r.outcome.status).c_str(),
                r.outcome.final_time, r.outcome.reason.c_str());
    for (const auto& v : r.verdicts) {
        std::printf("  %-22s %-4s value=%-14.6g limit=%.6g%s\n", v.verdict.monitor.c_str(),
                    v.verdict.pass ? "pass" : "FAIL", v.verdict.value, v.verdict.limit,
                    v.enforced ? "" : " (not enforced)");
    }
    for (const auto& w : r.warnings) std::printf("  warning: %s\n", w.c_str());
    std::printf("wrote %s\n", dir.string().c_str());
    return static_cast<int>(r.exit_code);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Pseudo-spectral solver and verification suite for theta_t - (H theta) theta_x = -nu Lambda^alpha theta"};
    app.require_subcommand(1);

    Common run_opts, sweep_opts, lemma_opts;
    unsigned threads = 0;
    std::string plot_dir;

    auto add_common = [](CLI::App* sub, Common& c) {
        sub->add_option("config", c.config, "Config file")->required()->check(CLI::ExistingFile);
        sub->add_option("--set", c.sets, "Override a config key, e.g. --set solver.nu=0.5");
        sub->add_option("--out", c.out, "Output directory (default $NLT_OUTPUT_ROOT/<scenario>)");
    };
    CLI::App* run = app.add_subcommand("run", "Run the scenario named in a config file");
    add_common(run, run_opts);
    CLI::App* sweep = app.add_subcommand("sweep", "Run a (nu, alpha) regime sweep");
    add_common(sweep, sweep_opts);
    sweep->add_option("--threads", threads, "Worker threads (0: all cores)");
    CLI::App* lemma = app.add_subcommand("verify-lemma", "Verify the weighted Mellin inequality");
    add_common(lemma, lemma_opts);
    CLI::App* plot = app.add_subcommand("plot", "Regenerate the SVG plots of a run directory");
    plot->add_option("run_dir", plot_dir, "Run directory")->required()->check(CLI::ExistingDirectory);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : static_cast<int>(ExitCode::config_error);
    }

    try {
        if (*run) return do_run(load(run_opts));
        if (*sweep) {
            ScenarioSpec spec = load(sweep_opts);
            if (spec.kind != ScenarioKind::regime_sweep) {
                throw ConfigError("sweep needs scenario = regime_sweep, got " + to_string(spec.kind));
            }
            if (threads) spec.sweep.threads = threads;
            return do_sweep(spec);
        }
        if (*lemma) {
            const ScenarioSpec spec = load(lemma_opts);
            if (spec.kind != ScenarioKind::lemma_verify) {
                throw ConfigError("verify-lemma needs scenario = lemma_verify, got " + to_string(spec.kind));
            }
            return do_lemma(spec);
        }
        for (const auto& p : render_plots(plot_dir)) std::printf("wrote %s\n", p.string().c_str());
        return 0;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return static_cast<int>(ExitCode::config_error);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return static_cast<int>(ExitCode::numerical_abort);
    }
}
