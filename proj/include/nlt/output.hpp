#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "nlt/config.hpp"
#include "nlt/scenario.hpp"

namespace nlt {

/// %.17g, the serialization used by every CSV file.
std::string format_number(double v);

/// Output directory for a spec: spec.output_dir if set, else <root>/<scenario>, where root
/// is $NLT_OUTPUT_ROOT or "runs".
std::filesystem::path resolve_output_dir(const ScenarioSpec& spec);

/// Header row plus numeric rows.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;

    /// Index of a column; throws std::runtime_error if absent.
    std::size_t column(const std::string& name) const;
};

CsvTable read_csv(const std::filesystem::path& path);

void write_series_csv(const std::filesystem::path& path, const std::vector<DiagRecord>& records);
/// Columns x, theta, theta_x.
void write_snapshot_csv(const std::filesystem::path& path, const RealField& theta);

struct PlotLine {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

struct PlotSpec {
    std::string title;
    std::string x_label;
    std::string y_label;
    bool log_y = false;
    std::vector<PlotLine> lines;
};

/// Standalone SVG with one polyline per line, axis box, end-point tick labels and legend.
void write_svg(const std::filesystem::path& path, const PlotSpec& plot);

/// Writes series.csv, snapshots/t_<i>.csv, run.json and plots/ under `dir`.
void write_run_artifacts(const std::filesystem::path& dir, const ScenarioSpec& spec,
                         const SimulationResult& result);

/// Writes regime_map.csv and run.json under `dir`.
void write_sweep_artifacts(const std::filesystem::path& dir, const ScenarioSpec& spec,
                           const std::vector<RegimeMapEntry>& entries);

/// Writes lemma_verification.csv and run.json under `dir`.
void write_lemma_artifacts(const std::filesystem::path& dir, const ScenarioSpec& spec,
                           const LemmaResult& result);

/// Regenerates plots/*.svg from the CSV files of a run directory. Returns the files written.
std::vector<std::filesystem::path> render_plots(const std::filesystem::path& run_dir);

}  // namespace nlt
