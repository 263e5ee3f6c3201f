#include "nlt/output.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "nlt/spectral.hpp"

namespace nlt {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::ofstream open_out(const fs::path& path) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    return out;
}

// JSON has no NaN or infinity; they become null.
json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json echo(const ScenarioSpec& spec) {
    json j = json::object();
    for (const auto& [k, v] : config_echo(spec)) j[k] = v;
    return j;
}

std::string xml_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                          "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

std::string short_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

}  // namespace

std::string format_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

fs::path resolve_output_dir(const ScenarioSpec& spec) {
    if (!spec.output_dir.empty()) return spec.output_dir;
    const char* root = std::getenv("NLT_OUTPUT_ROOT");
    return fs::path(root && *root ? root : "runs") / to_string(spec.kind);
}

std::size_t CsvTable::column(const std::string& name) const {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw std::runtime_error("CSV has no column '" + name + "'");
    return static_cast<std::size_t>(it - header.begin());
}

CsvTable read_csv(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    CsvTable t;
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error(path.string() + " is empty");
    std::stringstream hs(line);
    std::string cell;
    while (std::getline(hs, cell, ',')) t.header.push_back(cell);
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream rs(line);
        while (std::getline(rs, cell, ',')) {
            char* end = nullptr;
            const double v = std::strtod(cell.c_str(), &end);
            if (end == cell.c_str()) {
                throw std::runtime_error(path.string() + ":" + std::to_string(line_no) + ": bad number");
            }
            row.push_back(v);
        }
        if (row.size() != t.header.size()) {
            throw std::runtime_error(path.string() + ":" + std::to_string(line_no) + ": wrong column count");
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

void write_series_csv(const fs::path& path, const std::vector<DiagRecord>& records) {
    std::ofstream out = open_out(path);
    const auto& cols = diag_record_columns();
    for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
    out << '\n';
    for (const DiagRecord& r : records) {
        const auto v = diag_record_values(r);
        for (std::size_t i = 0; i < v.size(); ++i) out << (i ? "," : "") << format_number(v[i]);
        out << '\n';
    }
}

void write_snapshot_csv(const fs::path& path, const RealField& theta) {
    std::ofstream out = open_out(path);
    const RealField dtheta = deriv(theta);
    out << "x,theta,theta_x\n";
    for (std::size_t j = 0; j < theta.size(); ++j) {
        out << format_number(theta.grid().node(j)) << ',' << format_number(theta[j]) << ','
            << format_number(dtheta[j]) << '\n';
    }
}

void write_svg(const fs::path& path, const PlotSpec& plot) {
    constexpr double W = 800.0, H = 500.0, L = 80.0, R = 170.0, T = 40.0, B = 60.0;
    auto ty = [&](double y) { return plot.log_y ? std::log10(y) : y; };
    double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
    for (const PlotLine& l : plot.lines) {
        for (std::size_t i = 0; i < l.x.size(); ++i) {
            const double y = ty(l.y[i]);
            if (!std::isfinite(l.x[i]) || !std::isfinite(y)) continue;
            x0 = std::min(x0, l.x[i]);
            x1 = std::max(x1, l.x[i]);
            y0 = std::min(y0, y);
            y1 = std::max(y1, y);
        }
    }
    if (!(x0 <= x1)) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
    if (x1 == x0) x1 = x0 + 1;
    if (y1 == y0) y0 -= 0.5, y1 += 0.5;
    const double pad = 0.05 * (y1 - y0);
    y0 -= pad;
    y1 += pad;
    auto px = [&](double x) { return L + (x - x0) / (x1 - x0) * (W - L - R); };
    auto py = [&](double y) { return H - B - (y - y0) / (y1 - y0) * (H - T - B); };
    auto ylabel = [&](double y) { return short_number(plot.log_y ? std::pow(10.0, y) : y); };

    std::ofstream out = open_out(path);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
        << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">"
        << xml_escape(plot.title) << "</text>\n";
    out << "<rect x=\"" << L << "\" y=\"" << T << "\" width=\"" << W - L - R << "\" height=\"" << H - T - B
        << "\" fill=\"none\" stroke=\"black\"/>\n";
    if (y0 < 0.0 && y1 > 0.0 && !plot.log_y) {
        out << "<line x1=\"" << L << "\" x2=\"" << W - R << "\" y1=\"" << py(0) << "\" y2=\"" << py(0)
            << "\" stroke=\"#bbb\" stroke-dasharray=\"4,4\"/>\n";
    }
    out << "<text x=\"" << L << "\" y=\"" << H - B + 18 << "\" text-anchor=\"middle\">" << short_number(x0)
        << "</text>\n";
    out << "<text x=\"" << W - R << "\" y=\"" << H - B + 18 << "\" text-anchor=\"middle\">"
        << short_number(x1) << "</text>\n";
    out << "<text x=\"" << L - 6 << "\" y=\"" << H - B << "\" text-anchor=\"end\">" << ylabel(y0)
        << "</text>\n";
    out << "<text x=\"" << L - 6 << "\" y=\"" << T + 10 << "\" text-anchor=\"end\">" << ylabel(y1)
        << "</text>\n";
    out << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 18 << "\" text-anchor=\"middle\">"
        << xml_escape(plot.x_label) << "</text>\n";
    out << "<text x=\"18\" y=\"" << (T + H - B) / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
        << (T + H - B) / 2 << ")\">" << xml_escape(plot.y_label) << (plot.log_y ? " (log)" : "")
        << "</text>\n";
    for (std::size_t k = 0; k < plot.lines.size(); ++k) {
        const PlotLine& l = plot.lines[k];
        const char* colour = kPalette[k % std::size(kPalette)];
        out << "<polyline fill=\"none\" stroke-width=\"1.5\" stroke=\"" << colour << "\" points=\"";
        for (std::size_t i = 0; i < l.x.size(); ++i) {
            const double y = ty(l.y[i]);
            if (!std::isfinite(y)) continue;
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.2f,%.2f ", px(l.x[i]), py(y));
            out << buf;
        }
        out << "\"/>\n";
        const double ly = T + 14 + 18 * static_cast<double>(k);
        out << "<line x1=\"" << W - R + 12 << "\" x2=\"" << W - R + 36 << "\" y1=\"" << ly - 4 << "\" y2=\""
            << ly - 4 << "\" stroke=\"" << colour << "\" stroke-width=\"2\"/>\n";
        out << "<text x=\"" << W - R + 42 << "\" y=\"" << ly << "\">" << xml_escape(l.label) << "</text>\n";
    }
    out << "</svg>\n";
}

void write_run_artifacts(const fs::path& dir, const ScenarioSpec& spec, const SimulationResult& r) {
    fs::create_directories(dir);
    write_series_csv(dir / "series.csv", r.records);
    fs::remove_all(dir / "snapshots");
    json snaps = json::array();
    for (const Snapshot& s : r.snapshots) {
        const std::string name = "t_" + std::to_string(s.index) + ".csv";
        write_snapshot_csv(dir / "snapshots" / name, s.theta);
        snaps.push_back({{"index", s.index}, {"file", "snapshots/" + name}, {"t", num(s.t)},
                         {"max_grad", num(s.max_grad)}});
    }

    json monitors = json::array();
    bool all_pass = true;
    for (const ScenarioVerdict& v : r.verdicts) {
        monitors.push_back({{"monitor", v.verdict.monitor},
                            {"pass", v.verdict.pass},
                            {"value", num(v.verdict.value)},
                            {"limit", num(v.verdict.limit)},
                            {"enforced", v.enforced}});
        if (v.enforced && !v.verdict.pass) all_pass = false;
    }
    json j;
    j["scenario"] = to_string(spec.kind);
    j["config"] = echo(spec);
    j["exploratory"] = r.exploratory;
    j["outcome"] = {{"status", to_string(r.outcome.status)},
                    {"final_time", num(r.outcome.final_time)},
                    {"reason", r.outcome.reason},
                    {"steps", r.outcome.last_state.step_count}};
    j["verdict"] = {{"pass", all_pass && r.exit_code == ExitCode::pass},
                    {"exit_code", static_cast<int>(r.exit_code)},
                    {"monitors", monitors}};
    if (r.fit) {
        auto line = [](const LineFit& f) {
            return json{{"slope", num(f.slope)}, {"intercept", num(f.intercept)}, {"t_star", num(f.t_star)},
                        {"r2", num(f.r2)}};
        };
        j["blow_up_fit"] = {{"inverse_grad", line(r.fit->inverse_grad)}, {"inverse_j", line(r.fit->inverse_j)}};
    }
    j["snapshots"] = snaps;
    j["warnings"] = r.warnings;
    open_out(dir / "run.json") << j.dump(2) << '\n';
    render_plots(dir);
}

void write_sweep_artifacts(const fs::path& dir, const ScenarioSpec& spec,
                           const std::vector<RegimeMapEntry>& entries) {
    fs::create_directories(dir);
    std::ofstream out = open_out(dir / "regime_map.csv");
    out << "nu,alpha,status,final_time,trigger_time,max_grad,linf,hhalf,hhalf_nonincreasing,regime,"
           "exploratory,error\n";
    for (const RegimeMapEntry& e : entries) {
        std::string err = e.error;
        std::replace(err.begin(), err.end(), ',', ';');
        std::replace(err.begin(), err.end(), '\n', ' ');
        out << format_number(e.nu) << ',' << format_number(e.alpha) << ',' << e.status << ','
            << format_number(e.final_time) << ',' << format_number(e.trigger_time) << ','
            << format_number(e.max_grad) << ',' << format_number(e.linf) << ',' << format_number(e.hhalf)
            << ',' << (e.hhalf_nonincreasing ? 1 : 0) << ',' << e.regime << ',' << (e.exploratory ? 1 : 0)
            << ',' << err << '\n';
    }
    json j;
    j["scenario"] = to_string(spec.kind);
    j["config"] = echo(spec);
    j["points"] = entries.size();
    j["errors"] = std::count_if(entries.begin(), entries.end(),
                                [](const RegimeMapEntry& e) { return !e.error.empty(); });
    open_out(dir / "run.json") << j.dump(2) << '\n';
}

void write_lemma_artifacts(const fs::path& dir, const ScenarioSpec& spec, const LemmaResult& r) {
    fs::create_directories(dir);
    std::ofstream out = open_out(dir / "lemma_verification.csv");
    out << "name,delta,lhs_direct,lhs_mellin,rhs,plancherel,ratio,c_delta,cross_rel_err,"
           "plancherel_rel_err,degenerate,exploratory,pass\n";
    for (const auto& q : r.reports) {
        out << q.name << ',' << format_number(q.delta) << ',' << format_number(q.lhs_direct) << ','
            << format_number(q.lhs_mellin) << ',' << format_number(q.rhs) << ','
            << format_number(q.plancherel) << ',' << format_number(q.ratio) << ','
            << format_number(q.c_delta) << ',' << format_number(q.cross_rel_err) << ','
            << format_number(q.plancherel_rel_err) << ',' << (q.degenerate ? 1 : 0) << ','
            << (q.exploratory ? 1 : 0) << ',' << (q.pass ? 1 : 0) << '\n';
    }
    json j;
    j["scenario"] = to_string(spec.kind);
    j["config"] = echo(spec);
    json consts = json::array();
    for (const auto& c : r.constants) {
        consts.push_back({{"delta", c.delta}, {"c_delta", num(c.scan.value)}, {"argmin", num(c.scan.argmin)},
                          {"at_boundary", c.scan.at_boundary}});
    }
    j["constants"] = consts;
    json dil = json::array();
    for (const auto& d : r.dilations) {
        dil.push_back({{"delta", d.delta}, {"s", d.s}, {"measured", num(d.measured)},
                       {"expected", num(d.expected)}, {"pass", d.pass}});
    }
    j["dilation"] = dil;
    json errs = json::array();
    for (const auto& [name, what] : r.errors) errs.push_back({{"function", name}, {"error", what}});
    j["errors"] = errs;
    j["verdict"] = {{"pass", r.pass}, {"exit_code", r.pass ? 0 : 1}};
    open_out(dir / "run.json") << j.dump(2) << '\n';
}

std::vector<fs::path> render_plots(const fs::path& run_dir) {
    std::vector<fs::path> written;
    const fs::path plots = run_dir / "plots";

    // Snapshot labels come from run.json when present, else from the file index.
    std::vector<std::pair<fs::path, std::string>> snaps;
    const fs::path meta = run_dir / "run.json";
    if (fs::exists(meta)) {
        std::ifstream in(meta);
        const json j = json::parse(in);
        if (j.contains("snapshots")) {
            for (const auto& s : j["snapshots"]) {
                const std::string t = s["t"].is_number() ? short_number(s["t"].get<double>()) : "?";
                snaps.emplace_back(run_dir / s["file"].get<std::string>(), "t = " + t);
            }
        }
    } else if (fs::exists(run_dir / "snapshots")) {
        for (std::size_t i = 0; fs::exists(run_dir / "snapshots" / ("t_" + std::to_string(i) + ".csv")); ++i) {
            snaps.emplace_back(run_dir / "snapshots" / ("t_" + std::to_string(i) + ".csv"),
                               "t_" + std::to_string(i));
        }
    }

    if (!snaps.empty()) {
        std::vector<CsvTable> tables;
        for (const auto& s : snaps) tables.push_back(read_csv(s.first));
        // Window: where any profile exceeds 1e-3 of the largest value, padded by 20%.
        double peak = 0.0;
        for (const CsvTable& t : tables) {
            for (const auto& row : t.rows) peak = std::max(peak, std::abs(row[1]));
        }
        double reach = 0.0;
        double xmax = 0.0;
        for (const CsvTable& t : tables) {
            for (const auto& row : t.rows) {
                xmax = std::max(xmax, std::abs(row[0]));
                if (std::abs(row[1]) >= 1e-3 * peak) reach = std::max(reach, std::abs(row[0]));
            }
        }
        reach = reach > 0.0 ? std::min(xmax, 1.2 * reach) : xmax;
        PlotSpec th{"theta at the snapshot times", "x", "theta", false, {}};
        PlotSpec dth{"theta_x at the snapshot times", "x", "theta_x", false, {}};
        for (std::size_t k = 0; k < tables.size(); ++k) {
            PlotLine a{snaps[k].second, {}, {}};
            PlotLine b{snaps[k].second, {}, {}};
            for (const auto& row : tables[k].rows) {
                if (std::abs(row[0]) > reach) continue;
                a.x.push_back(row[0]);
                a.y.push_back(row[1]);
                b.x.push_back(row[0]);
                b.y.push_back(row[2]);
            }
            th.lines.push_back(std::move(a));
            dth.lines.push_back(std::move(b));
        }
        write_svg(plots / "theta.svg", th);
        write_svg(plots / "theta_x.svg", dth);
        written.push_back(plots / "theta.svg");
        written.push_back(plots / "theta_x.svg");
    }

    if (fs::exists(run_dir / "series.csv")) {
        const CsvTable s = read_csv(run_dir / "series.csv");
        auto series = [&](const std::string& col) {
            PlotLine l{col, {}, {}};
            const std::size_t t = s.column("t");
            const std::size_t c = s.column(col);
            for (const auto& row : s.rows) {
                l.x.push_back(row[t]);
                l.y.push_back(row[c]);
            }
            return l;
        };
        write_svg(plots / "max_grad.svg", {"max |theta_x|", "t", "max |theta_x|", true, {series("max_grad")}});
        write_svg(plots / "j_val.svg", {"J(t)", "t", "J", false, {series("j_val")}});
        write_svg(plots / "norms.svg",
                  {"norms", "t", "value", false, {series("l1"), series("l2"), series("hhalf"), series("linf")}});
        for (const char* f : {"max_grad.svg", "j_val.svg", "norms.svg"}) written.push_back(plots / f);
    }
    if (written.empty()) throw std::runtime_error(run_dir.string() + " holds no snapshots or series.csv");
    return written;
}

}  // namespace nlt
