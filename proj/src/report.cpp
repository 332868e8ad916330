#include "splitopt/report.hpp"

#include "splitopt/exact.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

namespace splitopt {

std::string_view to_string(SolverKind kind) {
    return kind == SolverKind::heuristic ? "heuristic" : "exact";
}

PlanReport make_plan(const FfnnModel& model, const DeviceChain& chain, SolverKind solver,
                     std::size_t kappa_limit) {
    PlanReport report;
    report.solver = solver;
    report.kappa_limit = kappa_limit;

    const auto start = std::chrono::steady_clock::now();
    const CutTable cuts(model);
    if (solver == SolverKind::heuristic) {
        auto h = solve_sco_heuristic(model, cuts, chain, kappa_limit);
        report.trace = std::move(h.trace);
        if (h.solution) {
            report.solution = std::move(h.solution);
            report.cost = std::move(h.cost);
        } else if (!report.trace->attempts.empty()) {
            report.failure = report.trace->attempts.back().failure;
        }
    } else {
        auto e = solve_sco_exact(model, cuts, chain, kappa_limit);
        if (e.global) {
            report.solution = e.global->solution;
            report.cost = objective(cuts, chain, *report.solution);
        } else {
            report.failure = "no feasible split for any number of devices";
        }
    }
    report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    if (report.solution) {
        report.feasibility = is_feasible(model, chain, *report.solution);
        report.footprint = footprint_stats(model, *report.solution, chain.num_devices());
    } else if (report.failure.empty()) {
        report.failure = "no feasible solution";
    }
    return report;
}

bool self_consistent(const PlanReport& report, const FfnnModel& model, const DeviceChain& chain) {
    if (!report.solution) {
        return true;
    }
    const CostBreakdown again = objective(model, chain, *report.solution);
    double sum = 0.0;
    for (double term : report.cost.boundary_terms) {
        sum += term;
    }
    return again.total == report.cost.total && sum == report.cost.total &&
           again.boundary_terms == report.cost.boundary_terms &&
           is_feasible(model, chain, *report.solution).feasible;
}

std::string format_number(double value) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
    if (ec != std::errc()) {
        throw std::runtime_error("number formatting failed");
    }
    return std::string(buf, end);
}

namespace {

std::string format_fixed(double value, int digits) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::fixed, digits);
    if (ec != std::errc()) {
        throw std::runtime_error("number formatting failed");
    }
    return std::string(buf, end);
}

std::string join_points(const SplitSolution& x) {
    std::string out = "[";
    for (std::size_t t = 0; t < x.kappa(); ++t) {
        out += (t ? ", " : "") + std::to_string(x.points()[t]);
    }
    return out + "]";
}

void footprint_table(std::ostringstream& out, const FootprintStats& fp) {
    out << "device  mem_share  cpu_share\n";
    for (std::size_t t = 0; t < fp.mem_share.size(); ++t) {
        out << "d" << (t + 1) << "      " << format_fixed(fp.mem_share[t], 6) << "   "
            << format_fixed(fp.cpu_share[t], 6) << "\n";
    }
    out << "rho_mem " << format_fixed(fp.rho_mem, 6) << "\n";
    out << "rho_cpu " << format_fixed(fp.rho_cpu, 6) << "\n";
}

}  // namespace

std::string format_fixed6(double value) { return format_fixed(value, 6); }

std::string format_plan(const PlanReport& report) {
    std::ostringstream out;
    out << "solver: " << to_string(report.solver) << "\n";
    if (!report.solved()) {
        out << "result: no feasible solution (" << report.failure << ")\n";
        out << "wall_time_s: " << format_fixed6(report.wall_seconds) << "\n";
        return out.str();
    }
    const auto& x = *report.solution;
    out << "splitting_points: " << join_points(x) << "\n";
    out << "devices_used: " << x.kappa() << "\n";
    for (std::size_t t = 0; t < report.cost.boundary_terms.size(); ++t) {
        out << "psi[" << x.points()[t] << "] (d" << (t + 1) << "->d" << (t + 2)
            << "): " << format_number(report.cost.boundary_terms[t]) << "\n";
    }
    out << "total_cost: " << format_number(report.cost.total) << "\n";
    out << "feasible: " << (report.feasibility.feasible ? "yes" : "no: " + report.feasibility.message) << "\n";
    if (report.trace) {
        out << "iterations: " << report.trace->total_iterations << "\n";
    }
    footprint_table(out, report.footprint);
    out << "wall_time_s: " << format_fixed6(report.wall_seconds) << "\n";
    return out.str();
}

std::string format_footprint(const PlanReport& report) {
    std::ostringstream out;
    out << "solver: " << to_string(report.solver) << "\n";
    if (!report.solved()) {
        out << "result: no feasible solution (" << report.failure << ")\n";
        return out.str();
    }
    out << "splitting_points: " << join_points(*report.solution) << "\n";
    footprint_table(out, report.footprint);
    return out.str();
}

std::string plans_to_json(const std::vector<PlanReport>& reports) {
    using nlohmann::json;
    json plans = json::array();
    for (const auto& r : reports) {
        json p;
        p["solver"] = std::string(to_string(r.solver));
        p["solved"] = r.solved();
        p["wall_time_s"] = r.wall_seconds;
        if (r.solved()) {
            p["splitting_points"] = r.solution->points();
            p["boundary_terms"] = r.cost.boundary_terms;
            p["total_cost"] = r.cost.total;
            p["feasible"] = r.feasibility.feasible;
            p["mem_share"] = r.footprint.mem_share;
            p["cpu_share"] = r.footprint.cpu_share;
            p["rho_mem"] = r.footprint.rho_mem;
            p["rho_cpu"] = r.footprint.rho_cpu;
        } else {
            p["failure"] = r.failure;
        }
        if (r.trace) {
            json attempts = json::array();
            for (const auto& a : r.trace->attempts) {
                attempts.push_back({{"kappa", a.kappa},
                                    {"solved", a.solved},
                                    {"while_iterations", a.while_iterations},
                                    {"layer_checks", a.layer_checks}});
            }
            p["attempts"] = attempts;
            p["total_iterations"] = r.trace->total_iterations;
        }
        plans.push_back(std::move(p));
    }
    json doc = {{"format", "splitopt-plan"}, {"version", 1}, {"plans", plans}};
    if (reports.size() == 2 && reports[0].solved() && reports[1].solved()) {
        doc["cost_difference"] = reports[0].cost.total - reports[1].cost.total;
    }
    return doc.dump(2) + "\n";
}

SweepRow to_row(const ExperimentRecord& r) {
    return {r.config.num_layers,    r.config.num_devices,  r.config.skip_prob,
            r.config.iterations,    r.config.seed,         r.mean_cost_diff,
            r.ci95_halfwidth,       r.heuristic_fail_rate, r.mean_heuristic_time_s,
            r.mean_exact_time_s,    r.mean_rho_mem,        r.mean_rho_cpu};
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
    std::string out(kSweepCsvHeader);
    out += "\n";
    for (const auto& r : rows) {
        out += std::to_string(r.num_layers) + "," + std::to_string(r.num_devices) + "," +
               format_number(r.skip_prob) + "," + std::to_string(r.iterations) + "," +
               std::to_string(r.seed) + "," + format_number(r.mean_cost_diff) + "," +
               format_number(r.ci95_halfwidth) + "," + format_number(r.heuristic_fail_rate) + "," +
               format_fixed6(r.mean_heuristic_time_s) + "," + format_fixed6(r.mean_exact_time_s) +
               "," + format_number(r.mean_rho_mem) + "," + format_number(r.mean_rho_cpu) + "\n";
    }
    return out;
}

namespace {

template <class T>
T parse_field(std::string_view s, std::size_t line) {
    T value{};
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        throw std::runtime_error("csv line " + std::to_string(line) + ": bad field \"" +
                                 std::string(s) + "\"");
    }
    return value;
}

}  // namespace

std::vector<SweepRow> parse_sweep_csv(const std::string& text) {
    std::vector<SweepRow> rows;
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != kSweepCsvHeader) {
        throw std::runtime_error("unexpected csv header");
    }
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) {
            continue;
        }
        std::vector<std::string_view> f;
        std::string_view rest(line);
        for (;;) {
            const auto comma = rest.find(',');
            f.push_back(rest.substr(0, comma));
            if (comma == std::string_view::npos) {
                break;
            }
            rest.remove_prefix(comma + 1);
        }
        if (f.size() != 12) {
            throw std::runtime_error("csv line " + std::to_string(lineno) + ": expected 12 fields");
        }
        SweepRow r;
        r.num_layers = parse_field<std::size_t>(f[0], lineno);
        r.num_devices = parse_field<std::size_t>(f[1], lineno);
        r.skip_prob = parse_field<double>(f[2], lineno);
        r.iterations = parse_field<std::size_t>(f[3], lineno);
        r.seed = parse_field<std::uint64_t>(f[4], lineno);
        r.mean_cost_diff = parse_field<double>(f[5], lineno);
        r.ci95_halfwidth = parse_field<double>(f[6], lineno);
        r.heuristic_fail_rate = parse_field<double>(f[7], lineno);
        r.mean_heuristic_time_s = parse_field<double>(f[8], lineno);
        r.mean_exact_time_s = parse_field<double>(f[9], lineno);
        r.mean_rho_mem = parse_field<double>(f[10], lineno);
        r.mean_rho_cpu = parse_field<double>(f[11], lineno);
        rows.push_back(r);
    }
    return rows;
}

std::string render_sweep_svg(const std::vector<SweepRow>& rows) {
    constexpr double width = 720, height = 480;
    constexpr double left = 70, right = 190, top = 30, bottom = 60;
    const double plot_w = width - left - right;
    const double plot_h = height - top - bottom;
    static constexpr const char* palette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                              "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

    std::map<std::pair<std::size_t, double>, std::vector<const SweepRow*>> series;
    double x_min = 0, x_max = 1, y_max = 0;
    bool any = false;
    for (const auto& r : rows) {
        series[{r.num_devices, r.skip_prob}].push_back(&r);
        const double x = static_cast<double>(r.num_layers);
        x_min = any ? std::min(x_min, x) : x;
        x_max = any ? std::max(x_max, x) : x;
        y_max = std::max(y_max, r.mean_cost_diff + r.ci95_halfwidth);
        any = true;
    }
    if (x_max <= x_min) {
        x_max = x_min + 1;
    }
    if (y_max <= 0) {
        y_max = 1;
    }
    y_max *= 1.05;
    auto px = [&](double x) { return left + (x - x_min) / (x_max - x_min) * plot_w; };
    auto py = [&](double y) { return top + plot_h - y / y_max * plot_h; };
    auto f2 = [](double v) { return format_fixed(v, 2); };

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
        << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<line x1=\"" << left << "\" y1=\"" << top + plot_h << "\" x2=\"" << left + plot_w
        << "\" y2=\"" << top + plot_h << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\""
        << top + plot_h << "\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 5; ++i) {
        const double y = y_max * i / 5.0;
        out << "<text x=\"" << left - 6 << "\" y=\"" << f2(py(y) + 4) << "\" text-anchor=\"end\">"
            << format_fixed(y, 3) << "</text>\n";
        const double x = x_min + (x_max - x_min) * i / 5.0;
        out << "<text x=\"" << f2(px(x)) << "\" y=\"" << top + plot_h + 18
            << "\" text-anchor=\"middle\">" << format_fixed(x, 0) << "</text>\n";
    }
    out << "<text x=\"" << left + plot_w / 2 << "\" y=\"" << height - 15
        << "\" text-anchor=\"middle\">number of layers</text>\n";
    out << "<text transform=\"translate(18," << top + plot_h / 2
        << ") rotate(-90)\" text-anchor=\"middle\">mean cost difference</text>\n";

    std::size_t k = 0;
    for (auto& [key, pts] : series) {
        std::sort(pts.begin(), pts.end(),
                  [](const SweepRow* a, const SweepRow* b) { return a->num_layers < b->num_layers; });
        const char* color = palette[k % std::size(palette)];
        out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        for (const SweepRow* r : pts) {
            out << f2(px(static_cast<double>(r->num_layers))) << "," << f2(py(r->mean_cost_diff)) << " ";
        }
        out << "\"/>\n";
        for (const SweepRow* r : pts) {
            const double x = px(static_cast<double>(r->num_layers));
            const double lo = py(std::max(0.0, r->mean_cost_diff - r->ci95_halfwidth));
            const double hi = py(r->mean_cost_diff + r->ci95_halfwidth);
            out << "<line x1=\"" << f2(x) << "\" y1=\"" << f2(lo) << "\" x2=\"" << f2(x) << "\" y2=\""
                << f2(hi) << "\" stroke=\"" << color << "\"/>\n";
            out << "<circle cx=\"" << f2(x) << "\" cy=\"" << f2(py(r->mean_cost_diff))
                << "\" r=\"2.5\" fill=\"" << color << "\"/>\n";
        }
        const double ly = top + 10 + 18.0 * static_cast<double>(k);
        out << "<line x1=\"" << width - right + 15 << "\" y1=\"" << ly << "\" x2=\""
            << width - right + 35 << "\" y2=\"" << ly << "\" stroke=\"" << color
            << "\" stroke-width=\"2\"/>\n";
        out << "<text x=\"" << width - right + 40 << "\" y=\"" << ly + 4 << "\">|D|=" << key.first
            << ", s=" << format_number(key.second) << "</text>\n";
        ++k;
    }
    out << "</svg>\n";
    return out.str();
}

}  // namespace splitopt
