#ifndef SPLITOPT_REPORT_HPP
#define SPLITOPT_REPORT_HPP

#include "splitopt/cost.hpp"
#include "splitopt/heuristic.hpp"
#include "splitopt/model.hpp"
#include "splitopt/scenario.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace splitopt {

enum class SolverKind { heuristic, exact };

std::string_view to_string(SolverKind kind);

struct PlanReport {
    SolverKind solver = SolverKind::heuristic;
    std::size_t kappa_limit = 0;  // 0: min(|D|, |L|)
    std::optional<SplitSolution> solution;
    CostBreakdown cost;
    FootprintStats footprint;
    FeasibilityReport feasibility;
    std::optional<HeuristicTrace> trace;  // heuristic runs only
    double wall_seconds = 0.0;
    std::string failure;

    bool solved() const { return solution.has_value(); }
};

/// Runs one solver and fills in cost, footprint and feasibility for its answer.
PlanReport make_plan(const FfnnModel& model, const DeviceChain& chain, SolverKind solver,
                     std::size_t kappa_limit = 0);

/// The reported total equals objective() re-evaluated on the reported
/// solution, and the solution is feasible.
bool self_consistent(const PlanReport& report, const FfnnModel& model, const DeviceChain& chain);

std::string format_plan(const PlanReport& report);
std::string format_footprint(const PlanReport& report);

/// Machine-readable plan document; `reports` in the order they were run.
std::string plans_to_json(const std::vector<PlanReport>& reports);

/// Shortest decimal that round-trips, independent of the C locale.
std::string format_number(double value);
/// Fixed six decimals, independent of the C locale.
std::string format_fixed6(double value);

inline constexpr std::string_view kSweepCsvHeader =
    "num_layers,num_devices,skip_prob,iterations,seed,mean_cost_diff,ci95_halfwidth,"
    "heuristic_fail_rate,mean_heuristic_time_s,mean_exact_time_s,mean_rho_mem,mean_rho_cpu";

struct SweepRow {
    std::size_t num_layers = 0;
    std::size_t num_devices = 0;
    double skip_prob = 0.0;
    std::size_t iterations = 0;
    std::uint64_t seed = 0;
    double mean_cost_diff = 0.0;
    double ci95_halfwidth = 0.0;
    double heuristic_fail_rate = 0.0;
    double mean_heuristic_time_s = 0.0;
    double mean_exact_time_s = 0.0;
    double mean_rho_mem = 0.0;
    double mean_rho_cpu = 0.0;
};

SweepRow to_row(const ExperimentRecord& record);

/// Header line plus one line per row, "\n" terminated.
std::string sweep_csv(const std::vector<SweepRow>& rows);
/// Throws std::runtime_error on a wrong header or malformed line.
std::vector<SweepRow> parse_sweep_csv(const std::string& text);

/// Mean cost difference with 95% error bars against the number of layers,
/// one series per (devices, skip probability) pair.
std::string render_sweep_svg(const std::vector<SweepRow>& rows);

}  // namespace splitopt

#endif
