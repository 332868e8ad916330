// splitopt: plan layer splits across a device chain and run Monte Carlo sweeps.
//
// Exit codes: 0 ok, 1 no feasible solution, 2 bad input, 3 internal error.

#include "splitopt/model.hpp"
#include "splitopt/profiles_io.hpp"
#include "splitopt/report.hpp"
#include "splitopt/scenario.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

namespace {

enum ExitCode : int { kOk = 0, kNoSolution = 1, kBadInput = 2, kInternal = 3 };

struct BadInput : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void require_valid(const splitopt::ValidationReport& report, const std::string& what) {
    for (const auto& w : report.warnings) {
        std::cerr << "warning: " << what << ": " << w << "\n";
    }
    if (!report.ok()) {
        std::string msg = what + " is invalid:";
        for (const auto& v : report.violations) {
            msg += "\n  " + v;
        }
        throw BadInput(msg);
    }
}

struct Inputs {
    splitopt::FfnnModel model;
    splitopt::DeviceChain chain;
};

Inputs load_inputs(const std::string& model_path, const std::string& chain_path) {
    Inputs in{splitopt::load_model(model_path), splitopt::load_chain(chain_path)};
    require_valid(splitopt::validate_model(in.model), "model " + model_path);
    require_valid(splitopt::validate_chain(in.chain), "chain " + chain_path);
    return in;
}

int threads_from_env() {
    if (const char* env = std::getenv("SPLITOPT_THREADS")) {
        try {
            return std::stoi(env);
        } catch (const std::exception&) {
            throw BadInput("SPLITOPT_THREADS must be an integer");
        }
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Split feed-forward models across a UE -> edge -> core device chain"};
    app.require_subcommand(1);

    std::string model_path, chain_path, solver = "heuristic", out_path, svg_path, config_path;
    std::string profile_path, model_out, chain_out;
    std::size_t max_splits = 0;
    std::optional<std::uint64_t> seed;
    int threads = -1;
    bool no_timing = false;

    auto* plan = app.add_subcommand("plan", "Split one model across one device chain");
    plan->add_option("--model", model_path, "Model file")->required();
    plan->add_option("--chain", chain_path, "Device chain file")->required();
    plan->add_option("--solver", solver, "heuristic, exact or both")
        ->check(CLI::IsMember({"heuristic", "exact", "both"}));
    plan->add_option("--max-splits", max_splits, "Use at most this many devices (0: all)");
    plan->add_option("--out", out_path, "Also write the plan as JSON");

    auto* experiment = app.add_subcommand("experiment", "Run a heuristic-vs-optimum sweep");
    experiment->add_option("--config", config_path, "Sweep file")->required();
    experiment->add_option("--out", out_path, "CSV output path")->required();
    experiment->add_option("--svg", svg_path, "Also render the CSV as SVG");
    experiment->add_option("--seed", seed, "Override every cell's seed");
    experiment->add_option("--threads", threads, "Worker threads (default: $SPLITOPT_THREADS or all)");
    experiment->add_flag("--no-timing", no_timing, "Write zero wall-times so output is reproducible");

    auto* footprint = app.add_subcommand("footprint", "Per-device memory and CPU shares of a plan");
    footprint->add_option("--model", model_path, "Model file")->required();
    footprint->add_option("--chain", chain_path, "Device chain file")->required();
    footprint->add_option("--solver", solver, "heuristic or exact")
        ->check(CLI::IsMember({"heuristic", "exact"}));

    auto* validate = app.add_subcommand("validate", "Check model and/or chain files");
    validate->add_option("--model", model_path, "Model file");
    validate->add_option("--chain", chain_path, "Device chain file");

    auto* normalize = app.add_subcommand("normalize", "Turn a layer profile and raw chain into model/chain files");
    normalize->add_option("--profile", profile_path, "Layer profile file")->required();
    normalize->add_option("--chain", chain_path, "Chain file in raw units")->required();
    normalize->add_option("--model-out", model_out, "Normalized model output")->required();
    normalize->add_option("--chain-out", chain_out, "Normalized chain output")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kBadInput;
    }

    try {
        if (plan->parsed()) {
            const Inputs in = load_inputs(model_path, chain_path);
            std::vector<splitopt::PlanReport> reports;
            if (solver != "exact") {
                reports.push_back(make_plan(in.model, in.chain, splitopt::SolverKind::heuristic, max_splits));
            }
            if (solver != "heuristic") {
                reports.push_back(make_plan(in.model, in.chain, splitopt::SolverKind::exact, max_splits));
            }
            bool all_solved = true;
            for (std::size_t i = 0; i < reports.size(); ++i) {
                if (!self_consistent(reports[i], in.model, in.chain)) {
                    std::cerr << "error: reported cost does not match a re-evaluation\n";
                    return kInternal;
                }
                std::cout << (i ? "\n" : "") << splitopt::format_plan(reports[i]);
                all_solved = all_solved && reports[i].solved();
            }
            if (reports.size() == 2 && all_solved) {
                std::cout << "\ncost_difference: "
                          << splitopt::format_number(reports[0].cost.total - reports[1].cost.total) << "\n";
            }
            if (!out_path.empty()) {
                splitopt::write_text_file(out_path, splitopt::plans_to_json(reports));
            }
            return all_solved ? kOk : kNoSolution;
        }

        if (footprint->parsed()) {
            const Inputs in = load_inputs(model_path, chain_path);
            const auto kind = solver == "exact" ? splitopt::SolverKind::exact : splitopt::SolverKind::heuristic;
            const auto report = make_plan(in.model, in.chain, kind);
            std::cout << splitopt::format_footprint(report);
            return report.solved() ? kOk : kNoSolution;
        }

        if (experiment->parsed()) {
            auto cells = splitopt::load_sweep_config(config_path);
            if (seed) {
                for (auto& c : cells) {
                    c.seed = *seed;
                }
            }
            splitopt::SweepOptions options;
            options.measure_time = !no_timing;
            options.threads = threads >= 0 ? threads : threads_from_env();
            const auto records = splitopt::run_cost_difference_sweep(cells, options);
            std::vector<splitopt::SweepRow> rows;
            for (const auto& r : records) {
                rows.push_back(splitopt::to_row(r));
            }
            splitopt::write_text_file(out_path, splitopt::sweep_csv(rows));
            if (!svg_path.empty()) {
                // the plot is drawn from the file just written
                const auto parsed = splitopt::parse_sweep_csv(splitopt::read_text_file(out_path));
                splitopt::write_text_file(svg_path, splitopt::render_sweep_svg(parsed));
            }
            std::cout << "wrote " << rows.size() << " rows to " << out_path << "\n";
            return kOk;
        }

        if (validate->parsed()) {
            if (model_path.empty() && chain_path.empty()) {
                throw BadInput("validate needs --model and/or --chain");
            }
            if (!model_path.empty()) {
                require_valid(splitopt::validate_model(splitopt::load_model(model_path)), "model " + model_path);
                std::cout << "model " << model_path << ": ok\n";
            }
            if (!chain_path.empty()) {
                require_valid(splitopt::validate_chain(splitopt::load_chain(chain_path)), "chain " + chain_path);
                std::cout << "chain " << chain_path << ": ok\n";
            }
            return kOk;
        }

        if (normalize->parsed()) {
            const auto profile = splitopt::load_profile(profile_path);
            const auto raw_chain = splitopt::load_chain(chain_path);
            require_valid(splitopt::validate_chain(raw_chain, false), "chain " + chain_path);
            const auto inst = splitopt::normalize(profile, raw_chain);
            require_valid(splitopt::validate_model(inst.model), "normalized model");
            splitopt::save_model(model_out, inst.model);
            splitopt::save_chain(chain_out, inst.chain);
            std::cout << "cpu_factor " << splitopt::format_number(inst.factors.cpu_factor) << "\n"
                      << "mem_factor " << splitopt::format_number(inst.factors.mem_factor) << "\n"
                      << "bandwidth_factor " << splitopt::format_number(inst.factors.bandwidth_factor) << "\n";
            return kOk;
        }
    } catch (const BadInput& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kBadInput;
    } catch (const splitopt::IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kBadInput;
    } catch (const splitopt::FormatError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kBadInput;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kBadInput;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kInternal;
    }
    return kInternal;
}
