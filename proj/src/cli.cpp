#include "surropt/cli.hpp"

#include <cstdio>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "surropt/design.hpp"
#include "surropt/problem.hpp"
#include "surropt/surrogate.hpp"

namespace surropt::cli {

namespace {

std::string joined(const std::vector<std::string>& v) {
    std::string s;
    for (const auto& e : v) s += (s.empty() ? "" : " ") + e;
    return s;
}

// Thrown when --help is requested; cli_main prints and exits 0.
struct help_requested {
    std::string text;
};

}  // namespace

CliConfig parse_args(const std::vector<std::string>& args) {
    CLI::App app{"surropt: surrogate-model optimization for expensive black-box objectives"};
    CliConfig cfg;
    std::string surrogate = "MIX_RcM", sampling = "CANDglob", design = "SLHD";
    std::string format = "csv";
    long max_evals = 0;
    int design_size = 0, batch = 1, workers = 1;
    std::uint64_t seed = 1;

    app.add_option("--problem", cfg.problem_path,
                   "problem description file (key/value format, see README)")
        ->required();
    app.add_option("--max-evals", max_evals,
                   "total evaluation budget; default 50*dim");
    app.add_option("--surrogate", surrogate,
                   "surrogate model, one of: " + joined(surrogate_tag_names()));
    app.add_option("--sampling", sampling,
                   "sampling strategy, one of: " + joined(sampling_tag_names()));
    app.add_option("--design", design,
                   "initial design, one of: " + joined(design_tag_names()));
    app.add_option("--design-size", design_size,
                   "points in the initial design; default max(2*(dim+1), surrogate minimum)");
    app.add_option("--start-points", cfg.start_points_path,
                   "file with extra start points, one per line");
    app.add_option("--batch", batch, "points evaluated per iteration (default 1)");
    app.add_option("--seed", seed, "random seed (default 1)")->envname("SURROPT_SEED");
    app.add_option("--workers", workers, "max concurrent evaluations (default 1)");
    app.add_option("--output", cfg.output_path, "history file path (default history.csv)");
    app.add_option("--format", format, "history format: csv or json");

    std::vector<const char*> argv;
    argv.push_back("surropt");
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        throw help_requested{app.help()};
    } catch (const CLI::ParseError& e) {
        throw config_error(e.what());
    }

    cfg.opts.surrogate = parse_surrogate_tag(surrogate);
    cfg.opts.sampling = parse_sampling_tag(sampling);
    cfg.opts.design = parse_design_tag(design);
    cfg.format = parse_history_format(format);
    if (max_evals < 0) throw config_error("--max-evals must be positive");
    cfg.opts.max_evals = max_evals;
    if (design_size < 0) throw config_error("--design-size must be positive");
    cfg.opts.design_size = design_size;
    cfg.opts.batch = batch;
    cfg.opts.seed = seed;
    cfg.opts.workers = workers;
    return cfg;
}

int run(const CliConfig& config) {
    try {
        ProblemSpec spec = load_problem(config.problem_path);
        DriverOptions opts = config.opts;
        if (!config.start_points_path.empty())
            opts.start_points = load_start_points(config.start_points_path, spec);

        const RunResult result = optimize(spec, opts);
        write_history(make_history_rows(result), config.format, config.output_path);

        std::printf("problem:     %s (d=%d, continuous=%d, integer=%d)\n",
                    spec.name.c_str(), spec.dim, spec.d1(), spec.d2());
        std::printf("evaluations: %zu\n", result.history.size());
        std::printf("restarts:    %zu\n", result.epochs.empty() ? 0 : result.epochs.size() - 1);
        std::ostringstream pt;
        pt.precision(12);
        for (Eigen::Index i = 0; i < result.best_point.size(); ++i)
            pt << (i ? " " : "") << result.best_point(i);
        std::printf("best point:  %s\n", pt.str().c_str());
        std::printf("best value:  %.12g\n", result.best_value);
        std::printf("history:     %s\n", config.output_path.c_str());
        return kExitOk;
    } catch (const objective_error& e) {
        std::cerr << "objective error: " << e.what() << "\n";
        return kExitObjective;
    } catch (const numerical_error& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const config_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
}

int cli_main(int argc, const char* const* argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    try {
        return run(parse_args(args));
    } catch (const help_requested& h) {
        std::cout << h.text;
        return kExitOk;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
}

}  // namespace surropt::cli
