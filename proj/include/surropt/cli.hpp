#ifndef SURROPT_CLI_HPP
#define SURROPT_CLI_HPP

#include <string>
#include <vector>

#include "surropt/driver.hpp"
#include "surropt/history.hpp"

namespace surropt::cli {

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitObjective = 3;
inline constexpr int kExitNumerical = 4;

struct CliConfig {
    std::string problem_path;
    std::string start_points_path;
    std::string output_path = "history.csv";
    HistoryFormat format = HistoryFormat::Csv;
    DriverOptions opts;
};

/// Parses the flag vector (no argv[0]). Throws config_error on invalid
/// input; --help output includes the full tag vocabulary.
CliConfig parse_args(const std::vector<std::string>& args);

/// Loads the problem, runs the optimizer, writes the history file and a
/// summary on stdout. Returns one of the kExit* codes.
int run(const CliConfig& config);

/// Full front end: parse + run, mapping errors to exit codes.
int cli_main(int argc, const char* const* argv);

}  // namespace surropt::cli

#endif
