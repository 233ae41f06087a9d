#ifndef IPDLEARN_TOOLS_COMMANDS_HPP
#define IPDLEARN_TOOLS_COMMANDS_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "run_config.hpp"

namespace ipdlearn::cli {

const std::vector<std::string>& CommandNames();

// Runs one command, writing its files under cfg.out and a short summary to
// `log`. Throws on invalid configuration or unwritable output.
void RunCommand(const RunConfig& cfg, std::ostream& log);

// The log-spaced default time grid: (t_max + 1)^(k/n) - 1 for k = 0..n.
std::vector<double> DefaultTimeGrid(double t_max, std::size_t n = 40);

}  // namespace ipdlearn::cli

#endif  // IPDLEARN_TOOLS_COMMANDS_HPP
