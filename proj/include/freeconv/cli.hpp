#pragma once
// Command-line front end: power, scan, verify, rmt.

#include <ostream>
#include <string>
#include <vector>

#include "freeconv/measure.hpp"

namespace freeconv::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitInvalidInput = 2;
inline constexpr int kExitSolverFailure = 3;

/// builtin:semicircle, builtin:uniform, builtin:bump,
/// builtin:bernoulli-smoothed[:eps], builtin:uniform-smoothed[:eps],
/// or a path to a measure JSON / CSV file. n sets the grid of the
/// unparametrized builtins; 0 keeps their default.
GridMeasure load_measure(const std::string& spec, std::size_t n = 0);

/// Exit code of a module error.
int exit_code(const std::exception& e);

/// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int main(int argc, char** argv);

}  // namespace freeconv::cli
