#ifndef TORUSDIRAC_CLI_HPP
#define TORUSDIRAC_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "torusdirac/minimize.hpp"

namespace torusdirac::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomain = 1;
inline constexpr int kExitNumerical = 2;
inline constexpr int kExitUsage = 64;

// Everything needed to rerun a sweep; stored next to its CSV.
struct RunConfig {
  std::string subcommand;
  MinimizeConfig minimize;
  std::string input;
  std::string output;
  int workers = 1;

  void validate() const;  // ParameterError when workers < 1
  std::string to_json() const;
};

// Subcommands: spectrum, reduce, minimize, sweep, cylinder-check,
// mercator-check, plot. Returns 0 on success, 1 on domain errors, 2 on
// numerical failures and 64 on usage errors; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, const char* const* argv);

}  // namespace torusdirac::cli

#endif  // TORUSDIRAC_CLI_HPP
