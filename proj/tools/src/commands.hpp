#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "problem.hpp"
#include "report.hpp"

namespace fscli {

/// Command-line overrides; unset values fall back to the problem file, then
/// to the per-command defaults listed in docs/report-schema.md.
struct Flags {
  std::optional<double> tol;
  std::optional<int> depth;
  std::optional<int> kmax;
  std::optional<double> eps0;
  std::optional<double> delta0;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> cap;
  std::optional<std::string> out;
  std::optional<std::string> csv;
  bool timing = false;
};

const std::vector<std::string>& command_names();

/// Runs one command against an already parsed problem.
Report run_command(const std::string& command, const ProblemFile& problem, const Flags& flags);

/// Loads the file, runs the command, writes the report (to --out or `out`)
/// and returns the exit code. Diagnostics go to `err`.
int execute(const std::string& command, const std::string& path, const Flags& flags,
            std::ostream& out, std::ostream& err);

}  // namespace fscli
