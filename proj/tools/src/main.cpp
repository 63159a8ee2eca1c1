#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Spectral self-affine measure toolkit"};
  app.name("fractal-spectra");

  std::string command;
  std::string problem;
  fscli::Flags flags;

  std::string commands;
  for (const auto& c : fscli::command_names()) commands += (commands.empty() ? "" : ", ") + c;

  app.add_option("command", command, "one of: " + commands)
      ->required()
      ->check(CLI::IsMember(fscli::command_names()));
  app.add_option("problem", problem, "problem file (JSON)")->required();

  double tol = 0, eps0 = 0, delta0 = 0;
  int depth = 0, kmax = 0;
  std::uint64_t seed = 0;
  std::size_t cap = 0;
  std::string out, csv;
  auto* o_tol = app.add_option("--tol", tol, "numeric tolerance")->check(CLI::PositiveNumber);
  auto* o_depth = app.add_option("--depth", depth, "depth / level for the command")->check(CLI::PositiveNumber);
  auto* o_kmax = app.add_option("--kmax", kmax, "offset or shift bound")->check(CLI::NonNegativeNumber);
  auto* o_eps0 = app.add_option("--eps0", eps0, "completion net radius")->check(CLI::PositiveNumber);
  auto* o_delta0 = app.add_option("--delta0", delta0, "completion lower bound")->check(CLI::PositiveNumber);
  auto* o_seed = app.add_option("--seed", seed, "random seed");
  auto* o_cap = app.add_option("--cap", cap, "enumeration cap")->check(CLI::PositiveNumber);
  auto* o_out = app.add_option("--out", out, "write the report here instead of stdout");
  auto* o_csv = app.add_option("--csv", csv, "point-cloud file (attractor)");
  app.add_flag("--timing", flags.timing, "add wall-clock timing to the report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return fscli::kExitUsage;
  }

  if (*o_tol) flags.tol = tol;
  if (*o_depth) flags.depth = depth;
  if (*o_kmax) flags.kmax = kmax;
  if (*o_eps0) flags.eps0 = eps0;
  if (*o_delta0) flags.delta0 = delta0;
  if (*o_seed) flags.seed = seed;
  if (*o_cap) flags.cap = cap;
  if (*o_out) flags.out = out;
  if (*o_csv) flags.csv = csv;

  return fscli::execute(command, problem, flags, std::cout, std::cerr);
}
