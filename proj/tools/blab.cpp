#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "blab/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Blaschke product derivative bounds: experiment driver"};
  app.require_subcommand(1);

  blab::runner::Invocation invocation;
  std::uint64_t seed = 0;
  std::string out;
  const std::map<std::string, std::string> about = {
      {"verify-lemma", "sample the single-factor bound 2C + K"},
      {"verify-theorem1", "check the |B'| bound on products with zeros in S(E, K)"},
      {"critical-points", "locate the zeros of B' in the disk"},
      {"critical-sum", "weighted sums over critical points for growing truncations"},
      {"beta-estimate", "estimate the type of a boundary set"},
      {"means-trend", "Hardy means of B' over truncations and radii"},
      {"envelope-fit", "fit |B'| <= C1 exp(C2 / d^rho) and test it out of sample"},
      {"region-boundary", "trace the boundary of S(t, K)"},
  };
  for (const std::string& name : blab::runner::subcommands()) {
    const auto it = about.find(name);
    CLI::App* sub = app.add_subcommand(name, it == about.end() ? "" : it->second);
    sub->add_option("--config", invocation.config, "experiment config (JSON)")->required();
    sub->add_option("--seed", seed, "overrides the config seed");
    sub->add_option("--out", out, "output directory");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : blab::runner::kExitConfig;
  }

  CLI::App* chosen = app.get_subcommands().front();
  invocation.subcommand = chosen->get_name();
  if (chosen->count("--seed") > 0) invocation.seed = seed;
  if (chosen->count("--out") > 0) invocation.out = out;
  return blab::runner::run(invocation, std::cout, std::cerr);
}
