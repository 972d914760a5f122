#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "conelevy/cli.hpp"

namespace {

std::vector<double> parse_times(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    std::size_t used = 0;
    out.push_back(std::stod(cell, &used));
    if (used != cell.size()) throw std::invalid_argument("bad time '" + cell + "'");
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace conelevy::cli;
  CLI::App app{"Simulate and verify cone-valued fuzzy Levy subordinators"};
  app.require_subcommand(1);

  Options opt;
  std::string out_dir;
  std::string times;
  std::uint64_t seed = 0;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", opt.config_path, "Run configuration (JSON)")->required();
    sub->add_option("--out", out_dir, "Output directory (overrides outputs.directory)");
    sub->add_option("--jobs", opt.jobs, "Worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--seed", seed, "Master seed (overrides sim.master_seed)");
    sub->add_option("--times", times, "Comma-separated sample times t1,t2,...");
  };

  CLI::App* validate = app.add_subcommand("validate", "Check the triplet conditions");
  CLI::App* simulate = app.add_subcommand("simulate", "Simulate trajectories and write a manifest");
  CLI::App* verify = app.add_subcommand("verify", "Pathwise and ensemble checks of trajectory files");
  CLI::App* snapshot = app.add_subcommand("snapshot", "Materialize fuzzy states of one trajectory");
  for (CLI::App* sub : {validate, simulate, verify, snapshot}) add_common(sub);
  verify->add_option("files", opt.files, "Trajectory CSV files");
  snapshot->add_option("files", opt.files, "Trajectory CSV file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsageError;
  }

  if (!out_dir.empty()) opt.out_dir = out_dir;
  for (CLI::App* sub : {validate, simulate, verify, snapshot}) {
    if (sub->parsed() && sub->count("--seed") > 0) opt.seed = seed;
  }
  try {
    if (!times.empty()) opt.times = parse_times(times);
  } catch (const std::exception& e) {
    std::cerr << "--times: " << e.what() << "\n";
    return kUsageError;
  }

  if (validate->parsed()) return cmd_validate(opt, std::cout, std::cerr);
  if (simulate->parsed()) return cmd_simulate(opt, std::cout, std::cerr);
  if (verify->parsed()) return cmd_verify(opt, std::cout, std::cerr);
  return cmd_snapshot(opt, std::cout, std::cerr);
}
