#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "omniwheg/cli.hpp"

int main(int argc, char **argv) {
  using namespace omniwheg;

  CLI::App app{"Quasi-static climbing simulator for a transformable wheel-leg robot"};
  app.require_subcommand(1);

  std::optional<std::string> out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<double> dalpha;
  auto add_common = [&](CLI::App *sub) {
    sub->add_option("--out", out_dir, "Output directory (overrides the scenario)");
    sub->add_option("--seed", seed, "Seed for randomized initial phases");
    sub->add_option("--dalpha", dalpha, "Pivot angle increment, rad");
  };

  std::string scenario_path;
  std::string log_path;
  std::vector<std::string> heights;
  std::vector<std::string> directions;
  double torque_constant = 0.741;

  auto *run = app.add_subcommand("run", "Plan and simulate one scenario");
  run->add_option("scenario", scenario_path, "Scenario file")->required();
  add_common(run);

  auto *sweep = app.add_subcommand("sweep", "Simulate a height x direction matrix");
  sweep->add_option("--heights", heights, "Step heights, m")->required()->delimiter(',');
  sweep->add_option("--directions", directions, "forward and/or backward")->required()->delimiter(',');
  sweep->add_option("scenario", scenario_path, "Base scenario file");
  add_common(sweep);

  auto *analyze = app.add_subcommand("analyze", "Convert a current log to torque and summarize it");
  analyze->add_option("log", log_path, "CSV log with t and i_* columns")->required();
  analyze->add_option("--torque-constant", torque_constant, "N*m per A")->capture_default_str();
  analyze->add_option("--out", out_dir, "Directory for analyzed.csv");

  auto *feas = app.add_subcommand("feasibility", "Check actuator limits against worst-case torque");
  feas->add_option("scenario", scenario_path, "Scenario file")->required();
  add_common(feas);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? cli::kExitOk : cli::kExitUsage;
  }

  const cli::RunOptions opts{out_dir, seed, dalpha};
  if (*run)
    return cli::run(scenario_path, opts, std::cout, std::cerr);
  if (*sweep) {
    // Multi-value options are greedy, so a scenario written after the last
    // list lands in that list. Reclaim it.
    auto reclaim = [&](std::vector<std::string> &list, auto is_item) {
      if (scenario_path.empty() && list.size() > 1 && !is_item(list.back())) {
        scenario_path = list.back();
        list.pop_back();
      }
    };
    auto is_direction = [](const std::string &d) { return d == "forward" || d == "backward"; };
    auto is_number = [](const std::string &h) {
      try {
        std::size_t used = 0;
        std::stod(h, &used);
        return used == h.size();
      } catch (const std::exception &) {
        return false;
      }
    };
    reclaim(directions, is_direction);
    reclaim(heights, is_number);
    if (scenario_path.empty()) {
      std::cerr << "error: sweep needs a scenario file\n";
      return cli::kExitUsage;
    }
    std::vector<double> hs;
    for (const auto &h : heights) {
      if (!is_number(h)) {
        std::cerr << "error: height '" << h << "' is not a number\n";
        return cli::kExitUsage;
      }
      hs.push_back(std::stod(h));
    }
    std::vector<ClimbDirection> dirs;
    for (const auto &d : directions) {
      if (!is_direction(d)) {
        std::cerr << "error: direction '" << d << "' must be forward or backward\n";
        return cli::kExitUsage;
      }
      dirs.push_back(d == "forward" ? ClimbDirection::Forward : ClimbDirection::Backward);
    }
    return cli::sweep(hs, dirs, scenario_path, opts, std::cout, std::cerr);
  }
  if (*analyze)
    return cli::analyze(log_path, torque_constant, out_dir, std::cout, std::cerr);
  return cli::feasibility(scenario_path, opts, std::cout, std::cerr);
}
