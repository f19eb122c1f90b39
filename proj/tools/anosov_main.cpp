#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "anosov/cli.hpp"

namespace {

struct CommonArgs {
  std::string config_path;
  std::string out_path = "report.json";
  std::optional<std::uint64_t> seed;
  std::optional<int> pair_budget;
  bool timing = false;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool config_required) {
  CLI::Option* cfg = cmd->add_option("-c,--config", args.config_path, "JSON config file");
  if (config_required) cfg->required()->check(CLI::ExistingFile);
  cmd->add_option("-o,--out", args.out_path, "report file path")->capture_default_str();
  cmd->add_option("--seed", args.seed, "override the config seed");
  cmd->add_option("--pairs", args.pair_budget, "override the knot-pair budget")
      ->check(CLI::PositiveNumber);
  cmd->add_flag("--timing", args.timing, "include wall-clock timings in the report");
}

int dispatch(const std::string& command, const CommonArgs& args, int power) {
  anosov::Config config;
  if (!args.config_path.empty()) {
    config = anosov::parse_config(args.config_path);
  }
  anosov::RunOptions options;
  options.out_path = args.out_path;
  options.power = power;
  options.seed = args.seed;
  options.pair_budget = args.pair_budget;
  options.timing = args.timing;
  return anosov::run(command, config, options);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"certifier for free products acting on the space of unit-determinant "
               "positive matrices"};
  app.set_version_flag("--version", std::string(anosov::kVersion));
  app.require_subcommand(1);

  CommonArgs certify_args;
  CLI::App* certify = app.add_subcommand(
      "certify", "run the combination certificate on the configured factors");
  add_common(certify, certify_args, true);

  CommonArgs schottky_args;
  int power = 1;
  CLI::App* schottky = app.add_subcommand(
      "schottky", "power up the configured elements and certify the resulting free product");
  add_common(schottky, schottky_args, true);
  schottky->add_option("-p,--power", power, "exponent applied to every element")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  CommonArgs angles_args;
  CLI::App* angles = app.add_subcommand(
      "angles", "measure worst observed angles against the decay bound over growing scales");
  add_common(angles, angles_args, true);

  CommonArgs selftest_args;
  CLI::App* selftest =
      app.add_subcommand("selftest", "run the built-in seeded consistency suite");
  add_common(selftest, selftest_args, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? anosov::kExitSuccess : anosov::kExitError;
  }

  try {
    if (certify->parsed()) return dispatch("certify", certify_args, 1);
    if (schottky->parsed()) return dispatch("schottky", schottky_args, power);
    if (angles->parsed()) return dispatch("angles", angles_args, 1);
    if (selftest->parsed()) return dispatch("selftest", selftest_args, 1);
  } catch (const anosov::Error& e) {
    std::cerr << e.what() << "\n";
    return anosov::kExitError;
  }
  std::cerr << "no command\n";
  return anosov::kExitError;
}
