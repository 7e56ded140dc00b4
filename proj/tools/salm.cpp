#include <iostream>

#include "CLI11.hpp"
#include "salm/app/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Stochastic augmented Lagrangian solver"};
  app.require_subcommand(1);

  salm::app::RunOptions run;
  std::uint64_t seed = 0;
  std::string out_dir;
  std::int64_t budget = 0;
  auto* run_cmd = app.add_subcommand("run", "Solve the configured problem for each seed");
  run_cmd->add_option("--config", run.config, "INI config file")->required();
  auto* seed_opt = run_cmd->add_option("--seed", seed, "Run only this seed");
  auto* out_opt = run_cmd->add_option("--out", out_dir, "Output directory");
  auto* budget_opt = run_cmd->add_option("--budget", budget, "Total sample budget per run");

  std::string verify_config;
  auto* verify_cmd = app.add_subcommand("verify", "Check gradients and identities of a problem");
  verify_cmd->add_option("--config", verify_config, "INI config file")->required();

  auto* defaults_cmd = app.add_subcommand("defaults", "Print the reference constants");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : salm::app::kExitConfigError;
  }

  if (*run_cmd) {
    if (*seed_opt) run.seed = seed;
    if (*out_opt) run.out = out_dir;
    if (*budget_opt) run.budget = budget;
    return salm::app::run_command(run, std::cout, std::cerr);
  }
  if (*verify_cmd) return salm::app::verify_command(verify_config, std::cout, std::cerr);
  if (*defaults_cmd) return salm::app::defaults_command(std::cout);
  return 0;
}
