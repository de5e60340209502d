#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tvp/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Thermo-visco-plastic solver with a regularized power-law "
               "flow rule"};
  app.require_subcommand(1);

  std::string scenario, out_dir = "out";
  std::vector<double> lambdas;
  bool serial = false;
  bool compare = false;
  int halvings = 3;

  auto add_common = [&](CLI::App* cmd, bool with_out) {
    cmd->add_option("scenario", scenario, "scenario file")->required();
    if (with_out) cmd->add_option("-o,--out", out_dir, "output directory");
    cmd->add_flag("--serial", serial, "force the serial kernel path");
  };

  CLI::App* c_run = app.add_subcommand("run", "time-step a scenario");
  add_common(c_run, true);

  CLI::App* c_sweep =
      app.add_subcommand("sweep", "re-run over a regularization ladder");
  add_common(c_sweep, true);
  c_sweep->add_option("--lambdas", lambdas, "comma-separated ladder")
      ->required()
      ->delimiter(',');

  CLI::App* c_check = app.add_subcommand("check", "run and verify invariants");
  add_common(c_check, false);

  CLI::App* c_oracle =
      app.add_subcommand("oracle", "reference 0D integration");
  add_common(c_oracle, true);
  c_oracle->add_flag("--compare", compare,
                     "also compare the stepper over dt halvings");
  c_oracle->add_option("--halvings", halvings, "number of dt halvings");
  c_oracle->add_option("--lambdas", lambdas, "ladder for the lambda-gap table")
      ->delimiter(',');

  CLI::App* c_lifting =
      app.add_subcommand("lifting", "boundary-data lifting solve");
  c_lifting->add_option("scenario", scenario, "scenario file")->required();
  c_lifting->add_option("-o,--out", out_dir, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (c_run->parsed()) return tvp::cli::cmd_run(scenario, out_dir, serial);
    if (c_sweep->parsed())
      return tvp::cli::cmd_sweep(scenario, lambdas, out_dir, serial);
    if (c_check->parsed()) return tvp::cli::cmd_check(scenario, serial);
    if (c_oracle->parsed())
      return tvp::cli::cmd_oracle(scenario, out_dir, compare, halvings, lambdas,
                                  serial);
    if (c_lifting->parsed()) return tvp::cli::cmd_lifting(scenario, out_dir);
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 2;
  }
  return 2;
}
