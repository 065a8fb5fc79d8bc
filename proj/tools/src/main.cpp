#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"

int main(int argc, char** argv) {
  using namespace bdris::cli;

  CLI::App app{
      "bdris - distributed sum-rate optimization for multi-cell OFDM links "
      "assisted by switch-routed reflective surfaces"};
  app.require_subcommand(1);

  RunOptions run_opt;
  auto* run = app.add_subcommand(
      "run", "Optimize one scenario and emit the iteration trace as CSV");
  run->add_option("--config", run_opt.config, "scenario config file")
      ->required();
  run->add_option("--seed", run_opt.seed, "override the config seed");
  run->add_option("--scheme", run_opt.scheme,
                  "override the scheme (bd-ris|diag-ris|no-ris, -zp suffix "
                  "for zero pricing)");
  run->add_option("--out", run_opt.out, "CSV output path (default stdout)");
  run->add_option("--save-config", run_opt.save_config,
                  "write the canonicalized config here");

  SweepOptions sweep_opt;
  auto* sweep = app.add_subcommand(
      "sweep", "Monte Carlo sweep over a parameter, schemes and seeds");
  sweep->add_option("--config", sweep_opt.config, "scenario config file")
      ->required();
  sweep->add_option("--param", sweep_opt.param, "p_dbm|M|N|Q");
  sweep->add_option("--values", sweep_opt.values, "swept values")
      ->required()
      ->delimiter(',');
  sweep->add_option("--schemes", sweep_opt.schemes,
                    "schemes to compare (default: config scheme)")
      ->delimiter(',');
  sweep->add_option("--seeds", sweep_opt.seeds, "seeds per point");
  sweep->add_option("--seed", sweep_opt.seed, "first seed");
  sweep->add_option("--out", sweep_opt.out, "CSV output path");
  sweep->add_option("--workers", sweep_opt.workers, "parallel jobs");

  ProfileOptions profile_opt;
  auto* profile = app.add_subcommand(
      "profile",
      "Per-subcarrier amplitude/phase profile of the optimized surfaces");
  profile->add_option("--config", profile_opt.config, "scenario config file")
      ->required();
  profile->add_option("--seeds", profile_opt.seeds, "seeds to average");
  profile->add_option("--seed", profile_opt.seed, "first seed");
  profile->add_option("--scheme", profile_opt.scheme, "override the scheme");
  profile->add_option("--out", profile_opt.out, "CSV output path");

  GradcheckCliOptions grad_opt;
  auto* grad = app.add_subcommand(
      "gradcheck",
      "Verify the analytic gradients against finite differences");
  grad->add_option("--config", grad_opt.config,
                   "fixture config (default: built-in small fixture)");
  grad->add_option("--seeds", grad_opt.seeds, "fixture seeds");
  grad->add_option("--seed", grad_opt.seed, "first seed");
  grad->add_option("--threshold", grad_opt.threshold,
                   "worst tolerated relative error");
  grad->add_option("--out", grad_opt.out, "CSV report path");
  grad->add_option("--corrupt", grad_opt.corrupt,
                   "self-test: corrupt this family's sign")
      ->group("");  // hidden

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(run_opt);
    if (sweep->parsed()) return cmd_sweep(sweep_opt);
    if (profile->parsed()) return cmd_profile(profile_opt);
    if (grad->parsed()) return cmd_gradcheck(grad_opt);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
