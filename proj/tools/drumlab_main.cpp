#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "drumlab/harness.hpp"

int main(int argc, char** argv) {
  CLI::App app{"first-eigenvalue maximization over obstacle translates"};
  app.require_subcommand(1);
  app.fallthrough();

  int jobs = 1;
  std::string out_override;
  std::uint64_t seed_override = 0;
  auto* jobs_opt = app.add_option("--jobs", jobs, "worker threads for sweeps");
  jobs_opt->check(CLI::PositiveNumber);
  auto* out_opt = app.add_option("--out", out_override, "output directory override");
  auto* seed_opt = app.add_option("--seed", seed_override, "random seed override");

  std::string config_path, suite;
  auto* solve = app.add_subcommand("solve", "two-level eigensolve with extrapolation");
  solve->add_option("config", config_path, "experiment config")->required();
  auto* sweep_cmd = app.add_subcommand("sweep", "eigenvalue landscape over translates");
  sweep_cmd->add_option("config", config_path, "experiment config")->required();
  auto* heart_cmd = app.add_subcommand("heart", "heart of a convex domain + membership");
  heart_cmd->add_option("config", config_path, "experiment config")->required();
  auto* asym = app.add_subcommand("asymmetry", "boundary asymmetry estimate");
  asym->add_option("config", config_path, "experiment config")->required();
  auto* cal = app.add_subcommand("calibrate", "fit profile constants to a shape family");
  cal->add_option("config", config_path, "experiment config")->required();
  auto* verify = app.add_subcommand("verify", "run a named check suite");
  verify->add_option("suite", suite,
                     "oracle | monotonicity | bounds | hkk | heart | faber-krahn | all")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (verify->parsed())
      return drumlab::run_verify(suite, jobs,
                                 out_override.empty() ? std::string("out") : out_override);

    drumlab::ExperimentConfig cfg = drumlab::parse_config_file(config_path);
    if (*out_opt) cfg.out_dir = out_override;
    if (*seed_opt) cfg.seed = seed_override;
    (void)jobs_opt;
    if (solve->parsed()) return drumlab::run_solve(cfg);
    if (sweep_cmd->parsed()) return drumlab::run_sweep(cfg, jobs);
    if (heart_cmd->parsed()) return drumlab::run_heart(cfg);
    if (asym->parsed()) return drumlab::run_asymmetry(cfg);
    if (cal->parsed()) return drumlab::run_calibrate(cfg);
  } catch (const drumlab::ConfigError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
