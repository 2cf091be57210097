// Command-line runner for the transmission-policy experiments.
//
//   ehsoc --config run.cfg --out results/ --experiment sweep-emax --workers 4

#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "ehsoc/config.hpp"
#include "ehsoc/errors.hpp"
#include "ehsoc/experiment.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Optimal transmission policies for an energy-harvesting transmitter with SOC-dependent storage losses"};

  std::string config_path;
  std::string out_dir = "results";
  std::optional<std::string> experiment;
  int workers = 1;
  std::optional<std::uint64_t> seed;

  app.add_option("--config", config_path, "Config file (key = value lines); defaults apply when omitted");
  app.add_option("--out", out_dir, "Directory for the CSV outputs")->capture_default_str();
  app.add_option("--experiment", experiment, "solve | evaluate | sweep-emax | simulate | figures-data");
  app.add_option("--workers", workers, "Worker threads for sweeps and replicas")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--seed", seed, "RNG seed (overrides the config)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? ehsoc::kExitOk : ehsoc::kExitConfig;
  }

  try {
    ehsoc::ExperimentConfig config =
        config_path.empty() ? ehsoc::ExperimentConfig{} : ehsoc::load_config(config_path);
    if (experiment) config.experiment = ehsoc::parse_experiment(*experiment);
    if (seed) {
      config.seed = *seed;
      config.seed_set = true;
    }
    ehsoc::RunOptions options;
    options.out_dir = out_dir;
    options.workers = workers;
    options.log = &std::cout;
    ehsoc::run_experiment(config, options);
  } catch (const ehsoc::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return ehsoc::kExitConfig;
  } catch (const ehsoc::ModelError& e) {
    std::cerr << "model error: " << e.what() << '\n';
    return ehsoc::kExitConfig;
  } catch (const ehsoc::NonConvergence& e) {
    std::cerr << "solver failure: " << e.what() << '\n';
    return ehsoc::kExitSolver;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return ehsoc::kExitConfig;
  } catch (const std::domain_error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return ehsoc::kExitConfig;
  }
  return ehsoc::kExitOk;
}
