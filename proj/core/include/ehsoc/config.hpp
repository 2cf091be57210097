#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "ehsoc/battery.hpp"
#include "ehsoc/mdp.hpp"
#include "ehsoc/solver.hpp"

namespace ehsoc {

enum class Experiment { solve, evaluate, sweep_emax, simulate, figures_data };

std::string_view to_string(Experiment experiment);
/// Throws ConfigError for unknown names.
Experiment parse_experiment(std::string_view name);

/**
 * All parameters of a run. Defaults reproduce the baseline study:
 * e_max = 100 quanta, beta = 1.05, lambda = 0.1, mean arrival 20 of at
 * most 50 quanta, iota forced to 0.
 *
 * File format: one `key = value` per line, `#` starts a comment. Keys are
 * the member names below; lists are comma separated.
 */
struct ExperimentConfig {
  Experiment experiment = Experiment::solve;

  double beta_nl = 1.05;
  int e_max = 100;
  int b_max = 50;
  double arrival_mean = 20.0;
  double channel_mean = 1.0;
  int h_max = 7;
  double lambda_snr = 0.1;

  int iota_steps = 1;        ///< grid for solve/evaluate/simulate and the iota=0 sweep variant
  int iota_steps_full = 11;  ///< grid for the "full" sweep variant and the splitting surface

  DrainMode drain_mode = DrainMode::linear;
  SlotIntegrator::Method integrator = SlotIntegrator::Method::closed_form_tanh;
  int rk4_steps = 16;

  double solver_tol = 1e-9;
  long solver_max_iter = 100000;

  long sim_slots = 1'000'000;
  std::uint64_t seed = 0;
  bool seed_set = false;
  int sim_replicas = 1;
  long trace_every = 0;  ///< 0 disables the per-slot trace

  std::vector<int> sweep_emax = {20, 40, 60, 80, 100, 120, 140};
  bool sweep_full_iota = true;

  [[nodiscard]] SolverOptions solver_options() const;
  /// Throws ConfigError describing the first violated constraint.
  void validate() const;
};

/// Parses the key = value format; `source` names the input in error messages.
ExperimentConfig parse_config(std::istream& in, std::string_view source = "<config>");
ExperimentConfig load_config(const std::filesystem::path& path);

/// Assembles model components for a given capacity and iota resolution.
SystemModel make_system(const ExperimentConfig& config, int e_max, int iota_steps);

}  // namespace ehsoc
