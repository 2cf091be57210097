#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ehsoc/config.hpp"
#include "ehsoc/mdp.hpp"
#include "ehsoc/policies.hpp"
#include "ehsoc/solver.hpp"

namespace ehsoc {

/// OP, OP-IDEAL (on the lossy and the lossless battery) and GP on one configuration.
struct Comparison {
  int e_max = 0;
  int iota_steps = 0;
  SolveResult op;
  Policy op_ideal;
  EvalResult eval_op;
  EvalResult eval_op_ideal_real;
  EvalResult eval_op_ideal_ideal;
  EvalResult eval_gp;
};

Comparison compare_policies(const ExperimentConfig& config, int e_max, int iota_steps);

struct SweepPoint {
  int e_max = 0;
  std::string variant;  ///< "iota0" or "full"
  double g_op = 0.0;
  double g_op_ideal_real = 0.0;
  double g_op_ideal_ideal = 0.0;
};

/// Throughput against capacity; points run on up to `workers` threads, output order is fixed.
std::vector<SweepPoint> sweep_capacity(const ExperimentConfig& config, int workers);

// Figure data, one CSV schema each.
void write_policy_surface(const Policy& policy, std::ostream& out);  // e,h,rho,iota
void write_steady_state(const Comparison& c, std::ostream& out);     // e,pi_op,pi_opideal_real,pi_opideal_ideal
void write_throughput_sweep(const std::vector<SweepPoint>& points, std::ostream& out);
void write_splitting_surface(const Policy& policy, std::ostream& out);  // e,h,iota

/// Human-readable gains and ratios.
void print_summary(const Comparison& c, std::ostream& out);

struct RunOptions {
  std::filesystem::path out_dir = ".";
  int workers = 1;
  std::ostream* log = nullptr;  ///< summary tables; nullptr silences them
};

/**
 * Runs the configured experiment and writes its CSV files into out_dir.
 * Throws ConfigError, ModelError or NonConvergence.
 */
void run_experiment(const ExperimentConfig& config, const RunOptions& options);

/// Exit status for the command-line tool: 0 success, 2 config error, 3 solver failure.
enum ExitCode : int { kExitOk = 0, kExitConfig = 2, kExitSolver = 3 };

}  // namespace ehsoc
