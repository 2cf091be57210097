#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "ehsoc/mdp.hpp"
#include "ehsoc/policy.hpp"
#include "ehsoc/solver.hpp"

namespace ehsoc {

/// Always send the harvest straight to the channel: (rho, iota) = (0, 1).
/// Throws std::invalid_argument if the grid lacks iota = 1.
Policy greedy_policy(const EhMdp& mdp);

/// Optimal policy of the lossless battery, to be applied on the lossy one.
Policy op_ideal_policy(const EhMdp& real_mdp, const EhMdp& ideal_mdp,
                       const SolverOptions& options = {});

struct EvalOptions {
  double tv_tol = 1e-12;
  long max_iter = 50'000'000;
  /// Also report the limit reached from an empty battery.
  bool also_from_empty = true;
};

struct EvalResult {
  std::vector<double> pi;  ///< limit distribution over e, started at e_max
  std::vector<double> j;   ///< expected reward per battery level
  double g_mu = 0.0;
  long iterations = 0;

  // Limit started at e = 0. Differs from pi when the policy traps the
  // battery in a second recurrent class.
  std::vector<double> pi_from_empty;
  double g_mu_from_empty = 0.0;
  std::string warning;
};

/**
 * Limit distribution of a row-stochastic n x n matrix (row-major) from a
 * point mass at `start`.
 *
 * Iterates the lazy chain (I + P) / 2, which has the same limit for
 * aperiodic chains and converges for periodic ones too, until the total
 * variation between successive iterates drops below tv_tol.
 * Throws NonConvergence with the last TV change otherwise.
 */
std::vector<double> stationary_distribution(std::span<const double> matrix, int n, int start,
                                            double tv_tol = 1e-12, long max_iter = 50'000'000,
                                            long* iterations = nullptr);

/// Long-run average reward through the battery marginal: G = sum_e pi(e) j(e).
EvalResult evaluate(const EhMdp& mdp, const Policy& policy, const EvalOptions& options = {});

/// Same quantity computed on the full (e, h) chain, as a cross-check.
double evaluate_joint(const EhMdp& mdp, const Policy& policy, double tv_tol = 1e-12);

/// CSV columns e,pi,j.
void write_eval_csv(const EvalResult& result, std::ostream& out);

struct SimOptions {
  int start_level = -1;  ///< initial battery level; negative means e_max
  long batches = 100;    ///< batch count for the batch-means standard error
  std::ostream* trace = nullptr;
  long trace_every = 1;  ///< write one trace row every n slots
};

struct SimTrace {
  long slots = 0;
  double empirical_reward = 0.0;
  double std_error = 0.0;  ///< batch-means estimate of the standard error of the average
  std::vector<double> occupancy;
  std::uint64_t rng_seed = 0;
};

/**
 * Monte Carlo run of the policy for `slots` slots: draws H and B i.i.d.,
 * moves the battery by the process's own update rule and accumulates the
 * realized reward g(rho + B iota, H). Reproducible for a fixed seed.
 */
SimTrace simulate(const EhMdp& mdp, const Policy& policy, long slots, std::uint64_t seed,
                  const SimOptions& options = {});

/// Independent replicas on up to `workers` threads, replica r seeded from (seed, r).
std::vector<SimTrace> simulate_replicas(const EhMdp& mdp, const Policy& policy, long slots,
                                        std::uint64_t seed, int replicas, int workers);

/// Total variation distance between two pmfs of equal length.
double total_variation(std::span<const double> p, std::span<const double> q);

}  // namespace ehsoc
