#pragma once

#include <vector>

#include "ehsoc/mdp.hpp"
#include "ehsoc/policy.hpp"

namespace ehsoc {

struct SolverOptions {
  double tol = 1e-9;       ///< stop when span(v_{n+1} - v_n) < tol
  long max_iter = 100000;
  /// Weight tau of the aperiodicity transform v <- (1 - tau) v + tau T v; 1 disables it.
  double aperiodicity = 0.5;
};

struct SolveResult {
  double gain = 0.0;
  std::vector<double> bias;  ///< relative values over (e, h), zero at (e_max, 0); empty for exhaustive search
  Policy policy;
  long iterations = 0;  ///< sweeps for RVI, policies evaluated for exhaustive search
  double span = 0.0;
};

/**
 * Relative value iteration for the long-run average reward.
 *
 * The continuation value of an action only depends on the battery row,
 * so each sweep averages v over the i.i.d. next channel first and then
 * maximizes per channel state. The reference state (e_max, 0) is pinned
 * to zero. Greedy ties go to the smallest rho, then the smallest iota.
 *
 * Throws NonConvergence (carrying the last span) after max_iter sweeps.
 */
SolveResult solve_rvi(const EhMdp& mdp, const SolverOptions& options = {});

/// Number of deterministic policies on the process, saturating at the double range.
double count_deterministic_policies(const EhMdp& mdp);

/**
 * Evaluates every deterministic policy exactly and returns the best one,
 * keeping the lexicographically smallest action table among ties.
 * Throws InstanceTooLarge when more than max_policies would be enumerated.
 */
SolveResult solve_exhaustive(const EhMdp& mdp, double max_policies = 1e7);

}  // namespace ehsoc
