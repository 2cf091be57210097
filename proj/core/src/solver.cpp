#include "ehsoc/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "ehsoc/errors.hpp"
#include "ehsoc/policies.hpp"

namespace ehsoc {

namespace {

constexpr double kTieTolerance = 1e-12;

struct Sweep {
  std::vector<double> values;  // T v over (e, h)
  std::vector<Action> greedy;
};

// One application of the Bellman operator, with the greedy actions.
Sweep bellman(const EhMdp& mdp, const std::vector<double>& v) {
  const int n_h = mdp.h_max() + 1;
  const auto& p_h = mdp.channel().pmf;

  std::vector<double> w(static_cast<std::size_t>(mdp.e_max()) + 1, 0.0);
  for (int e = 0; e <= mdp.e_max(); ++e)
    for (int h = 0; h < n_h; ++h) w[e] += p_h[h] * v[static_cast<std::size_t>(e) * n_h + h];

  Sweep out;
  out.values.resize(v.size());
  out.greedy.resize(v.size());
  std::vector<double> continuation;
  for (int e = 0; e <= mdp.e_max(); ++e) {
    const int n_a = mdp.action_count(e);
    continuation.assign(static_cast<std::size_t>(n_a), 0.0);
    for (int a = 0; a < n_a; ++a) {
      const EhMdp::Row r = mdp.row(e, mdp.action(a));
      double c = 0.0;
      for (std::size_t i = 0; i < r.next.size(); ++i) c += r.prob[i] * w[r.next[i]];
      continuation[a] = c;
    }
    for (int h = 0; h < n_h; ++h) {
      double best = mdp.reward(mdp.action(0), h) + continuation[0];
      int best_a = 0;
      for (int a = 1; a < n_a; ++a) {
        const double q = mdp.reward(mdp.action(a), h) + continuation[a];
        if (q > best + kTieTolerance * std::max(1.0, std::abs(best))) {
          best = q;
          best_a = a;
        }
      }
      const std::size_t s = static_cast<std::size_t>(e) * n_h + h;
      out.values[s] = best;
      out.greedy[s] = mdp.action(best_a);
    }
  }
  return out;
}

Policy to_policy(const EhMdp& mdp, const std::vector<Action>& actions) {
  Policy policy(mdp.e_max(), mdp.h_max(), mdp.grid().values());
  const int n_h = mdp.h_max() + 1;
  for (int e = 0; e <= mdp.e_max(); ++e)
    for (int h = 0; h < n_h; ++h) policy.set(e, h, actions[static_cast<std::size_t>(e) * n_h + h]);
  return policy;
}

}  // namespace

SolveResult solve_rvi(const EhMdp& mdp, const SolverOptions& options) {
  if (!(options.tol > 0.0)) throw std::invalid_argument("solver tolerance must be positive");
  if (options.max_iter < 1) throw std::invalid_argument("solver max_iter must be >= 1");
  if (!(options.aperiodicity > 0.0 && options.aperiodicity <= 1.0))
    throw std::invalid_argument("aperiodicity weight must lie in (0, 1]");
  if (!(mdp.channel().pmf.at(0) > 0.0))
    throw std::invalid_argument("solve_rvi requires p_H(0) > 0 (unichain hypothesis)");

  const double tau = options.aperiodicity;
  const int n_h = mdp.h_max() + 1;
  const std::size_t ref = static_cast<std::size_t>(mdp.e_max()) * n_h;  // (e_max, 0)

  std::vector<double> v(static_cast<std::size_t>(mdp.state_count()), 0.0);
  double span = std::numeric_limits<double>::infinity();
  double gain = 0.0;
  long it = 0;
  while (it < options.max_iter) {
    ++it;
    const Sweep sweep = bellman(mdp, v);
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    std::vector<double> next(v.size());
    for (std::size_t s = 0; s < v.size(); ++s) {
      next[s] = (1.0 - tau) * v[s] + tau * sweep.values[s];
      const double d = next[s] - v[s];
      lo = std::min(lo, d);
      hi = std::max(hi, d);
    }
    span = hi - lo;
    // The transformed chain earns tau * g per step.
    gain = 0.5 * (hi + lo) / tau;
    const double pin = next[ref];
    for (double& x : next) x -= pin;
    v = std::move(next);
    if (span < options.tol) break;
  }
  if (!(span < options.tol)) {
    std::ostringstream msg;
    msg << "relative value iteration did not converge in " << options.max_iter
        << " sweeps (span " << span << ")";
    throw NonConvergence(msg.str(), span);
  }

  const Sweep final_sweep = bellman(mdp, v);
  return SolveResult{gain, std::move(v), to_policy(mdp, final_sweep.greedy), it, span};
}

double count_deterministic_policies(const EhMdp& mdp) {
  double count = 1.0;
  for (int e = 0; e <= mdp.e_max(); ++e)
    count *= std::pow(static_cast<double>(mdp.action_count(e)), mdp.h_max() + 1);
  return count;
}

SolveResult solve_exhaustive(const EhMdp& mdp, double max_policies) {
  const double count = count_deterministic_policies(mdp);
  if (count > max_policies) {
    std::ostringstream msg;
    msg << "exhaustive search over " << count << " policies exceeds the limit of " << max_policies;
    throw InstanceTooLarge(msg.str());
  }

  const int n_h = mdp.h_max() + 1;
  const int n_states = mdp.state_count();
  // Odometer over action indices; the last state varies fastest, so the
  // tables are visited in lexicographic order.
  std::vector<int> digits(static_cast<std::size_t>(n_states), 0);
  std::vector<int> radix(static_cast<std::size_t>(n_states));
  for (int s = 0; s < n_states; ++s) radix[s] = mdp.action_count(s / n_h);

  Policy current(mdp.e_max(), mdp.h_max(), mdp.grid().values());
  EvalOptions eval_options;
  eval_options.also_from_empty = false;

  double best_gain = 0.0;
  Policy best = current;
  long evaluated = 0;
  while (true) {
    for (int s = 0; s < n_states; ++s) current.set(s / n_h, s % n_h, mdp.action(digits[s]));
    const double g = evaluate(mdp, current, eval_options).g_mu;
    ++evaluated;
    if (evaluated == 1 || g > best_gain + kTieTolerance * std::max(1.0, std::abs(best_gain))) {
      best_gain = g;
      best = current;
    }
    int s = n_states - 1;
    while (s >= 0 && ++digits[s] == radix[s]) digits[s--] = 0;
    if (s < 0) break;
  }
  return SolveResult{best_gain, {}, std::move(best), evaluated, 0.0};
}

}  // namespace ehsoc
