#include "ehsoc/policies.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <iomanip>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "ehsoc/errors.hpp"

namespace ehsoc {

Policy greedy_policy(const EhMdp& mdp) {
  const int one = mdp.grid().index_of(1.0);
  if (one < 0) throw std::invalid_argument("greedy policy needs iota = 1 on the action grid");
  Policy policy(mdp.e_max(), mdp.h_max(), mdp.grid().values());
  for (int e = 0; e <= mdp.e_max(); ++e)
    for (int h = 0; h <= mdp.h_max(); ++h) policy.set(e, h, {0, one});
  return policy;
}

Policy op_ideal_policy(const EhMdp& real_mdp, const EhMdp& ideal_mdp, const SolverOptions& options) {
  if (real_mdp.e_max() != ideal_mdp.e_max() || real_mdp.h_max() != ideal_mdp.h_max() ||
      real_mdp.grid().values() != ideal_mdp.grid().values())
    throw std::invalid_argument("op_ideal_policy: real and ideal processes differ in shape");
  return solve_rvi(ideal_mdp, options).policy;
}

double total_variation(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw std::invalid_argument("total_variation: size mismatch");
  double tv = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) tv += std::abs(p[i] - q[i]);
  return 0.5 * tv;
}

std::vector<double> stationary_distribution(std::span<const double> matrix, int n, int start,
                                            double tv_tol, long max_iter, long* iterations) {
  if (n < 1 || matrix.size() != static_cast<std::size_t>(n) * n)
    throw std::invalid_argument("stationary_distribution: matrix is not n x n");
  if (start < 0 || start >= n) throw std::invalid_argument("stationary_distribution: bad start state");

  std::vector<double> pi(static_cast<std::size_t>(n), 0.0);
  std::vector<double> next(pi.size());
  pi[start] = 1.0;
  double change = 1.0;
  long it = 0;
  while (it < max_iter) {
    ++it;
    for (int j = 0; j < n; ++j) next[j] = 0.5 * pi[j];
    for (int i = 0; i < n; ++i) {
      const double mass = 0.5 * pi[i];
      if (mass == 0.0) continue;
      const double* row = &matrix[static_cast<std::size_t>(i) * n];
      for (int j = 0; j < n; ++j) next[j] += mass * row[j];
    }
    change = total_variation(pi, next);
    pi.swap(next);
    if (change < tv_tol) break;
  }
  if (iterations) *iterations = it;
  if (!(change < tv_tol)) {
    std::ostringstream msg;
    msg << "power iteration did not converge in " << max_iter << " steps (TV change " << change << ")";
    throw NonConvergence(msg.str(), change);
  }
  // Renormalize away rounding drift.
  double total = 0.0;
  for (double p : pi) total += p;
  for (double& p : pi) p /= total;
  return pi;
}

EvalResult evaluate(const EhMdp& mdp, const Policy& policy, const EvalOptions& options) {
  if (!policy.feasible_on(mdp)) throw std::invalid_argument("evaluate: policy is not feasible on this process");
  const int n = mdp.e_max() + 1;
  const auto& p_h = mdp.channel().pmf;

  std::vector<double> marginal(static_cast<std::size_t>(n) * n, 0.0);
  EvalResult result;
  result.j.assign(static_cast<std::size_t>(n), 0.0);
  for (int e = 0; e < n; ++e) {
    double* row = &marginal[static_cast<std::size_t>(e) * n];
    for (int h = 0; h <= mdp.h_max(); ++h) {
      if (p_h[h] == 0.0) continue;
      const Action a = policy.at(e, h);
      const EhMdp::Row r = mdp.row(e, a);
      for (std::size_t i = 0; i < r.next.size(); ++i) row[r.next[i]] += p_h[h] * r.prob[i];
      result.j[e] += p_h[h] * mdp.reward(a, h);
    }
  }

  auto gain_of = [&](const std::vector<double>& pi) {
    double g = 0.0;
    for (int e = 0; e < n; ++e) g += pi[e] * result.j[e];
    return g;
  };

  result.pi = stationary_distribution(marginal, n, n - 1, options.tv_tol, options.max_iter,
                                      &result.iterations);
  result.g_mu = gain_of(result.pi);
  if (options.also_from_empty) {
    result.pi_from_empty = stationary_distribution(marginal, n, 0, options.tv_tol, options.max_iter);
    result.g_mu_from_empty = gain_of(result.pi_from_empty);
    const double tv = total_variation(result.pi, result.pi_from_empty);
    if (tv > 1e-6) {
      std::ostringstream msg;
      msg << "second recurrent class: limits from e=" << n - 1 << " and e=0 differ (TV " << tv
          << ", gains " << result.g_mu << " vs " << result.g_mu_from_empty << ")";
      result.warning = msg.str();
    }
  }
  return result;
}

double evaluate_joint(const EhMdp& mdp, const Policy& policy, double tv_tol) {
  if (!policy.feasible_on(mdp)) throw std::invalid_argument("evaluate_joint: policy is not feasible on this process");
  const int n_h = mdp.h_max() + 1;
  const std::size_t n = static_cast<std::size_t>(mdp.state_count());
  const auto& p_h = mdp.channel().pmf;

  // Lazy power iteration on the (e, h) chain, sparse in the battery rows.
  // Starts at e_max with the channel at its stationary law.
  std::vector<double> pi(n, 0.0);
  std::vector<double> next(n);
  std::vector<double> landed(static_cast<std::size_t>(mdp.e_max()) + 1);
  for (int h = 0; h < n_h; ++h) pi[static_cast<std::size_t>(mdp.e_max()) * n_h + h] = p_h[h];
  double change = 1.0;
  for (long it = 0; it < 50'000'000 && !(change < tv_tol); ++it) {
    std::fill(landed.begin(), landed.end(), 0.0);
    for (int e = 0; e <= mdp.e_max(); ++e)
      for (int h = 0; h < n_h; ++h) {
        const double mass = pi[static_cast<std::size_t>(e) * n_h + h];
        if (mass == 0.0) continue;
        const EhMdp::Row r = mdp.row(e, policy.at(e, h));
        for (std::size_t i = 0; i < r.next.size(); ++i) landed[r.next[i]] += mass * r.prob[i];
      }
    for (int e = 0; e <= mdp.e_max(); ++e)
      for (int h = 0; h < n_h; ++h) {
        const std::size_t s = static_cast<std::size_t>(e) * n_h + h;
        next[s] = 0.5 * pi[s] + 0.5 * landed[e] * p_h[h];
      }
    change = total_variation(pi, next);
    pi.swap(next);
  }
  if (!(change < tv_tol)) throw NonConvergence("evaluate_joint: power iteration did not converge", change);

  double g = 0.0;
  for (int e = 0; e <= mdp.e_max(); ++e)
    for (int h = 0; h < n_h; ++h) g += pi[static_cast<std::size_t>(e) * n_h + h] * mdp.reward(policy.at(e, h), h);
  return g;
}

void write_eval_csv(const EvalResult& result, std::ostream& out) {
  out << "e,pi,j\n" << std::setprecision(9);
  for (std::size_t e = 0; e < result.pi.size(); ++e)
    out << e << ',' << result.pi[e] << ',' << result.j[e] << '\n';
}

SimTrace simulate(const EhMdp& mdp, const Policy& policy, long slots, std::uint64_t seed,
                  const SimOptions& options) {
  if (slots < 1) throw std::invalid_argument("simulate: need at least one slot");
  if (!policy.feasible_on(mdp)) throw std::invalid_argument("simulate: policy is not feasible on this process");
  if (options.trace_every < 1) throw std::invalid_argument("simulate: trace_every must be >= 1");

  std::mt19937_64 rng(seed);
  std::discrete_distribution<int> channel(mdp.channel().pmf.begin(), mdp.channel().pmf.end());
  std::discrete_distribution<int> arrivals(mdp.arrivals().pmf.begin(), mdp.arrivals().pmf.end());
  const RewardModel& g = mdp.reward_model();

  const long batches = std::clamp(options.batches, 1L, slots);
  const long batch_len = slots / batches;
  std::vector<double> batch_sum(static_cast<std::size_t>(batches), 0.0);

  SimTrace trace;
  trace.slots = slots;
  trace.rng_seed = seed;
  trace.occupancy.assign(static_cast<std::size_t>(mdp.e_max()) + 1, 0.0);

  if (options.trace) *options.trace << "slot,e,h,rho,iota,reward\n" << std::setprecision(9);

  int e = options.start_level < 0 ? mdp.e_max() : std::min(options.start_level, mdp.e_max());
  double total = 0.0;
  for (long k = 0; k < slots; ++k) {
    const int h = channel(rng);
    const int b = arrivals(rng);
    const Action a = policy.at(e, h);
    const double iota = mdp.grid()[a.iota_index];
    const double r = g(a.rho + b * iota, h);
    trace.occupancy[e] += 1.0;
    total += r;
    const long batch = k / batch_len;
    if (batch < batches) batch_sum[batch] += r;
    if (options.trace && k % options.trace_every == 0)
      *options.trace << k << ',' << e << ',' << h << ',' << a.rho << ',' << iota << ',' << r << '\n';
    e = mdp.next_state(e, a, b);
  }

  trace.empirical_reward = total / slots;
  for (double& o : trace.occupancy) o /= static_cast<double>(slots);
  if (batches > 1) {
    double mean = 0.0;
    for (double s : batch_sum) mean += s / batch_len;
    mean /= batches;
    double var = 0.0;
    for (double s : batch_sum) var += (s / batch_len - mean) * (s / batch_len - mean);
    var /= (batches - 1);
    trace.std_error = std::sqrt(var / batches);
  }
  return trace;
}

std::vector<SimTrace> simulate_replicas(const EhMdp& mdp, const Policy& policy, long slots,
                                        std::uint64_t seed, int replicas, int workers) {
  if (replicas < 1) throw std::invalid_argument("simulate_replicas: need at least one replica");
  std::vector<SimTrace> out(static_cast<std::size_t>(replicas));
  std::vector<std::exception_ptr> errors(out.size());
  std::atomic<int> next{0};
  auto work = [&] {
    for (int r = next++; r < replicas; r = next++) {
      try {
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(r)};
        std::uint64_t replica_seed = 0;
        std::uint32_t words[2];
        seq.generate(words, words + 2);
        replica_seed = (static_cast<std::uint64_t>(words[0]) << 32) | words[1];
        out[r] = simulate(mdp, policy, slots, replica_seed);
      } catch (...) {
        errors[r] = std::current_exception();
      }
    }
  };
  const int n_threads = std::clamp(workers, 1, replicas);
  std::vector<std::thread> pool;
  for (int t = 1; t < n_threads; ++t) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  for (const auto& err : errors)
    if (err) std::rethrow_exception(err);
  return out;
}

}  // namespace ehsoc
