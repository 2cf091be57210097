#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "ehsoc/policies.hpp"
#include "ehsoc/solver.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace ehsoc;

namespace {

std::vector<std::vector<double>> battery_chain(const EhMdp& mdp, const Policy& policy) {
  const int n = mdp.e_max() + 1;
  std::vector<std::vector<double>> P(n, std::vector<double>(n, 0.0));
  const auto& p_h = mdp.channel().pmf;
  for (int e = 0; e < n; ++e)
    for (int h = 0; h <= mdp.h_max(); ++h) {
      const auto row = mdp.dense_row(e, policy.at(e, h));
      for (int k = 0; k < n; ++k) P[e][k] += p_h[h] * row[k];
    }
  return P;
}

}  // namespace

TEST(Stationary, TwoStateChain) {
  const std::vector<double> P = {0.5, 0.5, 1.0, 0.0};
  const auto pi = stationary_distribution(P, 2, 0);
  EXPECT_NEAR(pi[0], 2.0 / 3.0, 1e-10);
  EXPECT_NEAR(pi[1], 1.0 / 3.0, 1e-10);
}

TEST(Stationary, PeriodicChainStillConverges) {
  const std::vector<double> P = {0.0, 1.0, 1.0, 0.0};
  const auto pi = stationary_distribution(P, 2, 1);
  EXPECT_NEAR(pi[0], 0.5, 1e-10);
}

TEST(Stationary, CapRaisesNonConvergence) {
  const std::vector<double> P = {0.999, 0.001, 0.001, 0.999};
  EXPECT_THROW(stationary_distribution(P, 2, 0, 1e-15, 10), std::exception);
}

TEST(Evaluate, GreedyClosedForm) {
  // Greedy reward does not depend on the battery: E_H E_B ln(1 + lambda H B).
  const EhMdp mdp = build_mdp(fixture::baseline(100, {0.0, 1.0}));
  const EvalResult r = evaluate(mdp, greedy_policy(mdp));
  EXPECT_NEAR(r.g_mu, 0.723834801656343, 1e-9);
  // Every level is absorbing under GP, so both starts agree on the gain only.
  EXPECT_NEAR(r.g_mu_from_empty, r.g_mu, 1e-12);
  EXPECT_FALSE(r.warning.empty());
  EXPECT_THROW(greedy_policy(build_mdp(fixture::baseline(10))), std::invalid_argument);
}

TEST(Evaluate, MatchesEliminationAndJointChain) {
  const EhMdp mdp = build_mdp(fixture::baseline(40, {0.0, 0.5, 1.0}));
  const Policy op = solve_rvi(mdp).policy;
  const EvalResult r = evaluate(mdp, op);
  const auto pi = oracle::stationary_by_elimination(battery_chain(mdp, op));
  for (int e = 0; e <= 40; ++e) EXPECT_NEAR(r.pi[e], pi[e], 1e-9);
  EXPECT_NEAR(evaluate_joint(mdp, op), r.g_mu, 1e-9);

  double g = 0.0;
  for (int e = 0; e <= 40; ++e) g += r.pi[e] * r.j[e];
  EXPECT_NEAR(g, r.g_mu, 1e-12);
}

TEST(Evaluate, SilentChannelEarnsNothing) {
  SystemModel model = fixture::baseline(20);
  model.channel = ChannelModel{{1.0, 0.0}, 1, 1.0};
  const EhMdp mdp = build_mdp(model);
  EXPECT_EQ(evaluate(mdp, solve_rvi(mdp).policy).g_mu, 0.0);
}

TEST(Evaluate, EvalCsvHeader) {
  const EhMdp mdp = build_mdp(fixture::system(fixture::Tiny{}));
  std::ostringstream out;
  write_eval_csv(evaluate(mdp, greedy_policy(mdp)), out);
  EXPECT_EQ(out.str().substr(0, out.str().find('\n')), "e,pi,j");
}

TEST(OpIdeal, FeasibleOnLossyBattery) {
  const SystemModel model = fixture::baseline(50, {0.0, 0.5, 1.0});
  const EhMdp real = build_mdp(model);
  const Policy p = op_ideal_policy(real, build_ideal_mdp(model));
  EXPECT_TRUE(p.feasible_on(real));
  EXPECT_LE(evaluate(real, p).g_mu, solve_rvi(real).gain + 1e-9);
}

TEST(Simulate, ReproducibleAndConsistent) {
  const EhMdp mdp = build_mdp(fixture::baseline(40, {0.0, 0.5, 1.0}));
  const Policy op = solve_rvi(mdp).policy;
  const SimTrace a = simulate(mdp, op, 200000, 42);
  const SimTrace b = simulate(mdp, op, 200000, 42);
  EXPECT_EQ(a.empirical_reward, b.empirical_reward);
  EXPECT_EQ(a.occupancy, b.occupancy);
  EXPECT_NE(simulate(mdp, op, 200000, 43).empirical_reward, a.empirical_reward);

  const EvalResult r = evaluate(mdp, op);
  EXPECT_GT(a.std_error, 0.0);
  EXPECT_LT(std::abs(a.empirical_reward - r.g_mu), 4.0 * a.std_error);
  EXPECT_LT(total_variation(a.occupancy, r.pi), 0.02);
}

TEST(Simulate, ReplicasIndependentOfWorkerCount) {
  const EhMdp mdp = build_mdp(fixture::system(fixture::Tiny{}));
  const Policy gp = greedy_policy(mdp);
  const auto one = simulate_replicas(mdp, gp, 5000, 7, 4, 1);
  const auto many = simulate_replicas(mdp, gp, 5000, 7, 4, 3);
  ASSERT_EQ(one.size(), 4u);
  for (int r = 0; r < 4; ++r) EXPECT_EQ(one[r].empirical_reward, many[r].empirical_reward);
  EXPECT_NE(one[0].empirical_reward, one[1].empirical_reward);
}

TEST(Simulate, TraceRows) {
  const EhMdp mdp = build_mdp(fixture::system(fixture::Tiny{}));
  std::ostringstream trace;
  SimOptions opts;
  opts.trace = &trace;
  opts.trace_every = 10;
  (void)simulate(mdp, greedy_policy(mdp), 100, 1, opts);
  std::istringstream in(trace.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "slot,e,h,rho,iota,reward");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 10);
}

TEST(PolicyTable, Validation) {
  Policy p(3, 1, {0.0, 1.0});
  EXPECT_THROW(p.set(1, 0, {2, 0}), std::invalid_argument);
  EXPECT_THROW(p.set(1, 0, {0, 2}), std::invalid_argument);
  p.set(3, 1, {3, 1});
  EXPECT_EQ(p.iota(3, 1), 1.0);
  std::ostringstream out;
  write_policy_csv(p, out);
  EXPECT_NE(out.str().find("3,1,3,1.000000\n"), std::string::npos);
  EXPECT_EQ(out.str().substr(0, 11), "e,h,rho,iot");
}
