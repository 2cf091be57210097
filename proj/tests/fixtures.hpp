#pragma once

#include <vector>

#include "ehsoc/mdp.hpp"
#include "ehsoc/stochastics.hpp"

namespace fixture {

struct Tiny {
  int e_max = 4;
  int h_max = 2;
  int b_max = 2;
  double beta = 20.0;
  double arrival_mean = 0.8;
  double channel_mean = 1.0;
  double lambda = 0.5;
  std::vector<double> grid = {0.0, 0.5, 1.0};
};

inline ehsoc::SystemModel system(const Tiny& t) {
  ehsoc::LossModel loss(t.beta, t.e_max);
  ehsoc::RewardModel reward;
  reward.lambda_snr = t.lambda;
  return ehsoc::SystemModel{loss,
                            ehsoc::SlotIntegrator::default_for(loss),
                            ehsoc::truncated_geometric(t.arrival_mean, t.b_max),
                            ehsoc::discretized_exponential(t.channel_mean, t.h_max),
                            reward,
                            ehsoc::ActionGrid::from_values(t.grid)};
}

// Baseline parameters at a reduced capacity.
inline ehsoc::SystemModel baseline(int e_max, std::vector<double> grid = {0.0}) {
  ehsoc::LossModel loss(1.05, e_max);
  return ehsoc::SystemModel{loss,
                            ehsoc::SlotIntegrator::default_for(loss),
                            ehsoc::truncated_geometric(20.0, 50),
                            ehsoc::discretized_exponential(1.0, 7),
                            ehsoc::RewardModel{},
                            ehsoc::ActionGrid::from_values(std::move(grid))};
}

}  // namespace fixture
