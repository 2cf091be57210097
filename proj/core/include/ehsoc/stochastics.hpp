#pragma once

#include <vector>

namespace ehsoc {

/// Energy arrivals per slot, in quanta, on {0, ..., b_max}.
struct ArrivalModel {
  std::vector<double> pmf;
  int b_max = 0;
  double mean = 0.0;
  double ratio = 0.0;  ///< geometric ratio q, pmf(b) proportional to q^b
};

/// Channel gain index on {0, ..., h_max}; the index is the gain used in the reward.
struct ChannelModel {
  std::vector<double> pmf;
  int h_max = 0;
  double mean_gain = 0.0;  ///< mean of the exponential before binning
};

/// Instantaneous reward g(rho, h) = ln(1 + lambda h rho).
struct RewardModel {
  enum class Form { log_rate };

  double lambda_snr = 0.1;
  Form form = Form::log_rate;

  [[nodiscard]] double operator()(double energy, int h) const;
};

/**
 * Truncated geometric pmf on {0, ..., b_max} with the given mean. The
 * ratio is found by bisection; mean == b_max / 2 gives the uniform pmf.
 * Throws std::domain_error unless 0 < mean < b_max.
 */
ArrivalModel truncated_geometric(double mean, int b_max);

/**
 * Exponential variable with the given mean binned on unit intervals
 * centred on the integers; the last bin collects the tail.
 * Throws std::domain_error unless mean_gain > 0 and h_max >= 1.
 */
ChannelModel discretized_exponential(double mean_gain, int h_max);

/// E_B[g(rho + B iota, h)].
double expected_reward(double rho, double iota, int h, const ArrivalModel& arrivals,
                       const RewardModel& reward);

/// Point-mass arrivals at b (pmf over {0..b_max}); handy for fixtures.
ArrivalModel point_mass_arrivals(int b, int b_max);

}  // namespace ehsoc
