#include "ehsoc/stochastics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ehsoc {

double RewardModel::operator()(double energy, int h) const {
  return std::log1p(lambda_snr * h * energy);
}

namespace {

// pmf proportional to exp(t b), normalized without overflow.
std::vector<double> geometric_weights(double log_ratio, int b_max) {
  std::vector<double> w(static_cast<std::size_t>(b_max) + 1);
  const double peak = log_ratio > 0.0 ? log_ratio * b_max : 0.0;
  double total = 0.0;
  for (int b = 0; b <= b_max; ++b) {
    w[b] = std::exp(log_ratio * b - peak);
    total += w[b];
  }
  for (double& v : w) v /= total;
  return w;
}

double pmf_mean(const std::vector<double>& pmf) {
  double m = 0.0;
  for (std::size_t b = 0; b < pmf.size(); ++b) m += b * pmf[b];
  return m;
}

}  // namespace

ArrivalModel truncated_geometric(double mean, int b_max) {
  if (b_max < 1) throw std::domain_error("truncated_geometric: b_max must be >= 1");
  if (!(mean > 0.0 && mean < b_max))
    throw std::domain_error("truncated_geometric: mean must lie strictly between 0 and b_max");

  // The truncated mean is increasing in log q; bracket generously.
  double lo = -800.0;
  double hi = 800.0;
  for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (pmf_mean(geometric_weights(mid, b_max)) < mean)
      lo = mid;
    else
      hi = mid;
  }
  const double log_ratio = 0.5 * (lo + hi);

  ArrivalModel model;
  model.b_max = b_max;
  model.pmf = geometric_weights(log_ratio, b_max);
  model.mean = pmf_mean(model.pmf);
  model.ratio = std::exp(log_ratio);
  return model;
}

ChannelModel discretized_exponential(double mean_gain, int h_max) {
  if (!(mean_gain > 0.0) || !std::isfinite(mean_gain))
    throw std::domain_error("discretized_exponential: mean_gain must be positive");
  if (h_max < 1) throw std::domain_error("discretized_exponential: h_max must be >= 1");

  // Survival function P(X > x).
  auto survival = [mean_gain](double x) { return std::exp(-x / mean_gain); };

  ChannelModel model;
  model.h_max = h_max;
  model.mean_gain = mean_gain;
  model.pmf.resize(static_cast<std::size_t>(h_max) + 1);
  model.pmf[0] = -std::expm1(-0.5 / mean_gain);
  for (int h = 1; h < h_max; ++h) model.pmf[h] = survival(h - 0.5) - survival(h + 0.5);
  model.pmf[h_max] = survival(h_max - 0.5);
  return model;
}

double expected_reward(double rho, double iota, int h, const ArrivalModel& arrivals,
                       const RewardModel& reward) {
  if (rho < 0.0) throw std::invalid_argument("expected_reward: negative transmit energy");
  if (!(iota >= 0.0 && iota <= 1.0)) throw std::invalid_argument("expected_reward: iota outside [0, 1]");
  if (h == 0) return 0.0;
  double total = 0.0;
  for (int b = 0; b <= arrivals.b_max; ++b) total += arrivals.pmf[b] * reward(rho + b * iota, h);
  return total;
}

ArrivalModel point_mass_arrivals(int b, int b_max) {
  if (b < 0 || b > b_max) throw std::domain_error("point_mass_arrivals: b outside [0, b_max]");
  ArrivalModel model;
  model.b_max = b_max;
  model.pmf.assign(static_cast<std::size_t>(b_max) + 1, 0.0);
  model.pmf[b] = 1.0;
  model.mean = b;
  return model;
}

}  // namespace ehsoc
