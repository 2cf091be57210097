#pragma once

#include <compare>
#include <iosfwd>
#include <memory>
#include <span>
#include <vector>

#include "ehsoc/battery.hpp"
#include "ehsoc/stochastics.hpp"

namespace ehsoc {

/// Admissible values of the splitting fraction iota, ascending, always starting at 0.
class ActionGrid {
 public:
  /// {0, 1/(n-1), ..., 1}; n == 1 gives the single value {0}.
  static ActionGrid uniform(int steps = 11);
  static ActionGrid from_values(std::vector<double> values);

  [[nodiscard]] int size() const noexcept { return static_cast<int>(values_.size()); }
  [[nodiscard]] double operator[](int i) const { return values_.at(static_cast<std::size_t>(i)); }
  [[nodiscard]] const std::vector<double>& values() const noexcept { return values_; }
  /// Index of an exact grid value, or -1.
  [[nodiscard]] int index_of(double iota) const noexcept;

 private:
  explicit ActionGrid(std::vector<double> values) : values_(std::move(values)) {}
  std::vector<double> values_;
};

/// Everything needed to assemble the decision process.
struct SystemModel {
  LossModel loss;
  SlotIntegrator integrator;
  ArrivalModel arrivals;
  ChannelModel channel;
  RewardModel reward;
  ActionGrid grid = ActionGrid::uniform();
};

/// Transmit rho quanta from the battery and send the fraction iota of the arrivals directly.
struct Action {
  int rho = 0;
  int iota_index = 0;

  friend auto operator<=>(const Action&, const Action&) = default;
};

/**
 * Finite average-reward MDP over states (e, h).
 *
 * The channel is i.i.d. and does not affect the battery, so transitions
 * are keyed by (e, rho, iota) only and stored as sparse rows over e'.
 * Expected rewards are keyed by (rho, iota, h). Immutable once built.
 */
class EhMdp {
 public:
  enum class Battery { real, ideal };

  struct Row {
    std::span<const int> next;
    std::span<const double> prob;
  };

  [[nodiscard]] int e_max() const noexcept { return e_max_; }
  [[nodiscard]] int h_max() const noexcept { return channel_.h_max; }
  [[nodiscard]] int b_max() const noexcept { return arrivals_.b_max; }
  [[nodiscard]] int state_count() const noexcept { return (e_max_ + 1) * (h_max() + 1); }
  [[nodiscard]] Battery battery() const noexcept { return battery_; }

  [[nodiscard]] const ActionGrid& grid() const noexcept { return grid_; }
  [[nodiscard]] int iota_count() const noexcept { return grid_.size(); }
  /// Actions feasible in battery state e: rho in {0..e} times the iota grid.
  [[nodiscard]] int action_count(int e) const noexcept { return (e + 1) * iota_count(); }
  [[nodiscard]] Action action(int a) const noexcept { return {a / iota_count(), a % iota_count()}; }
  [[nodiscard]] int action_index(Action a) const noexcept { return a.rho * iota_count() + a.iota_index; }

  [[nodiscard]] Row row(int e, Action a) const;
  /// Dense copy of a transition row over {0..e_max}.
  [[nodiscard]] std::vector<double> dense_row(int e, Action a) const;
  /// Expected immediate reward g~(rho, iota, h).
  [[nodiscard]] double reward(Action a, int h) const {
    return rewards_[(static_cast<std::size_t>(action_index(a)) * (h_max() + 1)) + h];
  }

  /// Battery update for one realized arrival, by the same rule used to build the rows.
  [[nodiscard]] int next_state(int e, Action a, int b) const;

  [[nodiscard]] const ArrivalModel& arrivals() const noexcept { return arrivals_; }
  [[nodiscard]] const ChannelModel& channel() const noexcept { return channel_; }
  [[nodiscard]] const RewardModel& reward_model() const noexcept { return reward_model_; }

 private:
  friend EhMdp build_mdp(const SystemModel& model);
  friend EhMdp build_ideal_mdp(const SystemModel& model);

  EhMdp(const SystemModel& model, Battery battery);
  void assemble();
  [[nodiscard]] std::size_t row_index(int e, Action a) const;

  int e_max_;
  Battery battery_;
  ActionGrid grid_;
  ArrivalModel arrivals_;
  ChannelModel channel_;
  RewardModel reward_model_;
  std::shared_ptr<const NextEnergyTable> table_;  // real battery only

  std::vector<std::size_t> offsets_;
  std::vector<int> next_;
  std::vector<double> prob_;
  std::vector<double> rewards_;  // [rho * iota_count + iota][h]
};

/// Lossy battery. Throws ModelError when check_quantization fails.
EhMdp build_mdp(const SystemModel& model);

/// Lossless battery: e' = min(e - rho + Round((1 - iota) b), e_max).
EhMdp build_ideal_mdp(const SystemModel& model);

/// Nonzero transition entries as CSV: e,rho,iota_index,e_prime,prob.
void write_transitions_csv(const EhMdp& mdp, std::ostream& out);

}  // namespace ehsoc
