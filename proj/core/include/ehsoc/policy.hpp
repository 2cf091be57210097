#pragma once

#include <iosfwd>
#include <vector>

#include "ehsoc/mdp.hpp"

namespace ehsoc {

/// Deterministic stationary policy: one action per state (e, h).
class Policy {
 public:
  Policy(int e_max, int h_max, std::vector<double> iota_grid);

  [[nodiscard]] int e_max() const noexcept { return e_max_; }
  [[nodiscard]] int h_max() const noexcept { return h_max_; }
  [[nodiscard]] const std::vector<double>& iota_grid() const noexcept { return iota_grid_; }

  [[nodiscard]] const Action& at(int e, int h) const { return actions_.at(index(e, h)); }
  /// Throws std::invalid_argument when rho > e or the iota index is off the grid.
  void set(int e, int h, Action a);

  [[nodiscard]] double iota(int e, int h) const { return iota_grid_[at(e, h).iota_index]; }

  /// Same shape and grid as the process, and every action feasible.
  [[nodiscard]] bool feasible_on(const EhMdp& mdp) const;

  friend bool operator==(const Policy&, const Policy&) = default;

 private:
  [[nodiscard]] std::size_t index(int e, int h) const;

  int e_max_;
  int h_max_;
  std::vector<double> iota_grid_;
  std::vector<Action> actions_;
};

/// CSV columns e,h,rho,iota with iota printed to 6 decimals.
void write_policy_csv(const Policy& policy, std::ostream& out);

}  // namespace ehsoc
