#include "ehsoc/policy.hpp"

#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace ehsoc {

Policy::Policy(int e_max, int h_max, std::vector<double> iota_grid)
    : e_max_(e_max), h_max_(h_max), iota_grid_(std::move(iota_grid)) {
  if (e_max < 0 || h_max < 0) throw std::invalid_argument("Policy: negative state bounds");
  if (iota_grid_.empty()) throw std::invalid_argument("Policy: empty iota grid");
  actions_.assign(static_cast<std::size_t>(e_max + 1) * (h_max + 1), Action{});
}

std::size_t Policy::index(int e, int h) const {
  if (e < 0 || e > e_max_ || h < 0 || h > h_max_) throw std::out_of_range("Policy: state out of range");
  return static_cast<std::size_t>(e) * (h_max_ + 1) + h;
}

void Policy::set(int e, int h, Action a) {
  if (a.rho < 0 || a.rho > e) throw std::invalid_argument("Policy: transmit energy exceeds battery level");
  if (a.iota_index < 0 || a.iota_index >= static_cast<int>(iota_grid_.size()))
    throw std::invalid_argument("Policy: iota index off the grid");
  actions_[index(e, h)] = a;
}

bool Policy::feasible_on(const EhMdp& mdp) const {
  if (mdp.e_max() != e_max_ || mdp.h_max() != h_max_ || mdp.grid().values() != iota_grid_) return false;
  for (int e = 0; e <= e_max_; ++e)
    for (int h = 0; h <= h_max_; ++h)
      if (at(e, h).rho > e) return false;
  return true;
}

void write_policy_csv(const Policy& policy, std::ostream& out) {
  out << "e,h,rho,iota\n";
  char iota[32];
  for (int e = 0; e <= policy.e_max(); ++e)
    for (int h = 0; h <= policy.h_max(); ++h) {
      std::snprintf(iota, sizeof iota, "%.6f", policy.iota(e, h));
      out << e << ',' << h << ',' << policy.at(e, h).rho << ',' << iota << '\n';
    }
}

}  // namespace ehsoc
