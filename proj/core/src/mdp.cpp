#include "ehsoc/mdp.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <stdexcept>

#include "ehsoc/errors.hpp"

namespace ehsoc {

ActionGrid ActionGrid::uniform(int steps) {
  if (steps < 1) throw std::invalid_argument("iota grid needs at least one level");
  if (steps == 1) return ActionGrid({0.0});
  std::vector<double> values(static_cast<std::size_t>(steps));
  for (int i = 0; i < steps; ++i) values[i] = static_cast<double>(i) / (steps - 1);
  values.back() = 1.0;
  return ActionGrid(std::move(values));
}

ActionGrid ActionGrid::from_values(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("iota grid is empty");
  if (values.front() != 0.0) throw std::invalid_argument("iota grid must start at 0");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!(values[i] >= 0.0 && values[i] <= 1.0))
      throw std::invalid_argument("iota grid values must lie in [0, 1]");
    if (i > 0 && !(values[i] > values[i - 1]))
      throw std::invalid_argument("iota grid must be strictly increasing");
  }
  return ActionGrid(std::move(values));
}

int ActionGrid::index_of(double iota) const noexcept {
  const auto it = std::find(values_.begin(), values_.end(), iota);
  return it == values_.end() ? -1 : static_cast<int>(it - values_.begin());
}

EhMdp::EhMdp(const SystemModel& model, Battery battery)
    : e_max_(model.loss.e_max()),
      battery_(battery),
      grid_(model.grid),
      arrivals_(model.arrivals),
      channel_(model.channel),
      reward_model_(model.reward) {
  if (arrivals_.b_max < 0 || arrivals_.pmf.size() != static_cast<std::size_t>(arrivals_.b_max) + 1)
    throw std::invalid_argument("arrival pmf does not match b_max");
  if (channel_.h_max < 0 || channel_.pmf.size() != static_cast<std::size_t>(channel_.h_max) + 1)
    throw std::invalid_argument("channel pmf does not match h_max");
  if (battery_ == Battery::real) {
    const QuantizationReport report = check_quantization(model.loss, model.integrator, arrivals_.b_max);
    if (!report.ok) throw ModelError(report.message);
    table_ = std::make_shared<const NextEnergyTable>(model.loss, model.integrator, -e_max_,
                                                     arrivals_.b_max);
  }
  assemble();
}

std::size_t EhMdp::row_index(int e, Action a) const {
  const std::size_t base = static_cast<std::size_t>(iota_count()) * e * (e + 1) / 2;
  return base + static_cast<std::size_t>(action_index(a));
}

int EhMdp::next_state(int e, Action a, int b) const {
  const double iota = grid_[a.iota_index];
  if (battery_ == Battery::ideal)
    return std::min(e - a.rho + round_quantum(stored_share(iota, b)), e_max_);
  return table_->next(e, stored_share(iota, b) - a.rho);
}

void EhMdp::assemble() {
  const int n_iota = iota_count();
  const std::size_t rows = static_cast<std::size_t>(n_iota) * (e_max_ + 1) * (e_max_ + 2) / 2;
  offsets_.reserve(rows + 1);
  offsets_.push_back(0);
  std::vector<double> dense(static_cast<std::size_t>(e_max_) + 1, 0.0);

  for (int e = 0; e <= e_max_; ++e) {
    for (int rho = 0; rho <= e; ++rho) {
      for (int k = 0; k < n_iota; ++k) {
        const Action a{rho, k};
        int lo = e_max_;
        int hi = 0;
        for (int b = 0; b <= arrivals_.b_max; ++b) {
          const double p = arrivals_.pmf[b];
          if (p == 0.0) continue;
          const int nxt = next_state(e, a, b);
          dense[nxt] += p;
          lo = std::min(lo, nxt);
          hi = std::max(hi, nxt);
        }
        for (int n = lo; n <= hi; ++n) {
          if (dense[n] != 0.0) {
            next_.push_back(n);
            prob_.push_back(dense[n]);
            dense[n] = 0.0;
          }
        }
        offsets_.push_back(next_.size());
      }
    }
  }

  const int n_h = h_max() + 1;
  rewards_.resize(static_cast<std::size_t>(e_max_ + 1) * n_iota * n_h);
  for (int rho = 0; rho <= e_max_; ++rho)
    for (int k = 0; k < n_iota; ++k)
      for (int h = 0; h < n_h; ++h)
        rewards_[static_cast<std::size_t>(action_index({rho, k})) * n_h + h] =
            expected_reward(rho, grid_[k], h, arrivals_, reward_model_);
}

EhMdp::Row EhMdp::row(int e, Action a) const {
  if (e < 0 || e > e_max_ || a.rho < 0 || a.rho > e || a.iota_index < 0 || a.iota_index >= iota_count())
    throw std::out_of_range("EhMdp::row: infeasible (state, action)");
  const std::size_t r = row_index(e, a);
  const std::size_t begin = offsets_[r];
  const std::size_t count = offsets_[r + 1] - begin;
  return {std::span<const int>(next_).subspan(begin, count),
          std::span<const double>(prob_).subspan(begin, count)};
}

std::vector<double> EhMdp::dense_row(int e, Action a) const {
  std::vector<double> dense(static_cast<std::size_t>(e_max_) + 1, 0.0);
  const Row r = row(e, a);
  for (std::size_t i = 0; i < r.next.size(); ++i) dense[r.next[i]] = r.prob[i];
  return dense;
}

EhMdp build_mdp(const SystemModel& model) { return EhMdp(model, EhMdp::Battery::real); }

EhMdp build_ideal_mdp(const SystemModel& model) { return EhMdp(model, EhMdp::Battery::ideal); }

void write_transitions_csv(const EhMdp& mdp, std::ostream& out) {
  out << "e,rho,iota_index,e_prime,prob\n";
  out << std::setprecision(9);
  for (int e = 0; e <= mdp.e_max(); ++e)
    for (int a = 0; a < mdp.action_count(e); ++a) {
      const Action act = mdp.action(a);
      const EhMdp::Row r = mdp.row(e, act);
      for (std::size_t i = 0; i < r.next.size(); ++i)
        out << e << ',' << act.rho << ',' << act.iota_index << ',' << r.next[i] << ',' << r.prob[i]
            << '\n';
    }
}

}  // namespace ehsoc
