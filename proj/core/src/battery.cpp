#include "ehsoc/battery.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace ehsoc {

LossModel::LossModel(double beta_nl, int e_max_quanta)
    : beta_nl_(beta_nl), e_max_(e_max_quanta), form_(Form::quadratic) {
  if (!(beta_nl > 1.0) || !std::isfinite(beta_nl))
    throw std::invalid_argument("beta_nl must be a finite value greater than 1");
  if (e_max_quanta < 1) throw std::invalid_argument("e_max must be at least 1 quantum");
}

LossModel LossModel::custom(std::function<double(double)> curve, int e_max_quanta) {
  if (!curve) throw std::invalid_argument("custom loss curve is empty");
  if (e_max_quanta < 1) throw std::invalid_argument("e_max must be at least 1 quantum");
  LossModel model;
  model.e_max_ = e_max_quanta;
  model.form_ = Form::custom;
  model.curve_ = std::move(curve);
  return model;
}

double LossModel::efficiency(double y) const {
  if (!(y >= 0.0 && y <= static_cast<double>(e_max_))) {
    std::ostringstream msg;
    msg << "battery level " << y << " outside [0, " << e_max_ << "]";
    throw std::domain_error(msg.str());
  }
  if (form_ == Form::custom) return curve_(y);
  const double half = 0.5 * e_max_;
  const double d = y - half;
  return 1.0 - (d * d) / (beta_nl_ * half * half);
}

double storage_efficiency(double y, const LossModel& model) { return model.efficiency(y); }

SlotIntegrator SlotIntegrator::default_for(const LossModel& model) {
  SlotIntegrator integ;
  if (model.form() == LossModel::Form::custom) {
    integ.method = Method::rk4;
    integ.step_count = 16;
  }
  return integ;
}

void SlotIntegrator::validate() const {
  if (step_count < 1) throw std::invalid_argument("integrator step_count must be >= 1");
  if (!(slot_length > 0.0) || !std::isfinite(slot_length))
    throw std::invalid_argument("slot_length must be positive");
}

namespace {

double clamp_level(double y, int e_max) { return std::clamp(y, 0.0, static_cast<double>(e_max)); }

// Separation of variables on the parabola: with u = y - E/2 and
// a = (E/2) sqrt(beta), du/dt = x (1 - u^2/a^2) integrates to
// u(t) = a tanh(x t / a + artanh(u0 / a)). |u0| <= E/2 < a.
double closed_form_level(double x, double y0, const LossModel& model, double t) {
  const double half = 0.5 * model.e_max();
  const double a = half * std::sqrt(model.beta_nl());
  const double u = a * std::tanh(x * t / a + std::atanh((y0 - half) / a));
  return half + u;
}

double rk4_level(double x, double y0, const LossModel& model, const SlotIntegrator& integ) {
  const int e_max = model.e_max();
  auto rate = [&](double y) { return x * model.efficiency(clamp_level(y, e_max)); };
  const double h = integ.slot_length / integ.step_count;
  double y = y0;
  for (int i = 0; i < integ.step_count; ++i) {
    const double k1 = rate(y);
    const double k2 = rate(y + 0.5 * h * k1);
    const double k3 = rate(y + 0.5 * h * k2);
    const double k4 = rate(y + h * k3);
    y = clamp_level(y + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4), e_max);
  }
  return y;
}

}  // namespace

double integrate_slot(double x, double y0, const LossModel& model, const SlotIntegrator& integ) {
  if (!std::isfinite(x) || !std::isfinite(y0))
    throw std::domain_error("integrate_slot: non-finite input");
  if (y0 < 0.0 || y0 > model.e_max()) {
    std::ostringstream msg;
    msg << "integrate_slot: initial level " << y0 << " outside [0, " << model.e_max() << "]";
    throw std::domain_error(msg.str());
  }
  integ.validate();
  if (x == 0.0) return y0;
  if (x < 0.0 && integ.drain == DrainMode::linear)
    return clamp_level(y0 + x * integ.slot_length, model.e_max());

  switch (integ.method) {
    case SlotIntegrator::Method::closed_form_tanh:
      if (model.form() != LossModel::Form::quadratic)
        throw std::invalid_argument("closed-form integration requires the quadratic loss curve");
      return clamp_level(closed_form_level(x, y0, model, integ.slot_length), model.e_max());
    case SlotIntegrator::Method::rk4:
      return rk4_level(x, y0, model, integ);
  }
  throw std::logic_error("unknown integration method");
}

int round_quantum(double y) { return static_cast<int>(std::round(y)); }

double stored_share(double iota, int b) { return std::round((1.0 - iota) * b * 1e9) / 1e9; }

int next_energy(int e, int rho, double iota, int b, const LossModel& model,
                const SlotIntegrator& integ) {
  if (e < 0 || e > model.e_max()) throw std::invalid_argument("next_energy: state out of range");
  if (rho < 0 || rho > e) throw std::invalid_argument("next_energy: transmit energy exceeds stored energy");
  if (!(iota >= 0.0 && iota <= 1.0)) throw std::invalid_argument("next_energy: iota outside [0, 1]");
  if (b < 0) throw std::invalid_argument("next_energy: negative arrival");
  const double x = stored_share(iota, b) - rho;
  return std::min(round_quantum(integrate_slot(x, e, model, integ)), model.e_max());
}

QuantizationReport check_quantization(const LossModel& model, const SlotIntegrator& integ,
                                      int b_max) {
  QuantizationReport report;
  report.worst_increment = b_max + 1;
  for (int e = 0; e < model.e_max(); ++e) {
    const int inc = round_quantum(integrate_slot(b_max, e, model, integ)) - e;
    if (inc < report.worst_increment) {
      report.worst_increment = inc;
      report.worst_state = e;
    }
  }
  report.ok = report.worst_increment >= 1;
  std::ostringstream msg;
  if (report.ok) {
    msg << "quantization ok: smallest increment " << report.worst_increment << " at e="
        << report.worst_state;
  } else {
    msg << "quantization check failed: a full arrival b_max=" << b_max << " raises state e="
        << report.worst_state << " by " << report.worst_increment
        << " quanta (needs >= 1); use a finer energy quantum (scale e_max and b_max up)";
  }
  report.message = msg.str();
  return report;
}

NextEnergyTable::NextEnergyTable(const LossModel& model, const SlotIntegrator& integ, double x_min,
                                 double x_max)
    : e_max_(model.e_max()) {
  if (!(x_min <= x_max)) throw std::invalid_argument("NextEnergyTable: empty x range");
  x_min_ = std::floor(x_min / kLatticeStep) * kLatticeStep;
  x_max_ = std::ceil(x_max / kLatticeStep) * kLatticeStep;
  columns_ = static_cast<int>(std::lround((x_max_ - x_min_) / kLatticeStep)) + 1;
  levels_.resize(static_cast<std::size_t>(e_max_ + 1) * columns_);
  for (int e = 0; e <= e_max_; ++e)
    for (int c = 0; c < columns_; ++c)
      levels_[static_cast<std::size_t>(e) * columns_ + c] =
          integrate_slot(x_min_ + c * kLatticeStep, e, model, integ);
}

double NextEnergyTable::level(int e, double x) const {
  if (e < 0 || e > e_max_) throw std::out_of_range("NextEnergyTable: state out of range");
  if (x < x_min_ || x > x_max_) throw std::out_of_range("NextEnergyTable: x outside table");
  const double* row = &levels_[static_cast<std::size_t>(e) * columns_];
  if (columns_ == 1) return row[0];
  const double pos = (x - x_min_) / kLatticeStep;
  int c = static_cast<int>(std::floor(pos));
  if (c >= columns_ - 1) c = columns_ - 2;
  const double frac = pos - c;
  if (frac == 0.0) return row[c];
  return row[c] + frac * (row[c + 1] - row[c]);
}

int NextEnergyTable::next(int e, double x) const {
  return std::min(round_quantum(level(e, x)), e_max_);
}

}  // namespace ehsoc
