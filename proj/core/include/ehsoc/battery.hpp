#pragma once

#include <functional>
#include <string>
#include <vector>

namespace ehsoc {

/**
 * State-of-charge dependent storage efficiency s(y).
 *
 * The default curve is the symmetric parabola
 *
 *     s(y) = 1 - (y - E/2)^2 / (beta * (E/2)^2)
 *
 * with E the capacity in quanta. It reaches 1 at half charge and
 * 1 - 1/beta at both ends. A custom curve may be plugged in; it is then
 * evaluated as-is and the closed-form integrator is unavailable.
 */
class LossModel {
 public:
  enum class Form { quadratic, custom };

  /// Quadratic curve. Throws std::invalid_argument unless beta_nl > 1 and e_max >= 1.
  LossModel(double beta_nl, int e_max_quanta);

  /// User-supplied curve on [0, e_max_quanta]; values must lie in [0, 1].
  static LossModel custom(std::function<double(double)> curve, int e_max_quanta);

  [[nodiscard]] double beta_nl() const noexcept { return beta_nl_; }
  [[nodiscard]] int e_max() const noexcept { return e_max_; }
  [[nodiscard]] Form form() const noexcept { return form_; }

  /// s(y); throws std::domain_error outside [0, e_max].
  [[nodiscard]] double efficiency(double y) const;

 private:
  LossModel() = default;

  double beta_nl_ = 0.0;
  int e_max_ = 0;
  Form form_ = Form::quadratic;
  std::function<double(double)> curve_;
};

/// How a negative net power (discharge) moves the battery.
enum class DrainMode {
  literal,  ///< dy/dt = x s(y) for every sign of x
  linear,   ///< y_T = y0 + x when x < 0
};

struct SlotIntegrator {
  enum class Method { closed_form_tanh, rk4 };

  Method method = Method::closed_form_tanh;
  int step_count = 16;  // rk4 only
  double slot_length = 1.0;
  DrainMode drain = DrainMode::linear;

  /// Closed form for the quadratic curve, rk4 with 16 steps otherwise.
  static SlotIntegrator default_for(const LossModel& model);

  void validate() const;
};

double storage_efficiency(double y, const LossModel& model);

/**
 * Battery level after one slot of constant net power x, starting from y0.
 *
 * Solves dy/dt = x s(y) over the slot. The result is clamped to
 * [0, e_max]; rk4 also clamps after every sub-step. x == 0 returns y0
 * exactly. Throws std::domain_error on non-finite input or y0 out of range.
 */
double integrate_slot(double x, double y0, const LossModel& model, const SlotIntegrator& integ);

/// Nearest integer quantum, ties away from zero.
int round_quantum(double y);

/// (1 - iota) b snapped to a 1e-9 grid, so exact halves such as 0.7 * 45 round as ties.
double stored_share(double iota, int b);

/**
 * Quantized battery level at the start of the next slot:
 * min(Round(y_T((1 - iota) b - rho, e)), e_max).
 *
 * Throws std::invalid_argument when rho > e, rho < 0, b < 0 or iota is
 * outside [0, 1].
 */
int next_energy(int e, int rho, double iota, int b, const LossModel& model,
                const SlotIntegrator& integ);

struct QuantizationReport {
  bool ok = false;
  int worst_state = 0;      ///< state with the smallest rounded increment
  int worst_increment = 0;  ///< Round(y_T(b_max, e)) - e at that state
  std::string message;
};

/**
 * Checks that a full arrival b_max raises every non-full level by at
 * least one quantum. The full level itself is excluded since overflow
 * clamps it.
 */
QuantizationReport check_quantization(const LossModel& model, const SlotIntegrator& integ,
                                      int b_max);

/**
 * Precomputed y_T(x, e) for integer e and x on a half-quantum lattice
 * over [x_min, x_max]. Lookups interpolate linearly in x before rounding.
 * Read-only after construction.
 */
class NextEnergyTable {
 public:
  NextEnergyTable(const LossModel& model, const SlotIntegrator& integ, double x_min,
                  double x_max);

  /// Continuous level after one slot, interpolated.
  [[nodiscard]] double level(int e, double x) const;

  /// Rounded and clamped next level.
  [[nodiscard]] int next(int e, double x) const;

  [[nodiscard]] int e_max() const noexcept { return e_max_; }
  [[nodiscard]] double x_min() const noexcept { return x_min_; }
  [[nodiscard]] double x_max() const noexcept { return x_max_; }

  static constexpr double kLatticeStep = 0.5;

 private:
  int e_max_;
  double x_min_;
  double x_max_;
  int columns_;
  std::vector<double> levels_;  // row-major [e][x index]
};

}  // namespace ehsoc
