#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace seasmc {

enum class Integrator { kEuler, kRk4 };

/**
 * @brief One explicit fixed step of x' = f(x, t).
 *
 * Works for any state type supporting vector-space arithmetic (double,
 * Eigen vectors, ...).  The callable receives (state, time) and returns
 * the derivative.
 */
template <class State, class F>
State integrate_step(F&& f, const State& x, double t, double dt,
                     Integrator method) {
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw std::invalid_argument(
        "seasmc::integrate_step: dt must be positive and finite");
  }
  switch (method) {
    case Integrator::kEuler: {
      const State k1 = f(x, t);
      return x + dt * k1;
    }
    case Integrator::kRk4: {
      const State k1 = f(x, t);
      const State k2 = f(x + (0.5 * dt) * k1, t + 0.5 * dt);
      const State k3 = f(x + (0.5 * dt) * k2, t + 0.5 * dt);
      const State k4 = f(x + dt * k3, t + dt);
      return x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
  }
  throw std::logic_error("seasmc::integrate_step: unknown integrator");
}

/**
 * @brief Quadrature-counted encoder quantization.
 *
 * Floors the angle to the grid 2*pi/(4*ppr); an angle exactly on a count
 * boundary is returned unchanged.
 */
inline double quantize_encoder(double angle, int ppr) {
  if (ppr <= 0) {
    throw std::invalid_argument(
        "seasmc::quantize_encoder: pulses per revolution must be positive");
  }
  const double res = 2.0 * std::numbers::pi / (4.0 * static_cast<double>(ppr));
  double n = std::floor(angle / res);
  // Guard against the division rounding an exact boundary downwards.
  if ((n + 1.0) * res <= angle) n += 1.0;
  return n * res;
}

/**
 * @brief Causal derivative estimator: backward difference smoothed by a
 * first-order low-pass of bandwidth `bw` [rad/s].
 *
 * The composite is discretized with the bilinear transform, so at low
 * frequency the phase lag stays below atan(omega/bw) and a ramp input
 * converges to its slope with time constant 1/bw.
 */
class FilteredDerivative {
 public:
  FilteredDerivative(double bw, double dt) : bw_(bw), dt_(dt) {
    if (!(bw > 0.0) || !(dt > 0.0) || !std::isfinite(bw) ||
        !std::isfinite(dt)) {
      throw std::invalid_argument(
          "seasmc::FilteredDerivative: bandwidth and dt must be positive");
    }
  }

  /// Re-seed the input history; the estimate restarts from zero.
  void reset(double x0) {
    x_prev_ = x0;
    y_prev_ = 0.0;
  }

  /// Consume one sample, return the current derivative estimate.
  double step(double x) {
    const double K = 2.0 / dt_;
    const double y =
        (bw_ * K * (x - x_prev_) - (bw_ - K) * y_prev_) / (K + bw_);
    x_prev_ = x;
    y_prev_ = y;
    return y;
  }

  double output() const { return y_prev_; }

 private:
  double bw_;
  double dt_;
  double x_prev_ = 0.0;
  double y_prev_ = 0.0;
};

}  // namespace seasmc
