#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

#include "seasmc/control.hpp"
#include "seasmc/integrate.hpp"
#include "seasmc/observer.hpp"
#include "seasmc/plant.hpp"
#include "seasmc/signals.hpp"
#include "seasmc/trace.hpp"

namespace seasmc {

/// Thrown when the plant state leaves the configured envelope.
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(std::size_t step, double t)
      : std::runtime_error("seasmc::simulate: state diverged at step " +
                           std::to_string(step) + " (t = " +
                           std::to_string(t) + " s)"),
        step_(step),
        time_(t) {}

  std::size_t step() const { return step_; }
  double time() const { return time_; }

 private:
  std::size_t step_;
  double time_;
};

/**
 * @brief Complete description of one simulation run.
 *
 * The reference signal is interpreted by the mode: desired link angle
 * (position), desired spring torque (force), or commanded motor torque
 * (open loop).  Encoder resolution of 0 means exact angle measurement.
 */
struct SimSetup {
  PlantParams plant;
  DisturbanceProfile disturbances;
  std::optional<EnvironmentModel> environment;
  ControlMode mode = ControlMode::kPosition;
  Signal reference;
  PositionSmc::Params position;
  ForceSmc::Params force;
  DobGains dob = dob_gains_from_bandwidth(500.0);
  bool dob_enabled = true;
  int encoder_ppr = 0;  // quadrature counts per revolution; 0 = exact
  double dt = 5.0e-4;
  double duration = 5.0;
  Integrator method = Integrator::kRk4;
  PlantState x0;
  double divergence_limit = 1.0e6;

  void validate() const {
    plant.validate();
    if (environment) environment->validate();
    if (!(std::isfinite(dt) && dt > 0.0)) {
      throw std::invalid_argument("seasmc::SimSetup: dt must be positive");
    }
    if (!(std::isfinite(duration) && duration >= dt)) {
      throw std::invalid_argument(
          "seasmc::SimSetup: duration must cover at least one step");
    }
    if (!(std::isfinite(divergence_limit) && divergence_limit > 0.0)) {
      throw std::invalid_argument(
          "seasmc::SimSetup: divergence_limit must be positive");
    }
    if (encoder_ppr < 0) {
      throw std::invalid_argument(
          "seasmc::SimSetup: encoder_ppr must be nonnegative");
    }
  }
};

namespace detail {
inline Eigen::Vector4d measure_state(const Eigen::Vector4d& x, int ppr) {
  if (ppr <= 0) return x;
  Eigen::Vector4d xi = x;
  xi[0] = quantize_encoder(x[0], ppr);
  xi[2] = quantize_encoder(x[2], ppr);
  return xi;
}
}  // namespace detail

/**
 * @brief Runs one closed-loop (or open-loop) simulation at a fixed step.
 *
 * Per sample: measure, advance the observer across the elapsed interval,
 * extract estimates, compute the control, log ground truth, then
 * integrate the plant with the torque held constant.  Contact engagement
 * is decided once per sample so integrator sub-steps see one model.
 */
inline Trace simulate(const SimSetup& setup) {
  setup.validate();
  const std::size_t n_steps =
      static_cast<std::size_t>(std::llround(setup.duration / setup.dt));

  Trace trace;
  trace.mode = setup.mode;
  trace.dt = setup.dt;
  trace.rows.reserve(n_steps + 1);

  const PlantParams& p = setup.plant;
  const EnvironmentModel* env =
      setup.environment ? &*setup.environment : nullptr;

  SecondOrderDob dob(p, setup.dob);
  PositionSmc position(p, setup.position);
  ForceSmc force(p, setup.force);
  position.reset();
  force.reset();

  Eigen::Vector4d x = setup.x0.vec();
  Eigen::Vector4d xi_prev = Eigen::Vector4d::Zero();
  double tau_prev = 0.0;

  for (std::size_t k = 0; k <= n_steps; ++k) {
    const double t = static_cast<double>(k) * setup.dt;

    // Measure, then bring the observer up to the current sample.
    const Eigen::Vector4d xi = detail::measure_state(x, setup.encoder_ppr);
    if (k == 0) {
      dob.reset(xi);
    } else if (setup.dob_enabled) {
      dob.update(xi_prev, xi, tau_prev, setup.dt, setup.method);
    }
    const DisturbanceEstimates est =
        setup.dob_enabled ? dob.estimates(xi) : DisturbanceEstimates::zero();

    // Control decision for this sample.
    const Reference ref = Reference::sample(setup.reference, t);
    ControlOutput out;
    switch (setup.mode) {
      case ControlMode::kPosition:
        out = position.update(ref, xi, est, setup.dt);
        break;
      case ControlMode::kForce:
        out = force.update(ref, xi, est, setup.dt);
        break;
      case ControlMode::kOpenLoop:
        out.tau_m = ref.y;
        break;
    }

    // Ground truth at the applied torque; engagement pinned per sample.
    const bool engaged = env != nullptr && env->engaged(x[0], x[1], t);
    const GroundTruth truth =
        ground_truth(p, x, out.tau_m, setup.disturbances, env, t, engaged);

    double beta_true = 0.0;
    double sigma_true = 0.0;
    if (setup.mode == ControlMode::kPosition) {
      beta_true =
          setup.position.law == SwitchingLaw::kContinuous
              ? position_beta_integral(p, position.integral_surface(), ref, x,
                                       truth.d2, truth.d2_dot, truth.d2_ddot,
                                       truth.d4)
              : position_beta(p, position.surface(), ref, x, truth.d2,
                              truth.d2_dot, truth.d2_ddot, truth.d4);
      sigma_true =
          position_sigma(p, position.surface(), ref, x, truth.d2,
                         truth.d2_dot);
    } else if (setup.mode == ControlMode::kForce) {
      const MotorReference m_true = force_motor_reference(
          p, ref, x, truth.d2, setup.force.accel_feedforward);
      beta_true =
          setup.force.law == SwitchingLaw::kContinuous
              ? force_beta_integral(force.integral_surface(), m_true, x,
                                    truth.d4)
              : force_beta(setup.force.surface_pole, m_true, x, truth.d4);
      sigma_true = force_sigma(setup.force.surface_pole, m_true, x);
    }

    TraceRow row;
    row.t = t;
    row.q = x[0];
    row.q_dot = x[1];
    row.theta = x[2];
    row.theta_dot = x[3];
    row.q_meas = xi[0];
    row.q_dot_meas = xi[1];
    row.theta_meas = xi[2];
    row.theta_dot_meas = xi[3];
    row.ref = ref.y;
    row.ref_dot = ref.dy;
    row.tau_m = out.tau_m;
    row.tau_s = truth.tau_s;
    row.tau_env = truth.tau_env;
    row.engaged = truth.engaged ? 1.0 : 0.0;
    row.sigma = out.sigma;
    row.switching = out.switching;
    row.tracking_integral = out.tracking_integral;
    row.beta_hat = out.beta;
    row.beta_true = beta_true;
    row.beta_err = beta_true - out.beta;
    row.sigma_true = sigma_true;
    row.d2_hat = est.d2;
    row.d2_dot_hat = est.d2_dot;
    row.d2_ddot_hat = est.d2_ddot;
    row.d4_hat = est.d4;
    row.d2_true = truth.d2;
    row.d2_dot_true = truth.d2_dot;
    row.d2_ddot_true = truth.d2_ddot;
    row.d4_true = truth.d4;
    row.tau_dis2_hat = est.tau_dis[1];
    row.tau_dis2_dot_hat = est.tau_dis_dot[1];
    row.tau_dis2_ddot_hat = est.tau_dis_ddot[1];
    row.tau_dis4_hat = est.tau_dis[3];
    row.tau_dis4_dot_hat = est.tau_dis_dot[3];
    row.tau_dis4_ddot_hat = est.tau_dis_ddot[3];
    row.tau_dis2_true = truth.tau_dis2;
    row.tau_dis4_true = truth.tau_dis4;
    trace.rows.push_back(row);

    if (!x.allFinite() || x.cwiseAbs().maxCoeff() > setup.divergence_limit) {
      throw DivergenceError(k, t);
    }

    if (k < n_steps) {
      const double tau_m = out.tau_m;
      auto dynamics = [&](const Eigen::Vector4d& s, double tt) {
        return env != nullptr
                   ? contact_derivative(p, s, tau_m, setup.disturbances,
                                        *env, tt, engaged)
                   : free_motion_derivative(p, s, tau_m, setup.disturbances,
                                            tt);
      };
      x = integrate_step(dynamics, x, t, setup.dt, setup.method);
      xi_prev = xi;
      tau_prev = tau_m;
    }
  }
  return trace;
}

}  // namespace seasmc
