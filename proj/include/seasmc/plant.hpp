#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "seasmc/signals.hpp"

namespace seasmc {

/**
 * @brief Two-mass series elastic actuator parameters.
 *
 * A motor inertia drives a link inertia through a torsional spring.  The
 * nominal set parameterizes the controller/observer model; the physical
 * set drives the simulated plant so parameter mismatch can be studied.
 * Defaults are the bench values of the prototype actuator.
 */
struct PlantParams {
  // Nominal (model) parameters.
  double Jm_n = 2.2e-6;  // motor-side inertia [kg m^2]
  double Jl_n = 4.0e-6;  // link-side inertia [kg m^2]
  double k_n = 0.14;     // spring stiffness [N m/rad]
  double bm_n = 0.0;     // motor viscous friction [N m s/rad]
  double bl_n = 0.0;     // link viscous friction [N m s/rad]
  // Physical parameters of the simulated plant (default: no mismatch).
  double Jm = 2.2e-6;
  double Jl = 4.0e-6;
  double k = 0.14;
  double bm = 0.0;
  double bl = 0.0;

  void validate() const {
    auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
    auto nonneg = [](double v) { return std::isfinite(v) && v >= 0.0; };
    if (!positive(Jm_n) || !positive(Jl_n) || !positive(k_n) ||
        !positive(Jm) || !positive(Jl) || !positive(k)) {
      throw std::invalid_argument(
          "seasmc::PlantParams::validate: inertias and stiffness must be "
          "positive");
    }
    if (!nonneg(bm_n) || !nonneg(bl_n) || !nonneg(bm) || !nonneg(bl)) {
      throw std::invalid_argument(
          "seasmc::PlantParams::validate: friction coefficients must be "
          "nonnegative");
    }
  }
};

/// Plant state: link angle/velocity and motor angle/velocity.
struct PlantState {
  double q = 0.0;          // link angle [rad]
  double q_dot = 0.0;      // link velocity [rad/s]
  double theta = 0.0;      // motor angle [rad]
  double theta_dot = 0.0;  // motor velocity [rad/s]

  Eigen::Vector4d vec() const {
    return Eigen::Vector4d(q, q_dot, theta, theta_dot);
  }
  static PlantState from(const Eigen::Vector4d& x) {
    return PlantState{x[0], x[1], x[2], x[3]};
  }
};

/**
 * @brief External torques acting on the two bodies.
 *
 * Includes an optional gravity term on the link,
 * tau_g = ml_product * gravity * sin(q), disabled by default.
 */
struct DisturbanceProfile {
  Signal tau_m_ud;          // unknown torque on the motor body [N m]
  Signal tau_l_ud;          // unknown torque on the link body [N m]
  double ml_product = 0.0;  // lumped mass*length of the link [kg m]
  double gravity = 9.81;    // [m/s^2]

  double gravity_torque(double q) const {
    return ml_product * gravity * std::sin(q);
  }
  double gravity_torque_rate(double q, double q_dot) const {
    return ml_product * gravity * std::cos(q) * q_dot;
  }
  double gravity_torque_accel(double q, double q_dot, double q_ddot) const {
    return ml_product * gravity *
           (std::cos(q) * q_ddot - std::sin(q) * q_dot * q_dot);
  }
};

/**
 * @brief Spring/damper/inertia environment the link can interact with,
 * plus a scripted applied torque (e.g. a human push).
 *
 * In unilateral mode the passive reaction acts only while the link
 * presses against the environment; the applied torque always acts.
 */
struct EnvironmentModel {
  enum class Contact { kAlwaysEngaged, kUnilateral };

  Contact contact = Contact::kAlwaysEngaged;
  double Je = 0.0;  // environment inertia felt while engaged [kg m^2]
  double De = 0.0;  // environment damping [N m s/rad]
  double Ke = 0.0;  // environment stiffness [N m/rad]
  Signal qe;        // environment rest angle [rad]
  Signal tau_a;     // applied interaction torque [N m]

  void validate() const {
    auto nonneg = [](double v) { return std::isfinite(v) && v >= 0.0; };
    if (!nonneg(Je) || !nonneg(De) || !nonneg(Ke)) {
      throw std::invalid_argument(
          "seasmc::EnvironmentModel::validate: Je, De, Ke must be "
          "nonnegative");
    }
  }

  /**
   * @brief Contact decision, evaluated once per control sample.
   *
   * Unilateral contact engages while the link is past the rest angle and
   * the spring+damper reaction pushes back; it never pulls the link.
   */
  bool engaged(double q, double q_dot, double t) const {
    if (contact == Contact::kAlwaysEngaged) return true;
    const double pen = q - qe.value(t);
    if (pen < 0.0) return false;
    return Ke * pen + De * (q_dot - qe.derivative(t, 1)) >= 0.0;
  }
};

/// Spring torque k*(theta - q); nominal stiffness by default.
inline double spring_torque(const PlantParams& p, const PlantState& s,
                            bool nominal = true) {
  return (nominal ? p.k_n : p.k) * (s.theta - s.q);
}

/// State derivative of the free (contact-less) plant, physical parameters.
inline Eigen::Vector4d free_motion_derivative(const PlantParams& p,
                                              const Eigen::Vector4d& x,
                                              double tau_m,
                                              const DisturbanceProfile& dist,
                                              double t) {
  const double tau_s = p.k * (x[2] - x[0]);
  Eigen::Vector4d dx;
  dx[0] = x[1];
  dx[1] = (tau_s - p.bl * x[1] - dist.gravity_torque(x[0]) -
           dist.tau_l_ud.value(t)) /
          p.Jl;
  dx[2] = x[3];
  dx[3] = (tau_m - tau_s - p.bm * x[3] - dist.tau_m_ud.value(t)) / p.Jm;
  return dx;
}

/**
 * @brief State derivative with the environment attached.
 *
 * While engaged, the environment inertia is folded into the link inertia
 * and the spring/damper reaction loads the link; while disengaged only
 * the applied torque acts.  The engagement decision is made by the caller
 * once per control sample so it stays fixed across integrator sub-steps.
 */
inline Eigen::Vector4d contact_derivative(const PlantParams& p,
                                          const Eigen::Vector4d& x,
                                          double tau_m,
                                          const DisturbanceProfile& dist,
                                          const EnvironmentModel& env,
                                          double t, bool engaged) {
  const double tau_s = p.k * (x[2] - x[0]);
  double link_torque = tau_s - p.bl * x[1] - dist.gravity_torque(x[0]) -
                       dist.tau_l_ud.value(t) - env.tau_a.value(t);
  double Jl_eff = p.Jl;
  if (engaged) {
    const double qe = env.qe.value(t);
    const double qe_dot = env.qe.derivative(t, 1);
    const double qe_ddot = env.qe.derivative(t, 2);
    link_torque -= env.De * (x[1] - qe_dot) + env.Ke * (x[0] - qe);
    link_torque += env.Je * qe_ddot;
    Jl_eff += env.Je;
  }
  Eigen::Vector4d dx;
  dx[0] = x[1];
  dx[1] = link_torque / Jl_eff;
  dx[2] = x[3];
  dx[3] = (tau_m - tau_s - p.bm * x[3] - dist.tau_m_ud.value(t)) / p.Jm;
  return dx;
}

inline Eigen::Vector4d contact_derivative(const PlantParams& p,
                                          const Eigen::Vector4d& x,
                                          double tau_m,
                                          const DisturbanceProfile& dist,
                                          const EnvironmentModel& env,
                                          double t) {
  return contact_derivative(p, x, tau_m, dist, env, t,
                            env.engaged(x[0], x[1], t));
}

/**
 * @brief Nominal state-space form: xi_dot = A*xi + b*tau_m - tau_dis.
 *
 * xi = [q, q_dot, theta, theta_dot]; tau_dis carries the lumped
 * disturbances scaled by the nominal inertias in rows 2 and 4.
 */
inline std::pair<Eigen::Matrix4d, Eigen::Vector4d> state_space_matrices(
    const PlantParams& p) {
  Eigen::Matrix4d A;
  A << 0.0, 1.0, 0.0, 0.0,                                        //
      -p.k_n / p.Jl_n, -p.bl_n / p.Jl_n, p.k_n / p.Jl_n, 0.0,     //
      0.0, 0.0, 0.0, 1.0,                                         //
      p.k_n / p.Jm_n, 0.0, -p.k_n / p.Jm_n, -p.bm_n / p.Jm_n;
  Eigen::Vector4d b(0.0, 0.0, 0.0, 1.0 / p.Jm_n);
  return {A, b};
}

/**
 * @brief Exact per-sample ground truth of the simulated plant.
 *
 * Evaluates the true state derivative plus the analytic continuation of
 * the link chain (jerk and snap), from which the lumped disturbance
 * channels of the nominal model and their derivatives follow without any
 * finite differencing:
 *   d2 = (k_n/Jl_n)*theta - q_ddot      (link channel)
 *   d4 = tau_m/Jm_n - theta_ddot        (motor channel)
 */
struct GroundTruth {
  Eigen::Vector4d xdot = Eigen::Vector4d::Zero();
  double tau_s = 0.0;    // physical spring torque [N m]
  double tau_env = 0.0;  // resolved environment torque on the link [N m]
  double q_jerk = 0.0;   // d^3 q / dt^3
  double q_snap = 0.0;   // d^4 q / dt^4
  double d2 = 0.0, d2_dot = 0.0, d2_ddot = 0.0;
  double d4 = 0.0;
  double tau_dis2 = 0.0, tau_dis4 = 0.0;  // nominal state-space entries
  bool engaged = false;
};

inline GroundTruth ground_truth(const PlantParams& p, const Eigen::Vector4d& x,
                                double tau_m, const DisturbanceProfile& dist,
                                const EnvironmentModel* env, double t,
                                bool engaged) {
  GroundTruth g;
  g.engaged = env != nullptr && engaged;
  g.tau_s = p.k * (x[2] - x[0]);
  g.xdot = env != nullptr
               ? contact_derivative(p, x, tau_m, dist, *env, t, g.engaged)
               : free_motion_derivative(p, x, tau_m, dist, t);

  const double q = x[0], q_dot = x[1], theta_dot = x[3];
  const double q_ddot = g.xdot[1];
  const double theta_ddot = g.xdot[3];

  // Analytic chain for the link: differentiate the link equation twice.
  double Jl_eff = p.Jl;
  double torque_rate = p.k * (theta_dot - q_dot) - p.bl * q_ddot -
                       dist.gravity_torque_rate(q, q_dot) -
                       dist.tau_l_ud.derivative(t, 1);
  if (env != nullptr) torque_rate -= env->tau_a.derivative(t, 1);
  if (g.engaged) {
    const double qe_dot = env->qe.derivative(t, 1);
    const double qe_ddot = env->qe.derivative(t, 2);
    const double qe_jerk = env->qe.derivative(t, 3);
    torque_rate -= env->De * (q_ddot - qe_ddot) + env->Ke * (q_dot - qe_dot);
    torque_rate += env->Je * qe_jerk;
    Jl_eff += env->Je;
  }
  g.q_jerk = torque_rate / Jl_eff;

  double torque_accel = p.k * (theta_ddot - q_ddot) - p.bl * g.q_jerk -
                        dist.gravity_torque_accel(q, q_dot, q_ddot) -
                        dist.tau_l_ud.derivative(t, 2);
  if (env != nullptr) torque_accel -= env->tau_a.derivative(t, 2);
  if (g.engaged) {
    const double qe_ddot = env->qe.derivative(t, 2);
    const double qe_jerk = env->qe.derivative(t, 3);
    const double qe_snap = env->qe.derivative(t, 4);
    torque_accel -=
        env->De * (g.q_jerk - qe_jerk) + env->Ke * (q_ddot - qe_ddot);
    torque_accel += env->Je * qe_snap;
  }
  g.q_snap = torque_accel / Jl_eff;

  // Resolved environment torque for logging.
  if (env != nullptr) {
    g.tau_env = env->tau_a.value(t);
    if (g.engaged) {
      g.tau_env += env->Ke * (q - env->qe.value(t)) +
                   env->De * (q_dot - env->qe.derivative(t, 1)) +
                   env->Je * (q_ddot - env->qe.derivative(t, 2));
    }
  }

  // Lumped disturbance channels of the nominal model.
  const double kl = p.k_n / p.Jl_n;
  g.d2 = kl * x[2] - q_ddot;
  g.d2_dot = kl * x[3] - g.q_jerk;
  g.d2_ddot = kl * theta_ddot - g.q_snap;
  g.d4 = tau_m / p.Jm_n - theta_ddot;
  g.tau_dis2 = g.d2 - kl * x[0] - (p.bl_n / p.Jl_n) * x[1];
  g.tau_dis4 =
      g.d4 - (p.k_n / p.Jm_n) * (x[2] - x[0]) - (p.bm_n / p.Jm_n) * x[3];
  return g;
}

inline GroundTruth ground_truth(const PlantParams& p, const Eigen::Vector4d& x,
                                double tau_m, const DisturbanceProfile& dist,
                                const EnvironmentModel* env, double t) {
  const bool engaged =
      env != nullptr && env->engaged(x[0], x[1], t);
  return ground_truth(p, x, tau_m, dist, env, t, engaged);
}

/**
 * @brief Lumped disturbance of the torque-mode motor model.
 *
 * Collects everything the motor equation sees besides the commanded
 * torque: parameter mismatch, the unknown motor torque, the reflected
 * link dynamics, gravity, the unknown link torque and the environment
 * torque.  Satisfies Jm_n*theta_ddot + bm_n*theta_dot = tau_m - result.
 */
inline double lumped_force_disturbance(const PlantParams& p,
                                       const Eigen::Vector4d& x,
                                       const Eigen::Vector4d& xdot,
                                       const DisturbanceProfile& dist,
                                       const EnvironmentModel* env, double t,
                                       double tau_env) {
  const double q_ddot = xdot[1];
  const double theta_ddot = xdot[3];
  double d = (p.Jm - p.Jm_n) * theta_ddot + (p.bm - p.bm_n) * x[3] +
             dist.tau_m_ud.value(t) + p.Jl * q_ddot + p.bl * x[1] +
             dist.gravity_torque(x[0]) + dist.tau_l_ud.value(t);
  if (env != nullptr) d += tau_env;
  return d;
}

}  // namespace seasmc
