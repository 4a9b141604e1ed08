#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <optional>
#include <stdexcept>

#include "seasmc/integrate.hpp"
#include "seasmc/observer.hpp"
#include "seasmc/plant.hpp"
#include "seasmc/signals.hpp"

namespace seasmc {

/// Sign function with sgn(0) = 0.
inline double sgn(double x) { return (x > 0.0) - (x < 0.0); }

/**
 * @brief Switching gain that guarantees reaching despite a bounded
 * feedforward error: rho = delta_beta + mu/sqrt(2).
 *
 * With |beta error| <= delta_beta this enforces sigma*sigma_dot <=
 * -mu*|sigma|/sqrt(2), i.e. the eta-reaching condition with eta =
 * mu/sqrt(2).
 */
inline double smc_gain_from_bound(double delta_beta, double mu) {
  if (!(std::isfinite(delta_beta) && delta_beta >= 0.0) ||
      !(std::isfinite(mu) && mu > 0.0)) {
    throw std::invalid_argument(
        "seasmc::smc_gain_from_bound: need delta_beta >= 0 and mu > 0");
  }
  return delta_beta + mu / std::sqrt(2.0);
}

/// Upper bound on the reaching time of the surface, plus one sample of
/// slack on each side for the sampled-data implementation.
inline double reaching_time_bound(double sigma0, double mu, double dt) {
  if (!(std::isfinite(mu) && mu > 0.0)) {
    throw std::invalid_argument("seasmc::reaching_time_bound: mu must be > 0");
  }
  return std::sqrt(2.0) * std::abs(sigma0) / mu + 2.0 * dt;
}

/// How the switching term is realized.
enum class SwitchingLaw {
  kDiscontinuous,     // rho * sgn(sigma)
  kQuasiContinuous,   // rho * sigma / (|sigma| + epsilon)
  kContinuous,        // rho * integral of sgn(sigma) on an augmented surface
};

/// Switching function of the two direct laws, in [-1, 1].
inline double switching_value(SwitchingLaw law, double sigma,
                              double epsilon) {
  switch (law) {
    case SwitchingLaw::kDiscontinuous:
      return sgn(sigma);
    case SwitchingLaw::kQuasiContinuous:
      return sigma / (std::abs(sigma) + epsilon);
    case SwitchingLaw::kContinuous:
      throw std::logic_error(
          "seasmc::switching_value: continuous law has no static switching "
          "function");
  }
  throw std::logic_error("seasmc::switching_value: unknown law");
}

/// Reference sample: value and time derivatives up to fourth order.
struct Reference {
  double y = 0.0;
  double dy = 0.0;
  double d2y = 0.0;
  double d3y = 0.0;
  double d4y = 0.0;

  static Reference sample(const Signal& s, double t) {
    return Reference{s.value(t), s.derivative(t, 1), s.derivative(t, 2),
                     s.derivative(t, 3), s.derivative(t, 4)};
  }
};

// Surface coefficient packs.  Each places every closed-loop surface pole
// at -g, giving binomial coefficients of (lambda + g)^n.

/// e''' + c2 e'' + c1 e' + c0 e, poles (lambda+g)^3.
struct CubicSurface {
  double c0 = 0.0, c1 = 0.0, c2 = 0.0;
};
inline CubicSurface cubic_surface(double g) {
  return CubicSurface{g * g * g, 3.0 * g * g, 3.0 * g};
}

/// e''' + c3 e'' + c2 e' + c1 e + c0 int(e), poles (lambda+g)^4.
struct QuarticSurface {
  double c0 = 0.0, c1 = 0.0, c2 = 0.0, c3 = 0.0;
};
inline QuarticSurface quartic_surface(double g) {
  return QuarticSurface{g * g * g * g, 4.0 * g * g * g, 6.0 * g * g,
                        4.0 * g};
}

/// e'' + c1 e' + c0 e, poles (lambda+g)^2.
struct QuadraticSurface {
  double c0 = 0.0, c1 = 0.0;
};
inline QuadraticSurface quadratic_surface(double g) {
  return QuadraticSurface{g * g, 2.0 * g};
}

/// One control decision plus the internals needed for later analysis.
struct ControlOutput {
  double tau_m = 0.0;   // commanded motor torque [N m]
  double sigma = 0.0;   // sliding variable fed to the switching term
  double beta = 0.0;    // model feedforward, as applied
  double switching = 0.0;        // switching term: rho*sw or its integral
  double tracking_integral = 0.0;  // integral tracking-error state, as used
};

// ---------------------------------------------------------------------------
// Link position control.
//
// The link obeys q_ddot = (k_n/Jl_n)*theta - d2.  Differentiating the
// tracking error e = q_des - q three times exposes the motor torque
// through alpha = k_n/(Jm_n*Jl_n); the feedforward beta collects every
// other term of sigma_dot so that sigma_dot = beta_true - alpha*tau_m.
// ---------------------------------------------------------------------------

/// Sliding variable of the cubic position surface.
inline double position_sigma(const PlantParams& p, const CubicSurface& c,
                             const Reference& ref, const Eigen::Vector4d& xi,
                             double d2, double d2_dot) {
  const double kl = p.k_n / p.Jl_n;
  const double e0 = ref.y - xi[0];
  const double e1 = ref.dy - xi[1];
  const double e2 = ref.d2y - (kl * xi[2] - d2);
  const double e3 = ref.d3y - (kl * xi[3] - d2_dot);
  return e3 + c.c2 * e2 + c.c1 * e1 + c.c0 * e0;
}

/// Feedforward of the cubic position surface: sigma_dot = beta - alpha*tau_m.
inline double position_beta(const PlantParams& p, const CubicSurface& c,
                            const Reference& ref, const Eigen::Vector4d& xi,
                            double d2, double d2_dot, double d2_ddot,
                            double d4) {
  const double kl = p.k_n / p.Jl_n;
  return ref.d4y + c.c2 * ref.d3y + c.c1 * ref.d2y + c.c0 * ref.dy -
         kl * (c.c1 * xi[2] + c.c2 * xi[3]) - c.c0 * xi[1] + c.c1 * d2 +
         c.c2 * d2_dot + d2_ddot + kl * d4;
}

/// Sliding variable of the integral-augmented position surface.
inline double position_sigma_integral(const PlantParams& p,
                                      const QuarticSurface& c,
                                      const Reference& ref,
                                      const Eigen::Vector4d& xi,
                                      double e_integral, double d2,
                                      double d2_dot) {
  const double kl = p.k_n / p.Jl_n;
  const double e0 = ref.y - xi[0];
  const double e1 = ref.dy - xi[1];
  const double e2 = ref.d2y - (kl * xi[2] - d2);
  const double e3 = ref.d3y - (kl * xi[3] - d2_dot);
  return e3 + c.c3 * e2 + c.c2 * e1 + c.c1 * e0 + c.c0 * e_integral;
}

/// Feedforward of the integral-augmented position surface.
inline double position_beta_integral(const PlantParams& p,
                                     const QuarticSurface& c,
                                     const Reference& ref,
                                     const Eigen::Vector4d& xi, double d2,
                                     double d2_dot, double d2_ddot,
                                     double d4) {
  const double kl = p.k_n / p.Jl_n;
  const double e0 = ref.y - xi[0];
  return ref.d4y + c.c3 * ref.d3y + c.c2 * ref.d2y + c.c1 * ref.dy +
         c.c0 * e0 - kl * (c.c2 * xi[2] + c.c3 * xi[3]) - c.c1 * xi[1] +
         c.c2 * d2 + c.c3 * d2_dot + d2_ddot + kl * d4;
}

/**
 * @brief Sliding-mode link position controller.
 *
 * Drives the link angle along a reference trajectory using the
 * disturbance estimates to cancel the lumped model error.  Feeding
 * DisturbanceEstimates::zero() degrades it to the nominal-model
 * controller used as the comparison baseline.
 */
class PositionSmc {
 public:
  struct Params {
    SwitchingLaw law = SwitchingLaw::kQuasiContinuous;
    double surface_pole = 30.0;  // g: all surface poles at -g [rad/s]
    double rho = 1000.0;         // switching gain [rad/s^4]
    double epsilon = 1.0;        // quasi-continuous boundary width

    void validate() const {
      if (!(std::isfinite(surface_pole) && surface_pole > 0.0)) {
        throw std::invalid_argument(
            "seasmc::PositionSmc: surface_pole must be positive");
      }
      if (!(std::isfinite(rho) && rho >= 0.0)) {
        throw std::invalid_argument(
            "seasmc::PositionSmc: rho must be nonnegative");
      }
      if (law == SwitchingLaw::kQuasiContinuous &&
          !(std::isfinite(epsilon) && epsilon > 0.0)) {
        throw std::invalid_argument(
            "seasmc::PositionSmc: epsilon must be positive for the "
            "quasi-continuous law");
      }
    }
  };

  PositionSmc(const PlantParams& plant, const Params& params)
      : plant_(plant), params_(params) {
    plant.validate();
    params.validate();
    cubic_ = cubic_surface(params.surface_pole);
    quartic_ = quartic_surface(params.surface_pole);
    alpha_ = plant.k_n / (plant.Jm_n * plant.Jl_n);
  }

  void reset() {
    e_integral_ = 0.0;
    switch_integral_ = 0.0;
  }

  ControlOutput update(const Reference& ref, const Eigen::Vector4d& xi,
                       const DisturbanceEstimates& d, double dt) {
    ControlOutput out;
    if (params_.law == SwitchingLaw::kContinuous) {
      out.tracking_integral = e_integral_;
      out.sigma = position_sigma_integral(plant_, quartic_, ref, xi,
                                          e_integral_, d.d2, d.d2_dot);
      out.beta = position_beta_integral(plant_, quartic_, ref, xi, d.d2,
                                        d.d2_dot, d.d2_ddot, d.d4);
      out.switching = switch_integral_;
      out.tau_m = (out.switching + out.beta) / alpha_;
      // Advance the integral states after they have been used.
      switch_integral_ += dt * params_.rho * sgn(out.sigma);
      e_integral_ += dt * (ref.y - xi[0]);
      return out;
    }
    out.sigma = position_sigma(plant_, cubic_, ref, xi, d.d2, d.d2_dot);
    out.beta =
        position_beta(plant_, cubic_, ref, xi, d.d2, d.d2_dot, d.d2_ddot,
                      d.d4);
    out.switching =
        params_.rho * switching_value(params_.law, out.sigma, params_.epsilon);
    out.tau_m = (out.switching + out.beta) / alpha_;
    return out;
  }

  const Params& params() const { return params_; }
  const CubicSurface& surface() const { return cubic_; }
  const QuarticSurface& integral_surface() const { return quartic_; }
  double alpha() const { return alpha_; }

 private:
  PlantParams plant_;
  Params params_;
  CubicSurface cubic_;
  QuarticSurface quartic_;
  double alpha_ = 0.0;
  double e_integral_ = 0.0;      // integral of the position error
  double switch_integral_ = 0.0; // integral of rho*sgn(sigma)
};

// ---------------------------------------------------------------------------
// Spring torque (interaction force) control.
//
// The spring torque tau_s = k_n*(theta - q) tracks a reference by
// steering the motor angle towards theta_des = tau_des/k_n + q.  The
// motor obeys theta_ddot = tau_m/Jm_n - d4, so one differentiation of
// the error exposes the torque.
// ---------------------------------------------------------------------------

/// Desired motor trajectory for a spring-torque reference.
struct MotorReference {
  double theta = 0.0;
  double theta_dot = 0.0;
  double theta_ddot = 0.0;  // zero when the acceleration feedforward is off
};

inline MotorReference force_motor_reference(const PlantParams& p,
                                            const Reference& tau_des,
                                            const Eigen::Vector4d& xi,
                                            double d2,
                                            bool accel_feedforward) {
  MotorReference m;
  m.theta = tau_des.y / p.k_n + xi[0];
  m.theta_dot = tau_des.dy / p.k_n + xi[1];
  if (accel_feedforward) {
    const double q_ddot = (p.k_n / p.Jl_n) * xi[2] - d2;
    m.theta_ddot = tau_des.d2y / p.k_n + q_ddot;
  }
  return m;
}

/// Sliding variable of the first-order torque surface.
inline double force_sigma(double c0, const MotorReference& m,
                          const Eigen::Vector4d& xi) {
  return (m.theta_dot - xi[3]) + c0 * (m.theta - xi[2]);
}

/// Feedforward of the torque surface: sigma_dot = beta - tau_m/Jm_n.
inline double force_beta(double c0, const MotorReference& m,
                         const Eigen::Vector4d& xi, double d4) {
  return m.theta_ddot + c0 * (m.theta_dot - xi[3]) + d4;
}

/// Sliding variable of the second-order torque surface (continuous law).
inline double force_sigma_integral(const QuadraticSurface& c,
                                   const MotorReference& m,
                                   const Eigen::Vector4d& xi,
                                   double theta_ddot_meas) {
  const double e = m.theta - xi[2];
  const double e_dot = m.theta_dot - xi[3];
  const double e_ddot = m.theta_ddot - theta_ddot_meas;
  return e_ddot + c.c1 * e_dot + c.c0 * e;
}

/// Feedforward of the second-order torque surface; the switching term is
/// integrated, so tau_m = Jm_n*(switch_integral + beta) stays continuous.
inline double force_beta_integral(const QuadraticSurface& c,
                                  const MotorReference& m,
                                  const Eigen::Vector4d& xi, double d4) {
  const double e = m.theta - xi[2];
  const double e_dot = m.theta_dot - xi[3];
  return m.theta_ddot + c.c1 * e_dot + c.c0 * e + d4;
}

/**
 * @brief Sliding-mode spring-torque controller.
 *
 * The continuous law needs the measured motor acceleration for its
 * sliding variable; it is produced internally by a filtered
 * differentiator acting on the measured motor velocity.
 */
class ForceSmc {
 public:
  struct Params {
    SwitchingLaw law = SwitchingLaw::kQuasiContinuous;
    double surface_pole = 3000.0;  // c0 [rad/s]
    double rho = 50.0;             // switching gain [rad/s^2]
    double epsilon = 0.01;         // quasi-continuous boundary width
    bool accel_feedforward = true; // include theta_ddot_des in beta
    double accel_filter_bw = 2000.0;  // differentiator bandwidth [rad/s]

    void validate() const {
      if (!(std::isfinite(surface_pole) && surface_pole > 0.0)) {
        throw std::invalid_argument(
            "seasmc::ForceSmc: surface_pole must be positive");
      }
      if (!(std::isfinite(rho) && rho >= 0.0)) {
        throw std::invalid_argument(
            "seasmc::ForceSmc: rho must be nonnegative");
      }
      if (law == SwitchingLaw::kQuasiContinuous &&
          !(std::isfinite(epsilon) && epsilon > 0.0)) {
        throw std::invalid_argument(
            "seasmc::ForceSmc: epsilon must be positive for the "
            "quasi-continuous law");
      }
      if (!(std::isfinite(accel_filter_bw) && accel_filter_bw > 0.0)) {
        throw std::invalid_argument(
            "seasmc::ForceSmc: accel_filter_bw must be positive");
      }
    }
  };

  ForceSmc(const PlantParams& plant, const Params& params)
      : plant_(plant), params_(params) {
    plant.validate();
    params.validate();
    quadratic_ = quadratic_surface(params.surface_pole);
  }

  void reset() {
    switch_integral_ = 0.0;
    accel_filter_.reset();
  }

  /// Latest measured motor acceleration (continuous law only).
  double motor_accel() const { return motor_accel_; }

  ControlOutput update(const Reference& tau_des, const Eigen::Vector4d& xi,
                       const DisturbanceEstimates& d, double dt) {
    const MotorReference m = force_motor_reference(
        plant_, tau_des, xi, d.d2, params_.accel_feedforward);
    ControlOutput out;
    if (params_.law == SwitchingLaw::kContinuous) {
      motor_accel_ = differentiate_velocity(xi[3], dt);
      out.sigma = force_sigma_integral(quadratic_, m, xi, motor_accel_);
      out.beta = force_beta_integral(quadratic_, m, xi, d.d4);
      out.switching = switch_integral_;
      out.tau_m = plant_.Jm_n * (out.switching + out.beta);
      switch_integral_ += dt * params_.rho * sgn(out.sigma);
      return out;
    }
    out.sigma = force_sigma(params_.surface_pole, m, xi);
    out.beta = force_beta(params_.surface_pole, m, xi, d.d4);
    out.switching =
        params_.rho * switching_value(params_.law, out.sigma, params_.epsilon);
    out.tau_m = plant_.Jm_n * (out.switching + out.beta);
    return out;
  }

  const Params& params() const { return params_; }
  const QuadraticSurface& integral_surface() const { return quadratic_; }

 private:
  double differentiate_velocity(double theta_dot, double dt) {
    if (!accel_filter_) {
      accel_filter_.emplace(params_.accel_filter_bw, dt);
      accel_filter_->reset(theta_dot);
    }
    return accel_filter_->step(theta_dot);
  }

  PlantParams plant_;
  Params params_;
  QuadraticSurface quadratic_;
  double switch_integral_ = 0.0;
  double motor_accel_ = 0.0;
  std::optional<FilteredDerivative> accel_filter_;
};

}  // namespace seasmc
