#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>

#include "seasmc/integrate.hpp"
#include "seasmc/plant.hpp"

namespace seasmc {

/**
 * @brief Gains of the disturbance estimation error dynamics.
 *
 * The estimation error of each disturbance channel obeys the cubic
 * lambda^3 + L1*lambda^2 + L2*lambda + L3 = 0, so the gains double as
 * the coefficients of that polynomial.
 */
struct DobGains {
  double L1 = 0.0;
  double L2 = 0.0;
  double L3 = 0.0;
};

/// Places all three estimation-error poles at -bandwidth [rad/s].
inline DobGains dob_gains_from_bandwidth(double bandwidth) {
  if (!(std::isfinite(bandwidth) && bandwidth > 0.0)) {
    throw std::invalid_argument(
        "seasmc::dob_gains_from_bandwidth: bandwidth must be positive");
  }
  return DobGains{3.0 * bandwidth, 3.0 * bandwidth * bandwidth,
                  bandwidth * bandwidth * bandwidth};
}

/// Routh test of lambda^3 + L1*lambda^2 + L2*lambda + L3.
inline bool dob_error_dynamics_stable(const DobGains& g) {
  return g.L1 > 0.0 && g.L3 > 0.0 && g.L1 * g.L2 > g.L3;
}

/// Roots of the estimation-error cubic, via its companion matrix.
inline std::array<std::complex<double>, 3> dob_error_poles(const DobGains& g) {
  Eigen::Matrix3d companion;
  companion << 0.0, 0.0, -g.L3,  //
      1.0, 0.0, -g.L2,           //
      0.0, 1.0, -g.L1;
  Eigen::EigenSolver<Eigen::Matrix3d> solver(companion);
  std::array<std::complex<double>, 3> poles;
  for (int i = 0; i < 3; ++i) poles[i] = solver.eigenvalues()[i];
  return poles;
}

/**
 * @brief Disturbance estimates extracted from the observer.
 *
 * tau_dis* are the lumped terms of the nominal state-space model
 * xi_dot = A*xi + b*tau_m - tau_dis and its first two time derivatives.
 * d2/d4 translate the velocity rows into acceleration-level form:
 *   q_ddot      = (k_n/Jl_n)*theta - d2
 *   theta_ddot  = tau_m/Jm_n      - d4
 */
struct DisturbanceEstimates {
  Eigen::Vector4d tau_dis = Eigen::Vector4d::Zero();
  Eigen::Vector4d tau_dis_dot = Eigen::Vector4d::Zero();
  Eigen::Vector4d tau_dis_ddot = Eigen::Vector4d::Zero();
  double d2 = 0.0;
  double d2_dot = 0.0;
  double d2_ddot = 0.0;
  double d4 = 0.0;

  static DisturbanceEstimates zero() { return DisturbanceEstimates{}; }
};

/**
 * @brief Second-order disturbance observer for the two-mass actuator.
 *
 * Tracks the lumped disturbance of the nominal model together with its
 * first and second derivatives, one auxiliary 4-vector per derivative
 * order.  The estimation error of every channel decays with the cubic
 * described by DobGains; no acceleration measurement is required.
 *
 * update() advances the auxiliary states across one sample interval.
 * The state measurement is interpolated linearly between the previous
 * and the current sample so the integrator sees a continuous input;
 * holding it constant instead leaves a visible lag bias at practical
 * bandwidth*dt products.
 */
class SecondOrderDob {
 public:
  SecondOrderDob(const PlantParams& plant, const DobGains& gains)
      : gains_(gains) {
    plant.validate();
    if (!dob_error_dynamics_stable(gains)) {
      throw std::invalid_argument(
          "seasmc::SecondOrderDob: gains fail the Routh stability test");
    }
    std::tie(A_, b_) = state_space_matrices(plant);
    kl_ = plant.k_n / plant.Jl_n;
    bl_ = plant.bl_n / plant.Jl_n;
    km_ = plant.k_n / plant.Jm_n;
    bm_ = plant.bm_n / plant.Jm_n;
    reset(Eigen::Vector4d::Zero());
  }

  /// Re-seeds the auxiliary states so all estimates start at zero.
  void reset(const Eigen::Vector4d& xi0) {
    const double a = gains_.L1 - gains_.L2 + gains_.L3;
    const double b2 = gains_.L2 - gains_.L3;
    z1_ = a * xi0;
    z2_ = b2 * xi0;
    z3_ = gains_.L3 * xi0;
  }

  /**
   * @brief Advances the observer from one sample to the next.
   *
   * @param xi_prev  state measured at the start of the interval
   * @param xi_next  state measured at the end of the interval
   * @param tau_m    motor torque held over the interval
   */
  void update(const Eigen::Vector4d& xi_prev, const Eigen::Vector4d& xi_next,
              double tau_m, double dt,
              Integrator method = Integrator::kRk4) {
    using State = Eigen::Matrix<double, 12, 1>;
    State z;
    z << z1_, z2_, z3_;
    auto rhs = [&](const State& zz, double t) -> State {
      const double w = t / dt;  // interpolation weight inside the interval
      const Eigen::Vector4d xi = (1.0 - w) * xi_prev + w * xi_next;
      return derivative(zz, xi, tau_m);
    };
    z = integrate_step(rhs, z, 0.0, dt, method);
    z1_ = z.segment<4>(0);
    z2_ = z.segment<4>(4);
    z3_ = z.segment<4>(8);
  }

  /// Extracts all disturbance estimates at the given measured state.
  DisturbanceEstimates estimates(const Eigen::Vector4d& xi) const {
    DisturbanceEstimates est;
    est.tau_dis = z1_ + z2_ - gains_.L1 * xi;
    est.tau_dis_dot = z2_ + z3_ - gains_.L2 * xi;
    est.tau_dis_ddot = z3_ - gains_.L3 * xi;
    // Acceleration-level channels of the link and motor equations.
    est.d2 = est.tau_dis[1] + kl_ * xi[0] + bl_ * xi[1];
    est.d2_dot = est.tau_dis_dot[1] + kl_ * xi[1] +
                 bl_ * (kl_ * xi[2] - est.d2);
    est.d2_ddot = est.tau_dis_ddot[1] + kl_ * (kl_ * xi[2] - est.d2) +
                  bl_ * (kl_ * xi[3] - est.d2_dot);
    est.d4 = est.tau_dis[3] + km_ * (xi[2] - xi[0]) + bm_ * xi[3];
    return est;
  }

  const DobGains& gains() const { return gains_; }

 private:
  Eigen::Matrix<double, 12, 1> derivative(
      const Eigen::Matrix<double, 12, 1>& z, const Eigen::Vector4d& xi,
      double tau_m) const {
    const double a = gains_.L1 - gains_.L2 + gains_.L3;
    const double b2 = gains_.L2 - gains_.L3;
    const Eigen::Vector4d zz1 = z.segment<4>(0);
    const Eigen::Vector4d zz2 = z.segment<4>(4);
    const Eigen::Vector4d zz3 = z.segment<4>(8);
    const Eigen::Vector4d s = zz1 + zz2;
    const Eigen::Vector4d common =
        A_ * xi + b_ * tau_m + gains_.L1 * xi;
    Eigen::Matrix<double, 12, 1> dz;
    dz.segment<4>(0) = -a * s + zz2 + a * common - b2 * xi;
    dz.segment<4>(4) = -b2 * s + zz3 + b2 * common - gains_.L3 * xi;
    dz.segment<4>(8) = -gains_.L3 * s + gains_.L3 * common;
    return dz;
  }

  Eigen::Matrix4d A_;
  Eigen::Vector4d b_;
  DobGains gains_;
  double kl_ = 0.0, bl_ = 0.0, km_ = 0.0, bm_ = 0.0;
  Eigen::Vector4d z1_, z2_, z3_;
};

/**
 * @brief First-order disturbance observer for a single rigid body.
 *
 * Estimates d in omega_dot = tau/J - d from velocity and torque alone.
 * The estimation error decays as exp(-bandwidth * t).  Serves as the
 * conventional baseline the second-order observer is compared against.
 */
class ZeroOrderDob {
 public:
  ZeroOrderDob(double inertia, double bandwidth)
      : J_(inertia), g_(bandwidth) {
    if (!(std::isfinite(inertia) && inertia > 0.0)) {
      throw std::invalid_argument(
          "seasmc::ZeroOrderDob: inertia must be positive");
    }
    if (!(std::isfinite(bandwidth) && bandwidth > 0.0)) {
      throw std::invalid_argument(
          "seasmc::ZeroOrderDob: bandwidth must be positive");
    }
  }

  /// Seeds the auxiliary state so the initial estimate is zero.
  void reset(double omega0) { w_ = g_ * omega0; }

  /// Advances across one sample; velocity is interpolated linearly.
  void update(double omega_prev, double omega_next, double tau, double dt,
              Integrator method = Integrator::kRk4) {
    auto rhs = [&](double w, double t) {
      const double s = t / dt;
      const double omega = (1.0 - s) * omega_prev + s * omega_next;
      return g_ * (tau / J_ - (w - g_ * omega));
    };
    w_ = integrate_step(rhs, w_, 0.0, dt, method);
  }

  double estimate(double omega) const { return w_ - g_ * omega; }
  double bandwidth() const { return g_; }

 private:
  double J_;
  double g_;
  double w_ = 0.0;
};

}  // namespace seasmc
