#include "seasmc/observer.hpp"

#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "seasmc/integrate.hpp"
#include "seasmc/plant.hpp"

namespace seasmc {
namespace {

TEST(DobGains, BandwidthRuleGivesBinomialCoefficients) {
  const DobGains g = dob_gains_from_bandwidth(500.0);
  EXPECT_DOUBLE_EQ(g.L1, 1500.0);
  EXPECT_DOUBLE_EQ(g.L2, 750000.0);
  EXPECT_DOUBLE_EQ(g.L3, 1.25e8);
  EXPECT_THROW(dob_gains_from_bandwidth(0.0), std::invalid_argument);
  EXPECT_THROW(dob_gains_from_bandwidth(-5.0), std::invalid_argument);
}

TEST(DobGains, RouthTestSeparatesStableFromUnstable) {
  EXPECT_TRUE(dob_error_dynamics_stable(dob_gains_from_bandwidth(100.0)));
  EXPECT_TRUE(dob_error_dynamics_stable(DobGains{6.0, 11.0, 6.0}));
  EXPECT_FALSE(dob_error_dynamics_stable(DobGains{1.0, 1.0, 2.0}));
  EXPECT_FALSE(dob_error_dynamics_stable(DobGains{-1.0, 1.0, 0.5}));
  EXPECT_FALSE(dob_error_dynamics_stable(DobGains{1.0, 1.0, 0.0}));
}

TEST(DobGains, BandwidthRulePlacesATripleRealPole) {
  for (double bw : {100.0, 500.0, 1000.0}) {
    for (const auto& pole : dob_error_poles(dob_gains_from_bandwidth(bw))) {
      // A triple root is ill-conditioned for the eigensolver, so allow
      // a generous displacement relative to the bandwidth.
      EXPECT_LT(std::abs(pole + std::complex<double>(bw, 0.0)), 1e-3 * bw);
    }
  }
  // Distinct roots resolve precisely: (s+1)(s+2)(s+3).
  double prod = 1.0;
  for (const auto& pole : dob_error_poles(DobGains{6.0, 11.0, 6.0})) {
    prod *= -pole.real();
    EXPECT_NEAR(pole.imag(), 0.0, 1e-9);
  }
  EXPECT_NEAR(prod, 6.0, 1e-9);
}

TEST(SecondOrderDob, RejectsUnstableGains) {
  EXPECT_THROW(SecondOrderDob(PlantParams{}, DobGains{1.0, 1.0, 2.0}),
               std::invalid_argument);
}

TEST(SecondOrderDob, ResetZerosAllDisturbanceEstimates) {
  PlantParams p;
  p.bl_n = 1e-6;
  p.bm_n = 2e-6;
  SecondOrderDob dob(p, dob_gains_from_bandwidth(500.0));
  const Eigen::Vector4d xi(0.1, 2.0, 0.3, -4.0);
  dob.reset(xi);
  const DisturbanceEstimates est = dob.estimates(xi);
  EXPECT_LT(est.tau_dis.cwiseAbs().maxCoeff(), 1e-9);
  EXPECT_LT(est.tau_dis_dot.cwiseAbs().maxCoeff(), 1e-9);
  EXPECT_LT(est.tau_dis_ddot.cwiseAbs().maxCoeff(), 1e-9);
  // With zero lumped estimates the acceleration channels reduce to the
  // nominal couplings.
  const double kl = p.k_n / p.Jl_n, bl = p.bl_n / p.Jl_n;
  EXPECT_NEAR(est.d2, kl * xi[0] + bl * xi[1], 1e-9);
  EXPECT_NEAR(est.d4,
              (p.k_n / p.Jm_n) * (xi[2] - xi[0]) + (p.bm_n / p.Jm_n) * xi[3],
              1e-9);
}

TEST(SecondOrderDob, StepErrorFollowsTheTriplePoleSolution) {
  // Free matched plant, constant unknown link torque from t = 0.  The
  // estimation error starts at tau_l/Jl and must follow
  // e(t) = e0 * exp(-g t) * (1 - 2 g t + (g t)^2 / 2).
  PlantParams p;
  DisturbanceProfile dist;
  const double tau_l = 2e-3;
  dist.tau_l_ud = Signal::constant(tau_l);
  const double g = 500.0, dt = 2e-4;
  SecondOrderDob dob(p, dob_gains_from_bandwidth(g));

  Eigen::Vector4d x = Eigen::Vector4d::Zero();
  dob.reset(x);
  const double e0 = tau_l / p.Jl;
  auto f = [&](const Eigen::Vector4d& s, double t) {
    return free_motion_derivative(p, s, 0.0, dist, t);
  };
  for (int k = 0; k < 250; ++k) {
    const Eigen::Vector4d x_next =
        integrate_step(f, x, k * dt, dt, Integrator::kRk4);
    dob.update(x, x_next, 0.0, dt);
    x = x_next;
    const double t = (k + 1) * dt;
    const double err = tau_l / p.Jl - dob.estimates(x).tau_dis[1];
    const double gt = g * t;
    const double theory =
        e0 * std::exp(-gt) * (1.0 - 2.0 * gt + 0.5 * gt * gt);
    const double envelope =
        e0 * std::exp(-gt) * (1.0 + 2.0 * gt + 0.5 * gt * gt);
    EXPECT_NEAR(err, theory, 0.05 * envelope + 0.005 * e0) << "t = " << t;
  }
}

TEST(SecondOrderDob, EulerUpdateAlsoConverges) {
  PlantParams p;
  DisturbanceProfile dist;
  dist.tau_l_ud = Signal::constant(1e-3);
  const double dt = 1e-4;  // Euler needs a finer step for g * dt margin
  SecondOrderDob dob(p, dob_gains_from_bandwidth(200.0));
  Eigen::Vector4d x = Eigen::Vector4d::Zero();
  dob.reset(x);
  auto f = [&](const Eigen::Vector4d& s, double t) {
    return free_motion_derivative(p, s, 0.0, dist, t);
  };
  for (int k = 0; k < 2000; ++k) {
    const Eigen::Vector4d x_next =
        integrate_step(f, x, k * dt, dt, Integrator::kEuler);
    dob.update(x, x_next, 0.0, dt, Integrator::kEuler);
    x = x_next;
  }
  const double truth = 1e-3 / p.Jl;
  EXPECT_NEAR(dob.estimates(x).tau_dis[1], truth, 0.05 * truth);
}

TEST(ZeroOrderDob, DiscreteErrorDecaysExactlyByTheStabilityPolynomial) {
  // Rigid body under constant torque and constant unknown load: the
  // velocity is linear in time, the interpolated input is exact, and the
  // per-step error contraction equals the RK4 polynomial at -g*dt.
  const double J = 2.2e-6, g = 500.0, dt = 2e-4;
  const double tau = 1e-3, d = 5.0;
  const double slope = tau / J - d;
  const double z = g * dt;
  const double R = 1.0 - z + z * z / 2.0 - z * z * z / 6.0 +
                   z * z * z * z / 24.0;
  EXPECT_DOUBLE_EQ(R, 0.9048375);

  ZeroOrderDob dob(J, g);
  dob.reset(0.0);
  double expect_err = d;
  for (int k = 0; k < 100; ++k) {
    dob.update(slope * k * dt, slope * (k + 1) * dt, tau, dt);
    expect_err *= R;
    const double err = d - dob.estimate(slope * (k + 1) * dt);
    ASSERT_NEAR(err, expect_err, 1e-9 * d) << "step " << k;
  }
}

TEST(ZeroOrderDob, RejectsBadParameters) {
  EXPECT_THROW(ZeroOrderDob(0.0, 100.0), std::invalid_argument);
  EXPECT_THROW(ZeroOrderDob(1e-6, -1.0), std::invalid_argument);
  ZeroOrderDob dob(1e-6, 100.0);
  EXPECT_DOUBLE_EQ(dob.bandwidth(), 100.0);
  dob.reset(2.0);
  EXPECT_DOUBLE_EQ(dob.estimate(2.0), 0.0);  // zero initial estimate
}

}  // namespace
}  // namespace seasmc
