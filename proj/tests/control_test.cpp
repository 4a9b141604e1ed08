#include "seasmc/control.hpp"

#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <cmath>

#include "seasmc/analysis.hpp"
#include "seasmc/sim.hpp"

namespace seasmc {
namespace {

TEST(Switching, SignConventionAndGainRule) {
  EXPECT_EQ(sgn(0.0), 0.0);
  EXPECT_EQ(sgn(3.2), 1.0);
  EXPECT_EQ(sgn(-0.1), -1.0);

  EXPECT_DOUBLE_EQ(smc_gain_from_bound(1.0, std::sqrt(2.0)), 2.0);
  EXPECT_DOUBLE_EQ(smc_gain_from_bound(0.0, std::sqrt(2.0)), 1.0);
  EXPECT_THROW(smc_gain_from_bound(-1.0, 1.0), std::invalid_argument);
  EXPECT_THROW(smc_gain_from_bound(1.0, 0.0), std::invalid_argument);

  EXPECT_NEAR(reaching_time_bound(-3.0, 2.0, 1e-3),
              std::sqrt(2.0) * 3.0 / 2.0 + 2e-3, 1e-12);
  EXPECT_THROW(reaching_time_bound(1.0, 0.0, 1e-3), std::invalid_argument);
}

TEST(Switching, LawValues) {
  EXPECT_DOUBLE_EQ(switching_value(SwitchingLaw::kDiscontinuous, -0.5, 0.0),
                   -1.0);
  EXPECT_DOUBLE_EQ(switching_value(SwitchingLaw::kQuasiContinuous, 1.0, 1.0),
                   0.5);
  EXPECT_DOUBLE_EQ(switching_value(SwitchingLaw::kQuasiContinuous, -3.0, 1.0),
                   -0.75);
  EXPECT_THROW(switching_value(SwitchingLaw::kContinuous, 1.0, 1.0),
               std::logic_error);
}

TEST(Surfaces, BinomialCoefficients) {
  const CubicSurface c = cubic_surface(10.0);
  EXPECT_DOUBLE_EQ(c.c0, 1000.0);
  EXPECT_DOUBLE_EQ(c.c1, 300.0);
  EXPECT_DOUBLE_EQ(c.c2, 30.0);
  const QuarticSurface q = quartic_surface(10.0);
  EXPECT_DOUBLE_EQ(q.c0, 10000.0);
  EXPECT_DOUBLE_EQ(q.c1, 4000.0);
  EXPECT_DOUBLE_EQ(q.c2, 600.0);
  EXPECT_DOUBLE_EQ(q.c3, 40.0);
  const QuadraticSurface d = quadratic_surface(10.0);
  EXPECT_DOUBLE_EQ(d.c0, 100.0);
  EXPECT_DOUBLE_EQ(d.c1, 20.0);
}

TEST(Reference, SamplesSignalDerivatives) {
  const Signal s = Signal::sine(0.3, 1.0);
  const Reference r = Reference::sample(s, 0.2);
  EXPECT_DOUBLE_EQ(r.y, s.value(0.2));
  EXPECT_DOUBLE_EQ(r.dy, s.derivative(0.2, 1));
  EXPECT_DOUBLE_EQ(r.d4y, s.derivative(0.2, 4));
}

TEST(PositionSmc, UpdateMatchesTheFreeFunctions) {
  PlantParams plant;
  PositionSmc::Params params;
  params.law = SwitchingLaw::kQuasiContinuous;
  params.surface_pole = 30.0;
  params.rho = 2e4;
  params.epsilon = 50.0;
  PositionSmc smc(plant, params);
  EXPECT_DOUBLE_EQ(smc.alpha(), plant.k_n / (plant.Jm_n * plant.Jl_n));

  const Reference ref{0.3, 0.1, -0.2, 0.05, 0.0};
  const Eigen::Vector4d xi(0.25, 0.0, 0.26, 0.5);
  DisturbanceEstimates d;
  d.d2 = 120.0;
  d.d2_dot = -40.0;
  d.d2_ddot = 5.0;
  d.d4 = 300.0;
  const ControlOutput out = smc.update(ref, xi, d, 5e-4);

  const CubicSurface c = smc.surface();
  const double sigma = position_sigma(plant, c, ref, xi, d.d2, d.d2_dot);
  const double beta =
      position_beta(plant, c, ref, xi, d.d2, d.d2_dot, d.d2_ddot, d.d4);
  EXPECT_DOUBLE_EQ(out.sigma, sigma);
  EXPECT_DOUBLE_EQ(out.beta, beta);
  EXPECT_DOUBLE_EQ(
      out.switching,
      params.rho * sigma / (std::abs(sigma) + params.epsilon));
  EXPECT_DOUBLE_EQ(out.tau_m, (out.switching + beta) / smc.alpha());
}

TEST(PositionSmc, ContinuousLawAdvancesIntegralsAfterUse) {
  PlantParams plant;
  PositionSmc::Params params;
  params.law = SwitchingLaw::kContinuous;
  params.surface_pole = 30.0;
  params.rho = 1e5;
  PositionSmc smc(plant, params);

  const Reference ref{0.3, 0.0, 0.0, 0.0, 0.0};
  const Eigen::Vector4d xi = Eigen::Vector4d::Zero();
  const DisturbanceEstimates d;
  const double dt = 1e-3;

  const ControlOutput first = smc.update(ref, xi, d, dt);
  EXPECT_DOUBLE_EQ(first.switching, 0.0);  // integral used before advance
  EXPECT_DOUBLE_EQ(first.tracking_integral, 0.0);

  const ControlOutput second = smc.update(ref, xi, d, dt);
  EXPECT_DOUBLE_EQ(second.switching, dt * params.rho * sgn(first.sigma));
  EXPECT_DOUBLE_EQ(second.tracking_integral, dt * (ref.y - xi[0]));

  smc.reset();
  const ControlOutput after = smc.update(ref, xi, d, dt);
  EXPECT_DOUBLE_EQ(after.switching, 0.0);
}

TEST(PositionSmc, ValidatesParameters) {
  PlantParams plant;
  PositionSmc::Params params;
  params.rho = -1.0;
  EXPECT_THROW(PositionSmc(plant, params), std::invalid_argument);
  params = {};
  params.surface_pole = 0.0;
  EXPECT_THROW(PositionSmc(plant, params), std::invalid_argument);
  params = {};
  params.law = SwitchingLaw::kQuasiContinuous;
  params.epsilon = 0.0;
  EXPECT_THROW(PositionSmc(plant, params), std::invalid_argument);
}

TEST(ForceControl, MotorReferenceConstruction) {
  PlantParams plant;
  const Reference tau_des{0.7, 1.4, 2.8, 0.0, 0.0};
  const Eigen::Vector4d xi(0.1, 0.2, 0.3, 0.4);
  const double d2 = 50.0;

  const MotorReference on =
      force_motor_reference(plant, tau_des, xi, d2, true);
  EXPECT_NEAR(on.theta, 0.7 / plant.k_n + 0.1, 1e-12);
  EXPECT_NEAR(on.theta_dot, 1.4 / plant.k_n + 0.2, 1e-12);
  const double q_ddot = (plant.k_n / plant.Jl_n) * 0.3 - d2;
  EXPECT_NEAR(on.theta_ddot, 2.8 / plant.k_n + q_ddot, 1e-9);

  const MotorReference off =
      force_motor_reference(plant, tau_des, xi, d2, false);
  EXPECT_DOUBLE_EQ(off.theta_ddot, 0.0);
  EXPECT_DOUBLE_EQ(off.theta, on.theta);
}

TEST(ForceSmc, UpdateMatchesTheFreeFunctions) {
  PlantParams plant;
  ForceSmc::Params params;
  params.law = SwitchingLaw::kQuasiContinuous;
  params.surface_pole = 3000.0;
  params.rho = 2e4;
  params.epsilon = 10.0;
  ForceSmc smc(plant, params);

  const Reference tau_des{2.0, 6.0, -3.0, 0.0, 0.0};
  const Eigen::Vector4d xi(0.05, 0.1, 14.3, 40.0);
  DisturbanceEstimates d;
  d.d2 = 10.0;
  d.d4 = -200.0;
  const ControlOutput out = smc.update(tau_des, xi, d, 5e-4);

  const MotorReference m =
      force_motor_reference(plant, tau_des, xi, d.d2, true);
  const double sigma = force_sigma(params.surface_pole, m, xi);
  const double beta = force_beta(params.surface_pole, m, xi, d.d4);
  EXPECT_DOUBLE_EQ(out.sigma, sigma);
  EXPECT_DOUBLE_EQ(out.beta, beta);
  EXPECT_DOUBLE_EQ(out.tau_m, plant.Jm_n * (out.switching + beta));
}

TEST(ForceSmc, ContinuousLawUsesFilteredAcceleration) {
  PlantParams plant;
  ForceSmc::Params params;
  params.law = SwitchingLaw::kContinuous;
  params.surface_pole = 300.0;
  params.rho = 1e4;
  params.accel_filter_bw = 2000.0;
  ForceSmc smc(plant, params);

  const Reference tau_des{1.0, 0.0, 0.0, 0.0, 0.0};
  const DisturbanceEstimates d;
  const double dt = 5e-4;

  Eigen::Vector4d xi(0.0, 0.0, 0.0, 0.0);
  ControlOutput out = smc.update(tau_des, xi, d, dt);
  EXPECT_DOUBLE_EQ(smc.motor_accel(), 0.0);  // filter seeded on first use
  EXPECT_DOUBLE_EQ(out.switching, 0.0);

  xi[3] = 2.0;  // velocity jump produces a positive acceleration estimate
  out = smc.update(tau_des, xi, d, dt);
  EXPECT_GT(smc.motor_accel(), 0.0);

  FilteredDerivative reference_filter(params.accel_filter_bw, dt);
  reference_filter.reset(0.0);
  reference_filter.step(0.0);
  EXPECT_DOUBLE_EQ(smc.motor_accel(), reference_filter.step(2.0));

  smc.reset();
  out = smc.update(tau_des, xi, d, dt);
  EXPECT_DOUBLE_EQ(smc.motor_accel(), 0.0);  // filter re-seeded
}

// The feedforward decomposition must satisfy sigma_dot = beta - alpha*tau_m
// along a real trajectory, with sigma and beta evaluated on the true state
// and true disturbance channels.
TEST(PositionSmc, SigmaDerivativeIdentityAlongATrajectory) {
  SimSetup s;
  s.mode = ControlMode::kPosition;
  s.plant.Jm = 2.6e-6;
  s.plant.Jl = 6.0e-6;
  s.plant.k = 0.12;
  s.disturbances.ml_product = 2e-4;
  s.reference = Signal::sine(0.3, 1.0);
  s.position.law = SwitchingLaw::kQuasiContinuous;
  s.position.surface_pole = 30.0;
  s.position.rho = 2e4;
  s.position.epsilon = 50.0;
  s.dt = 2e-5;
  s.duration = 0.2;
  const Trace trace = simulate(s);

  const CubicSurface c = cubic_surface(s.position.surface_pole);
  const double alpha = s.plant.k_n / (s.plant.Jm_n * s.plant.Jl_n);
  // The feedforward's torque feedthrough: under mismatch the true
  // feedforward depends on the applied torque with this exact slope, so
  // the right endpoint (logged with the next interval's torque) has to
  // be shifted back to the torque that was actually held.
  const double alpha_gap =
      alpha - s.plant.k / (s.plant.Jm * s.plant.Jl);
  std::vector<double> sigma_true(trace.rows.size());
  for (std::size_t i = 0; i < trace.rows.size(); ++i) {
    const auto& row = trace.rows[i];
    const Eigen::Vector4d x(row.q, row.q_dot, row.theta, row.theta_dot);
    sigma_true[i] =
        position_sigma(s.plant, c, Reference::sample(s.reference, row.t), x,
                       row.d2_true, row.d2_dot_true);
  }
  double scale = 1.0;
  for (const auto& row : trace.rows) {
    scale = std::max(scale,
                     std::abs(row.beta_true - alpha * row.tau_m));
  }
  for (std::size_t i = trace.rows.size() / 10; i + 1 < trace.rows.size();
       ++i) {
    const double lhs = (sigma_true[i + 1] - sigma_true[i]) / s.dt;
    const double beta_next =
        trace.rows[i + 1].beta_true -
        alpha_gap * (trace.rows[i + 1].tau_m - trace.rows[i].tau_m);
    const double rhs = 0.5 * (trace.rows[i].beta_true + beta_next) -
                       alpha * trace.rows[i].tau_m;
    ASSERT_NEAR(lhs, rhs, 0.01 * scale) << "sample " << i;
  }
}

TEST(ForceSmc, SigmaDerivativeIdentityAlongATrajectory) {
  SimSetup s;
  s.mode = ControlMode::kForce;
  s.plant.Jm = 2.6e-6;
  s.plant.Jl = 6.0e-6;
  s.reference = Signal::sine(1.0, 1.0, 0.0, 2.0);
  EnvironmentModel env;
  env.contact = EnvironmentModel::Contact::kAlwaysEngaged;
  env.Je = 1e-4;
  env.De = 0.05;
  env.Ke = 50.0;
  s.environment = env;
  s.force.law = SwitchingLaw::kQuasiContinuous;
  s.force.surface_pole = 3000.0;
  s.force.rho = 2e4;
  s.force.epsilon = 10.0;
  s.dt = 1e-4;
  s.duration = 0.5;
  const Trace trace = simulate(s);

  std::vector<double> sigma_true(trace.rows.size());
  for (std::size_t i = 0; i < trace.rows.size(); ++i) {
    const auto& row = trace.rows[i];
    const Eigen::Vector4d x(row.q, row.q_dot, row.theta, row.theta_dot);
    const MotorReference m = force_motor_reference(
        s.plant, Reference::sample(s.reference, row.t), x, row.d2_true,
        s.force.accel_feedforward);
    sigma_true[i] = force_sigma(s.force.surface_pole, m, x);
  }
  // Torque feedthrough of the true feedforward under motor-inertia
  // mismatch; shifts the logged right endpoint back to the held torque.
  const double gap = 1.0 / s.plant.Jm_n - 1.0 / s.plant.Jm;
  double scale = 1.0;
  for (const auto& row : trace.rows) {
    scale = std::max(scale,
                     std::abs(row.beta_true - row.tau_m / s.plant.Jm_n));
  }
  for (std::size_t i = trace.rows.size() / 10; i + 1 < trace.rows.size();
       ++i) {
    const double lhs = (sigma_true[i + 1] - sigma_true[i]) / s.dt;
    const double beta_next =
        trace.rows[i + 1].beta_true -
        gap * (trace.rows[i + 1].tau_m - trace.rows[i].tau_m);
    const double rhs = 0.5 * (trace.rows[i].beta_true + beta_next) -
                       trace.rows[i].tau_m / s.plant.Jm_n;
    ASSERT_NEAR(lhs, rhs, 0.01 * scale) << "sample " << i;
  }
}

}  // namespace
}  // namespace seasmc
