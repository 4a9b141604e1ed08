#include "seasmc/sim.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "seasmc/integrate.hpp"

namespace seasmc {
namespace {

SimSetup small_position_setup() {
  SimSetup s;
  s.mode = ControlMode::kPosition;
  s.reference = Signal::sine(0.2, 1.0);
  s.position.law = SwitchingLaw::kQuasiContinuous;
  s.position.rho = 2e4;
  s.position.epsilon = 50.0;
  s.dt = 5e-4;
  s.duration = 0.5;
  return s;
}

TEST(Simulate, ProducesAUniformTimeGrid) {
  SimSetup s = small_position_setup();
  s.x0.q = 0.05;
  s.x0.theta = 0.07;
  const Trace trace = simulate(s);
  ASSERT_EQ(trace.rows.size(), 1001u);
  EXPECT_DOUBLE_EQ(trace.rows.front().t, 0.0);
  EXPECT_DOUBLE_EQ(trace.rows.back().t, 0.5);
  EXPECT_NEAR(trace.rows[1].t - trace.rows[0].t, 5e-4, 1e-15);
  EXPECT_DOUBLE_EQ(trace.rows.front().q, 0.05);
  EXPECT_DOUBLE_EQ(trace.rows.front().theta, 0.07);
  EXPECT_EQ(trace.mode, ControlMode::kPosition);
  EXPECT_DOUBLE_EQ(trace.dt, 5e-4);
}

TEST(Simulate, IsDeterministic) {
  SimSetup s = small_position_setup();
  s.disturbances.tau_l_ud = Signal::random_burst(2e-4, 20.0, 0.0, 1.0, 99);
  std::ostringstream a, b;
  simulate(s).write_csv(a);
  simulate(s).write_csv(b);
  EXPECT_FALSE(a.str().empty());
  EXPECT_EQ(a.str(), b.str());
}

TEST(Simulate, OpenLoopAppliesTheReferenceAsTorque) {
  SimSetup s;
  s.mode = ControlMode::kOpenLoop;
  s.reference = Signal::sine(1e-3, 5.0);
  s.dt = 5e-4;
  s.duration = 0.2;
  const Trace trace = simulate(s);
  for (const auto& row : trace.rows) {
    EXPECT_DOUBLE_EQ(row.tau_m, s.reference.value(row.t));
    EXPECT_DOUBLE_EQ(row.sigma, 0.0);
    EXPECT_DOUBLE_EQ(row.beta_hat, 0.0);
  }
}

TEST(Simulate, ThrowsDivergenceErrorWithContext) {
  SimSetup s;
  s.mode = ControlMode::kOpenLoop;
  s.reference = Signal::constant(1.0);  // huge torque for these inertias
  s.dt = 5e-4;
  s.duration = 5.0;
  s.divergence_limit = 1e5;
  try {
    simulate(s);
    FAIL() << "expected DivergenceError";
  } catch (const DivergenceError& e) {
    EXPECT_GT(e.step(), 0u);
    EXPECT_GT(e.time(), 0.0);
    EXPECT_NE(std::string(e.what()).find("diverged"), std::string::npos);
  }
}

TEST(Simulate, EulerDivergesWhereRk4IsStable) {
  SimSetup s;
  s.mode = ControlMode::kOpenLoop;
  s.reference = Signal::sine(1e-4, 10.0);
  s.dt = 5e-4;
  s.duration = 5.0;
  s.method = Integrator::kRk4;
  EXPECT_NO_THROW(simulate(s));  // elastic mode ~314 rad/s is inside RK4
  s.method = Integrator::kEuler;
  EXPECT_THROW(simulate(s), DivergenceError);
}

TEST(Simulate, EncoderQuantizationAffectsOnlyMeasuredAngles) {
  SimSetup s = small_position_setup();
  s.encoder_ppr = 1024;
  const Trace trace = simulate(s);
  bool any_quantized = false;
  for (const auto& row : trace.rows) {
    EXPECT_DOUBLE_EQ(row.q_meas, quantize_encoder(row.q, 1024));
    EXPECT_DOUBLE_EQ(row.theta_meas, quantize_encoder(row.theta, 1024));
    EXPECT_DOUBLE_EQ(row.q_dot_meas, row.q_dot);
    EXPECT_DOUBLE_EQ(row.theta_dot_meas, row.theta_dot);
    if (row.q_meas != row.q) any_quantized = true;
  }
  EXPECT_TRUE(any_quantized);
}

TEST(Simulate, ContactFlagMatchesTheEngagementRule) {
  SimSetup s;
  s.mode = ControlMode::kForce;
  s.reference = Signal::step(0.5, 0.05);
  EnvironmentModel env;
  env.contact = EnvironmentModel::Contact::kUnilateral;
  env.Ke = 50.0;
  env.De = 0.05;
  env.Je = 1e-4;
  env.qe = Signal::constant(0.02);
  s.environment = env;
  s.force.rho = 2e4;
  s.force.epsilon = 10.0;
  s.force.surface_pole = 3000.0;
  s.dt = 5e-4;
  s.duration = 1.0;
  const Trace trace = simulate(s);
  bool saw_free = false, saw_contact = false;
  for (const auto& row : trace.rows) {
    const bool expect = env.engaged(row.q, row.q_dot, row.t);
    EXPECT_DOUBLE_EQ(row.engaged, expect ? 1.0 : 0.0);
    (expect ? saw_contact : saw_free) = true;
  }
  EXPECT_TRUE(saw_free);
  EXPECT_TRUE(saw_contact);
}

TEST(Simulate, DisabledObserverZerosTheEstimateColumns) {
  SimSetup s = small_position_setup();
  s.dob_enabled = false;
  const Trace trace = simulate(s);
  for (const auto& row : trace.rows) {
    EXPECT_DOUBLE_EQ(row.tau_dis2_hat, 0.0);
    EXPECT_DOUBLE_EQ(row.d2_hat, 0.0);
    EXPECT_DOUBLE_EQ(row.d4_hat, 0.0);
  }
}

TEST(Simulate, ObserverTracksGravityDisturbanceClosedLoop) {
  SimSetup s = small_position_setup();
  s.disturbances.ml_product = 2e-4;
  s.duration = 2.0;
  const Trace trace = simulate(s);
  double scale = 0.0;
  for (const auto& row : trace.rows) {
    scale = std::max(scale, std::abs(row.d2_true));
  }
  ASSERT_GT(scale, 10.0);  // gravity channel is actually excited
  for (const auto& row : trace.rows) {
    if (row.t < 0.5) continue;
    EXPECT_NEAR(row.d2_hat, row.d2_true, 0.02 * scale) << "t = " << row.t;
  }
}

TEST(Simulate, ValidatesTheSetup) {
  SimSetup s = small_position_setup();
  s.dt = 0.0;
  EXPECT_THROW(simulate(s), std::invalid_argument);
  s = small_position_setup();
  s.duration = 0.0;
  EXPECT_THROW(simulate(s), std::invalid_argument);
  s = small_position_setup();
  s.encoder_ppr = -1;
  EXPECT_THROW(simulate(s), std::invalid_argument);
  s = small_position_setup();
  s.plant.k = -1.0;
  EXPECT_THROW(simulate(s), std::invalid_argument);
}

}  // namespace
}  // namespace seasmc
