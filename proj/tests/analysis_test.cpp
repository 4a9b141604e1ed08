#include "seasmc/analysis.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "seasmc/sim.hpp"

namespace seasmc {
namespace {

TEST(SeriesStats, HandValuesAndEmptyGuards) {
  const std::vector<double> v{3.0, -4.0};
  EXPECT_DOUBLE_EQ(rms(v), std::sqrt(12.5));
  EXPECT_DOUBLE_EQ(max_abs(v), 4.0);
  EXPECT_DOUBLE_EQ(mean(v), -0.5);
  EXPECT_THROW(rms({}), std::invalid_argument);
  EXPECT_THROW(max_abs({}), std::invalid_argument);
  EXPECT_THROW(mean({}), std::invalid_argument);
}

TEST(FiniteDifference, ExactOnAParabolaInside) {
  const double dt = 0.1;
  std::vector<double> y;
  for (int i = 0; i <= 10; ++i) {
    const double t = i * dt;
    y.push_back(t * t);
  }
  const std::vector<double> dy = finite_difference(y, dt);
  ASSERT_EQ(dy.size(), y.size());
  for (int i = 1; i < 10; ++i) {
    EXPECT_NEAR(dy[i], 2.0 * i * dt, 1e-12);  // central diff, exact
  }
  EXPECT_NEAR(dy[0], dt, 1e-12);  // one-sided first-order at the ends
  EXPECT_THROW(finite_difference({1.0}, dt), std::invalid_argument);
  EXPECT_THROW(finite_difference(y, 0.0), std::invalid_argument);
}

TEST(MechanicalEnergy, HandValue) {
  PlantParams p;
  p.Jl = 1e-3;
  p.Jm = 2e-3;
  p.k = 10.0;
  const Eigen::Vector4d x(0.0, 1.0, 0.1, -2.0);
  EXPECT_NEAR(mechanical_energy(p, x),
              0.5e-3 + 0.5 * 2e-3 * 4.0 + 0.5 * 10.0 * 0.01, 1e-12);
}

TEST(MechanicalEnergy, FreeUndampedPlantConservesEnergyUnderRk4) {
  SimSetup s;
  s.mode = ControlMode::kOpenLoop;
  s.reference = Signal::zero();
  s.plant.Jm = s.plant.Jm_n = 1e-3;
  s.plant.Jl = s.plant.Jl_n = 1e-3;
  s.plant.k = s.plant.k_n = 10.0;
  s.x0.theta = 0.1;  // preloaded spring, bodies at rest
  s.dob_enabled = false;
  s.dt = 5e-4;
  s.duration = 10.0;
  const Trace trace = simulate(s);
  const double e0 = mechanical_energy(s.plant, s.x0.vec());
  ASSERT_GT(e0, 0.0);
  const auto& last = trace.rows.back();
  const double e1 = mechanical_energy(
      s.plant, Eigen::Vector4d(last.q, last.q_dot, last.theta, last.theta_dot));
  EXPECT_NEAR(e1 / e0, 1.0, 1e-4);
}

Trace synthetic_step_trace() {
  // Position-mode trace approaching ref = 1 from 0 with a 20% overshoot.
  Trace trace;
  trace.mode = ControlMode::kPosition;
  trace.dt = 0.1;
  const std::vector<double> q{0.0, 0.5, 0.9, 1.2, 1.05, 1.0, 1.0, 1.0,
                              1.0, 1.0, 1.0};
  for (std::size_t i = 0; i < q.size(); ++i) {
    TraceRow row;
    row.t = 0.1 * static_cast<double>(i);
    row.ref = 1.0;
    row.q = q[i];
    row.tau_m = (i % 2 == 0) ? 0.01 : -0.01;
    row.sigma = 0.0;
    trace.rows.push_back(row);
  }
  return trace;
}

TEST(ComputeMetrics, StepStatisticsByHand) {
  const Trace trace = synthetic_step_trace();
  const MetricsReport m = compute_metrics(trace, 0.5);
  EXPECT_EQ(m.samples, 11u);
  EXPECT_DOUBLE_EQ(m.duration, 1.0);
  EXPECT_DOUBLE_EQ(m.steady_start, 0.5);
  EXPECT_DOUBLE_EQ(m.ref_final, 1.0);
  EXPECT_DOUBLE_EQ(m.output_final, 1.0);
  EXPECT_DOUBLE_EQ(m.final_abs_error, 0.0);
  EXPECT_NEAR(m.overshoot_abs, 0.2, 1e-12);
  EXPECT_NEAR(m.overshoot_frac, 0.2, 1e-12);
  EXPECT_DOUBLE_EQ(m.tracking_max_abs_steady, 0.0);
  EXPECT_DOUBLE_EQ(m.peak_tau_m, 0.01);
  // Steady window torque flips sign each sample: delta RMS = 0.02.
  EXPECT_NEAR(m.control_delta_rms, 0.02, 1e-12);
}

TEST(ComputeMetrics, DefaultSteadyWindowIsTheSecondHalf) {
  const Trace trace = synthetic_step_trace();
  const MetricsReport m = compute_metrics(trace);
  EXPECT_DOUBLE_EQ(m.steady_start, 0.5);
}

TEST(ComputeMetrics, RejectsBadWindows) {
  const Trace trace = synthetic_step_trace();
  EXPECT_THROW(compute_metrics(trace, 1.0), std::invalid_argument);
  Trace tiny;
  tiny.rows.resize(1);
  EXPECT_THROW(compute_metrics(tiny), std::invalid_argument);
}

TEST(ComputeMetrics, OvershootIsSignedAlongTheApproach) {
  Trace trace;
  trace.mode = ControlMode::kPosition;
  trace.dt = 0.1;
  // Approach 0 from above, never passing it: overshoot is negative.
  for (int i = 0; i <= 10; ++i) {
    TraceRow row;
    row.t = 0.1 * i;
    row.ref = 0.0;
    row.q = 1.0 - 0.09 * i;
    trace.rows.push_back(row);
  }
  const MetricsReport m = compute_metrics(trace, 0.5);
  EXPECT_LT(m.overshoot_abs, 0.0);
}

Trace synthetic_sigma_trace(const std::vector<double>& sigma_true,
                            double beta_err, double switching) {
  Trace trace;
  trace.mode = ControlMode::kPosition;
  trace.dt = 0.1;
  for (std::size_t i = 0; i < sigma_true.size(); ++i) {
    TraceRow row;
    row.t = 0.1 * static_cast<double>(i);
    row.sigma = sigma_true[i];
    row.sigma_true = sigma_true[i];
    row.beta_err = beta_err;
    row.switching = switching;
    trace.rows.push_back(row);
  }
  return trace;
}

TEST(ReachingScan, CountsOnlyDecreasesOutsideTheLayer) {
  // |sigma| shrinks monotonically under a dominating aligned switching
  // value: no violations.
  const Trace good = synthetic_sigma_trace({10.0, 8.0, 6.0, 4.0, 2.0, 1.0,
                                            0.5, 0.2, 0.1, 0.05},
                                           1.0, 50.0);
  const ReachingScan ok = reaching_scan(good, 0.3);
  EXPECT_EQ(ok.violations, 0u);
  EXPECT_GT(ok.checked, 0u);
  EXPECT_DOUBLE_EQ(ok.layer, 0.3);
  EXPECT_TRUE(ok.settled);

  // One uptick outside the layer while the switching dominates: one
  // violation.
  const Trace bad =
      synthetic_sigma_trace({10.0, 8.0, 9.0, 4.0, 2.0, 1.0}, 1.0, 50.0);
  EXPECT_EQ(reaching_scan(bad, 0.5).violations, 1u);

  // Same uptick, but the switching below the feedforward error: nothing
  // to check.
  const Trace weak =
      synthetic_sigma_trace({10.0, 8.0, 9.0, 4.0, 2.0, 1.0}, 1.0, 0.5);
  EXPECT_EQ(reaching_scan(weak, 0.5).checked, 0u);

  // Switching pointing with the surface instead of against it: skipped.
  const Trace misaligned =
      synthetic_sigma_trace({10.0, 8.0, 9.0, 4.0, 2.0, 1.0}, 1.0, -50.0);
  EXPECT_EQ(reaching_scan(misaligned, 0.5).checked, 0u);
}

TEST(ReachingScan, ExcludesMovesTheDynamicsCannotProduce) {
  // 8 -> 50 and 50 -> 4 exceed dt * (|sw| + |beta_err|): exogenous jumps
  // (a reference step enters the surface directly), not violations.
  const Trace trace = synthetic_sigma_trace({10.0, 8.0, 50.0, 4.0, 2.0, 1.0},
                                            1.0, 50.0);
  const ReachingScan scan = reaching_scan(trace, 0.5);
  EXPECT_EQ(scan.skipped_jumps, 2u);
  EXPECT_EQ(scan.violations, 0u);
  EXPECT_EQ(scan.checked, 3u);
}

TEST(ReachingScan, AutomaticLayerIgnoresIsolatedJumps) {
  const Trace trace =
      synthetic_sigma_trace({10.0, 8.0, 6.0, 4.0, 2.0, 1.5}, 0.0, 50.0);
  // 3x the high-quantile per-step move.
  EXPECT_DOUBLE_EQ(reaching_scan(trace).layer, 6.0);

  // A single reference jump must not inflate the band.
  const Trace jumpy = synthetic_sigma_trace(
      {10.0, 8.0, 6.0, 4.0, 2.0, 1.5, 100.0}, 0.0, 50.0);
  EXPECT_DOUBLE_EQ(reaching_scan(jumpy).layer, 6.0);
}

TEST(ReachingScan, FlagsAWanderingSurfaceAsUnsettled) {
  // The premise never holds (switching below the error), so no pointwise
  // violations; the late samples still sit far outside the band, which
  // is how an under-sized gain shows up.
  const Trace wander = synthetic_sigma_trace(
      {5.0, -5.0, 5.0, -5.0, 5.0, -5.0, 5.0, -5.0}, 2.0, 1.0);
  const ReachingScan scan = reaching_scan(wander, 0.01);
  EXPECT_EQ(scan.checked, 0u);
  EXPECT_EQ(scan.violations, 0u);
  EXPECT_FALSE(scan.settled);
}

TEST(ReachingScan, WindowFiltersEarlySamples) {
  const Trace trace =
      synthetic_sigma_trace({1.0, 5.0, 4.0, 3.0, 2.0, 1.0}, 0.0, 50.0);
  // Starting after the first sample skips the initial uptick.
  const ReachingScan scan = reaching_scan(trace, 0.5, 0.1);
  EXPECT_EQ(scan.violations, 0u);
  EXPECT_THROW(reaching_scan(trace, 0.5, 0.6), std::invalid_argument);
}

}  // namespace
}  // namespace seasmc
