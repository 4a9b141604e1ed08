#pragma once

#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "seasmc/analysis.hpp"
#include "seasmc/bundled.hpp"
#include "seasmc/scenario.hpp"
#include "seasmc/sim.hpp"

namespace seasmc {

/// Outcome of one verification check.
struct CheckResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
};

namespace verify_detail {

inline std::string fmt(const char* format, ...) {
  char buf[512];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof(buf), format, args);
  va_end(args);
  return buf;
}

inline Scenario load_bundled(const std::string& name) {
  for (const auto& [n, text] : bundled_scenarios()) {
    if (n == name) {
      std::istringstream in{std::string(text)};
      return parse_scenario(in, "bundled:" + name);
    }
  }
  throw std::invalid_argument("seasmc: no bundled scenario named '" + name +
                              "'");
}

/// Matched plant, no gravity: disturbance channels reduce to the
/// scripted torques divided by the true inertias, which gives the checks
/// an independent analytic reference.
inline SimSetup matched_position_setup() {
  SimSetup s;
  s.mode = ControlMode::kPosition;
  s.position.law = SwitchingLaw::kQuasiContinuous;
  s.position.surface_pole = 30.0;
  s.position.rho = 2.0e4;
  s.position.epsilon = 50.0;
  s.dob = dob_gains_from_bandwidth(500.0);
  s.dt = 5.0e-4;
  return s;
}

}  // namespace verify_detail

// ---------------------------------------------------------------------------
// 1. Observer gain rule places all estimation-error poles at -bandwidth.
// ---------------------------------------------------------------------------
inline CheckResult check_observer_pole_placement() {
  using verify_detail::fmt;
  CheckResult r{1, "observer gain rule places error poles", false, ""};

  const DobGains g500 = dob_gains_from_bandwidth(500.0);
  if (g500.L1 != 1500.0 || g500.L2 != 750000.0 || g500.L3 != 1.25e8) {
    r.detail = fmt("gains at bandwidth 500 are (%g, %g, %g)", g500.L1,
                   g500.L2, g500.L3);
    return r;
  }
  double worst = 0.0;
  for (double g : {100.0, 500.0, 1000.0}) {
    const DobGains gains = dob_gains_from_bandwidth(g);
    if (!dob_error_dynamics_stable(gains)) {
      r.detail = fmt("Routh test fails at bandwidth %g", g);
      return r;
    }
    for (const auto& pole : dob_error_poles(gains)) {
      worst = std::max(worst, std::abs(pole + std::complex<double>(g, 0.0)) / g);
    }
  }
  // Triple roots are ill-conditioned for eigen-solvers; 1e-3 relative
  // slack still pins the poles to the commanded location.
  if (worst > 1.0e-3) {
    r.detail = fmt("worst relative pole displacement %.3g", worst);
    return r;
  }
  if (dob_error_dynamics_stable(DobGains{1.0, 1.0, 2.0})) {
    r.detail = "Routh test accepted an unstable gain set";
    return r;
  }
  r.passed = true;
  r.detail = fmt("poles within %.2g relative of -bandwidth", worst);
  return r;
}

// ---------------------------------------------------------------------------
// 2. Observer estimates converge on the theoretical trajectories: the
//    first-order baseline decays as exp(-g t) pointwise, and after a
//    disturbance step the full observer's link-channel error follows the
//    exact triple-pole impulse solution.
// ---------------------------------------------------------------------------
inline CheckResult check_observer_convergence() {
  using verify_detail::fmt;
  CheckResult r{2, "observer convergence follows theory", false, ""};

  // First-order baseline against a rigid body under constant torque and
  // a constant unknown load: the velocity is linear in time, so the
  // interpolated update realizes the continuous error law exactly.
  {
    const double J = 2.2e-6, g = 500.0, dt = 2.0e-4;
    const double tau = 1.0e-3, d = 5.0;
    const double omega_slope = tau / J - d;
    ZeroOrderDob dob(J, g);
    dob.reset(0.0);
    double worst = 0.0;
    for (int k = 0; k < 250; ++k) {
      const double w0 = omega_slope * (k * dt);
      const double w1 = omega_slope * ((k + 1) * dt);
      dob.update(w0, w1, tau, dt);
      const double err = d - dob.estimate(w1);
      const double theory = d * std::exp(-g * (k + 1) * dt);
      if (theory < 1.0e-9 * d) break;
      worst = std::max(worst, std::abs(err - theory) / theory);
    }
    if (worst > 0.05) {
      r.detail = fmt("first-order decay off by %.3g relative", worst);
      return r;
    }
  }

  // Full observer: closed-loop regulation, matched plant, and a step in
  // the unknown link torque.  The link-channel error must follow
  // jump * exp(-g T) * (1 - 2 g T + (g T)^2 / 2) and is required to sit
  // within 1% of the truth from 20 ms after the step onward.
  {
    SimSetup s = verify_detail::matched_position_setup();
    s.reference = Signal::constant(0.1);
    s.x0.q = 0.1;
    s.x0.theta = 0.1;
    const double t_step = 1.0;
    const double tau_step = 2.0e-3;
    s.disturbances.tau_l_ud = Signal::step(tau_step, t_step);
    s.duration = 1.1;
    const Trace trace = simulate(s);

    const double g = 500.0;
    const double jump = tau_step / s.plant.Jl;  // disturbance channel jump
    double worst_excess = 0.0;
    double late_err = 0.0;
    for (const auto& row : trace.rows) {
      const double T = row.t - t_step;
      // The sample logged at the step instant straddles the discontinuity
      // (the integrator's final stage already sees the new torque), so the
      // continuous-time solution applies from the next sample on.
      if (T < 0.5 * s.dt) continue;
      if (T > 0.1) break;
      const double err = row.tau_dis2_true - row.tau_dis2_hat;
      const double gt = g * T;
      const double theory =
          jump * std::exp(-gt) * (1.0 - 2.0 * gt + 0.5 * gt * gt);
      const double envelope =
          jump * std::exp(-gt) * (1.0 + 2.0 * gt + 0.5 * gt * gt);
      const double allowed = 0.05 * envelope + 0.01 * jump;
      worst_excess =
          std::max(worst_excess, (std::abs(err - theory) - allowed) / jump);
      if (T >= 0.02) late_err = std::max(late_err, std::abs(err));
    }
    if (worst_excess > 0.0) {
      r.detail = fmt("step response leaves the theory band by %.3g of the "
                     "jump", worst_excess);
      return r;
    }
    if (late_err > 0.01 * jump) {
      r.detail = fmt("error is still %.3g of the jump 20 ms after the step",
                     late_err / jump);
      return r;
    }
    r.passed = true;
    r.detail = fmt("first-order within 5%% of exp decay; step error %.2g%% "
                   "of jump from 20 ms on", 100.0 * late_err / jump);
  }
  return r;
}

// ---------------------------------------------------------------------------
// 3. Input-to-state bound: with the third disturbance derivative bounded
//    by max|w|, the steady estimation-error norm per channel stays below
//    twice the cascade's static gain, 2 * 3 max|w| / bandwidth.
// ---------------------------------------------------------------------------
inline CheckResult check_estimation_error_bound() {
  using verify_detail::fmt;
  CheckResult r{3, "estimation error obeys the disturbance-rate bound",
                false, ""};

  SimSetup s = verify_detail::matched_position_setup();
  s.reference = Signal::constant(0.0);
  // Slow (1 Hz << bandwidth) sinusoidal torques on both inputs drive the
  // error cascade at its static gain, where the second-derivative state
  // dominates: e = (w/g^3, 3w/g^2, 3w/g) for a slowly varying rate w, so
  // ||e|| ~= 3 max|w| / g.  The factor 2 covers finite-frequency and
  // sampling corrections; the fine step keeps the interpolation bias of
  // the sampled observer far below the bound.
  const double amp_l = 1.0e-3, amp_m = 1.0e-4, f = 1.0;
  s.disturbances.tau_l_ud = Signal::sine(amp_l, f);
  s.disturbances.tau_m_ud = Signal::sine(amp_m, f);
  s.dt = 2.0e-5;
  s.duration = 2.0;
  const Trace trace = simulate(s);

  const double g = 500.0;
  // Matched plant: channel truths equal the scripted torques / inertia.
  const Signal& sig_l = s.disturbances.tau_l_ud;
  const Signal& sig_m = s.disturbances.tau_m_ud;
  double worst_frac = 0.0, bound_l = 0.0, bound_m = 0.0;
  for (int channel = 0; channel < 2; ++channel) {
    const Signal& sig = channel == 0 ? sig_l : sig_m;
    const double J = channel == 0 ? s.plant.Jl : s.plant.Jm;
    const double w_max =
        (channel == 0 ? amp_l : amp_m) * std::pow(2.0 * M_PI * f, 3) / J;
    const double bound = 2.0 * 3.0 * w_max / g;
    (channel == 0 ? bound_l : bound_m) = bound;
    for (const auto& row : trace.rows) {
      if (row.t < 0.2) continue;  // transient
      const double e1 =
          sig.value(row.t) / J -
          (channel == 0 ? row.tau_dis2_hat : row.tau_dis4_hat);
      const double e2 =
          sig.derivative(row.t, 1) / J -
          (channel == 0 ? row.tau_dis2_dot_hat : row.tau_dis4_dot_hat);
      const double e3 =
          sig.derivative(row.t, 2) / J -
          (channel == 0 ? row.tau_dis2_ddot_hat : row.tau_dis4_ddot_hat);
      const double norm = std::sqrt(e1 * e1 + e2 * e2 + e3 * e3);
      worst_frac = std::max(worst_frac, norm / bound);
      if (norm > bound) {
        r.detail = fmt("channel %d: ||e|| = %.4g exceeds bound %.4g at "
                       "t = %.3f", channel == 0 ? 2 : 4, norm, bound, row.t);
        return r;
      }
    }
  }
  r.passed = true;
  r.detail = fmt("worst ||e|| at %.2g of the bound (bounds %.4g / %.4g)",
                 worst_frac, bound_l, bound_m);
  return r;
}

// ---------------------------------------------------------------------------
// 4. The observer-backed controller beats the nominal-model controller by
//    at least 5x in steady tracking error, and tracks within 0.01 rad.
// ---------------------------------------------------------------------------
inline CheckResult check_observer_vs_nominal_tracking() {
  using verify_detail::fmt;
  CheckResult r{4, "observer-backed control beats the nominal baseline",
                false, ""};

  // Mismatched inertias and stiffness, gravity, a constant link load, and
  // a seeded random torque burst; both controllers run the same switching
  // gain so the only difference is the disturbance feedforward.
  SimSetup s = verify_detail::matched_position_setup();
  s.plant.Jm = 2.6e-6;
  s.plant.Jl = 6.0e-6;
  s.plant.k = 0.12;
  s.disturbances.ml_product = 2.0e-4;
  s.disturbances.tau_l_ud = Signal::constant(2.0e-3);
  s.disturbances.tau_m_ud = Signal::random_burst(2.0e-4, 20.0, 0.0, 5.0, 11);
  s.reference = Signal::sine(0.1592, 1.0);
  s.duration = 5.0;
  // Gain sized so the reaching phase is over well before the steady
  // window opens; both branches share it.
  s.position.rho = 1.0e5;

  s.dob_enabled = true;
  const MetricsReport with_dob = compute_metrics(simulate(s), 0.5);
  s.dob_enabled = false;
  const MetricsReport without_dob = compute_metrics(simulate(s), 0.5);

  const double ratio =
      without_dob.tracking_rmse_steady / with_dob.tracking_rmse_steady;
  if (with_dob.tracking_rmse_steady >= 0.01) {
    r.detail = fmt("observer-backed steady RMSE %.4g rad (needs < 0.01)",
                   with_dob.tracking_rmse_steady);
    return r;
  }
  if (ratio < 5.0) {
    r.detail = fmt("improvement ratio %.3g (needs >= 5)", ratio);
    return r;
  }
  r.passed = true;
  r.detail = fmt("steady RMSE %.3g rad vs %.3g rad baseline (ratio %.3g)",
                 with_dob.tracking_rmse_steady,
                 without_dob.tracking_rmse_steady, ratio);
  return r;
}

// ---------------------------------------------------------------------------
// 5. Sizing the switching gain from the measured feedforward-error bound
//    reaches the surface within the analytic time bound, over 10 seeds.
// ---------------------------------------------------------------------------
inline CheckResult check_gain_rule_reaching() {
  using verify_detail::fmt;
  CheckResult r{5, "switching-gain rule reaches the surface in bounded time",
                false, ""};

  double worst_slack = 1.0e300;
  for (int seed = 1; seed <= 10; ++seed) {
    SimSetup s = verify_detail::matched_position_setup();
    s.position.law = SwitchingLaw::kDiscontinuous;
    s.dob_enabled = false;
    s.reference = Signal::constant(0.3);
    std::mt19937_64 rng(static_cast<std::uint64_t>(seed));
    std::uniform_real_distribution<double> angle(0.1, 0.4);
    std::uniform_real_distribution<double> rate(-1.0, 1.0);
    s.x0.q = angle(rng);
    s.x0.q_dot = rate(rng);
    s.x0.theta = s.x0.q + 0.1 * rate(rng);
    s.x0.theta_dot = rate(rng);
    s.disturbances.tau_l_ud =
        Signal::random_burst(2.0e-4, 20.0, 0.0, 10.0, 7);
    s.duration = 1.0;

    // Pass 1: the feedforward error is trajectory-independent here
    // (matched plant, scripted torque), so any gain measures it.
    s.position.rho = 1.0;
    const Trace probe = simulate(s);
    double delta_beta = 0.0;
    for (const auto& row : probe.rows) {
      delta_beta = std::max(delta_beta, std::abs(row.beta_err));
    }

    // Pass 2: size the gain for a reaching time of ~0.4 s; the rule only
    // promises arrival within the analytic bound, so that is all that is
    // gated here.
    const double sigma0 = probe.rows.front().sigma;
    const double mu = std::sqrt(2.0) * std::abs(sigma0) / 0.4;
    s.position.rho = smc_gain_from_bound(delta_beta, mu);
    const Trace run = simulate(s);
    const double t_bound = reaching_time_bound(sigma0, mu, s.dt);
    const double layer = 1.5 * (s.position.rho + delta_beta) * s.dt;

    double t_reach = -1.0;
    for (const auto& row : run.rows) {
      if (std::abs(row.sigma) <= layer) {
        t_reach = row.t;
        break;
      }
    }
    if (t_reach < 0.0 || t_reach > t_bound) {
      r.detail = fmt("seed %d: reached at t = %.4g vs bound %.4g", seed,
                     t_reach, t_bound);
      return r;
    }
    worst_slack = std::min(worst_slack, t_bound - t_reach);
  }
  r.passed = true;
  r.detail = fmt("10/10 seeded starts reached; smallest slack to the bound "
                 "%.3g s", worst_slack);
  return r;
}

// ---------------------------------------------------------------------------
// 6. Sampled Lyapunov audit: on every bundled closed-loop run,
//    V = sigma^2/2 decreases at each checked sample when the gain
//    dominates the actual feedforward error, and the audit does fire on
//    an under-sized gain (negative control).
// ---------------------------------------------------------------------------
inline CheckResult check_lyapunov_audit() {
  using verify_detail::fmt;
  CheckResult r{6, "Lyapunov decrease audit (with negative control)", false,
                ""};

  // Positive arm: the audit covers every bundled closed-loop run whose
  // switching acts on the primary surface.  The integral-action law is
  // excluded: it enforces decrease on an augmented surface through an
  // internal state, so per-sample dominance on the primary surface is
  // not part of its contract.  The audit compares consecutive samples,
  // so each setup is rerun on a step that resolves the plant's spring
  // mode (~8e3 rad/s on the stock parameters); the demos' native 2 kHz
  // rate strobes that mode and the per-step moves stop reflecting the
  // within-step derivative.
  std::size_t checked_total = 0;
  for (const auto& [name, text] : bundled_scenarios()) {
    const Scenario sc = verify_detail::load_bundled(std::string(name));
    SimSetup setup = sc.setup;
    if (setup.mode == ControlMode::kOpenLoop) continue;
    const bool position = setup.mode == ControlMode::kPosition;
    const SwitchingLaw law =
        position ? setup.position.law : setup.force.law;
    if (law == SwitchingLaw::kContinuous) continue;
    setup.dt = 2.0e-5;
    const Trace trace = simulate(setup);
    // Contraction band = the law's own: the boundary-layer width for the
    // smoothed law, the one-step relay move for the pure relay.
    const double rho = position ? setup.position.rho : setup.force.rho;
    const double eps =
        position ? setup.position.epsilon : setup.force.epsilon;
    const double band =
        law == SwitchingLaw::kQuasiContinuous ? eps : rho * setup.dt;
    const ReachingScan scan = reaching_scan(trace, band);
    if (scan.violations != 0) {
      r.detail = fmt("%s: %zu of %zu checked samples failed to decrease",
                     std::string(name).c_str(), scan.violations,
                     scan.checked);
      return r;
    }
    if (!scan.settled) {
      r.detail = fmt("%s: surface never contracted (late |sigma| %g vs "
                     "band %g)", std::string(name).c_str(),
                     scan.late_max_abs, scan.layer);
      return r;
    }
    checked_total += scan.checked;
  }
  if (checked_total < 100) {
    r.detail = fmt("audit degenerated: only %zu samples met its premise",
                   checked_total);
    return r;
  }

  // Negative arm: identical scenario and gain with the feedforward
  // removed.  The gain only has to dominate the residual the estimator
  // leaves behind; against the raw lumped channel it is an order of
  // magnitude under-sized, the surface wanders at the structural scale,
  // and the audit must say so on the very band it certifies when the
  // estimator is in the loop.
  SimSetup s = verify_detail::matched_position_setup();
  s.plant.Jm = 2.6e-6;
  s.plant.Jl = 6.0e-6;
  s.plant.k = 0.12;
  s.disturbances.ml_product = 2.0e-4;
  s.disturbances.tau_l_ud = Signal::constant(2.0e-3);
  s.reference = Signal::sine(0.1592, 1.0);
  s.duration = 5.0;
  s.dt = 2.0e-5;
  s.position.law = SwitchingLaw::kDiscontinuous;
  s.position.rho = 1.0e5;
  const double band = s.position.rho * s.dt;

  const ReachingScan good_scan = reaching_scan(simulate(s), band);
  if (good_scan.violations != 0 || !good_scan.settled) {
    r.detail = fmt("healthy configuration failed its own audit "
                   "(%zu violations, late |sigma| %g vs band %g)",
                   good_scan.violations, good_scan.late_max_abs, band);
    return r;
  }
  s.dob_enabled = false;
  const ReachingScan bad_scan = reaching_scan(simulate(s), band);
  if (bad_scan.violations == 0 && bad_scan.settled) {
    r.detail = fmt("negative control did not fire on an under-sized gain "
                   "(late |sigma| %g vs band %g)", bad_scan.late_max_abs,
                   band);
    return r;
  }
  r.passed = true;
  r.detail = fmt("0/%zu violations across the bundled runs; under-sized "
                 "gain flagged (late |sigma| %g vs band %g, %zu pointwise)",
                 checked_total, bad_scan.late_max_abs, bad_scan.layer,
                 bad_scan.violations);
  return r;
}

// ---------------------------------------------------------------------------
// 7. Boundary-layer width trades chattering against accuracy
//    monotonically across decades.
// ---------------------------------------------------------------------------
inline CheckResult check_boundary_layer_tradeoff() {
  using verify_detail::fmt;
  CheckResult r{7, "boundary-layer width trades chattering vs accuracy",
                false, ""};

  SimSetup s = verify_detail::matched_position_setup();
  s.dob_enabled = false;
  s.reference = Signal::sine(0.3, 1.0);
  s.disturbances.tau_l_ud = Signal::sine(2.0e-4, 2.0);
  s.duration = 4.0;

  s.position.law = SwitchingLaw::kDiscontinuous;
  s.position.rho = 1.0;
  const Trace probe = simulate(s);
  double delta_beta = 0.0;
  for (const auto& row : probe.rows) {
    delta_beta = std::max(delta_beta, std::abs(row.beta_err));
  }

  s.position.law = SwitchingLaw::kQuasiContinuous;
  s.position.rho = 1.5 * delta_beta;
  const double eps_base = s.position.rho * s.dt;
  std::vector<double> chatter, rmse;
  for (double scale : {0.1, 1.0, 10.0, 100.0}) {
    s.position.epsilon = scale * eps_base;
    const MetricsReport m = compute_metrics(simulate(s), 1.0);
    chatter.push_back(m.control_delta_rms);
    rmse.push_back(m.tracking_rmse_steady);
  }
  for (std::size_t i = 1; i < chatter.size(); ++i) {
    if (!(chatter[i] < chatter[i - 1])) {
      r.detail = fmt("chattering did not fall: %.3g -> %.3g between "
                     "widths %zu and %zu", chatter[i - 1], chatter[i], i - 1,
                     i);
      return r;
    }
    if (!(rmse[i] > rmse[i - 1])) {
      r.detail = fmt("tracking error did not grow: %.3g -> %.3g between "
                     "widths %zu and %zu", rmse[i - 1], rmse[i], i - 1, i);
      return r;
    }
  }
  r.passed = true;
  r.detail = fmt("chattering %.3g -> %.3g, RMSE %.3g -> %.3g across a "
                 "1000x width sweep", chatter.front(), chatter.back(),
                 rmse.front(), rmse.back());
  return r;
}

// ---------------------------------------------------------------------------
// 8. Minimal switching gain meeting the 0.01 rad steady RMSE of the
//    tracking comparison: at least 10x smaller with the observer than
//    without, and the without-observer run chatters harder at its own
//    minimal gain.
// ---------------------------------------------------------------------------
inline CheckResult check_minimal_gain_search() {
  using verify_detail::fmt;
  CheckResult r{8, "observer shrinks the required switching gain", false,
                ""};

  // Regulation at zero under a scripted motor-side torque: the one task
  // where the model-only law has no structural error floor (any link
  // motion enters its surface through the unestimated spring channel, so
  // a moving or offset target parks it off the setpoint at any gain).
  // Both branches run the pure relay law so the gain is the only knob
  // and the chattering cost of over-gaining is visible.
  auto base = [] {
    SimSetup s = verify_detail::matched_position_setup();
    s.position.law = SwitchingLaw::kDiscontinuous;
    s.reference = Signal::constant(0.0);
    s.disturbances.tau_m_ud = Signal::sine(2.0e-4, 2.0);
    s.dt = 2.0e-5;
    s.duration = 5.0;
    return s;
  };

  auto minimal_gain = [&](bool dob_on, double* chatter_out) {
    const std::vector<double> grid = {0.0, 1.0, 1.0e1, 1.0e2, 1.0e3, 1.0e4,
                                      1.0e5, 1.0e6, 1.0e7, 1.0e8};
    for (double rho : grid) {
      SimSetup s = base();
      s.dob_enabled = dob_on;
      s.position.rho = rho;
      try {
        const MetricsReport m = compute_metrics(simulate(s), 0.5);
        if (m.tracking_rmse_steady < 0.01) {
          if (chatter_out != nullptr) *chatter_out = m.control_delta_rms;
          return rho;
        }
      } catch (const DivergenceError&) {
        continue;  // over-gained for the sampling rate; keep scanning
      }
    }
    return -1.0;
  };

  double chatter_with = 0.0, chatter_without = 0.0;
  const double rho_with = minimal_gain(true, &chatter_with);
  const double rho_without = minimal_gain(false, &chatter_without);
  if (rho_with < 0.0) {
    r.detail = "no gain met the error target with the observer";
    return r;
  }
  if (rho_without < 0.0) {
    r.detail = "no gain met the error target without the observer";
    return r;
  }
  if (!(10.0 * rho_with <= rho_without)) {
    r.detail = fmt("minimal gain %.3g with observer vs %.3g without "
                   "(needs a 10x gap)", rho_with, rho_without);
    return r;
  }
  if (!(chatter_without > chatter_with)) {
    r.detail = fmt("chattering %.3g (without) vs %.3g (with observer)",
                   chatter_without, chatter_with);
    return r;
  }
  r.passed = true;
  r.detail = fmt("minimal gain %.3g with observer vs %.3g without; "
                 "chattering %.3g vs %.3g at those gains", rho_with,
                 rho_without, chatter_with, chatter_without);
  return r;
}

// ---------------------------------------------------------------------------
// 9. Stock force-tracking experiment: steady RMS spring-torque error
//    below 5% of the commanded amplitude.
// ---------------------------------------------------------------------------
inline CheckResult check_force_sine_tracking() {
  using verify_detail::fmt;
  CheckResult r{9, "force sine tracking within 5% RMS", false, ""};

  const Scenario sc = verify_detail::load_bundled("fig6a");
  const Trace trace = simulate(sc.setup);
  const MetricsReport m = compute_metrics(trace, sc.steady_start);
  const double amplitude = 1.0;  // commanded swing around the 2 N m bias
  const double rel = m.tracking_rmse_steady / amplitude;
  if (rel >= 0.05) {
    r.detail = fmt("steady RMS error %.4g N m = %.3g%% of amplitude "
                   "(needs < 5%%)", m.tracking_rmse_steady, 100.0 * rel);
    return r;
  }
  r.passed = true;
  r.detail = fmt("steady RMS error %.4g N m = %.3g%% of the 1 N m amplitude",
                 m.tracking_rmse_steady, 100.0 * rel);
  return r;
}

// ---------------------------------------------------------------------------
// 10. Stock force-step experiment with unilateral contact: the link
//     approaches from free space, overshoots, and settles within 1%.
// ---------------------------------------------------------------------------
inline CheckResult check_force_step_response() {
  using verify_detail::fmt;
  CheckResult r{10, "force step: contact approach, overshoot, 1% settling",
                false, ""};

  const Scenario sc = verify_detail::load_bundled("fig6b");
  const Trace trace = simulate(sc.setup);
  const MetricsReport m = compute_metrics(trace, sc.steady_start);

  bool started_free = trace.rows.front().engaged == 0.0;
  bool touched = false;
  for (const auto& row : trace.rows) {
    if (row.engaged != 0.0) {
      touched = true;
      break;
    }
  }
  if (!started_free || !touched) {
    r.detail = "link did not approach the environment from free space";
    return r;
  }
  if (!(m.overshoot_abs > 0.0)) {
    r.detail = fmt("no overshoot (peak stayed %.3g N m short)",
                   -m.overshoot_abs);
    return r;
  }
  const double rel_settle = m.tracking_max_abs_steady / std::abs(m.ref_final);
  if (!(rel_settle < 0.01)) {
    r.detail = fmt("steady error %.3g%% of the setpoint (needs < 1%%)",
                   100.0 * rel_settle);
    return r;
  }
  r.passed = true;
  r.detail = fmt("overshoot %.3g N m, steady error %.3g%% of 5 N m",
                 m.overshoot_abs, 100.0 * rel_settle);
  return r;
}

// ---------------------------------------------------------------------------
// 11. Bitwise reproducibility and integrator convergence order.
// ---------------------------------------------------------------------------
inline CheckResult check_reproducibility_and_order() {
  using verify_detail::fmt;
  CheckResult r{11, "bitwise reproducibility and integrator order", false,
                ""};

  // Same setup, two runs, identical bytes.
  {
    const Scenario sc = verify_detail::load_bundled("fig4b");
    std::ostringstream a, b;
    simulate(sc.setup).write_csv(a);
    simulate(sc.setup).write_csv(b);
    if (a.str().empty() || a.str() != b.str()) {
      r.detail = "two runs of the same setup produced different bytes";
      return r;
    }
  }

  // Step refinement on a smooth free-motion problem, driving the
  // continuous-time derivative directly so every integrator stage sees
  // the exact torque at its own stage time (the simulation engine holds
  // the sampled control constant across each step by design, which pins
  // any method to first-order end-state convergence).  Single halving
  // ratios wobble when end-state components cross zero, so the order is
  // read across a 4x step range: err(dt0)/err(dt0/4) ~ 4^p, gated to
  // p within 1 of 4th order and within 0.5 of 1st.
  auto end_state = [](Integrator method, double dt) {
    PlantParams p;
    DisturbanceProfile dist;
    Signal tau_m = Signal::sine(2.0e-3, 23.0);
    dist.ml_product = 2.0e-4;
    if (method == Integrator::kEuler) {
      // Softer, damped plant keeps the 1st-order method stable.
      p.Jm = p.Jm_n = 1.0e-3;
      p.Jl = p.Jl_n = 1.0e-3;
      p.k = p.k_n = 10.0;
      p.bm = p.bm_n = 0.05;
      p.bl = p.bl_n = 0.05;
      tau_m = Signal::sine(2.0, 23.0);
    }
    auto deriv = [&](const Eigen::Vector4d& x, double t) {
      return free_motion_derivative(p, x, tau_m.value(t), dist, t);
    };
    Eigen::Vector4d x = Eigen::Vector4d::Zero();
    const int steps = static_cast<int>(std::lround(0.2 / dt));
    for (int k = 0; k < steps; ++k) {
      x = integrate_step(deriv, x, k * dt, dt, method);
    }
    return x;
  };
  auto span_ratio = [&](Integrator method, double dt0) {
    const double coarse =
        (end_state(method, dt0) - end_state(method, dt0 / 2.0)).norm();
    const double fine =
        (end_state(method, dt0 / 4.0) - end_state(method, dt0 / 8.0)).norm();
    return coarse / fine;
  };

  const double dt0 = 2.5e-4;
  const double r4 = span_ratio(Integrator::kRk4, dt0);
  if (!(r4 >= 64.0 && r4 <= 1024.0)) {
    r.detail = fmt("4th-order refinement ratio %.3g over a 4x step range "
                   "(expected ~256)", r4);
    return r;
  }
  const double r1 = span_ratio(Integrator::kEuler, dt0);
  if (!(r1 >= 2.0 && r1 <= 8.0)) {
    r.detail = fmt("1st-order refinement ratio %.3g over a 4x step range "
                   "(expected ~4)", r1);
    return r;
  }
  r.passed = true;
  r.detail = fmt("identical bytes across runs; 4x-range error ratios %.3g "
                 "(4th order) and %.3g (1st order)", r4, r1);
  return r;
}

/// Runs every check in order; exceptions become failures.
inline std::vector<CheckResult> run_verification_suite() {
  using Check = std::function<CheckResult()>;
  const std::vector<Check> checks = {
      check_observer_pole_placement,    check_observer_convergence,
      check_estimation_error_bound,     check_observer_vs_nominal_tracking,
      check_gain_rule_reaching,         check_lyapunov_audit,
      check_boundary_layer_tradeoff,    check_minimal_gain_search,
      check_force_sine_tracking,        check_force_step_response,
      check_reproducibility_and_order,
  };
  std::vector<CheckResult> results;
  results.reserve(checks.size());
  for (std::size_t i = 0; i < checks.size(); ++i) {
    try {
      results.push_back(checks[i]());
    } catch (const std::exception& e) {
      results.push_back(CheckResult{static_cast<int>(i + 1), "check threw",
                                    false, e.what()});
    }
  }
  return results;
}

}  // namespace seasmc
