#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

#include "seasmc/plant.hpp"
#include "seasmc/trace.hpp"

namespace seasmc {

/// Root mean square of a series.
inline double rms(const std::vector<double>& v) {
  if (v.empty()) {
    throw std::invalid_argument("seasmc::rms: empty series");
  }
  double acc = 0.0;
  for (double x : v) acc += x * x;
  return std::sqrt(acc / static_cast<double>(v.size()));
}

/// Largest absolute value of a series.
inline double max_abs(const std::vector<double>& v) {
  if (v.empty()) {
    throw std::invalid_argument("seasmc::max_abs: empty series");
  }
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

inline double mean(const std::vector<double>& v) {
  if (v.empty()) {
    throw std::invalid_argument("seasmc::mean: empty series");
  }
  double acc = 0.0;
  for (double x : v) acc += x;
  return acc / static_cast<double>(v.size());
}

/**
 * @brief Sampled time derivative: central differences inside, one-sided
 * at the ends.  Needs at least two samples.
 */
inline std::vector<double> finite_difference(const std::vector<double>& y,
                                             double dt) {
  if (y.size() < 2) {
    throw std::invalid_argument(
        "seasmc::finite_difference: need at least two samples");
  }
  if (!(dt > 0.0)) {
    throw std::invalid_argument("seasmc::finite_difference: dt must be > 0");
  }
  const std::size_t n = y.size();
  std::vector<double> dy(n);
  dy[0] = (y[1] - y[0]) / dt;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    dy[i] = (y[i + 1] - y[i - 1]) / (2.0 * dt);
  }
  dy[n - 1] = (y[n - 1] - y[n - 2]) / dt;
  return dy;
}

/// Tracking error series ref - output for the trace's mode.
inline std::vector<double> tracking_error(const Trace& trace) {
  std::vector<double> e;
  e.reserve(trace.rows.size());
  for (const auto& row : trace.rows) e.push_back(row.ref - trace.output(row));
  return e;
}

/// Total mechanical energy of the free two-mass plant (true parameters).
inline double mechanical_energy(const PlantParams& p,
                                const Eigen::Vector4d& x) {
  const double twist = x[2] - x[0];
  return 0.5 * p.Jl * x[1] * x[1] + 0.5 * p.Jm * x[3] * x[3] +
         0.5 * p.k * twist * twist;
}

/**
 * @brief Summary statistics of one run.
 *
 * "Steady" statistics are taken from steady_start onward; overshoot is
 * measured against the final reference value along the direction of
 * approach, so it is positive only if the output actually passed it.
 */
struct MetricsReport {
  std::size_t samples = 0;
  double dt = 0.0;
  double duration = 0.0;
  double steady_start = 0.0;

  double tracking_rmse = 0.0;
  double tracking_rmse_steady = 0.0;
  double tracking_max_abs_steady = 0.0;
  double final_abs_error = 0.0;
  double overshoot_abs = 0.0;   // signed: negative = never reached
  double overshoot_frac = 0.0;  // relative to the commanded change

  double d2_rmse_steady = 0.0;
  double d4_rmse_steady = 0.0;
  double sigma_rms_steady = 0.0;

  double control_rms = 0.0;
  double control_delta_rms = 0.0;       // step-to-step torque change, RMS
  double control_total_variation = 0.0; // sum of |torque changes|
  double peak_tau_m = 0.0;

  double ref_final = 0.0;
  double output_final = 0.0;
};

/// Computes MetricsReport; steady_start < 0 selects half the run.
inline MetricsReport compute_metrics(const Trace& trace,
                                     double steady_start = -1.0) {
  if (trace.rows.size() < 2) {
    throw std::invalid_argument(
        "seasmc::compute_metrics: need at least two samples");
  }
  const double t_end = trace.rows.back().t;
  if (steady_start < 0.0) steady_start = 0.5 * t_end;
  if (steady_start >= t_end) {
    throw std::invalid_argument(
        "seasmc::compute_metrics: steady_start is past the end of the run");
  }

  MetricsReport m;
  m.samples = trace.rows.size();
  m.dt = trace.dt;
  m.duration = t_end;
  m.steady_start = steady_start;
  m.ref_final = trace.rows.back().ref;
  m.output_final = trace.output(trace.rows.back());

  const std::vector<double> err = tracking_error(trace);
  m.tracking_rmse = rms(err);
  m.final_abs_error = std::abs(err.back());

  std::vector<double> err_s, d2_err_s, d4_err_s, sigma_s, tau_s_window;
  std::vector<double> tau_all;
  tau_all.reserve(trace.rows.size());
  for (std::size_t i = 0; i < trace.rows.size(); ++i) {
    const auto& row = trace.rows[i];
    tau_all.push_back(row.tau_m);
    if (row.t >= steady_start) {
      err_s.push_back(err[i]);
      d2_err_s.push_back(row.d2_true - row.d2_hat);
      d4_err_s.push_back(row.d4_true - row.d4_hat);
      sigma_s.push_back(row.sigma);
      tau_s_window.push_back(row.tau_m);
    }
  }
  if (err_s.empty()) {
    throw std::invalid_argument(
        "seasmc::compute_metrics: steady window holds no samples");
  }
  m.tracking_rmse_steady = rms(err_s);
  m.tracking_max_abs_steady = max_abs(err_s);
  m.d2_rmse_steady = rms(d2_err_s);
  m.d4_rmse_steady = rms(d4_err_s);
  m.sigma_rms_steady = rms(sigma_s);

  m.control_rms = rms(tau_all);
  m.peak_tau_m = max_abs(tau_all);
  if (tau_s_window.size() >= 2) {
    double acc = 0.0, tv = 0.0;
    for (std::size_t i = 1; i < tau_s_window.size(); ++i) {
      const double d = tau_s_window[i] - tau_s_window[i - 1];
      acc += d * d;
      tv += std::abs(d);
    }
    m.control_delta_rms =
        std::sqrt(acc / static_cast<double>(tau_s_window.size() - 1));
    m.control_total_variation = tv;
  }

  // Overshoot relative to the final reference, along the approach.
  const double y0 = trace.output(trace.rows.front());
  const double span = m.ref_final - y0;
  const double dir = span >= 0.0 ? 1.0 : -1.0;
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& row : trace.rows) {
    worst = std::max(worst, dir * (trace.output(row) - m.ref_final));
  }
  m.overshoot_abs = worst;
  // The fraction only means something when the reference actually moved.
  m.overshoot_frac = std::abs(span) > 1e-12 ? worst / std::abs(span) : 0.0;
  return m;
}

/**
 * @brief Discrete audit of the reaching condition.
 *
 * Between consecutive samples the true surface obeys
 * d(sigma)/dt = (feedforward error) - switching, with the switching value
 * held over the interval, so |sigma_true| must shrink whenever the held
 * switching pushes against the surface and dominates the feedforward
 * error with margin to spare for its within-interval drift.  Because the
 * estimate is also held across the interval, that drift is the drift of
 * the true feedforward, and the margin is sized from its sample-to-sample
 * variation.  The trace must resolve the closed-loop dynamics (per-step
 * surface moves small against the surface scale); on an undersampled log
 * the per-step move stops reflecting the within-step derivative and the
 * audit is meaningless.  Samples the sampled-data argument cannot speak
 * to are skipped, not flagged:
 *   - the surface is inside the band `layer` (with layer < 0 the band is
 *     sized from the trace as 3x a high quantile of the per-step moves),
 *   - the switching value is not sign-aligned with the surface,
 *   - dominance lacks margin: |sw| <= |beta_err| + 3x the local
 *     sample-to-sample variation of the true feedforward,
 *   - the surface moved further than |sw| + |beta_err| + margin allows in
 *     one step (reference discontinuities enter the surface directly;
 *     such steps are counted in `skipped_jumps`).
 * `settled` reports whether the last quarter of the window stays within
 * 10x the band: a healthy run contracts into the band, while an
 * under-sized gain leaves the surface wandering at the disturbance
 * scale, which is how a failed reaching phase is flagged even though
 * every pointwise dominance claim it makes may hold.
 */
struct ReachingScan {
  std::size_t checked = 0;
  std::size_t violations = 0;
  std::size_t skipped_jumps = 0;
  double layer = 0.0;
  double late_max_abs = 0.0;
  bool settled = false;
};

inline ReachingScan reaching_scan(const Trace& trace, double layer = -1.0,
                                  double t_start = 0.0) {
  if (trace.rows.size() < 2) {
    throw std::invalid_argument(
        "seasmc::reaching_scan: need at least two samples");
  }
  std::size_t begin = 0;
  while (begin < trace.rows.size() && trace.rows[begin].t < t_start) ++begin;
  if (begin + 1 >= trace.rows.size()) {
    throw std::invalid_argument(
        "seasmc::reaching_scan: window holds fewer than two samples");
  }
  const auto& rows = trace.rows;
  if (layer < 0.0) {
    std::vector<double> moves;
    moves.reserve(rows.size() - begin - 1);
    for (std::size_t i = begin + 1; i < rows.size(); ++i) {
      moves.push_back(std::abs(rows[i].sigma_true - rows[i - 1].sigma_true));
    }
    const std::size_t q99 = (99 * (moves.size() - 1)) / 100;
    std::nth_element(moves.begin(), moves.begin() + q99, moves.end());
    layer = 3.0 * moves[q99];
  }
  ReachingScan scan;
  scan.layer = layer;
  for (std::size_t i = begin; i + 1 < rows.size(); ++i) {
    const double st = rows[i].sigma_true;
    const double st_next = rows[i + 1].sigma_true;
    const double sw = rows[i].switching;
    const double be = std::abs(rows[i].beta_err);
    const double var_right = std::abs(rows[i + 1].beta_true -
                                      rows[i].beta_true);
    const double var_left =
        i > begin ? std::abs(rows[i].beta_true - rows[i - 1].beta_true)
                  : var_right;
    const double margin = 3.0 * std::max(var_left, var_right);
    const double dt = rows[i + 1].t - rows[i].t;
    if (std::abs(st_next - st) > dt * (std::abs(sw) + be + margin)) {
      ++scan.skipped_jumps;
      continue;
    }
    if (std::abs(st) <= layer) continue;
    if (sw * st <= 0.0) continue;
    if (!(std::abs(sw) > be + margin)) continue;
    ++scan.checked;
    if (std::abs(st_next) >= std::abs(st)) ++scan.violations;
  }
  for (std::size_t i = begin + 3 * (rows.size() - begin) / 4; i < rows.size();
       ++i) {
    scan.late_max_abs = std::max(scan.late_max_abs,
                                 std::abs(rows[i].sigma_true));
  }
  scan.settled = scan.late_max_abs <= 10.0 * layer;
  return scan;
}

}  // namespace seasmc
