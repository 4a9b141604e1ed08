#pragma once

#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace seasmc {

/// What the reference signal and the tracked output mean in a trace.
enum class ControlMode {
  kPosition,  // reference = link angle, output = q
  kForce,     // reference = spring torque, output = tau_s
  kOpenLoop,  // reference = commanded motor torque, no feedback
};

inline const char* to_string(ControlMode m) {
  switch (m) {
    case ControlMode::kPosition: return "position";
    case ControlMode::kForce: return "force";
    case ControlMode::kOpenLoop: return "open_loop";
  }
  throw std::logic_error("seasmc::to_string: unknown ControlMode");
}

/**
 * @brief One logged control sample.
 *
 * True plant quantities sit next to the measurements and estimates the
 * controller actually used, so estimation errors can be formed offline
 * without re-running the model.  All fields are doubles (engaged uses
 * 0/1) so rows can be addressed uniformly by column name.
 */
struct TraceRow {
  double t = 0.0;
  // True plant state.
  double q = 0.0, q_dot = 0.0, theta = 0.0, theta_dot = 0.0;
  // State as seen by the observer/controller (encoder quantization).
  double q_meas = 0.0, q_dot_meas = 0.0;
  double theta_meas = 0.0, theta_dot_meas = 0.0;
  // Reference and applied torque.
  double ref = 0.0, ref_dot = 0.0;
  double tau_m = 0.0;
  // True spring torque, resolved environment torque, contact flag.
  double tau_s = 0.0, tau_env = 0.0, engaged = 0.0;
  // Controller internals.
  double sigma = 0.0, switching = 0.0, tracking_integral = 0.0;
  double beta_hat = 0.0, beta_true = 0.0, beta_err = 0.0;
  // Sliding surface evaluated with the true disturbance channels.
  double sigma_true = 0.0;
  // Acceleration-level disturbance estimates and ground truth.
  double d2_hat = 0.0, d2_dot_hat = 0.0, d2_ddot_hat = 0.0, d4_hat = 0.0;
  double d2_true = 0.0, d2_dot_true = 0.0, d2_ddot_true = 0.0;
  double d4_true = 0.0;
  // State-space disturbance channels (link row and motor row).
  double tau_dis2_hat = 0.0, tau_dis2_dot_hat = 0.0;
  double tau_dis2_ddot_hat = 0.0;
  double tau_dis4_hat = 0.0, tau_dis4_dot_hat = 0.0;
  double tau_dis4_ddot_hat = 0.0;
  double tau_dis2_true = 0.0, tau_dis4_true = 0.0;
};

namespace detail {
struct TraceColumn {
  const char* name;
  double TraceRow::* field;
};

/// Single source of truth for column order, used by the CSV writer and
/// by name-based column extraction.
inline const std::vector<TraceColumn>& trace_columns() {
  static const std::vector<TraceColumn> cols = {
      {"t", &TraceRow::t},
      {"q", &TraceRow::q},
      {"q_dot", &TraceRow::q_dot},
      {"theta", &TraceRow::theta},
      {"theta_dot", &TraceRow::theta_dot},
      {"q_meas", &TraceRow::q_meas},
      {"q_dot_meas", &TraceRow::q_dot_meas},
      {"theta_meas", &TraceRow::theta_meas},
      {"theta_dot_meas", &TraceRow::theta_dot_meas},
      {"ref", &TraceRow::ref},
      {"ref_dot", &TraceRow::ref_dot},
      {"tau_m", &TraceRow::tau_m},
      {"tau_s", &TraceRow::tau_s},
      {"tau_env", &TraceRow::tau_env},
      {"engaged", &TraceRow::engaged},
      {"sigma", &TraceRow::sigma},
      {"switching", &TraceRow::switching},
      {"tracking_integral", &TraceRow::tracking_integral},
      {"beta_hat", &TraceRow::beta_hat},
      {"beta_true", &TraceRow::beta_true},
      {"beta_err", &TraceRow::beta_err},
      {"sigma_true", &TraceRow::sigma_true},
      {"d2_hat", &TraceRow::d2_hat},
      {"d2_dot_hat", &TraceRow::d2_dot_hat},
      {"d2_ddot_hat", &TraceRow::d2_ddot_hat},
      {"d4_hat", &TraceRow::d4_hat},
      {"d2_true", &TraceRow::d2_true},
      {"d2_dot_true", &TraceRow::d2_dot_true},
      {"d2_ddot_true", &TraceRow::d2_ddot_true},
      {"d4_true", &TraceRow::d4_true},
      {"tau_dis2_hat", &TraceRow::tau_dis2_hat},
      {"tau_dis2_dot_hat", &TraceRow::tau_dis2_dot_hat},
      {"tau_dis2_ddot_hat", &TraceRow::tau_dis2_ddot_hat},
      {"tau_dis4_hat", &TraceRow::tau_dis4_hat},
      {"tau_dis4_dot_hat", &TraceRow::tau_dis4_dot_hat},
      {"tau_dis4_ddot_hat", &TraceRow::tau_dis4_ddot_hat},
      {"tau_dis2_true", &TraceRow::tau_dis2_true},
      {"tau_dis4_true", &TraceRow::tau_dis4_true},
  };
  return cols;
}
}  // namespace detail

/**
 * @brief Full log of one simulation run.
 *
 * CSV output round-trips every double exactly (%.17g) and carries no
 * run-dependent metadata, so repeated runs of the same setup are
 * byte-identical.
 */
struct Trace {
  ControlMode mode = ControlMode::kPosition;
  double dt = 0.0;
  std::vector<TraceRow> rows;

  /// Extracts one column by name.
  std::vector<double> column(std::string_view name) const {
    for (const auto& col : detail::trace_columns()) {
      if (name == col.name) {
        std::vector<double> out;
        out.reserve(rows.size());
        for (const auto& row : rows) out.push_back(row.*(col.field));
        return out;
      }
    }
    throw std::invalid_argument("seasmc::Trace::column: unknown column '" +
                                std::string(name) + "'");
  }

  /// Tracked output of the active mode: q, tau_s, or theta_dot.
  double output(const TraceRow& row) const {
    switch (mode) {
      case ControlMode::kPosition: return row.q;
      case ControlMode::kForce: return row.tau_s;
      case ControlMode::kOpenLoop: return row.theta_dot;
    }
    throw std::logic_error("seasmc::Trace::output: unknown ControlMode");
  }

  static std::string csv_header() {
    std::string header;
    for (const auto& col : detail::trace_columns()) {
      if (!header.empty()) header += ',';
      header += col.name;
    }
    return header;
  }

  void write_csv(std::ostream& os) const {
    os << csv_header() << '\n';
    char buf[32];
    for (const auto& row : rows) {
      bool first = true;
      std::string line;
      for (const auto& col : detail::trace_columns()) {
        if (!first) line += ',';
        first = false;
        std::snprintf(buf, sizeof(buf), "%.17g", row.*(col.field));
        line += buf;
      }
      line += '\n';
      os << line;
    }
  }
};

}  // namespace seasmc
