#pragma once

#include <cctype>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "seasmc/sim.hpp"

namespace seasmc {

/// Parse or lookup failure in a scenario description.
class ScenarioError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/**
 * @brief A named simulation setup loaded from a text description.
 *
 * The format is line-oriented "key = value" with '#' comments.  Signals
 * are written as "<type> <args...>":
 *
 *   zero
 *   constant <value>
 *   step <value> [t_start]
 *   sine <amplitude> <freq_hz> [phase_rad] [offset]
 *   burst <rms> <cutoff_hz> <t_on> <t_off> <seed>
 *
 * steady_start feeds the metrics window; negative means "half the run".
 */
struct Scenario {
  std::string name;
  std::string description;
  SimSetup setup;
  double steady_start = -1.0;
};

namespace detail {

inline std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

inline double to_double(const std::string& text, const std::string& what) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(text, &pos);
    if (pos != text.size()) throw std::invalid_argument("trailing text");
    return v;
  } catch (const std::exception&) {
    throw ScenarioError("scenario: bad number '" + text + "' for " + what);
  }
}

inline int to_int(const std::string& text, const std::string& what) {
  try {
    std::size_t pos = 0;
    const int v = std::stoi(text, &pos);
    if (pos != text.size()) throw std::invalid_argument("trailing text");
    return v;
  } catch (const std::exception&) {
    throw ScenarioError("scenario: bad integer '" + text + "' for " + what);
  }
}

inline bool to_bool(const std::string& text, const std::string& what) {
  if (text == "true" || text == "on" || text == "1") return true;
  if (text == "false" || text == "off" || text == "0") return false;
  throw ScenarioError("scenario: bad boolean '" + text + "' for " + what);
}

}  // namespace detail

/// Parses the signal grammar documented on Scenario.
inline Signal parse_signal(const std::string& text) {
  std::istringstream in(detail::trim(text));
  std::string type;
  in >> type;
  std::vector<std::string> args;
  std::string tok;
  while (in >> tok) args.push_back(tok);
  auto arg = [&](std::size_t i) -> const std::string& {
    if (i >= args.size()) {
      throw ScenarioError("scenario: signal '" + text +
                          "' is missing arguments");
    }
    return args[i];
  };
  auto num = [&](std::size_t i) {
    return detail::to_double(arg(i), "signal '" + type + "'");
  };
  if (type == "zero") {
    if (!args.empty()) {
      throw ScenarioError("scenario: 'zero' takes no arguments");
    }
    return Signal::zero();
  }
  if (type == "constant") {
    if (args.size() != 1) {
      throw ScenarioError("scenario: 'constant' takes one argument");
    }
    return Signal::constant(num(0));
  }
  if (type == "step") {
    if (args.size() < 1 || args.size() > 2) {
      throw ScenarioError("scenario: 'step' takes value [t_start]");
    }
    return Signal::step(num(0), args.size() > 1 ? num(1) : 0.0);
  }
  if (type == "sine") {
    if (args.size() < 2 || args.size() > 4) {
      throw ScenarioError(
          "scenario: 'sine' takes amplitude freq_hz [phase] [offset]");
    }
    return Signal::sine(num(0), num(1), args.size() > 2 ? num(2) : 0.0,
                        args.size() > 3 ? num(3) : 0.0);
  }
  if (type == "burst") {
    if (args.size() != 5) {
      throw ScenarioError(
          "scenario: 'burst' takes rms cutoff_hz t_on t_off seed");
    }
    std::uint64_t seed = 0;
    try {
      std::size_t pos = 0;
      seed = std::stoull(arg(4), &pos);
      if (pos != arg(4).size()) throw std::invalid_argument("trailing text");
    } catch (const std::exception&) {
      throw ScenarioError("scenario: bad seed '" + arg(4) + "' for burst");
    }
    return Signal::random_burst(num(0), num(1), num(2), num(3), seed);
  }
  throw ScenarioError("scenario: unknown signal type '" + type + "'");
}

/// Parses one scenario from a stream; origin names it in error messages.
inline Scenario parse_scenario(std::istream& in,
                               const std::string& origin = "<stream>") {
  struct Entry {
    int line;
    std::string value;
  };
  std::map<std::string, Entry> kv;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw ScenarioError(origin + ":" + std::to_string(line_no) +
                          ": expected 'key = value'");
    }
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string value = detail::trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) {
      throw ScenarioError(origin + ":" + std::to_string(line_no) +
                          ": empty key or value");
    }
    if (!kv.emplace(key, Entry{line_no, value}).second) {
      throw ScenarioError(origin + ":" + std::to_string(line_no) +
                          ": duplicate key '" + key + "'");
    }
  }

  auto take = [&kv](const std::string& key) -> std::optional<std::string> {
    auto it = kv.find(key);
    if (it == kv.end()) return std::nullopt;
    std::string v = it->second.value;
    kv.erase(it);
    return v;
  };
  auto take_double = [&](const std::string& key, double fallback) {
    auto v = take(key);
    return v ? detail::to_double(*v, key) : fallback;
  };
  auto take_bool = [&](const std::string& key, bool fallback) {
    auto v = take(key);
    return v ? detail::to_bool(*v, key) : fallback;
  };
  auto take_signal = [&](const std::string& key) -> std::optional<Signal> {
    auto v = take(key);
    if (!v) return std::nullopt;
    return parse_signal(*v);
  };

  Scenario sc;
  sc.name = take("name").value_or("");
  sc.description = take("description").value_or("");
  if (sc.name.empty()) {
    throw ScenarioError(origin + ": missing required key 'name'");
  }

  SimSetup& s = sc.setup;
  if (auto mode = take("mode")) {
    if (*mode == "position") {
      s.mode = ControlMode::kPosition;
    } else if (*mode == "force") {
      s.mode = ControlMode::kForce;
    } else if (*mode == "open_loop") {
      s.mode = ControlMode::kOpenLoop;
    } else {
      throw ScenarioError(origin + ": unknown mode '" + *mode + "'");
    }
  }
  if (auto method = take("integrator")) {
    if (*method == "rk4") {
      s.method = Integrator::kRk4;
    } else if (*method == "euler") {
      s.method = Integrator::kEuler;
    } else {
      throw ScenarioError(origin + ": unknown integrator '" + *method + "'");
    }
  }
  s.dt = take_double("dt", s.dt);
  s.duration = take_double("duration", s.duration);
  s.encoder_ppr = [&] {
    auto v = take("encoder_ppr");
    return v ? detail::to_int(*v, "encoder_ppr") : s.encoder_ppr;
  }();
  s.divergence_limit = take_double("divergence_limit", s.divergence_limit);
  sc.steady_start = take_double("steady_start", sc.steady_start);

  // Plant.  A nominal value applies to the physical plant too unless the
  // physical key is given explicitly.
  const bool phys_Jm = kv.count("plant.Jm") > 0;
  const bool phys_Jl = kv.count("plant.Jl") > 0;
  const bool phys_k = kv.count("plant.k") > 0;
  const bool phys_bm = kv.count("plant.bm") > 0;
  const bool phys_bl = kv.count("plant.bl") > 0;
  s.plant.Jm_n = take_double("plant.Jm_n", s.plant.Jm_n);
  s.plant.Jl_n = take_double("plant.Jl_n", s.plant.Jl_n);
  s.plant.k_n = take_double("plant.k_n", s.plant.k_n);
  s.plant.bm_n = take_double("plant.bm_n", s.plant.bm_n);
  s.plant.bl_n = take_double("plant.bl_n", s.plant.bl_n);
  s.plant.Jm = phys_Jm ? take_double("plant.Jm", 0.0) : s.plant.Jm_n;
  s.plant.Jl = phys_Jl ? take_double("plant.Jl", 0.0) : s.plant.Jl_n;
  s.plant.k = phys_k ? take_double("plant.k", 0.0) : s.plant.k_n;
  s.plant.bm = phys_bm ? take_double("plant.bm", 0.0) : s.plant.bm_n;
  s.plant.bl = phys_bl ? take_double("plant.bl", 0.0) : s.plant.bl_n;

  // Disturbances.
  if (auto sig = take_signal("dist.tau_m")) s.disturbances.tau_m_ud = *sig;
  if (auto sig = take_signal("dist.tau_l")) s.disturbances.tau_l_ud = *sig;
  s.disturbances.ml_product =
      take_double("dist.ml_product", s.disturbances.ml_product);
  s.disturbances.gravity = take_double("dist.gravity", s.disturbances.gravity);

  // Environment: any env.* key instantiates one.
  {
    bool any_env = false;
    for (const auto& [key, entry] : kv) {
      (void)entry;
      if (key.rfind("env.", 0) == 0) {
        any_env = true;
        break;
      }
    }
    if (any_env) {
      EnvironmentModel env;
      if (auto contact = take("env.contact")) {
        if (*contact == "always") {
          env.contact = EnvironmentModel::Contact::kAlwaysEngaged;
        } else if (*contact == "unilateral") {
          env.contact = EnvironmentModel::Contact::kUnilateral;
        } else {
          throw ScenarioError(origin + ": unknown env.contact '" + *contact +
                              "'");
        }
      }
      env.Je = take_double("env.Je", env.Je);
      env.De = take_double("env.De", env.De);
      env.Ke = take_double("env.Ke", env.Ke);
      if (auto sig = take_signal("env.qe")) env.qe = *sig;
      if (auto sig = take_signal("env.tau_a")) env.tau_a = *sig;
      s.environment = env;
    }
  }

  // Observer.
  s.dob_enabled = take_bool("dob.enabled", s.dob_enabled);
  {
    const auto l1 = take("dob.L1");
    const auto l2 = take("dob.L2");
    const auto l3 = take("dob.L3");
    const auto bw = take("dob.bandwidth");
    const bool any_l = l1 || l2 || l3;
    if (any_l && bw) {
      throw ScenarioError(origin +
                          ": give either dob.bandwidth or dob.L1/L2/L3");
    }
    if (any_l) {
      if (!(l1 && l2 && l3)) {
        throw ScenarioError(origin + ": dob.L1/L2/L3 must all be given");
      }
      s.dob = DobGains{detail::to_double(*l1, "dob.L1"),
                       detail::to_double(*l2, "dob.L2"),
                       detail::to_double(*l3, "dob.L3")};
    } else if (bw) {
      s.dob = dob_gains_from_bandwidth(detail::to_double(*bw, "dob.bandwidth"));
    }
  }

  // Controller of the active mode.
  {
    const auto law = take("control.law");
    const auto pole = take("control.surface_pole");
    const auto rho = take("control.rho");
    const auto eps = take("control.epsilon");
    const auto accel_ff = take("control.accel_feedforward");
    const auto accel_bw = take("control.accel_filter_bw");
    const bool any_control =
        law || pole || rho || eps || accel_ff || accel_bw;
    if (s.mode == ControlMode::kOpenLoop && any_control) {
      throw ScenarioError(origin + ": control.* keys have no effect in "
                                   "open_loop mode");
    }
    auto parse_law = [&](const std::string& text) {
      if (text == "discontinuous") return SwitchingLaw::kDiscontinuous;
      if (text == "quasi") return SwitchingLaw::kQuasiContinuous;
      if (text == "continuous") return SwitchingLaw::kContinuous;
      throw ScenarioError(origin + ": unknown control.law '" + text + "'");
    };
    if (s.mode == ControlMode::kPosition) {
      if (law) s.position.law = parse_law(*law);
      if (pole) {
        s.position.surface_pole =
            detail::to_double(*pole, "control.surface_pole");
      }
      if (rho) s.position.rho = detail::to_double(*rho, "control.rho");
      if (eps) s.position.epsilon = detail::to_double(*eps, "control.epsilon");
      if (accel_ff || accel_bw) {
        throw ScenarioError(origin +
                            ": control.accel_* applies to force mode only");
      }
    } else if (s.mode == ControlMode::kForce) {
      if (law) s.force.law = parse_law(*law);
      if (pole) {
        s.force.surface_pole =
            detail::to_double(*pole, "control.surface_pole");
      }
      if (rho) s.force.rho = detail::to_double(*rho, "control.rho");
      if (eps) s.force.epsilon = detail::to_double(*eps, "control.epsilon");
      if (accel_ff) {
        s.force.accel_feedforward =
            detail::to_bool(*accel_ff, "control.accel_feedforward");
      }
      if (accel_bw) {
        s.force.accel_filter_bw =
            detail::to_double(*accel_bw, "control.accel_filter_bw");
      }
    }
  }

  if (auto sig = take_signal("reference")) s.reference = *sig;

  // Initial state.
  s.x0.q = take_double("x0.q", s.x0.q);
  s.x0.q_dot = take_double("x0.q_dot", s.x0.q_dot);
  s.x0.theta = take_double("x0.theta", s.x0.theta);
  s.x0.theta_dot = take_double("x0.theta_dot", s.x0.theta_dot);

  if (!kv.empty()) {
    const auto& first = *kv.begin();
    throw ScenarioError(origin + ":" + std::to_string(first.second.line) +
                        ": unknown key '" + first.first + "'");
  }

  s.validate();
  s.position.validate();
  s.force.validate();
  return sc;
}

inline Scenario load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ScenarioError("scenario: cannot open '" + path + "'");
  }
  return parse_scenario(in, path);
}

/**
 * @brief Resolves a scenario argument to a file path.
 *
 * Anything that names an existing file is used directly; otherwise each
 * search directory is tried for "<spec>.scenario" and "<spec>".
 */
inline std::optional<std::string> find_scenario_file(
    const std::string& spec, const std::vector<std::string>& search_dirs) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (fs::is_regular_file(spec, ec)) return spec;
  for (const auto& dir : search_dirs) {
    for (const std::string& candidate :
         {dir + "/" + spec + ".scenario", dir + "/" + spec}) {
      if (fs::is_regular_file(candidate, ec)) return candidate;
    }
  }
  return std::nullopt;
}

/// All *.scenario files under the search directories; first hit wins a name.
inline std::vector<std::pair<std::string, std::string>> list_scenario_files(
    const std::vector<std::string>& search_dirs) {
  namespace fs = std::filesystem;
  std::map<std::string, std::string> by_name;
  std::error_code ec;
  for (const auto& dir : search_dirs) {
    if (!fs::is_directory(dir, ec)) continue;
    for (const auto& entry : fs::directory_iterator(dir, ec)) {
      if (!entry.is_regular_file(ec)) continue;
      const fs::path p = entry.path();
      if (p.extension() != ".scenario") continue;
      by_name.emplace(p.stem().string(), p.string());
    }
  }
  return {by_name.begin(), by_name.end()};
}

}  // namespace seasmc
