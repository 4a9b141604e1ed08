// Command-line front end: replay scenarios, sweep controller parameters,
// and run the built-in verification suite.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "seasmc/seasmc.hpp"

namespace {

using nlohmann::json;

std::vector<std::string> scenario_search_dirs() {
  std::vector<std::string> dirs;
  if (const char* env = std::getenv("SEA_SMC_SCENARIO_PATH")) {
    std::string item;
    std::istringstream in(env);
    while (std::getline(in, item, ':')) {
      if (!item.empty()) dirs.push_back(item);
    }
  }
  dirs.push_back("scenarios");
#ifdef SEASMC_BUNDLED_SCENARIO_DIR
  dirs.push_back(SEASMC_BUNDLED_SCENARIO_DIR);
#endif
  return dirs;
}

seasmc::Scenario resolve_scenario(const std::string& spec) {
  if (auto path = seasmc::find_scenario_file(spec, scenario_search_dirs())) {
    return seasmc::load_scenario_file(*path);
  }
  for (const auto& [name, text] : seasmc::bundled_scenarios()) {
    if (name == spec) {
      std::istringstream in{std::string(text)};
      return seasmc::parse_scenario(in, "bundled:" + spec);
    }
  }
  throw seasmc::ScenarioError("seasmc: scenario '" + spec +
                              "' not found (searched the scenario path and "
                              "the bundled set; try 'list-scenarios')");
}

json metrics_to_json(const seasmc::MetricsReport& m) {
  return json{{"samples", m.samples},
              {"dt", m.dt},
              {"duration", m.duration},
              {"steady_start", m.steady_start},
              {"tracking_rmse", m.tracking_rmse},
              {"tracking_rmse_steady", m.tracking_rmse_steady},
              {"tracking_max_abs_steady", m.tracking_max_abs_steady},
              {"final_abs_error", m.final_abs_error},
              {"overshoot_abs", m.overshoot_abs},
              {"overshoot_frac", m.overshoot_frac},
              {"d2_rmse_steady", m.d2_rmse_steady},
              {"d4_rmse_steady", m.d4_rmse_steady},
              {"sigma_rms_steady", m.sigma_rms_steady},
              {"control_rms", m.control_rms},
              {"control_delta_rms", m.control_delta_rms},
              {"control_total_variation", m.control_total_variation},
              {"peak_tau_m", m.peak_tau_m},
              {"ref_final", m.ref_final},
              {"output_final", m.output_final}};
}

void print_metrics(const seasmc::Scenario& sc,
                   const seasmc::MetricsReport& m) {
  std::printf("scenario              %s\n", sc.name.c_str());
  if (!sc.description.empty()) {
    std::printf("description           %s\n", sc.description.c_str());
  }
  std::printf("mode                  %s\n", seasmc::to_string(sc.setup.mode));
  std::printf("samples               %zu (dt = %g s, %.4g s total)\n",
              m.samples, m.dt, m.duration);
  std::printf("steady window from    %.4g s\n", m.steady_start);
  std::printf("tracking RMSE         %.6g (steady %.6g)\n", m.tracking_rmse,
              m.tracking_rmse_steady);
  std::printf("steady max |error|    %.6g\n", m.tracking_max_abs_steady);
  std::printf("final |error|         %.6g\n", m.final_abs_error);
  if (m.overshoot_frac != 0.0) {
    std::printf("overshoot             %.6g (%.3g%% of the final step)\n",
                m.overshoot_abs, 100.0 * m.overshoot_frac);
  } else {
    std::printf("overshoot             %.6g\n", m.overshoot_abs);
  }
  std::printf("sigma RMS (steady)    %.6g\n", m.sigma_rms_steady);
  std::printf("motor torque RMS      %.6g N m (peak %.6g N m)\n",
              m.control_rms, m.peak_tau_m);
  std::printf("torque delta RMS      %.6g N m\n", m.control_delta_rms);
  std::printf("disturbance RMSE      d2 %.6g, d4 %.6g (steady)\n",
              m.d2_rmse_steady, m.d4_rmse_steady);
}

void write_file(const std::string& path,
                const std::function<void(std::ostream&)>& writer) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("seasmc: cannot open '" + path +
                             "' for writing");
  }
  writer(out);
  if (!out) {
    throw std::runtime_error("seasmc: failed while writing '" + path + "'");
  }
}

/// Applies one `key = value` sweep override to a loaded scenario.
void apply_override(seasmc::Scenario& sc, const std::string& key,
                    double value) {
  auto& setup = sc.setup;
  const bool position = setup.mode == seasmc::ControlMode::kPosition;
  if (key == "control.rho") {
    (position ? setup.position.rho : setup.force.rho) = value;
  } else if (key == "control.epsilon") {
    (position ? setup.position.epsilon : setup.force.epsilon) = value;
  } else if (key == "control.surface_pole") {
    (position ? setup.position.surface_pole : setup.force.surface_pole) =
        value;
  } else if (key == "dob.bandwidth") {
    setup.dob = seasmc::dob_gains_from_bandwidth(value);
  } else if (key == "dt") {
    setup.dt = value;
  } else if (key == "duration") {
    setup.duration = value;
  } else if (key == "encoder_ppr") {
    setup.encoder_ppr = static_cast<int>(value);
  } else {
    throw seasmc::ScenarioError(
        "seasmc: unsupported sweep parameter '" + key +
        "' (use control.rho, control.epsilon, control.surface_pole, "
        "dob.bandwidth, dt, duration, or encoder_ppr)");
  }
  if (setup.mode == seasmc::ControlMode::kOpenLoop &&
      key.rfind("control.", 0) == 0) {
    throw seasmc::ScenarioError(
        "seasmc: cannot sweep controller parameters in an open-loop "
        "scenario");
  }
}

int cmd_run(const std::string& spec, const std::string& out_path,
            const std::string& summary_path, std::optional<double> dt,
            std::optional<double> duration,
            std::optional<double> steady_start, bool quiet) {
  seasmc::Scenario sc = resolve_scenario(spec);
  if (dt) sc.setup.dt = *dt;
  if (duration) sc.setup.duration = *duration;
  if (steady_start) sc.steady_start = *steady_start;
  // A shortened run can strand the scenario's steady-state marker past the
  // end; fall back to the default window instead of rejecting the run.
  if (sc.steady_start >= sc.setup.duration) sc.steady_start = -1.0;
  sc.setup.validate();

  const seasmc::Trace trace = seasmc::simulate(sc.setup);
  const seasmc::MetricsReport metrics =
      seasmc::compute_metrics(trace, sc.steady_start);

  if (!out_path.empty()) {
    write_file(out_path, [&](std::ostream& os) { trace.write_csv(os); });
  }
  if (!summary_path.empty()) {
    json j{{"scenario", sc.name},
           {"description", sc.description},
           {"mode", seasmc::to_string(sc.setup.mode)},
           {"metrics", metrics_to_json(metrics)}};
    if (!out_path.empty()) j["trace_csv"] = out_path;
    write_file(summary_path,
               [&](std::ostream& os) { os << j.dump(2) << "\n"; });
  }
  if (!quiet) {
    print_metrics(sc, metrics);
    if (!out_path.empty()) {
      std::printf("trace written to      %s\n", out_path.c_str());
    }
    if (!summary_path.empty()) {
      std::printf("summary written to    %s\n", summary_path.c_str());
    }
  }
  return 0;
}

int cmd_sweep(const std::string& spec, const std::string& key,
              const std::vector<double>& values, const std::string& out_path) {
  const char* columns[] = {"tracking_rmse_steady", "tracking_max_abs_steady",
                           "sigma_rms_steady",     "control_rms",
                           "control_delta_rms",    "peak_tau_m"};
  std::ostringstream csv;
  csv << key;
  for (const char* c : columns) csv << "," << c;
  csv << "\n";
  std::printf("%-14s %13s %13s %13s %13s %13s %13s\n", key.c_str(), columns[0],
              columns[1], columns[2], columns[3], columns[4], columns[5]);
  for (double value : values) {
    seasmc::Scenario sc = resolve_scenario(spec);
    apply_override(sc, key, value);
    sc.setup.validate();
    const seasmc::MetricsReport m =
        seasmc::compute_metrics(seasmc::simulate(sc.setup), sc.steady_start);
    const double row[] = {m.tracking_rmse_steady, m.tracking_max_abs_steady,
                          m.sigma_rms_steady,     m.control_rms,
                          m.control_delta_rms,    m.peak_tau_m};
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    csv << buf;
    std::printf("%-14.6g", value);
    for (double v : row) {
      std::snprintf(buf, sizeof(buf), ",%.17g", v);
      csv << buf;
      std::printf(" %13.6g", v);
    }
    csv << "\n";
    std::printf("\n");
  }
  if (!out_path.empty()) {
    write_file(out_path, [&](std::ostream& os) { os << csv.str(); });
    std::printf("table written to %s\n", out_path.c_str());
  }
  return 0;
}

int cmd_list() {
  struct Entry {
    std::string name, source, description;
  };
  std::vector<Entry> entries;
  auto seen = [&](const std::string& name) {
    for (const auto& e : entries) {
      if (e.name == name) return true;
    }
    return false;
  };
  for (const auto& [name, path] :
       seasmc::list_scenario_files(scenario_search_dirs())) {
    std::string description;
    try {
      description = seasmc::load_scenario_file(path).description;
    } catch (const std::exception& e) {
      description = std::string("(unreadable: ") + e.what() + ")";
    }
    entries.push_back({name, path, description});
  }
  for (const auto& [name, text] : seasmc::bundled_scenarios()) {
    const std::string n{name};
    if (seen(n)) continue;
    std::istringstream in{std::string(text)};
    entries.push_back(
        {n, "(bundled)", seasmc::parse_scenario(in, n).description});
  }
  for (const auto& e : entries) {
    std::printf("%-10s %s\n", e.name.c_str(), e.description.c_str());
    std::printf("%-10s   from %s\n", "", e.source.c_str());
  }
  return 0;
}

int cmd_verify() {
  const std::vector<seasmc::CheckResult> results =
      seasmc::run_verification_suite();
  int failed = 0;
  for (const auto& r : results) {
    std::printf("[%s] %2d. %s: %s\n", r.passed ? "PASS" : "FAIL", r.id,
                r.name.c_str(), r.detail.c_str());
    std::fflush(stdout);
    if (!r.passed) ++failed;
  }
  std::printf("%zu/%zu checks passed\n", results.size() - failed,
              results.size());
  return failed == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Series elastic actuator force/position control simulator"};
  app.require_subcommand(1);

  // run
  std::string run_spec, run_out, run_summary;
  double run_dt = 0.0, run_duration = 0.0, run_steady = 0.0;
  bool run_quiet = false;
  auto* run = app.add_subcommand(
      "run", "Simulate a scenario and report tracking metrics");
  run->add_option("scenario", run_spec,
                  "Scenario name or path to a .scenario file")
      ->required();
  run->add_option("--out", run_out, "Write the full trace as CSV");
  run->add_option("--summary", run_summary, "Write the metrics as JSON");
  auto* opt_dt =
      run->add_option("--dt", run_dt, "Override the sample period [s]");
  auto* opt_dur =
      run->add_option("--duration", run_duration, "Override the run length [s]");
  auto* opt_steady = run->add_option(
      "--steady-start", run_steady,
      "Start of the steady-state metrics window [s]");
  run->add_flag("--quiet", run_quiet, "Suppress the stdout report");

  // sweep
  std::string sweep_spec, sweep_key, sweep_out;
  std::vector<double> sweep_values;
  auto* sweep = app.add_subcommand(
      "sweep", "Re-run a scenario across values of one parameter");
  sweep->add_option("scenario", sweep_spec,
                    "Scenario name or path to a .scenario file")
      ->required();
  sweep->add_option("--param", sweep_key, "Parameter to sweep")->required();
  sweep->add_option("--values", sweep_values, "Comma-separated values")
      ->required()
      ->delimiter(',');
  sweep->add_option("--out", sweep_out, "Write the result table as CSV");

  // list-scenarios
  app.add_subcommand("list-scenarios",
                     "List scenarios found on the search path");

  // verify
  app.add_subcommand("verify",
                     "Run the built-in verification suite (slow)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (run->parsed()) {
      return cmd_run(run_spec, run_out, run_summary,
                     *opt_dt ? std::optional<double>(run_dt) : std::nullopt,
                     *opt_dur ? std::optional<double>(run_duration)
                              : std::nullopt,
                     *opt_steady ? std::optional<double>(run_steady)
                                 : std::nullopt,
                     run_quiet);
    }
    if (sweep->parsed()) {
      return cmd_sweep(sweep_spec, sweep_key, sweep_values, sweep_out);
    }
    if (app.get_subcommand("list-scenarios")->parsed()) return cmd_list();
    if (app.get_subcommand("verify")->parsed()) return cmd_verify();
  } catch (const seasmc::DivergenceError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 2;
}
