#include "flatbody/app/commands.hpp"

#include "flatbody/app/check_suite.hpp"
#include "flatbody/app/config.hpp"
#include "flatbody/app/output.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <future>

namespace flatbody::app {

using nlohmann::json;

namespace {

void report_error(std::ostream& err, const std::string& message) {
  err << "flatbody: error: " << message << '\n';
}

void ensure_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::Config, "cannot create output directory '" + dir.string() + "'");
}

struct RunOutcome {
  int code = kExitOk;
  std::string message;
  std::optional<IntegrationResult> result;
};

// Setup failures (config, precondition, no stationary root) come back as
// codes; only the integration itself produces a result.
RunOutcome run_simulation(const RunConfig& cfg) {
  RunOutcome outcome;
  if (!cfg.has_integrator) {
    outcome.code = kExitConfig;
    outcome.message = "config error at 'integrator': missing";
    return outcome;
  }
  CanonicalState start;
  if (cfg.initial_state) {
    start = *cfg.initial_state;
  } else if (cfg.stationary) {
    const StationaryProblem problem = cfg.stationary_problem();
    const StationaryOutcome solved = solve_stationary(problem);
    const auto* sol = std::get_if<StationarySolution>(&solved);
    if (!sol) {
      outcome.code = kExitNoSolution;
      outcome.message = "no stationary solution: " + std::get<NoSolution>(solved).message;
      return outcome;
    }
    start = stationary_initial_state(*sol, problem, cfg.stationary->theta0);
  } else {
    outcome.code = kExitConfig;
    outcome.message = "config error at 'initial_state': missing (or give 'stationary')";
    return outcome;
  }

  try {
    cfg.inertia.validate();
    if (!cfg.inertia.is_isotropic()) {
      throw Error(ErrorKind::Misuse, "simulate requires J1 == J2 (isotropic in-plane inertia)");
    }
    start.shape.validate();
    require_non_degenerate(start.shape.lambda, start.shape.mu, "initial_state");
  } catch (const Error& e) {
    outcome.code = kExitConfig;
    outcome.message = e.what();
    return outcome;
  }
  outcome.result = integrate(start, cfg.integrator, cfg.inertia, cfg.potential);
  outcome.code = outcome.result->completed() ? kExitOk : kExitFlagged;
  outcome.message = outcome.result->reason;
  return outcome;
}

void write_run(const RunOutcome& run, const RunConfig& cfg, const std::filesystem::path& dir,
               const std::string& trajectory_name, const std::string& summary_name) {
  std::ofstream csv(dir / trajectory_name);
  if (!csv) throw Error(ErrorKind::Config, "cannot write '" + (dir / trajectory_name).string() + "'");
  write_trajectory_csv(csv, run.result->samples);
  write_json_file(dir / summary_name, simulation_summary(*run.result, cfg));
}

// "summary.json" -> "summary_<tag>.json"
std::string tagged(const std::string& name, const std::string& suffix) {
  const auto dot = name.rfind('.');
  const std::string tag = "_" + suffix;
  return dot == std::string::npos ? name + tag : name.substr(0, dot) + tag + name.substr(dot);
}

int simulate_sweep(const json& doc, const RunConfig& base, const CommandOptions& options,
                   std::ostream& out, std::ostream& err) {
  const SweepSection& sweep = *base.sweep;
  std::vector<std::future<std::pair<RunConfig, RunOutcome>>> jobs;
  jobs.reserve(sweep.values.size());
  for (double value : sweep.values) {
    json variant = doc;
    set_json_path(variant, sweep.parameter, value);
    variant.erase("sweep");
    jobs.push_back(std::async(std::launch::async, [variant = std::move(variant)] {
      RunConfig cfg = parse_run_config(variant);
      RunOutcome run;
      try {
        run = run_simulation(cfg);
      } catch (const Error& e) {
        run.code = e.kind() == ErrorKind::Config ? kExitConfig : kExitFlagged;
        run.message = e.what();
      }
      return std::pair{std::move(cfg), std::move(run)};
    }));
  }

  json index = {{"parameter", sweep.parameter}, {"runs", json::array()}};
  int worst = kExitOk;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    auto [cfg, run] = jobs[i].get();
    json entry = {{"index", i}, {"value", sweep.values[i]}, {"exit_code", run.code}};
    if (run.result) {
      const std::string traj = tagged(base.output.trajectory, std::to_string(i));
      const std::string summ = tagged(base.output.summary, std::to_string(i));
      write_run(run, cfg, options.out_dir, traj, summ);
      entry["trajectory"] = traj;
      entry["summary"] = summ;
      entry["termination"] = std::string(to_string(run.result->termination));
    }
    if (!run.message.empty()) entry["message"] = run.message;
    if (run.code != kExitOk) report_error(err, "sweep run " + std::to_string(i) + ": " + run.message);
    worst = std::max(worst, run.code);
    index["runs"].push_back(entry);
  }
  write_json_file(options.out_dir / tagged(base.output.summary, "sweep"), index);
  if (!options.quiet) out << index.dump(2) << '\n';
  return worst;
}

}  // namespace

int cmd_simulate(const CommandOptions& options, std::ostream& out, std::ostream& err) {
  try {
    const json doc = load_json_file(options.config_path);
    const RunConfig cfg = parse_run_config(doc);
    ensure_dir(options.out_dir);
    if (cfg.sweep) return simulate_sweep(doc, cfg, options, out, err);

    const RunOutcome run = run_simulation(cfg);
    if (!run.result) {
      report_error(err, run.message);
      return run.code;
    }
    write_run(run, cfg, options.out_dir, cfg.output.trajectory, cfg.output.summary);
    if (run.code != kExitOk) report_error(err, "integration stopped early: " + run.message);
    if (!options.quiet) {
      out << simulation_summary(*run.result, cfg).dump(2) << '\n';
    }
    return run.code;
  } catch (const Error& e) {
    report_error(err, e.what());
    return e.kind() == ErrorKind::Config ? kExitConfig : kExitFlagged;
  }
}

int cmd_stationary(const CommandOptions& options, std::ostream& out, std::ostream& err) {
  try {
    const RunConfig cfg = parse_run_config(load_json_file(options.config_path));
    StationaryProblem problem;
    try {
      problem = cfg.stationary_problem();
      problem.validate();
    } catch (const Error& e) {
      report_error(err, e.what());
      return kExitConfig;
    }
    const StationaryOutcome outcome = solve_stationary(problem);
    const json doc = stationary_to_json(outcome, problem);
    ensure_dir(options.out_dir);
    write_json_file(options.out_dir / cfg.output.stationary, doc);
    if (!options.quiet) out << doc.dump(2) << '\n';
    if (std::holds_alternative<NoSolution>(outcome)) {
      report_error(err, "no stationary solution: " + std::get<NoSolution>(outcome).message);
      return kExitNoSolution;
    }
    return kExitOk;
  } catch (const Error& e) {
    report_error(err, e.what());
    return e.kind() == ErrorKind::Config ? kExitConfig : kExitFlagged;
  }
}

int cmd_check(const CommandOptions& options, std::ostream& out, std::ostream& err,
              double perturb_eom) {
  CheckOptions check;
  if (options.seed) check.seed = *options.seed;
  detail::set_eom_perturbation(perturb_eom);
  const auto results = run_check_suite(check);
  detail::set_eom_perturbation(0.0);
  const auto failed = std::count_if(results.begin(), results.end(),
                                    [](const CheckResult& r) { return !r.passed; });
  if (!options.quiet || failed > 0) print_check_table(out, results);
  if (failed > 0) {
    report_error(err, std::to_string(failed) + " of " + std::to_string(results.size()) +
                          " checks failed");
    return kExitConfig;
  }
  if (!options.quiet) out << "all " << results.size() << " checks passed (seed " << check.seed << ")\n";
  return kExitOk;
}

int cmd_decompose(const std::vector<std::string>& matrix_args, const CommandOptions&,
                  std::ostream& out, std::ostream& err) {
  if (matrix_args.size() != 9) {
    report_error(err, "decompose expects 9 numbers (row-major), got " +
                          std::to_string(matrix_args.size()));
    return kExitConfig;
  }
  Mat3 phi;
  for (int i = 0; i < 9; ++i) {
    const std::string& s = matrix_args[static_cast<std::size_t>(i)];
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != s.size() || !std::isfinite(v)) {
      report_error(err, "decompose: '" + s + "' is not a finite number");
      return kExitConfig;
    }
    phi(i / 3, i % 3) = v;
  }
  try {
    const TwoPolar tp = two_polar_decompose(phi);
    const double ell = kirchhoff_love_parameter(phi);
    const Vec3 k = deformation_invariants(phi.transpose() * phi);
    out << decomposition_to_json(tp, ell, k).dump(2) << '\n';
    return kExitOk;
  } catch (const Error& e) {
    report_error(err, std::string(to_string(e.kind())) + ": " + e.what());
    return kExitFlagged;
  }
}

}  // namespace flatbody::app
