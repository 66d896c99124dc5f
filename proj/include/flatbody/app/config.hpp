#pragma once

// JSON run configuration for the command-line front end.
//
// {
//   "inertia":       {"J1": 1, "J2": 1, "J3": 1},
//   "potential":     "HARMONIC(k=1);THICKNESS(a=1,b=1)"
//                    or {"flat": {"model": "HARMONIC", "k": 1}, "thickness": {"a": 1, "b": 1}},
//   "initial_state": {"lambda": .., "mu": .., "rho": .., "theta": ..,
//                     "p_lambda": .., "p_mu": .., "p_rho": .., "p_theta": ..,
//                     "s1": .., "s2": .., "s3": .., "attitude": [9 numbers, row-major]},
//   "stationary":    {"s3": .., "p_theta": .., "guess": [λ0, μ0, ϱ0], "theta0": ..},
//   "integrator":    {"method": "RK4_FIXED" | "RK45_ADAPTIVE", "dt": .., "t_end": ..,
//                     "sample_stride": .., "degeneracy_epsilon": ..,
//                     "rel_tol": .., "abs_tol": .., "dt_min": .., "dt_max": ..},
//   "output":        {"trajectory": "trajectory.csv", "summary": "summary.json",
//                     "stationary": "stationary.json"},
//   "sweep":         {"parameter": "initial_state.s3", "values": [..]}
// }
//
// Unknown keys are rejected at every level. When "stationary" is present and
// "initial_state" is absent, simulate starts from the stationary solution.

#include "flatbody/integrate.hpp"
#include "flatbody/stationary.hpp"

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace flatbody::app {

struct StationarySection {
  double s3 = 0.0;
  double p_theta = 0.0;
  std::array<double, 3> guess{1.5, 0.5, 1.0};
  double theta0 = 0.0;
};

struct OutputSection {
  std::string trajectory = "trajectory.csv";
  std::string summary = "summary.json";
  std::string stationary = "stationary.json";
};

struct SweepSection {
  std::string parameter;  // dotted path into the config document
  std::vector<double> values;
};

struct RunConfig {
  InertiaSpec inertia;
  PotentialSpec potential;
  std::optional<CanonicalState> initial_state;
  std::optional<StationarySection> stationary;
  IntegratorConfig integrator;
  bool has_integrator = false;
  OutputSection output;
  std::optional<SweepSection> sweep;

  StationaryProblem stationary_problem() const;
};

/// Throws Error(ErrorKind::Config) with a message naming the offending key.
RunConfig parse_run_config(const nlohmann::json& doc);
nlohmann::json load_json_file(const std::filesystem::path& path);

/// Sets the number at a dotted path ("initial_state.s3"), which must exist.
void set_json_path(nlohmann::json& doc, const std::string& dotted, double value);

}  // namespace flatbody::app
