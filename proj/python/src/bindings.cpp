#include "flatbody/app/check_suite.hpp"
#include "flatbody/app/config.hpp"
#include "flatbody/app/output.hpp"
#include "flatbody/integrate.hpp"
#include "flatbody/stationary.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace flatbody;
using nlohmann::json;

namespace {

// JSON crosses the boundary as text; the Python side wraps it with json.loads/dumps.
app::RunConfig config_from_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::Config, std::string("config is not valid JSON: ") + e.what());
  }
  return app::parse_run_config(doc);
}

CanonicalState state_from(const PhaseVector& x) { return state_from_phase_vector(x); }

InertiaSpec inertia_from(double j, double j3) { return InertiaSpec::isotropic(j, j3); }

Eigen::MatrixXd trajectory_matrix(const std::vector<TrajectorySample>& samples) {
  Eigen::MatrixXd m(static_cast<Eigen::Index>(samples.size()), 16);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& s = samples[i];
    const auto r = static_cast<Eigen::Index>(i);
    m(r, 0) = s.t;
    m.block<1, kPhaseDim>(r, 1) = to_phase_vector(s.state).transpose();
    m(r, 12) = s.energy;
    m.block<1, 3>(r, 13) = s.invariants.transpose();
  }
  return m;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Native core of flatbody";

  py::register_exception<Error>(m, "FlatbodyError", PyExc_ValueError);

  py::dict index;
  const char* names[kPhaseDim] = {"lambda", "mu",    "rho", "theta", "p_lambda", "p_mu",
                                  "p_rho",  "p_theta", "s1", "s2",   "s3"};
  for (int i = 0; i < kPhaseDim; ++i) index[names[i]] = i;
  m.attr("PHASE_INDEX") = index;
  m.attr("TRAJECTORY_COLUMNS") = std::string(app::kTrajectoryHeader);

  m.def(
      "decompose",
      [](const Mat3& phi) {
        const TwoPolar tp = two_polar_decompose(phi);
        return app::decomposition_to_json(tp, kirchhoff_love_parameter(phi),
                                          deformation_invariants(phi.transpose() * phi))
            .dump();
      },
      py::arg("placement"));

  m.def(
      "assemble_placement",
      [](const Mat3& attitude, double lambda, double mu, double rho, double theta) {
        return assemble_placement(Rotation3(attitude), {lambda, mu, rho, theta});
      },
      py::arg("attitude"), py::arg("lambda_"), py::arg("mu"), py::arg("rho"), py::arg("theta"));

  m.def(
      "hamiltonian",
      [](const PhaseVector& x, double j, double j3, const std::string& potential) {
        return hamiltonian(state_from(x), inertia_from(j, j3), PotentialSpec::parse(potential));
      },
      py::arg("phase"), py::arg("J"), py::arg("J3"), py::arg("potential"));

  m.def(
      "eom",
      [](const PhaseVector& x, double j, double j3, const std::string& potential) {
        return to_phase_vector(eom_closed_form(state_from(x), inertia_from(j, j3),
                                               PotentialSpec::parse(potential)));
      },
      py::arg("phase"), py::arg("J"), py::arg("J3"), py::arg("potential"));

  m.def(
      "eom_oracle",
      [](const PhaseVector& x, double j, double j3, const std::string& potential) {
        return to_phase_vector(eom_bracket_oracle(state_from(x), inertia_from(j, j3),
                                                  PotentialSpec::parse(potential)));
      },
      py::arg("phase"), py::arg("J"), py::arg("J3"), py::arg("potential"));

  m.def(
      "simulate",
      [](const std::string& config_text) {
        const app::RunConfig cfg = config_from_text(config_text);
        if (!cfg.initial_state) throw Error(ErrorKind::Config, "config error at 'initial_state': missing");
        IntegrationResult result;
        {
          py::gil_scoped_release release;
          result = integrate(*cfg.initial_state, cfg.integrator, cfg.inertia, cfg.potential);
        }
        return py::make_tuple(app::simulation_summary(result, cfg).dump(),
                              trajectory_matrix(result.samples));
      },
      py::arg("config_json"));

  m.def(
      "solve_stationary",
      [](const std::string& config_text) {
        const app::RunConfig cfg = config_from_text(config_text);
        const StationaryProblem problem = cfg.stationary_problem();
        return app::stationary_to_json(solve_stationary(problem), problem).dump();
      },
      py::arg("config_json"));

  m.def(
      "run_checks",
      [](std::uint64_t seed) {
        app::CheckOptions options;
        options.seed = seed;
        py::list rows;
        for (const auto& r : app::run_check_suite(options)) {
          py::dict row;
          row["name"] = r.name;
          row["passed"] = r.passed;
          row["max_error"] = r.max_error;
          row["tolerance"] = r.tolerance;
          row["detail"] = r.detail;
          rows.append(row);
        }
        return rows;
      },
      py::arg("seed") = app::CheckOptions{}.seed);
}
