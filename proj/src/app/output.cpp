#include "flatbody/app/output.hpp"

#include <cstdio>
#include <fstream>

namespace flatbody::app {

using nlohmann::json;

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_trajectory_csv(std::ostream& out, const std::vector<TrajectorySample>& samples) {
  out << kTrajectoryHeader << '\n';
  for (const auto& s : samples) {
    const auto& sh = s.state.shape;
    const auto& m = s.state.mom;
    const double row[] = {s.t,       sh.lambda, sh.mu,    sh.rho,  sh.theta,
                          m.p_lambda, m.p_mu,   m.p_rho,  m.p_theta, m.s1,
                          m.s2,      m.s3,      s.energy, s.invariants(0), s.invariants(1),
                          s.invariants(2)};
    bool first = true;
    for (double v : row) {
      if (!first) out << ',';
      out << format_double(v);
      first = false;
    }
    out << '\n';
  }
}

json matrix_to_json(const Mat3& m) {
  json a = json::array();
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) a.push_back(m(i, j));
  }
  return a;
}

json state_to_json(const CanonicalState& state) {
  const auto& sh = state.shape;
  const auto& m = state.mom;
  json j = {{"lambda", sh.lambda}, {"mu", sh.mu},       {"rho", sh.rho},
            {"theta", sh.theta},   {"p_lambda", m.p_lambda}, {"p_mu", m.p_mu},
            {"p_rho", m.p_rho},    {"p_theta", m.p_theta}, {"s1", m.s1},
            {"s2", m.s2},          {"s3", m.s3}};
  if (state.attitude) j["attitude"] = matrix_to_json(state.attitude->matrix());
  return j;
}

json report_to_json(const ConservationReport& r) {
  return {{"max_rel_energy_drift", r.max_rel_energy_drift},
          {"max_abs_p_theta_drift", r.max_abs_p_theta_drift},
          {"min_degeneracy_gap", r.min_degeneracy_gap},
          {"attitude_orthogonality_max_defect", r.attitude_orthogonality_max_defect},
          {"max_invariant_drift", r.max_invariant_drift}};
}

json simulation_summary(const IntegrationResult& result, const RunConfig& config) {
  json j;
  j["termination"] = std::string(to_string(result.termination));
  j["reason"] = result.reason;
  j["completed"] = result.completed();
  j["t_final"] = result.t_final;
  j["accepted_steps"] = result.accepted_steps;
  j["rejected_steps"] = result.rejected_steps;
  j["samples"] = result.samples.size();
  j["final_state"] = state_to_json(result.final_state);
  j["conservation"] = report_to_json(result.report);
  if (!result.samples.empty()) {
    j["initial_energy"] = result.samples.front().energy;
    j["final_energy"] = result.samples.back().energy;
  }
  j["inertia"] = {{"J1", config.inertia.J1}, {"J2", config.inertia.J2}, {"J3", config.inertia.J3}};
  j["potential"] = config.potential.to_string();
  j["integrator"] = {{"method", std::string(to_string(config.integrator.method))},
                     {"dt", config.integrator.dt},
                     {"t_end", config.integrator.t_end}};
  return j;
}

json stationary_to_json(const StationaryOutcome& outcome, const StationaryProblem& problem) {
  json j;
  j["problem"] = {{"s3", problem.s3},
                  {"p_theta", problem.p_theta},
                  {"potential", problem.potential.to_string()},
                  {"guess", problem.guess}};
  if (const auto* sol = std::get_if<StationarySolution>(&outcome)) {
    j["status"] = "found";
    j["lambda_star"] = sol->lambda_star;
    j["mu_star"] = sol->mu_star;
    j["rho_star"] = sol->rho_star;
    j["omega3"] = sol->omega3;
    j["theta_dot"] = sol->theta_dot;
    j["residual_norm"] = sol->residual_norm;
    j["iterations"] = sol->iterations;
    j["swapped"] = sol->swapped;
  } else {
    const auto& ns = std::get<NoSolution>(outcome);
    j["status"] = "no_solution";
    j["reason"] = std::string(to_string(ns.reason));
    j["message"] = ns.message;
    j["best_residual_norm"] = ns.best_residual_norm;
    j["last_lambda"] = ns.last_lambda;
    j["last_mu"] = ns.last_mu;
    j["iterations"] = ns.iterations;
  }
  return j;
}

json decomposition_to_json(const TwoPolar& tp, double kl_parameter, const Vec3& invariants) {
  return {{"attitude", matrix_to_json(tp.attitude.matrix())},
          {"lambda", tp.shape.lambda},
          {"mu", tp.shape.mu},
          {"rho", tp.shape.rho},
          {"theta", tp.shape.theta},
          {"kirchhoff_love", kl_parameter},
          {"invariants", {invariants(0), invariants(1), invariants(2)}}};
}

void write_json_file(const std::filesystem::path& path, const json& doc) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::Config, "cannot write '" + path.string() + "'");
  out << doc.dump(2) << '\n';
}

}  // namespace flatbody::app
