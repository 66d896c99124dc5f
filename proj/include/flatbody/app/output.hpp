#pragma once

// Serialization of trajectories and run summaries. Matrices are written
// row-major; floating values carry 17 significant digits.

#include "flatbody/app/config.hpp"

#include <json.hpp>

#include <ostream>
#include <string>

namespace flatbody::app {

inline constexpr const char* kTrajectoryHeader =
    "t,lambda,mu,rho,theta,p_lambda,p_mu,p_rho,p_theta,s1,s2,s3,energy,K1,K2,K3";

std::string format_double(double v);

void write_trajectory_csv(std::ostream& out, const std::vector<TrajectorySample>& samples);

nlohmann::json matrix_to_json(const Mat3& m);
nlohmann::json state_to_json(const CanonicalState& state);
nlohmann::json report_to_json(const ConservationReport& report);

/// Summary of one simulate run, see schemas/summary.schema.json.
nlohmann::json simulation_summary(const IntegrationResult& result, const RunConfig& config);

/// Found solution or structured no-solution report, see
/// schemas/stationary.schema.json.
nlohmann::json stationary_to_json(const StationaryOutcome& outcome, const StationaryProblem& problem);

nlohmann::json decomposition_to_json(const TwoPolar& tp, double kl_parameter, const Vec3& invariants);

/// Writes `doc` with 2-space indentation and a trailing newline.
void write_json_file(const std::filesystem::path& path, const nlohmann::json& doc);

}  // namespace flatbody::app
