#pragma once

// Stationary ellipses: motions with constant stretches (λ, μ, ϱ) and
// constant angular velocities on the branch ω1 = ω2 = 0, where ω3 and θ̇
// are constant. The deformation tensors rotate uniformly while the
// invariants stay fixed.

#include "flatbody/hamiltonian.hpp"

#include <array>
#include <string>
#include <variant>

namespace flatbody {

struct StationaryProblem {
  double s3 = 0.0;
  double p_theta = 0.0;
  InertiaSpec inertia;
  PotentialSpec potential;
  std::array<double, 3> guess{1.5, 0.5, 1.0};  // (λ₀, μ₀, ϱ₀)

  void validate() const;
};

struct StationarySolution {
  double lambda_star = 0.0;
  double mu_star = 0.0;
  double rho_star = 0.0;
  double omega3 = 0.0;
  double theta_dot = 0.0;
  double residual_norm = 0.0;  // ‖residual‖∞
  int iterations = 0;
  bool swapped = false;  // remapped from a λ < μ root
};

enum class NoSolutionReason { IterationCap, Stalled, DegeneracyTrap, LeftDomain };

std::string_view to_string(NoSolutionReason reason) noexcept;

struct NoSolution {
  NoSolutionReason reason = NoSolutionReason::IterationCap;
  std::string message;
  double best_residual_norm = 0.0;
  double last_lambda = 0.0;
  double last_mu = 0.0;
  int iterations = 0;
};

using StationaryOutcome = std::variant<StationarySolution, NoSolution>;

struct StationaryOptions {
  double tolerance = 1e-10;  // required ‖residual‖∞
  int max_iterations = 60;
  double backtrack_factor = 0.5;
  double jacobian_step = 1e-7;  // relative forward-difference step
};

/// (LHS − RHS) of the two planar balance equations and dV_ϱ/dϱ, for the
/// reduced state s1 = s2 = pλ = pμ = pϱ = 0.
Vec3 stationary_residual(double lambda, double mu, double rho, const StationaryProblem& problem);

/// ϱ-equation first (bracketed root of dV_ϱ/dϱ), then damped Newton on
/// (λ, μ) with a forward-difference Jacobian.
StationaryOutcome solve_stationary(const StationaryProblem& problem,
                                   const StationaryOptions& options = {});

/// Canonical state of the stationary motion: s1 = s2 = pλ = pμ = pϱ = 0,
/// (s3, pθ) from the problem, attitude R0.
CanonicalState stationary_initial_state(const StationarySolution& sol,
                                        const StationaryProblem& problem, double theta0,
                                        const Rotation3& attitude0 = Rotation3::identity());

/// Φ(t) = R0 e^{ωt} D e^{−ϑt} U(θ0)⁻¹ with constant ω = (0, 0, ω3) and ϑ
/// from θ̇.
Mat3 reconstruct_stationary_motion(const StationarySolution& sol, const Rotation3& attitude0,
                                   double theta0, double t);

/// Equivalent form e^{ω̂t} Φ0 e^{−ϑ̂t} with ω̂ = R0 ω R0⁻¹ and ϑ̂ = U0 ϑ U0⁻¹.
Mat3 reconstruct_stationary_motion_conjugated(const StationarySolution& sol,
                                              const Rotation3& attitude0, double theta0,
                                              double t);

}  // namespace flatbody
