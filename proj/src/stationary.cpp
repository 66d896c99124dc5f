#include "flatbody/stationary.hpp"

#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <optional>

namespace flatbody {

std::string_view to_string(NoSolutionReason reason) noexcept {
  switch (reason) {
    case NoSolutionReason::IterationCap: return "iteration_cap";
    case NoSolutionReason::Stalled: return "stalled";
    case NoSolutionReason::DegeneracyTrap: return "degeneracy_trap";
    case NoSolutionReason::LeftDomain: return "left_domain";
  }
  return "unknown";
}

void StationaryProblem::validate() const {
  if (!std::isfinite(s3) || !std::isfinite(p_theta)) {
    throw Error(ErrorKind::Domain, "s3 and p_theta must be finite");
  }
  inertia.validate();
  if (!inertia.is_isotropic()) {
    throw Error(ErrorKind::Misuse, "stationary solutions are defined for J1 == J2 only");
  }
  potential.validate();
  for (double g : guess) {
    if (!std::isfinite(g) || g <= 0.0) {
      throw Error(ErrorKind::Domain, "stationary guess must be positive");
    }
  }
  require_non_degenerate(guess[0], guess[1], "stationary guess");
}

Vec3 stationary_residual(double lambda, double mu, double rho, const StationaryProblem& problem) {
  if (!(lambda > 0.0) || !(mu > 0.0) || !(rho > 0.0)) {
    throw Error(ErrorKind::Domain, "stationary_residual requires positive stretches");
  }
  require_non_degenerate(lambda, mu, "stationary_residual");
  const double j = problem.inertia.J1;
  const double l2 = lambda * lambda;
  const double m2 = mu * mu;
  const double gap = l2 - m2;
  const double denom = j * gap * gap * gap;
  const double planar = problem.s3 * problem.s3 + problem.p_theta * problem.p_theta;
  const double cross = problem.s3 * problem.p_theta;

  const Vec2 dv = flat_potential_gradient(problem.potential.flat, lambda, mu);
  const double rhs_lambda =
      (lambda * (l2 + 3.0 * m2) * planar - 2.0 * mu * (m2 + 3.0 * l2) * cross) / denom;
  const double rhs_mu =
      (2.0 * lambda * (l2 + 3.0 * m2) * cross - mu * (m2 + 3.0 * l2) * planar) / denom;
  return {dv(0) - rhs_lambda, dv(1) - rhs_mu,
          thickness_potential_derivative(problem.potential.thickness, rho)};
}

namespace {

double solve_thickness(const ThicknessPotential& th, double guess) {
  const auto f = [&](double rho) { return thickness_potential_derivative(th, rho); };
  // dV_ϱ/dϱ is increasing on (0, ∞); widen until it changes sign.
  double lo = guess;
  double hi = guess;
  while (f(lo) > 0.0) lo *= 0.5;
  while (f(hi) < 0.0) hi *= 2.0;
  if (f(lo) == 0.0) return lo;
  if (f(hi) == 0.0) return hi;
  std::uintmax_t max_iter = 200;
  const auto [a, b] = boost::math::tools::toms748_solve(
      f, lo, hi, boost::math::tools::eps_tolerance<double>(), max_iter);
  double best = 0.5 * (a + b);
  for (double candidate : {a, b}) {
    if (std::abs(f(candidate)) < std::abs(f(best))) best = candidate;
  }
  return best;
}

// Keeps Newton iterates inside the chart: both stretches positive, away from
// λ = μ, and away from the collapse μ/λ → 0 where spurious boundary roots live.
constexpr double kCollapseRatio = 1e-6;

enum class PointStatus { Ok, Degenerate, OutOfChart };

PointStatus classify(double lambda, double mu) {
  if (!(lambda > 0.0) || !(mu > 0.0) || !std::isfinite(lambda) || !std::isfinite(mu)) {
    return PointStatus::OutOfChart;
  }
  if (std::min(lambda, mu) < kCollapseRatio * std::max(lambda, mu)) return PointStatus::OutOfChart;
  if (is_degenerate(lambda, mu)) return PointStatus::Degenerate;
  return PointStatus::Ok;
}

std::optional<Vec2> planar_residual(const Vec2& x, double rho, const StationaryProblem& p) {
  if (classify(x(0), x(1)) != PointStatus::Ok) return std::nullopt;
  const Vec3 r = stationary_residual(x(0), x(1), rho, p);
  if (!r.head<2>().allFinite()) return std::nullopt;
  return Vec2(r.head<2>());
}

}  // namespace

StationaryOutcome solve_stationary(const StationaryProblem& problem,
                                   const StationaryOptions& options) {
  problem.validate();
  const double rho = solve_thickness(problem.potential.thickness, problem.guess[2]);

  Vec2 x(problem.guess[0], problem.guess[1]);
  std::optional<Vec2> r = planar_residual(x, rho, problem);
  if (!r) {
    return NoSolution{NoSolutionReason::LeftDomain, "initial guess is outside the chart",
                      0.0, x(0), x(1), 0};
  }
  double norm = r->lpNorm<Eigen::Infinity>();

  auto make_failure = [&](NoSolutionReason why, std::string message, int iter) {
    return NoSolution{why, std::move(message), norm, x(0), x(1), iter};
  };

  int iter = 0;
  bool converged = norm <= options.tolerance;
  int polish_left = 2;
  while (iter < options.max_iterations && (!converged || polish_left > 0)) {
    if (converged) --polish_left;
    ++iter;
    Mat2 jac;
    bool jac_ok = true;
    for (int k = 0; k < 2; ++k) {
      Vec2 xp = x;
      const double h = options.jacobian_step * std::max(1.0, std::abs(x(k)));
      xp(k) += h;
      const auto rp = planar_residual(xp, rho, problem);
      if (!rp) {
        xp(k) = x(k) - h;
        const auto rm = planar_residual(xp, rho, problem);
        if (!rm) {
          jac_ok = false;
          break;
        }
        jac.col(k) = (*r - *rm) / h;
      } else {
        jac.col(k) = (*rp - *r) / h;
      }
    }
    if (!jac_ok) {
      if (converged) break;
      return make_failure(NoSolutionReason::DegeneracyTrap,
                          "Jacobian could not be evaluated next to the iterate", iter);
    }
    const Eigen::FullPivLU<Mat2> lu(jac);
    if (!lu.isInvertible()) {
      if (converged) break;
      return make_failure(NoSolutionReason::Stalled, "singular Jacobian", iter);
    }
    const Vec2 delta = lu.solve(-*r);

    double alpha = 1.0;
    bool improved = false;
    PointStatus last_status = PointStatus::Ok;
    for (int halving = 0; halving < 40; ++halving, alpha *= options.backtrack_factor) {
      const Vec2 candidate = x + alpha * delta;
      last_status = classify(candidate(0), candidate(1));
      const auto rc = planar_residual(candidate, rho, problem);
      if (rc && rc->lpNorm<Eigen::Infinity>() < norm) {
        x = candidate;
        r = rc;
        norm = rc->lpNorm<Eigen::Infinity>();
        improved = true;
        break;
      }
    }
    if (!improved) {
      if (converged) break;
      if (last_status == PointStatus::Degenerate) {
        return make_failure(NoSolutionReason::DegeneracyTrap,
                            "Newton direction leads into lambda = mu", iter);
      }
      return make_failure(NoSolutionReason::Stalled,
                          "line search could not reduce the residual", iter);
    }
    // An accepted iterate creeping towards the chart boundary means the
    // residual is only decreasing along a collapse, not towards a root.
    const double ratio = std::min(x(0), x(1)) / std::max(x(0), x(1));
    if (ratio < 10.0 * kCollapseRatio) {
      return make_failure(NoSolutionReason::LeftDomain,
                          "iterates collapse towards a vanishing stretch", iter);
    }
    if (!converged && norm <= options.tolerance) converged = true;
  }

  if (!converged) {
    return make_failure(NoSolutionReason::IterationCap,
                        "no convergence within " + std::to_string(options.max_iterations) +
                            " iterations",
                        iter);
  }

  StationarySolution sol;
  sol.lambda_star = x(0);
  sol.mu_star = x(1);
  sol.rho_star = rho;
  sol.iterations = iter;
  if (sol.lambda_star < sol.mu_star && problem.potential.flat_symmetric()) {
    std::swap(sol.lambda_star, sol.mu_star);
    sol.swapped = true;
  }
  sol.residual_norm =
      stationary_residual(sol.lambda_star, sol.mu_star, sol.rho_star, problem).lpNorm<Eigen::Infinity>();

  MomentumCoords mom;
  mom.s3 = problem.s3;
  mom.p_theta = problem.p_theta;
  const VelocityCoords vel = legendre_inverse_isotropic(
      {sol.lambda_star, sol.mu_star, sol.rho_star, 0.0}, mom, problem.inertia);
  sol.omega3 = vel.omega3;
  sol.theta_dot = vel.theta_dot;
  return sol;
}

CanonicalState stationary_initial_state(const StationarySolution& sol,
                                        const StationaryProblem& problem, double theta0,
                                        const Rotation3& attitude0) {
  CanonicalState state;
  state.shape = {sol.lambda_star, sol.mu_star, sol.rho_star, theta0};
  state.shape.validate();
  state.mom.s3 = problem.s3;
  state.mom.p_theta = problem.p_theta;
  state.attitude = attitude0;
  return state;
}

Mat3 reconstruct_stationary_motion(const StationarySolution& sol, const Rotation3& attitude0,
                                   double theta0, double t) {
  const Eigen::DiagonalMatrix<double, 3> d(sol.lambda_star, sol.mu_star, sol.rho_star);
  const Mat3 spatial = spin_exponential(Vec3(0.0, 0.0, sol.omega3), t);
  // e^{−ϑt} = U(θ̇t)⁻¹
  const Mat3 material = material_rotation(sol.theta_dot * t).matrix();
  return attitude0.matrix() * spatial * d * material * material_rotation(theta0).matrix();
}

Mat3 reconstruct_stationary_motion_conjugated(const StationarySolution& sol,
                                              const Rotation3& attitude0, double theta0,
                                              double t) {
  const Mat3 phi0 =
      assemble_placement(attitude0, {sol.lambda_star, sol.mu_star, sol.rho_star, theta0});
  const Mat3 u0 = material_rotation(theta0).inverse();
  // spin_matrix(v) conjugated by Q is spin_matrix(Q v); ϑ = spin_matrix((0, 0, −θ̇)).
  const Vec3 omega_hat = attitude0.matrix() * Vec3(0.0, 0.0, sol.omega3);
  const Vec3 vartheta_hat = u0 * Vec3(0.0, 0.0, -sol.theta_dot);
  return spin_exponential(omega_hat, t) * phi0 * spin_exponential(vartheta_hat, -t);
}

}  // namespace flatbody
