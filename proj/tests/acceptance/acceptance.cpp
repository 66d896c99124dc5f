// Acceptance run: one PASS/FAIL line per criterion, exit status 0 iff all pass.

#include "flatbody/integrate.hpp"
#include "flatbody/stationary.hpp"
#include "test_support.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

using namespace flatbody;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

IntegratorConfig rk4(double dt, double t_end, int stride) {
  IntegratorConfig c;
  c.dt = dt;
  c.t_end = t_end;
  c.sample_stride = stride;
  return c;
}

Verdict bracket_oracle() {
  auto rng = test::rng_for(101);
  const auto start = std::chrono::steady_clock::now();
  double worst_rel = 0.0;
  double worst_abs = 0.0;
  int failures = 0;
  const int n = 1000;
  for (int i = 0; i < n; ++i) {
    const auto p = app::random_point(rng);
    const PhaseVector a = to_phase_vector(eom_closed_form(p.state, p.inertia, p.potential));
    const PhaseVector b = to_phase_vector(eom_bracket_oracle(p.state, p.inertia, p.potential));
    for (int k = 0; k < kPhaseDim; ++k) {
      const double diff = std::abs(a(k) - b(k));
      if (std::abs(b(k)) >= 1e-6) {
        worst_rel = std::max(worst_rel, diff / std::abs(b(k)));
        failures += diff > 1e-6 * std::abs(b(k));
      } else {
        worst_abs = std::max(worst_abs, diff);
        failures += diff > 1e-9;
      }
    }
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return {failures == 0 && secs < 10.0,
          fmt("%d states, max rel %.2e (tol 1e-6), max abs near zero %.2e (tol 1e-9), %.2f s", n,
              worst_rel, worst_abs, secs)};
}

Verdict energy_conservation() {
  const auto start = std::chrono::steady_clock::now();
  const CanonicalState s0 = app::bounded_fixture_state();
  const auto run = integrate(s0, rk4(1e-3, 10.0, 1), app::bounded_fixture_inertia(),
                             app::bounded_fixture_potential());
  const double h0 = run.samples.front().energy;
  double dh = 0.0;
  double dp = 0.0;
  for (const auto& s : run.samples) {
    dh = std::max(dh, std::abs(s.energy - h0) / std::abs(h0));
    dp = std::max(dp, std::abs(s.state.mom.p_theta - s0.mom.p_theta));
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return {run.completed() && dh <= 1e-6 && dp <= 1e-12 && secs < 5.0,
          fmt("|dH|/|H0| %.2e (tol 1e-6), p_theta drift %.2e (tol 1e-12), %.2f s", dh, dp, secs)};
}

Verdict legendre_duality() {
  auto rng = test::rng_for(103);
  double fi = 0.0;
  double iff = 0.0;
  double euler = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const auto p = app::random_point(rng);
    const auto& s = p.state.shape;
    const Vec7 m0 = to_vector(p.state.mom);
    fi = std::max(fi, (to_vector(legendre_forward(
                           s, legendre_inverse_isotropic(s, p.state.mom, p.inertia), p.inertia)) -
                       m0)
                          .cwiseAbs()
                          .maxCoeff());
    const VelocityCoords v = test::random_velocities(rng);
    const MomentumCoords m = legendre_forward(s, v, p.inertia);
    iff = std::max(iff, (to_vector(legendre_inverse_isotropic(s, m, p.inertia)) - to_vector(v))
                            .cwiseAbs()
                            .maxCoeff());
    euler = std::max(euler, test::rel_diff(to_vector(m).dot(to_vector(v)),
                                           2.0 * kinetic_energy_isotropic(s, v, p.inertia)));
  }
  return {fi <= 1e-12 && iff <= 1e-12 && euler <= 1e-10,
          fmt("fwd(inv) %.2e, inv(fwd) %.2e (tol 1e-12), Euler relation %.2e (tol 1e-10)", fi, iff,
              euler)};
}

Verdict energy_chain() {
  auto rng = test::rng_for(104);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const auto p = app::random_point(rng);
    const auto& s = p.state.shape;
    const VelocityCoords v = test::random_velocities(rng);
    const Mat3 phi_dot = placement_velocity(test::random_rotation(rng), s, v);
    const double trace = kinetic_energy_trace(phi_dot, p.inertia);
    worst = std::max({worst, test::rel_diff(kinetic_energy_velocities(s, v, p.inertia), trace),
                      test::rel_diff(kinetic_energy_isotropic(s, v, p.inertia), trace),
                      test::rel_diff(kinetic_energy_canonical(s, legendre_forward(s, v, p.inertia),
                                                              p.inertia),
                                     trace)});
    InertiaSpec aniso = p.inertia;
    aniso.J2 = test::uniform(rng, 0.5, 3.0);
    worst = std::max(worst, test::rel_diff(kinetic_energy_velocities(s, v, aniso),
                                           kinetic_energy_trace(phi_dot, aniso)));
  }
  return {worst <= 1e-10, fmt("max rel spread %.2e across trace/velocity/isotropic/canonical (tol 1e-10)", worst)};
}

Verdict stationary_fixed_point() {
  std::mt19937_64 rng(20240607);
  StationaryProblem problem = app::stationary_fixture_problem();
  const StationarySolution* sol = nullptr;
  StationaryOutcome outcome;
  int draws = 0;
  while (!sol && draws < 50) {
    ++draws;
    problem.s3 = test::uniform(rng, 0.5, 2.0);
    problem.p_theta = test::uniform(rng, -1.0, 1.0);
    outcome = solve_stationary(problem);
    sol = std::get_if<StationarySolution>(&outcome);
  }
  if (!sol) return {false, "no converged solve in 50 seeded draws"};
  const auto run = integrate(stationary_initial_state(*sol, problem, 0.0), rk4(1e-3, 10.0, 10),
                             problem.inertia, problem.potential);
  double drift = 0.0;
  for (const auto& s : run.samples) {
    drift = std::max({drift, std::abs(s.state.shape.lambda - sol->lambda_star),
                      std::abs(s.state.shape.mu - sol->mu_star),
                      std::abs(s.state.shape.rho - sol->rho_star),
                      std::abs(s.state.mom.s3 - problem.s3),
                      std::abs(s.state.mom.p_theta - problem.p_theta)});
  }
  const double root_err = std::abs(sol->rho_star - 0.5);
  return {run.completed() && sol->residual_norm <= 1e-10 && drift <= 1e-6 && root_err <= 1e-12,
          fmt("(s3, p_theta) = (%.4f, %.4f): residual %.2e (tol 1e-10), drift over t=10 %.2e "
              "(tol 1e-6), |rho* - 0.5| %.2e",
              problem.s3, problem.p_theta, sol->residual_norm, drift, root_err)};
}

Verdict stationary_reconstruction() {
  const StationaryProblem problem = app::stationary_fixture_problem();
  const StationaryOutcome outcome = solve_stationary(problem);
  const auto* sol = std::get_if<StationarySolution>(&outcome);
  if (!sol) return {false, "fixture did not converge"};
  auto rng = test::rng_for(106);
  const Rotation3 r0 = test::random_rotation(rng);
  const double theta0 = 0.4;
  const auto run = integrate(stationary_initial_state(*sol, problem, theta0, r0), rk4(1e-3, 10.0, 10),
                             problem.inertia, problem.potential);
  double placement = 0.0;
  double invariants = 0.0;
  double min_rate = std::numeric_limits<double>::infinity();
  const Vec3 k0 = deformation_invariants(green_tensor({sol->lambda_star, sol->mu_star, sol->rho_star, theta0}));
  for (const auto& s : run.samples) {
    const Mat3 closed = reconstruct_stationary_motion(*sol, r0, theta0, s.t);
    placement = std::max(placement, (closed - reconstruct_placement(s)).cwiseAbs().maxCoeff());
    invariants = std::max(invariants,
                          (deformation_invariants(closed.transpose() * closed) - k0).cwiseAbs().maxCoeff());
    const ShapeCoords at{sol->lambda_star, sol->mu_star, sol->rho_star, theta0 + sol->theta_dot * s.t};
    min_rate = std::min(min_rate, green_tensor_rate(at, sol->theta_dot).norm());
  }
  return {run.completed() && placement <= 1e-5 && invariants <= 1e-8 && min_rate > 0.0 &&
              sol->theta_dot != 0.0,
          fmt("placement diff %.2e (tol 1e-5), invariant drift %.2e (tol 1e-8), min |dG/dt| %.3f",
              placement, invariants, min_rate)};
}

Verdict kinematics_suite() {
  auto rng = test::rng_for(107);
  double roundtrip = 0.0;
  double spectral = 0.0;
  double kl = 0.0;
  double left = 0.0;
  double rate = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const auto p = app::random_point(rng);
    const auto& s = p.state.shape;
    const Mat3 phi = assemble_placement(test::random_rotation(rng), s);
    const TwoPolar tp = two_polar_decompose(phi);
    roundtrip = std::max(roundtrip, (assemble_placement(tp.attitude, tp.shape) - phi).cwiseAbs().maxCoeff());
    roundtrip = std::max({roundtrip, std::abs(tp.shape.lambda - s.lambda), std::abs(tp.shape.mu - s.mu),
                          std::abs(tp.shape.rho - s.rho), std::abs(tp.shape.theta - s.theta)});
    Vec3 sq(s.lambda * s.lambda, s.mu * s.mu, s.rho * s.rho);
    std::sort(sq.data(), sq.data() + 3, std::greater<>());
    spectral = std::max(spectral, (deformation_invariants(green_tensor(s)) - sq).cwiseAbs().maxCoeff());
    kl = std::max(kl, test::rel_diff(kirchhoff_love_parameter(phi), s.rho / (s.lambda * s.mu)));
    const Eigen::Matrix<double, 3, 2> rect = phi.leftCols<2>();
    left = std::max(left, (left_inverse(rect) * rect - Mat2::Identity()).cwiseAbs().maxCoeff());
    const double h = 1e-6;
    const double w = test::uniform(rng, -2.0, 2.0);
    ShapeCoords a = s;
    ShapeCoords b = s;
    a.theta += w * h;
    b.theta -= w * h;
    rate = std::max(rate, ((green_tensor(a) - green_tensor(b)) / (2 * h) - green_tensor_rate(s, w))
                              .cwiseAbs()
                              .maxCoeff());
  }
  return {roundtrip <= 1e-10 && spectral <= 1e-10 && kl <= 1e-12 && left <= 1e-12 && rate <= 1e-7,
          fmt("round-trip %.1e, invariants %.1e, ell %.1e, left inverse %.1e, dG/dt %.1e", roundtrip,
              spectral, kl, left, rate)};
}

Verdict gradient_checks() {
  const std::vector<PotentialSpec> specs = {
      {HarmonicPotential{1.0}, {1.0, 1.0}},
      {SeparatedInversePotential{1.0, 1.0}, {1.0, 8.0}},
      {SeparatedInversePotential{0.6, 2.4}, {2.0, 0.7}},
      {TraceInversePotential{1.5}, {0.5, 3.0}},
  };
  double worst = 0.0;
  long points = 0;
  for (const auto& spec : specs) {
    for (int i = 0; i < 10; ++i) {
      for (int j = 0; j < 10; ++j) {
        for (int k = 0; k < 10; ++k) {
          const Vec3 x(0.3 + 0.3 * i, 0.3 + 0.3 * j, 0.3 + 0.3 * k);
          const Vec3 g = potential_gradient(spec, x(0), x(1), x(2));
          for (int c = 0; c < 3; ++c) {
            Vec3 up = x;
            Vec3 dn = x;
            up(c) += 1e-6;
            dn(c) -= 1e-6;
            const double fd =
                (potential_value(spec, up(0), up(1), up(2)) - potential_value(spec, dn(0), dn(1), dn(2))) / 2e-6;
            worst = std::max(worst, test::rel_diff(fd, g(c)));
          }
          ++points;
        }
      }
    }
  }
  return {worst <= 1e-6, fmt("%ld grid points, 4 potential specs, max rel %.2e (tol 1e-6)", points, worst)};
}

Verdict convergence_order() {
  const CanonicalState s0 = app::bounded_fixture_state();
  const auto j = app::bounded_fixture_inertia();
  const auto v = app::bounded_fixture_potential();
  const double t = 2.0;
  const auto final_at = [&](double dt) {
    return to_phase_vector(integrate(s0, rk4(dt, t, 1000000), j, v).final_state);
  };
  const PhaseVector ref = final_at(2.5e-4);
  const double e1 = (final_at(0.05) - ref).norm();
  const double e2 = (final_at(0.025) - ref).norm();
  const double ratio = e1 / e2;
  return {ratio >= 12.0 && ratio <= 20.0,
          fmt("error(dt=0.05) %.2e, error(dt=0.025) %.2e, ratio %.2f (band [12, 20])", e1, e2, ratio)};
}

Verdict no_solution() {
  StationaryProblem p;
  p.s3 = 1.0;
  p.p_theta = 0.0;
  p.inertia = InertiaSpec::isotropic(1.0, 1.0);
  p.potential = {HarmonicPotential{1.0}, {1.0, 1.0}};
  const StationaryOutcome out = solve_stationary(p);
  if (const auto* ns = std::get_if<NoSolution>(&out)) {
    return {true, fmt("no-solution outcome (%s): %s", std::string(to_string(ns->reason)).c_str(),
                      ns->message.c_str())};
  }
  const auto& s = std::get<StationarySolution>(out);
  return {false, fmt("solver returned lambda = %.6g, mu = %.6g", s.lambda_star, s.mu_star)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria = {
      {"bracket-oracle equivalence", bracket_oracle},
      {"energy conservation", energy_conservation},
      {"Legendre duality", legendre_duality},
      {"energy-form chain", energy_chain},
      {"stationary fixed point", stationary_fixed_point},
      {"stationary reconstruction", stationary_reconstruction},
      {"kinematics suite", kinematics_suite},
      {"gradient checks", gradient_checks},
      {"order of convergence", convergence_order},
      {"no-solution detection", no_solution},
  };
  int failed = 0;
  int index = 0;
  for (const auto& [name, run] : criteria) {
    ++index;
    Verdict v;
    try {
      v = run();
    } catch (const std::exception& e) {
      v = {false, std::string("threw: ") + e.what()};
    }
    failed += !v.pass;
    std::printf("%s criterion %2d  %-28s %s\n", v.pass ? "PASS" : "FAIL", index, name, v.detail.c_str());
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
