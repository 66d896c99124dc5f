#include "flatbody/app/check_suite.hpp"

#include <Eigen/Geometry>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>

namespace flatbody::app {

namespace {

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

Rotation3 random_rotation(std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  Eigen::Quaterniond q(n(rng), n(rng), n(rng), n(rng));
  q.normalize();
  return Rotation3::nearest(q.toRotationMatrix());
}

PotentialSpec random_potential(std::mt19937_64& rng) {
  PotentialSpec v;
  switch (std::uniform_int_distribution<int>(0, 2)(rng)) {
    case 0: v.flat = HarmonicPotential{uniform(rng, 0.5, 3.0)}; break;
    case 1: v.flat = SeparatedInversePotential{uniform(rng, 0.5, 3.0), uniform(rng, 0.5, 3.0)}; break;
    default: v.flat = TraceInversePotential{uniform(rng, 0.5, 3.0)}; break;
  }
  v.thickness = {uniform(rng, 0.5, 3.0), uniform(rng, 0.5, 3.0)};
  return v;
}

// |a − b| relative to |b|; below 1e-6 in magnitude an absolute 1e-9 maps
// onto the same 1e-6 scale.
double mixed_error(double a, double b) {
  const double diff = std::abs(a - b);
  return std::abs(b) >= 1e-6 ? diff / std::abs(b) : diff * 1e3;
}

double rel_error(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

CheckResult finish(std::string name, double max_error, double tolerance, std::string detail = {}) {
  CheckResult r;
  r.name = std::move(name);
  r.max_error = max_error;
  r.tolerance = tolerance;
  r.passed = std::isfinite(max_error) && max_error <= tolerance;
  r.detail = std::move(detail);
  return r;
}

VelocityCoords random_velocities(std::mt19937_64& rng) {
  VelocityCoords v;
  v.omega1 = uniform(rng, -2.0, 2.0);
  v.omega2 = uniform(rng, -2.0, 2.0);
  v.omega3 = uniform(rng, -2.0, 2.0);
  v.theta_dot = uniform(rng, -2.0, 2.0);
  v.lambda_dot = uniform(rng, -2.0, 2.0);
  v.mu_dot = uniform(rng, -2.0, 2.0);
  v.rho_dot = uniform(rng, -2.0, 2.0);
  return v;
}

CheckResult check_bracket_oracle(const CheckOptions& opt) {
  std::mt19937_64 rng(opt.seed);
  double worst = 0.0;
  for (int n = 0; n < opt.samples; ++n) {
    const RandomPoint p = random_point(rng);
    const PhaseVector a = to_phase_vector(eom_closed_form(p.state, p.inertia, p.potential));
    const PhaseVector b = to_phase_vector(eom_bracket_oracle(p.state, p.inertia, p.potential));
    for (int i = 0; i < kPhaseDim; ++i) worst = std::max(worst, mixed_error(a(i), b(i)));
  }
  return finish("bracket_oracle_equivalence", worst, 1e-6,
                std::to_string(opt.samples) + " random states");
}

CheckResult check_legendre_duality(const CheckOptions& opt) {
  std::mt19937_64 rng(opt.seed + 1);
  double worst = 0.0;
  for (int n = 0; n < opt.samples; ++n) {
    const RandomPoint p = random_point(rng);
    const ShapeCoords& sh = p.state.shape;
    const Vec7 m0 = to_vector(p.state.mom);
    const Vec7 m1 = to_vector(
        legendre_forward(sh, legendre_inverse_isotropic(sh, p.state.mom, p.inertia), p.inertia));
    const VelocityCoords v = random_velocities(rng);
    const Vec7 v0 = to_vector(v);
    const Vec7 v1 =
        to_vector(legendre_inverse_isotropic(sh, legendre_forward(sh, v, p.inertia), p.inertia));
    for (int i = 0; i < 7; ++i) {
      worst = std::max(worst, std::abs(m1(i) - m0(i)) / std::max(1.0, std::abs(m0(i))));
      worst = std::max(worst, std::abs(v1(i) - v0(i)) / std::max(1.0, std::abs(v0(i))));
    }
  }
  return finish("legendre_duality", worst, 1e-12);
}

CheckResult check_euler_relation(const CheckOptions& opt) {
  std::mt19937_64 rng(opt.seed + 2);
  double worst = 0.0;
  for (int n = 0; n < opt.samples; ++n) {
    const RandomPoint p = random_point(rng);
    const VelocityCoords v = random_velocities(rng);
    const double pv = to_vector(legendre_forward(p.state.shape, v, p.inertia)).dot(to_vector(v));
    const double t2 = 2.0 * kinetic_energy_velocities(p.state.shape, v, p.inertia);
    worst = std::max(worst, rel_error(pv, t2));
  }
  return finish("euler_relation", worst, 1e-10);
}

CheckResult check_energy_chain(const CheckOptions& opt) {
  std::mt19937_64 rng(opt.seed + 3);
  double worst = 0.0;
  for (int n = 0; n < opt.samples; ++n) {
    const RandomPoint p = random_point(rng);
    const Rotation3 r = random_rotation(rng);
    const VelocityCoords v = random_velocities(rng);
    const ShapeCoords& sh = p.state.shape;
    const double trace = kinetic_energy_trace(placement_velocity(r, sh, v), p.inertia);
    const double vel = kinetic_energy_velocities(sh, v, p.inertia);
    const double iso = kinetic_energy_isotropic(sh, v, p.inertia);
    const double can = kinetic_energy_canonical(sh, legendre_forward(sh, v, p.inertia), p.inertia);
    worst = std::max({worst, rel_error(vel, trace), rel_error(iso, trace), rel_error(can, trace)});

    InertiaSpec aniso = p.inertia;
    aniso.J2 = uniform(rng, 0.5, 3.0);
    const double trace_a = kinetic_energy_trace(placement_velocity(r, sh, v), aniso);
    worst = std::max(worst, rel_error(kinetic_energy_velocities(sh, v, aniso), trace_a));
  }
  return finish("energy_form_chain", worst, 1e-10);
}

CheckResult check_potential_gradients() {
  const std::vector<PotentialSpec> specs = {
      {HarmonicPotential{1.3}, {0.7, 1.9}},
      {SeparatedInversePotential{0.8, 2.2}, {1.0, 8.0}},
      {TraceInversePotential{1.7}, {2.5, 0.6}},
  };
  double worst = 0.0;
  for (const auto& spec : specs) {
    for (int i = 0; i < 10; ++i) {
      for (int j = 0; j < 10; ++j) {
        for (int k = 0; k < 10; ++k) {
          const Vec3 x(0.3 + 0.3 * i, 0.3 + 0.3 * j, 0.3 + 0.3 * k);
          const Vec3 g = potential_gradient(spec, x(0), x(1), x(2));
          for (int c = 0; c < 3; ++c) {
            const double h = 1e-6;
            Vec3 xp = x;
            Vec3 xm = x;
            xp(c) += h;
            xm(c) -= h;
            const double fd = (potential_value(spec, xp(0), xp(1), xp(2)) -
                               potential_value(spec, xm(0), xm(1), xm(2))) /
                              (2.0 * h);
            worst = std::max(worst, std::abs(fd - g(c)) / std::max(std::abs(g(c)), 1e-8));
          }
        }
      }
    }
  }
  return finish("potential_gradients", worst, 1e-6, "10x10x10 grid on [0.3, 3]");
}

CheckResult check_kinematics(const CheckOptions& opt) {
  std::mt19937_64 rng(opt.seed + 4);
  double roundtrip = 0.0;
  double spectral = 0.0;
  double kl = 0.0;
  double rate = 0.0;
  for (int n = 0; n < opt.samples; ++n) {
    const RandomPoint p = random_point(rng);
    const ShapeCoords& sh = p.state.shape;
    const Rotation3 r = random_rotation(rng);
    const Mat3 phi = assemble_placement(r, sh);
    const TwoPolar tp = two_polar_decompose(phi);
    roundtrip = std::max({roundtrip, std::abs(tp.shape.lambda - sh.lambda),
                          std::abs(tp.shape.mu - sh.mu), std::abs(tp.shape.rho - sh.rho),
                          std::abs(tp.shape.theta - sh.theta),
                          (tp.attitude.matrix() - r.matrix()).cwiseAbs().maxCoeff()});
    const Vec3 k = deformation_invariants(phi.transpose() * phi);
    Vec3 squares(sh.lambda * sh.lambda, sh.mu * sh.mu, sh.rho * sh.rho);
    std::sort(squares.data(), squares.data() + 3, std::greater<>());
    spectral = std::max(spectral, (k - squares).cwiseAbs().maxCoeff());
    kl = std::max(kl, rel_error(kirchhoff_love_parameter(phi), sh.rho / (sh.lambda * sh.mu)));

    const double theta_dot = uniform(rng, -2.0, 2.0);
    const double h = 1e-6;
    ShapeCoords ahead = sh;
    ShapeCoords behind = sh;
    ahead.theta += theta_dot * h;
    behind.theta -= theta_dot * h;
    const Mat3 fd = (green_tensor(ahead) - green_tensor(behind)) / (2.0 * h);
    rate = std::max(rate, (fd - green_tensor_rate(sh, theta_dot)).cwiseAbs().maxCoeff());
  }
  const double worst = std::max({roundtrip / 1e-10, spectral / 1e-10, kl / 1e-12, rate / 1e-7});
  char detail[160];
  std::snprintf(detail, sizeof detail, "roundtrip %.1e, invariants %.1e, ell %.1e, dG/dt %.1e",
                roundtrip, spectral, kl, rate);
  return finish("kinematics", worst, 1.0, detail);
}

IntegratorConfig rk4(double dt, double t_end, int stride = 1) {
  IntegratorConfig c;
  c.method = IntegratorMethod::Rk4Fixed;
  c.dt = dt;
  c.t_end = t_end;
  c.sample_stride = stride;
  return c;
}

std::vector<CheckResult> check_conservation() {
  const auto run = integrate(bounded_fixture_state(), rk4(1e-3, 10.0, 100),
                             bounded_fixture_inertia(), bounded_fixture_potential());
  const std::string why = run.completed() ? "" : run.reason;
  return {finish("energy_conservation", run.report.max_rel_energy_drift, 1e-6, why),
          finish("p_theta_conservation", run.report.max_abs_p_theta_drift, 1e-12, why),
          finish("attitude_orthogonality", run.report.attitude_orthogonality_max_defect, 1e-9, why)};
}

CheckResult check_time_reversal() {
  const auto inertia = bounded_fixture_inertia();
  const auto potential = bounded_fixture_potential();
  const CanonicalState start = bounded_fixture_state();
  const auto forward = integrate(start, rk4(1e-3, 2.0, 1000), inertia, potential);
  CanonicalState back = forward.final_state;
  auto& m = back.mom;
  m.p_lambda = -m.p_lambda;
  m.p_mu = -m.p_mu;
  m.p_rho = -m.p_rho;
  m.p_theta = -m.p_theta;
  m.s1 = -m.s1;
  m.s2 = -m.s2;
  m.s3 = -m.s3;
  const auto backward = integrate(back, rk4(1e-3, 2.0, 1000), inertia, potential);
  const auto& e = backward.final_state.shape;
  const auto& s = start.shape;
  const double err = std::max({std::abs(e.lambda - s.lambda), std::abs(e.mu - s.mu),
                               std::abs(e.rho - s.rho), std::abs(e.theta - s.theta)});
  return finish("time_reversal", err, 1e-5);
}

CheckResult check_rk4_order() {
  const auto inertia = bounded_fixture_inertia();
  const auto potential = bounded_fixture_potential();
  const CanonicalState start = bounded_fixture_state();
  const double t = 2.0;
  const PhaseVector ref =
      to_phase_vector(integrate(start, rk4(1e-3, t, 100000), inertia, potential).final_state);
  const double e1 =
      (to_phase_vector(integrate(start, rk4(0.04, t, 1000), inertia, potential).final_state) - ref)
          .norm();
  const double e2 =
      (to_phase_vector(integrate(start, rk4(0.02, t, 1000), inertia, potential).final_state) - ref)
          .norm();
  const double ratio = e1 / e2;
  char detail[96];
  std::snprintf(detail, sizeof detail, "error ratio %.2f, accepted band [12, 20]", ratio);
  // Distance from the nominal ratio 16; the band allows 4.
  return finish("rk4_order", std::abs(ratio - 16.0), 4.0, detail);
}

std::vector<CheckResult> check_stationary() {
  std::vector<CheckResult> out;
  const StationaryProblem problem = stationary_fixture_problem();
  const StationaryOutcome outcome = solve_stationary(problem);
  const auto* sol = std::get_if<StationarySolution>(&outcome);
  if (!sol) {
    const auto& ns = std::get<NoSolution>(outcome);
    out.push_back(finish("stationary_fixed_point", ns.best_residual_norm, 1e-10,
                         "no solution: " + ns.message));
    out.back().passed = false;
    return out;
  }
  out.push_back(finish("stationary_residual", sol->residual_norm, 1e-10));
  out.push_back(finish("stationary_thickness_root",
                       std::abs(sol->rho_star - problem.potential.thickness.equilibrium()), 1e-12));

  const CanonicalState start = stationary_initial_state(*sol, problem, 0.0);
  const auto run = integrate(start, rk4(1e-3, 10.0, 100), problem.inertia, problem.potential);
  double drift = 0.0;
  double placement = 0.0;
  for (const auto& s : run.samples) {
    drift = std::max({drift, std::abs(s.state.shape.lambda - sol->lambda_star),
                      std::abs(s.state.shape.mu - sol->mu_star),
                      std::abs(s.state.shape.rho - sol->rho_star),
                      std::abs(s.state.mom.s3 - problem.s3),
                      std::abs(s.state.mom.p_theta - problem.p_theta)});
    const Mat3 closed = reconstruct_stationary_motion(*sol, Rotation3::identity(), 0.0, s.t);
    placement = std::max(placement, (closed - reconstruct_placement(s)).cwiseAbs().maxCoeff());
  }
  out.push_back(finish("stationary_integration_drift", drift, 1e-6,
                       run.completed() ? "" : run.reason));
  out.push_back(finish("stationary_reconstruction", placement, 1e-5));
  return out;
}

CheckResult check_no_solution() {
  StationaryProblem p;
  p.s3 = 1.0;
  p.p_theta = 0.0;
  p.inertia = InertiaSpec::isotropic(1.0, 1.0);
  p.potential = {HarmonicPotential{1.0}, {1.0, 1.0}};
  const StationaryOutcome outcome = solve_stationary(p);
  CheckResult r;
  r.name = "harmonic_no_solution";
  r.tolerance = 0.0;
  if (const auto* ns = std::get_if<NoSolution>(&outcome)) {
    r.passed = true;
    r.detail = std::string(to_string(ns->reason));
  } else {
    r.passed = false;
    r.max_error = 1.0;
    r.detail = "solver returned a root";
  }
  return r;
}

}  // namespace

RandomPoint random_point(std::mt19937_64& rng) {
  RandomPoint p;
  auto& sh = p.state.shape;
  do {
    sh.lambda = uniform(rng, 0.5, 3.0);
    sh.mu = uniform(rng, 0.5, 3.0);
  } while (std::abs(sh.lambda - sh.mu) < 0.2);
  if (sh.lambda < sh.mu) std::swap(sh.lambda, sh.mu);
  sh.rho = uniform(rng, 0.5, 3.0);
  sh.theta = uniform(rng, -std::numbers::pi / 2, std::numbers::pi / 2);
  auto& m = p.state.mom;
  m.s1 = uniform(rng, -2.0, 2.0);
  m.s2 = uniform(rng, -2.0, 2.0);
  m.s3 = uniform(rng, -2.0, 2.0);
  m.p_theta = uniform(rng, -2.0, 2.0);
  m.p_lambda = uniform(rng, -2.0, 2.0);
  m.p_mu = uniform(rng, -2.0, 2.0);
  m.p_rho = uniform(rng, -2.0, 2.0);
  const double j = uniform(rng, 0.5, 3.0);
  p.inertia = InertiaSpec::isotropic(j, uniform(rng, 0.5, 3.0));
  p.potential = random_potential(rng);
  return p;
}

CanonicalState bounded_fixture_state() {
  CanonicalState s;
  s.shape = {1.4, 0.4, 1.05, 0.2};
  s.mom.p_lambda = 0.1;
  s.mom.p_mu = -0.05;
  s.mom.p_rho = 0.05;
  s.mom.p_theta = 1.0;
  s.mom.s1 = 0.1;
  s.mom.s2 = -0.1;
  s.mom.s3 = 2.0;
  s.attitude = Rotation3::identity();
  return s;
}

InertiaSpec bounded_fixture_inertia() { return InertiaSpec::isotropic(1.0, 1.0); }

PotentialSpec bounded_fixture_potential() { return {HarmonicPotential{1.0}, {1.0, 1.0}}; }

StationaryProblem stationary_fixture_problem() {
  StationaryProblem p;
  p.s3 = 1.5;
  p.p_theta = 0.5;
  p.inertia = InertiaSpec::isotropic(1.0, 1.0);
  p.potential = {SeparatedInversePotential{1.0, 1.0}, {1.0, 8.0}};
  p.guess = {1.5, 0.5, 1.0};
  return p;
}

std::vector<CheckResult> run_check_suite(const CheckOptions& options) {
  std::vector<CheckResult> results;
  const auto guarded = [&](const char* name, auto&& fn) {
    try {
      fn();
    } catch (const std::exception& e) {
      CheckResult r;
      r.name = name;
      r.passed = false;
      r.max_error = std::numeric_limits<double>::infinity();
      r.detail = std::string("threw: ") + e.what();
      results.push_back(r);
    }
  };
  guarded("bracket_oracle_equivalence",
          [&] { results.push_back(check_bracket_oracle(options)); });
  guarded("legendre_duality", [&] { results.push_back(check_legendre_duality(options)); });
  guarded("euler_relation", [&] { results.push_back(check_euler_relation(options)); });
  guarded("energy_form_chain", [&] { results.push_back(check_energy_chain(options)); });
  guarded("potential_gradients", [&] { results.push_back(check_potential_gradients()); });
  guarded("kinematics", [&] { results.push_back(check_kinematics(options)); });
  guarded("conservation", [&] {
    for (auto& r : check_conservation()) results.push_back(std::move(r));
  });
  guarded("time_reversal", [&] { results.push_back(check_time_reversal()); });
  guarded("rk4_order", [&] { results.push_back(check_rk4_order()); });
  guarded("stationary", [&] {
    for (auto& r : check_stationary()) results.push_back(std::move(r));
  });
  guarded("harmonic_no_solution", [&] { results.push_back(check_no_solution()); });
  return results;
}

void print_check_table(std::ostream& out, const std::vector<CheckResult>& results) {
  char line[256];
  std::snprintf(line, sizeof line, "%-30s %-6s %12s %12s  %s\n", "check", "status", "max_error",
                "tolerance", "detail");
  out << line;
  for (const auto& r : results) {
    std::snprintf(line, sizeof line, "%-30s %-6s %12.3e %12.3e  %s\n", r.name.c_str(),
                  r.passed ? "PASS" : "FAIL", r.max_error, r.tolerance, r.detail.c_str());
    out << line;
  }
}

}  // namespace flatbody::app
