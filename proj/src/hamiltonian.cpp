#include "flatbody/hamiltonian.hpp"

#include "flatbody/detail/canonical_terms.hpp"

#include <array>
#include <atomic>
#include <cmath>

namespace flatbody {

PhaseVector to_phase_vector(const CanonicalState& s) {
  PhaseVector x;
  x << s.shape.lambda, s.shape.mu, s.shape.rho, s.shape.theta, s.mom.p_lambda, s.mom.p_mu,
      s.mom.p_rho, s.mom.p_theta, s.mom.s1, s.mom.s2, s.mom.s3;
  return x;
}

PhaseVector to_phase_vector(const StateDerivative& d) {
  PhaseVector x;
  x << d.dlambda, d.dmu, d.drho, d.dtheta, d.dp_lambda, d.dp_mu, d.dp_rho, d.dp_theta, d.ds1,
      d.ds2, d.ds3;
  return x;
}

CanonicalState state_from_phase_vector(const PhaseVector& x) {
  CanonicalState s;
  s.shape = {x(phase::lambda), x(phase::mu), x(phase::rho), x(phase::theta)};
  s.mom.p_lambda = x(phase::p_lambda);
  s.mom.p_mu = x(phase::p_mu);
  s.mom.p_rho = x(phase::p_rho);
  s.mom.p_theta = x(phase::p_theta);
  s.mom.s1 = x(phase::s1);
  s.mom.s2 = x(phase::s2);
  s.mom.s3 = x(phase::s3);
  return s;
}

namespace {

void check_state(const CanonicalState& state, const InertiaSpec& inertia, const char* where) {
  state.shape.validate();
  inertia.validate();
  if (!inertia.is_isotropic()) {
    throw Error(ErrorKind::Misuse, std::string(where) + " requires J1 == J2");
  }
  require_non_degenerate(state.shape.lambda, state.shape.mu, where);
}

StateDerivative derivative_from_phase_vector(const PhaseVector& x) {
  StateDerivative d;
  d.dlambda = x(phase::lambda);
  d.dmu = x(phase::mu);
  d.drho = x(phase::rho);
  d.dtheta = x(phase::theta);
  d.dp_lambda = x(phase::p_lambda);
  d.dp_mu = x(phase::p_mu);
  d.dp_rho = x(phase::p_rho);
  d.dp_theta = x(phase::p_theta);
  d.ds1 = x(phase::s1);
  d.ds2 = x(phase::s2);
  d.ds3 = x(phase::s3);
  return d;
}

template <class Real>
detail::CanonicalPoint<Real> point_from(const PhaseVector& x) {
  return {Real(x(phase::lambda)), Real(x(phase::mu)),      Real(x(phase::rho)),
          Real(x(phase::theta)),  Real(x(phase::p_lambda)), Real(x(phase::p_mu)),
          Real(x(phase::p_rho)),  Real(x(phase::p_theta)),  Real(x(phase::s1)),
          Real(x(phase::s2)),     Real(x(phase::s3))};
}

template <class Real>
Real& coordinate(detail::CanonicalPoint<Real>& p, int i) {
  std::array<Real*, kPhaseDim> slots{&p.lambda, &p.mu,      &p.rho, &p.theta,
                                     &p.p_lambda, &p.p_mu,  &p.p_rho, &p.p_theta,
                                     &p.s1,       &p.s2,    &p.s3};
  return *slots[static_cast<std::size_t>(i)];
}

// Centered differences of H along each phase coordinate.
template <class Real, class Hamiltonian>
PhaseVector centered_gradient(const PhaseVector& x, Hamiltonian&& h_of) {
  PhaseVector grad;
  const auto base = point_from<Real>(x);
  for (int i = 0; i < kPhaseDim; ++i) {
    const Real h = Real(1e-6) * std::max(Real(1), std::abs(Real(x(i))));
    auto plus = base;
    auto minus = base;
    coordinate(plus, i) += h;
    coordinate(minus, i) -= h;
    grad(i) = static_cast<double>((h_of(plus) - h_of(minus)) / (2 * h));
  }
  return grad;
}

constexpr int levi_civita(int i, int j, int k) {
  return (i - j) * (j - k) * (k - i) / 2;
}

// dq/dt = ∂H/∂p, dp/dt = −∂H/∂q, ds_i/dt = −ε_ijk s_k ∂H/∂s_j.
PhaseVector assemble_from_brackets(const PhaseVector& x, const PhaseVector& g) {
  PhaseVector d = PhaseVector::Zero();
  constexpr std::array<std::pair<int, int>, 4> pairs{{{phase::lambda, phase::p_lambda},
                                                      {phase::mu, phase::p_mu},
                                                      {phase::rho, phase::p_rho},
                                                      {phase::theta, phase::p_theta}}};
  for (auto [q, p] : pairs) {
    d(q) = g(p);
    d(p) = -g(q);
  }
  const Vec3 spin(x(phase::s1), x(phase::s2), x(phase::s3));
  const Vec3 dh_ds(g(phase::s1), g(phase::s2), g(phase::s3));
  const Vec3 ds = lie_poisson_spin_rate(spin, dh_ds);
  d(phase::s1) = ds(0);
  d(phase::s2) = ds(1);
  d(phase::s3) = ds(2);
  return d;
}

}  // namespace

double hamiltonian(const CanonicalState& state, const InertiaSpec& inertia,
                   const PotentialSpec& potential) {
  return kinetic_energy_canonical(state.shape, state.mom, inertia) +
         potential_value(potential, state.shape.lambda, state.shape.mu, state.shape.rho);
}

Vec3 lie_poisson_spin_rate(const Vec3& spin, const Vec3& dH_dspin) {
  Vec3 ds = Vec3::Zero();
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      for (int k = 0; k < 3; ++k) {
        ds(i) -= levi_civita(i, j, k) * spin(k) * dH_dspin(j);
      }
    }
  }
  return ds;
}

Vec3 angular_velocity_from_state(const CanonicalState& state, const InertiaSpec& inertia) {
  check_state(state, inertia, "angular_velocity_from_state");
  return legendre_inverse_isotropic(state.shape, state.mom, inertia).omega();
}

namespace {
std::atomic<double> g_eom_perturbation{0.0};
}  // namespace

void detail::set_eom_perturbation(double delta) { g_eom_perturbation.store(delta); }
double detail::eom_perturbation() { return g_eom_perturbation.load(); }

StateDerivative eom_closed_form(const CanonicalState& state, const InertiaSpec& inertia,
                                const PotentialSpec& potential) {
  check_state(state, inertia, "eom_closed_form");
  const double j = inertia.J1;
  const double j3 = inertia.J3;
  const double l = state.shape.lambda;
  const double m = state.shape.mu;
  const double l2 = l * l;
  const double m2 = m * m;
  const double r2 = state.shape.rho * state.shape.rho;
  const double gap = l2 - m2;
  const auto& p = state.mom;

  const double a_l = j * l2 + j3 * r2;  // J λ² + J3 ϱ²
  const double a_m = j * m2 + j3 * r2;  // J μ² + J3 ϱ²
  const double spin_planar = p.s3 * p.s3 + p.p_theta * p.p_theta;
  const double spin_cross = p.s3 * p.p_theta;
  const Vec3 dv = potential_gradient(potential, l, m, state.shape.rho);

  StateDerivative d;
  d.dlambda = p.p_lambda / j;
  d.dmu = p.p_mu / j;
  d.drho = p.p_rho / j3;
  d.dtheta = ((l2 + m2) * p.p_theta - 2.0 * l * m * p.s3) / (j * gap * gap);

  d.ds1 = p.s2 / (j * gap * gap) *
          ((j * m2 * (3.0 * l2 - m2) + j3 * r2 * (l2 + m2)) / a_l * p.s3 -
           2.0 * l * m * p.p_theta);
  d.ds2 = p.s1 / (j * gap * gap) *
          ((j * l2 * (l2 - 3.0 * m2) - j3 * r2 * (l2 + m2)) / a_m * p.s3 +
           2.0 * l * m * p.p_theta);
  d.ds3 = j * (m2 - l2) * p.s1 * p.s2 / (a_l * a_m);
  d.dp_theta = 0.0;

  const double gap3 = j * gap * gap * gap;
  const double three = 3.0 + g_eom_perturbation.load(std::memory_order_relaxed);
  d.dp_lambda = -dv(0) + j * l * p.s2 * p.s2 / (a_l * a_l) +
                (l * (l2 + three * m2) * spin_planar - 2.0 * m * (m2 + 3.0 * l2) * spin_cross) /
                    gap3;
  d.dp_mu = -dv(1) + j * m * p.s1 * p.s1 / (a_m * a_m) -
            (m * (m2 + 3.0 * l2) * spin_planar - 2.0 * l * (l2 + 3.0 * m2) * spin_cross) /
                gap3;
  d.dp_rho = -dv(2) + j3 * state.shape.rho * p.s1 * p.s1 / (a_m * a_m) +
             j3 * state.shape.rho * p.s2 * p.s2 / (a_l * a_l);

  if (state.attitude) {
    const Vec3 omega(p.s1 / a_m, p.s2 / a_l, ((l2 + m2) * p.s3 - 2.0 * l * m * p.p_theta) /
                                                  (j * gap * gap));
    d.dattitude = state.attitude->matrix() * spin_matrix(omega);
  }
  return d;
}

PhaseVector hamiltonian_gradient_fd(const CanonicalState& state, const InertiaSpec& inertia,
                                    const PotentialSpec& potential) {
  check_state(state, inertia, "hamiltonian_gradient_fd");
  potential.validate();
  using Real = long double;
  return centered_gradient<Real>(to_phase_vector(state), [&](const auto& pt) {
    return detail::isotropic_hamiltonian<Real>(pt, inertia, potential);
  });
}

StateDerivative eom_bracket_oracle(const CanonicalState& state, const InertiaSpec& inertia,
                                   const PotentialSpec& potential) {
  const PhaseVector x = to_phase_vector(state);
  const PhaseVector g = hamiltonian_gradient_fd(state, inertia, potential);
  StateDerivative d = derivative_from_phase_vector(assemble_from_brackets(x, g));
  if (state.attitude) {
    d.dattitude = state.attitude->matrix() * spin_matrix(Vec3(g(phase::s1), g(phase::s2),
                                                              g(phase::s3)));
  }
  return d;
}

namespace experimental {

StateDerivative eom_anisotropic(const CanonicalState& state, const InertiaSpec& inertia,
                                const PotentialSpec& potential) {
  state.shape.validate();
  inertia.validate();
  require_non_degenerate(state.shape.lambda, state.shape.mu, "eom_anisotropic");
  const PhaseVector x = to_phase_vector(state);
  const PhaseVector g = centered_gradient<double>(x, [&](const auto& pt) {
    const ShapeCoords shape{pt.lambda, pt.mu, pt.rho, pt.theta};
    MomentumCoords mom;
    mom.s1 = pt.s1;
    mom.s2 = pt.s2;
    mom.s3 = pt.s3;
    mom.p_theta = pt.p_theta;
    mom.p_lambda = pt.p_lambda;
    mom.p_mu = pt.p_mu;
    mom.p_rho = pt.p_rho;
    return kinetic_energy_canonical_numeric(shape, mom, inertia) +
           potential_value(potential, pt.lambda, pt.mu, pt.rho);
  });
  StateDerivative d = derivative_from_phase_vector(assemble_from_brackets(x, g));
  if (state.attitude) {
    d.dattitude = state.attitude->matrix() * spin_matrix(Vec3(g(phase::s1), g(phase::s2),
                                                              g(phase::s3)));
  }
  return d;
}

}  // namespace experimental

}  // namespace flatbody
