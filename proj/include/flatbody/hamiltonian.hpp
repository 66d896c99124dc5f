#pragma once

// Hamiltonian H = T(canonical) + V_λμ + V_ϱ for a body isotropic in its
// plane (J1 = J2), its closed-form vector field, and an independent
// vector field assembled from the basic Poisson brackets
//   {q^a, p_b} = δ^a_b,   {s_i, s_j} = −ε_ijk s_k   (ε_123 = +1).

#include "flatbody/energetics.hpp"
#include "flatbody/kinematics.hpp"

#include <optional>

namespace flatbody {

struct CanonicalState {
  ShapeCoords shape;
  MomentumCoords mom;
  /// Spatial rotation R, carried only when the placement must be rebuilt.
  std::optional<Rotation3> attitude;
};

struct StateDerivative {
  double dlambda = 0.0;
  double dmu = 0.0;
  double drho = 0.0;
  double dtheta = 0.0;
  double dp_lambda = 0.0;
  double dp_mu = 0.0;
  double dp_rho = 0.0;
  double dp_theta = 0.0;
  double ds1 = 0.0;
  double ds2 = 0.0;
  double ds3 = 0.0;
  /// dR/dt = R ω, present iff the state carries an attitude.
  std::optional<Mat3> dattitude;
};

// Flat layout of the eleven canonical coordinates, used by the integrators
// and the oracle: (λ, μ, ϱ, θ, pλ, pμ, pϱ, pθ, s1, s2, s3).
inline constexpr int kPhaseDim = 11;
using PhaseVector = Eigen::Matrix<double, kPhaseDim, 1>;
namespace phase {
enum Index : int {
  lambda, mu, rho, theta, p_lambda, p_mu, p_rho, p_theta, s1, s2, s3
};
}  // namespace phase

PhaseVector to_phase_vector(const CanonicalState& state);
PhaseVector to_phase_vector(const StateDerivative& deriv);
/// Attitude is not part of the phase vector; the caller re-attaches it.
CanonicalState state_from_phase_vector(const PhaseVector& x);

double hamiltonian(const CanonicalState& state, const InertiaSpec& inertia,
                   const PotentialSpec& potential);

/// Closed-form right-hand sides (isotropic inertia). dp_θ/dt is the
/// literal constant 0.
StateDerivative eom_closed_form(const CanonicalState& state, const InertiaSpec& inertia,
                                const PotentialSpec& potential);

/// Vector field assembled generically from the bracket structure, with
/// ∂H/∂x by centered differences (h = 1e-6 · max(1, |x|)). H is evaluated
/// in extended precision.
StateDerivative eom_bracket_oracle(const CanonicalState& state, const InertiaSpec& inertia,
                                   const PotentialSpec& potential);

/// ω from the inverse Legendre map.
Vec3 angular_velocity_from_state(const CanonicalState& state, const InertiaSpec& inertia);

/// Gradient of H over the eleven phase coordinates by centered differences
/// in extended precision (same step rule as the oracle).
PhaseVector hamiltonian_gradient_fd(const CanonicalState& state, const InertiaSpec& inertia,
                                    const PotentialSpec& potential);

/// Only the Lie–Poisson part of the spin derivative: ds_i = −ε_ijk s_k ∂H/∂s_j.
Vec3 lie_poisson_spin_rate(const Vec3& spin, const Vec3& dH_dspin);

namespace detail {

/// Test hook: shifts one coefficient of the closed-form field so that the
/// oracle comparison can be shown to fail. 0 restores the exact field.
void set_eom_perturbation(double delta);
double eom_perturbation();

}  // namespace detail

namespace experimental {

/// Bracket-assembled vector field for anisotropic J1 ≠ J2, with the
/// kinetic energy from the numeric inverse Legendre map. Double precision.
StateDerivative eom_anisotropic(const CanonicalState& state, const InertiaSpec& inertia,
                                const PotentialSpec& potential);

}  // namespace experimental

}  // namespace flatbody
