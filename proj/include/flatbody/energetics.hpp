#pragma once

// Kinetic energy (trace, velocity and canonical forms), the Legendre map
// between co-moving velocities and spin/momenta, and the separable
// potentials V(λ, μ, ϱ) = V_λμ(λ, μ) + V_ϱ(ϱ).

#include "flatbody/common.hpp"
#include "flatbody/kinematics.hpp"

#include <cmath>
#include <string>
#include <variant>

namespace flatbody {

/// Diagonal inertia J = diag(J1, J2, J3); isotropic in the plane iff J1 == J2.
struct InertiaSpec {
  double J1 = 1.0;
  double J2 = 1.0;
  double J3 = 1.0;

  void validate() const;
  bool is_isotropic() const noexcept { return J1 == J2; }
  static InertiaSpec isotropic(double j, double j3) { return {j, j, j3}; }
};

/// Co-moving angular velocities (ω = R⁻¹Ṙ) and shape rates.
struct VelocityCoords {
  double omega1 = 0.0;
  double omega2 = 0.0;
  double omega3 = 0.0;
  double lambda_dot = 0.0;
  double mu_dot = 0.0;
  double rho_dot = 0.0;
  double theta_dot = 0.0;

  Vec3 omega() const { return {omega1, omega2, omega3}; }
};

/// Spin components conjugate to ω, and momenta conjugate to θ, λ, μ, ϱ.
struct MomentumCoords {
  double s1 = 0.0;
  double s2 = 0.0;
  double s3 = 0.0;
  double p_theta = 0.0;
  double p_lambda = 0.0;
  double p_mu = 0.0;
  double p_rho = 0.0;

  Vec3 spin() const { return {s1, s2, s3}; }
};

// Vector layout shared by the Legendre map and its mass matrix:
// velocities (ω1, ω2, ω3, θ̇, λ̇, μ̇, ϱ̇) pair with (s1, s2, s3, pθ, pλ, pμ, pϱ).
using Vec7 = Eigen::Matrix<double, 7, 1>;
using Mat7 = Eigen::Matrix<double, 7, 7>;
Vec7 to_vector(const VelocityCoords& v);
Vec7 to_vector(const MomentumCoords& m);
VelocityCoords velocities_from_vector(const Vec7& v);
MomentumCoords momenta_from_vector(const Vec7& m);

// ---------------------------------------------------------------- potentials

/// V_λμ = k/2 (λ² + μ²)
struct HarmonicPotential {
  double k = 1.0;
};
/// V_λμ = c (1/λ² + λ²) + d (1/μ² + μ²)
struct SeparatedInversePotential {
  double c = 1.0;
  double d = 1.0;
};
/// V_λμ = κ (1/(λμ) + (λ² + μ²)/2)
struct TraceInversePotential {
  double kappa = 1.0;
};
/// V_ϱ = a/ϱ + b/2 ϱ²
struct ThicknessPotential {
  double a = 1.0;
  double b = 1.0;

  /// The unique minimiser (a/b)^{1/3}.
  double equilibrium() const { return std::cbrt(a / b); }
};

using FlatPotential =
    std::variant<HarmonicPotential, SeparatedInversePotential, TraceInversePotential>;

struct PotentialSpec {
  FlatPotential flat = HarmonicPotential{};
  ThicknessPotential thickness{};

  /// All coefficients strictly positive and finite.
  void validate() const;
  /// Whether V_λμ(λ, μ) = V_λμ(μ, λ).
  bool flat_symmetric() const;

  /// Canonical text form, e.g. "HARMONIC(k=1);THICKNESS(a=1,b=1)".
  std::string to_string() const;
  /// Parses the canonical text form. Throws ErrorKind::Config.
  static PotentialSpec parse(const std::string& text);
};

double flat_potential_value(const FlatPotential& flat, double lambda, double mu);
Vec2 flat_potential_gradient(const FlatPotential& flat, double lambda, double mu);
double thickness_potential_value(const ThicknessPotential& th, double rho);
double thickness_potential_derivative(const ThicknessPotential& th, double rho);

/// V_λμ(λ, μ) + V_ϱ(ϱ). Throws ErrorKind::Domain for non-positive stretches.
double potential_value(const PotentialSpec& spec, double lambda, double mu, double rho);
/// (∂V/∂λ, ∂V/∂μ, dV/dϱ), analytic.
Vec3 potential_gradient(const PotentialSpec& spec, double lambda, double mu, double rho);

// ------------------------------------------------------------ kinetic energy

/// Φ̇ = R (Ḋ + ωD − Dϑ) U⁻¹.
Mat3 placement_velocity(const Rotation3& attitude, const ShapeCoords& shape,
                        const VelocityCoords& vel);

/// ½ Tr(J Φ̇ᵀ Φ̇).
double kinetic_energy_trace(const Mat3& phi_dot, const InertiaSpec& inertia);

/// Velocity form of the kinetic energy for diagonal J (anisotropic allowed).
double kinetic_energy_velocities(const ShapeCoords& shape, const VelocityCoords& vel,
                                 const InertiaSpec& inertia);

/// Velocity form for J1 = J2. Throws ErrorKind::Misuse otherwise.
double kinetic_energy_isotropic(const ShapeCoords& shape, const VelocityCoords& vel,
                                const InertiaSpec& inertia);

/// Velocities → (s, p) for diagonal J; the isotropic formulas when J1 == J2.
MomentumCoords legendre_forward(const ShapeCoords& shape, const VelocityCoords& vel,
                                const InertiaSpec& inertia);

/// Closed-form inverse of legendre_forward for J1 = J2.
/// Errors: Misuse for anisotropic J, Degenerate when λ ≈ μ.
VelocityCoords legendre_inverse_isotropic(const ShapeCoords& shape, const MomentumCoords& mom,
                                          const InertiaSpec& inertia);

/// Kinetic energy in canonical variables (J1 = J2).
double kinetic_energy_canonical(const ShapeCoords& shape, const MomentumCoords& mom,
                                const InertiaSpec& inertia);

namespace experimental {

/// Symmetric matrix M with p = M v in the Vec7 layout; valid for any
/// diagonal J. Built column by column from legendre_forward.
Mat7 mass_matrix(const ShapeCoords& shape, const InertiaSpec& inertia);

/// Numeric inverse Legendre map (LDLT solve of M v = p), any diagonal J.
VelocityCoords legendre_inverse_numeric(const ShapeCoords& shape, const MomentumCoords& mom,
                                        const InertiaSpec& inertia);

/// ½ pᵀ M⁻¹ p, any diagonal J.
double kinetic_energy_canonical_numeric(const ShapeCoords& shape, const MomentumCoords& mom,
                                        const InertiaSpec& inertia);

}  // namespace experimental

}  // namespace flatbody
