#pragma once

// Kinematics of a flat body with thickness: the constrained placement
// Φ = R · diag(λ, μ, ϱ) · U(θ)⁻¹, its decomposition, deformation tensors,
// invariants, and the Kirchhoff–Love parameter.

#include "flatbody/common.hpp"

namespace flatbody {

/// Two-polar deformation variables. Stretches are strictly positive.
struct ShapeCoords {
  double lambda = 1.0;
  double mu = 1.0;
  double rho = 1.0;
  double theta = 0.0;

  /// Throws ErrorKind::Domain unless all stretches are positive and
  /// every field is finite.
  void validate() const;
  /// True when the canonical ordering λ > μ holds.
  bool ordered() const noexcept { return lambda > mu; }
};

/// Proper orthogonal 3×3 matrix. Construction checks RᵀR = I and
/// det R = +1 to 1e-12.
class Rotation3 {
 public:
  Rotation3() : m_(Mat3::Identity()) {}
  explicit Rotation3(const Mat3& m);

  static Rotation3 identity() { return Rotation3(); }
  /// Closest rotation to `m` in the Frobenius norm (polar factor).
  /// Throws ErrorKind::Orientation if det m <= 0.
  static Rotation3 nearest(const Mat3& m);

  const Mat3& matrix() const noexcept { return m_; }
  Mat3 inverse() const { return m_.transpose(); }

  friend Rotation3 operator*(const Rotation3& a, const Rotation3& b) {
    return Rotation3::nearest(a.m_ * b.m_);
  }

 private:
  Mat3 m_;
};

constexpr double kRotationTolerance = 1e-12;

/// U(θ)⁻¹ = [[cos θ, sin θ, 0], [−sin θ, cos θ, 0], [0, 0, 1]].
Rotation3 material_rotation(double theta);

/// Φ = R · D · U(θ)⁻¹ with D = diag(λ, μ, ϱ).
Mat3 assemble_placement(const Rotation3& attitude, const ShapeCoords& shape);

struct TwoPolar {
  Rotation3 attitude;
  ShapeCoords shape;
};

/// Inverts assemble_placement. The result has λ > μ and θ ∈ (−π/2, π/2];
/// θ and θ + π describe the same placement (R absorbs diag(−1, −1, 1)).
///
/// Errors: det Φ ≤ 0 (Orientation), no right factor rotating about the
/// thickness axis (Structure), λ ≈ μ (Degenerate).
TwoPolar two_polar_decompose(const Mat3& phi);

/// G = ΦᵀΦ = U D² U⁻¹, in closed form.
Mat3 green_tensor(const ShapeCoords& shape);

/// Spatial deformation tensor in the R D² R⁻¹ form, i.e. ΦΦᵀ. Its spectrum
/// is {λ², μ², ϱ²}. Throws ErrorKind::SingularMatrix for singular Φ.
Mat3 cauchy_tensor(const Mat3& phi);

/// Roots of det[G − K·I] = 0, sorted descending.
/// Throws ErrorKind::Domain unless g is symmetric positive-definite.
Vec3 deformation_invariants(const Mat3& g);

/// The ℓ with column3 = ℓ · (column1 × column2).
double kirchhoff_love_parameter(const Mat3& phi);

/// Minimal-norm left inverse (φᵀφ)⁻¹φᵀ of a rank-2 3×2 matrix.
Eigen::Matrix<double, 2, 3> left_inverse(const Eigen::Matrix<double, 3, 2>& phi);

/// dG/dt = U(ϑD² − D²ϑ)U⁻¹ for a material rotation rate θ̇.
Mat3 green_tensor_rate(const ShapeCoords& shape, double theta_dot);

// Antisymmetric generators.

/// Co-moving angular velocity matrix ω = R⁻¹Ṙ in the layout
/// [[0, ω₃, −ω₂], [−ω₃, 0, ω₁], [ω₂, −ω₁, 0]].
Mat3 spin_matrix(const Vec3& omega);
/// ϑ = U⁻¹U̇ = θ̇ · [[0, −1, 0], [1, 0, 0], [0, 0, 0]].
Mat3 material_spin_matrix(double theta_dot);
/// exp(t · spin_matrix(ω)) in closed form.
Mat3 spin_exponential(const Vec3& omega, double t);

}  // namespace flatbody
