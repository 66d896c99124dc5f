#pragma once

// Shared vocabulary for the flat-body library: matrix aliases, the error
// type, and the degeneracy tolerance used by every module.

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <string_view>

namespace flatbody {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat2 = Eigen::Matrix2d;
using Mat3 = Eigen::Matrix3d;

enum class ErrorKind {
  Domain,
  Orientation,
  Structure,
  Degenerate,
  SingularMatrix,
  ConstraintViolation,
  DegenerateColumns,
  RankDeficiency,
  Misuse,
  Config,
};

std::string_view to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Relative tolerance defining the singular set λ = μ:
/// |λ² − μ²| < tol · max(λ², μ²) counts as degenerate.
/// Defaults to 1e-9; the FLATBODY_EPS environment variable overrides it
/// (read once, on first use).
double degeneracy_tolerance();

constexpr double kDefaultDegeneracyTolerance = 1e-9;

bool is_degenerate(double lambda, double mu) noexcept;

/// Throws ErrorKind::Degenerate naming `where` if (λ, μ) is degenerate.
void require_non_degenerate(double lambda, double mu, std::string_view where);

/// Largest entry of |MᵀM − I|.
double orthogonality_defect(const Mat3& m);

}  // namespace flatbody
