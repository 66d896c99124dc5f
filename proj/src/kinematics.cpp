#include "flatbody/kinematics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace flatbody {

namespace {

bool all_finite(const Mat3& m) { return m.allFinite(); }

}  // namespace

void ShapeCoords::validate() const {
  if (!std::isfinite(lambda) || !std::isfinite(mu) || !std::isfinite(rho) ||
      !std::isfinite(theta)) {
    throw Error(ErrorKind::Domain, "shape coordinates must be finite");
  }
  if (lambda <= 0.0 || mu <= 0.0 || rho <= 0.0) {
    throw Error(ErrorKind::Domain,
                "stretches must be positive (lambda = " + std::to_string(lambda) +
                    ", mu = " + std::to_string(mu) + ", rho = " + std::to_string(rho) +
                    ")");
  }
}

Rotation3::Rotation3(const Mat3& m) : m_(m) {
  if (!all_finite(m)) throw Error(ErrorKind::Domain, "rotation has non-finite entries");
  if (orthogonality_defect(m) > kRotationTolerance) {
    throw Error(ErrorKind::Domain, "matrix is not orthogonal to 1e-12");
  }
  if (std::abs(m.determinant() - 1.0) > kRotationTolerance) {
    throw Error(ErrorKind::Orientation, "rotation must have det = +1");
  }
}

Rotation3 Rotation3::nearest(const Mat3& m) {
  if (!all_finite(m)) throw Error(ErrorKind::Domain, "rotation has non-finite entries");
  if (m.determinant() <= 0.0) {
    throw Error(ErrorKind::Orientation, "cannot project a matrix with det <= 0 onto SO(3)");
  }
  Eigen::JacobiSVD<Mat3> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Rotation3 r;
  r.m_ = svd.matrixU() * svd.matrixV().transpose();
  return r;
}

Rotation3 material_rotation(double theta) {
  if (!std::isfinite(theta)) throw Error(ErrorKind::Domain, "theta must be finite");
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  Mat3 m;
  m << c, s, 0.0,
      -s, c, 0.0,
      0.0, 0.0, 1.0;
  return Rotation3(m);
}

Mat3 assemble_placement(const Rotation3& attitude, const ShapeCoords& shape) {
  shape.validate();
  const Eigen::DiagonalMatrix<double, 3> d(shape.lambda, shape.mu, shape.rho);
  return attitude.matrix() * d * material_rotation(shape.theta).matrix();
}

TwoPolar two_polar_decompose(const Mat3& phi) {
  if (!all_finite(phi)) throw Error(ErrorKind::Domain, "placement has non-finite entries");
  const double det = phi.determinant();
  if (!(det > 0.0)) {
    throw Error(ErrorKind::Orientation,
                "placement must have positive determinant (det = " + std::to_string(det) + ")");
  }

  const Mat3 g = phi.transpose() * phi;
  const double scale = g.cwiseAbs().maxCoeff();
  constexpr double kStructureTol = 1e-9;
  if (std::abs(g(0, 2)) > kStructureTol * scale || std::abs(g(1, 2)) > kStructureTol * scale) {
    throw Error(ErrorKind::Structure,
                "thickness direction is not orthogonal to the central plane; no right factor "
                "rotating about the third axis exists");
  }

  // Upper block of G: G11 − G22 = (λ² − μ²) cos 2θ, 2 G12 = (λ² − μ²) sin 2θ.
  const double g11 = g(0, 0);
  const double g22 = g(1, 1);
  const double g12 = 0.5 * (g(0, 1) + g(1, 0));
  const double gap = std::hypot(g11 - g22, 2.0 * g12);
  const double lambda2 = 0.5 * (g11 + g22 + gap);
  const double mu2 = (g11 * g22 - g12 * g12) / lambda2;
  if (gap < degeneracy_tolerance() * lambda2) {
    throw Error(ErrorKind::Degenerate,
                "degenerate decomposition: lambda = mu, so theta is not unique");
  }

  ShapeCoords shape;
  shape.lambda = std::sqrt(lambda2);
  shape.mu = std::sqrt(mu2);
  shape.rho = std::sqrt(g(2, 2));
  shape.theta = 0.5 * std::atan2(2.0 * g12, g11 - g22);

  // R = Φ U(θ) D⁻¹
  const Eigen::DiagonalMatrix<double, 3> d_inv(1.0 / shape.lambda, 1.0 / shape.mu,
                                               1.0 / shape.rho);
  const Mat3 r = phi * material_rotation(shape.theta).matrix().transpose() * d_inv;
  return TwoPolar{Rotation3::nearest(r), shape};
}

Mat3 green_tensor(const ShapeCoords& shape) {
  shape.validate();
  const double l2 = shape.lambda * shape.lambda;
  const double m2 = shape.mu * shape.mu;
  const double c = std::cos(shape.theta);
  const double s = std::sin(shape.theta);
  Mat3 g;
  g << l2 * c * c + m2 * s * s, (l2 - m2) * s * c, 0.0,
      (l2 - m2) * s * c, l2 * s * s + m2 * c * c, 0.0,
      0.0, 0.0, shape.rho * shape.rho;
  return g;
}

Mat3 cauchy_tensor(const Mat3& phi) {
  if (!all_finite(phi)) throw Error(ErrorKind::Domain, "placement has non-finite entries");
  const double scale = phi.cwiseAbs().maxCoeff();
  if (scale == 0.0 || std::abs(phi.determinant()) <= 1e-14 * scale * scale * scale) {
    throw Error(ErrorKind::SingularMatrix, "placement is singular");
  }
  const Mat3 c = phi * phi.transpose();
  return 0.5 * (c + c.transpose());
}

Vec3 deformation_invariants(const Mat3& g) {
  if (!all_finite(g)) throw Error(ErrorKind::Domain, "tensor has non-finite entries");
  const double scale = g.cwiseAbs().maxCoeff();
  if ((g - g.transpose()).cwiseAbs().maxCoeff() > 1e-10 * std::max(1.0, scale)) {
    throw Error(ErrorKind::Domain, "deformation tensor must be symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Mat3> eig(g, Eigen::EigenvaluesOnly);
  Vec3 k = eig.eigenvalues();  // ascending
  if (!(k(0) > 0.0)) {
    throw Error(ErrorKind::Domain, "deformation tensor must be positive-definite");
  }
  return k.reverse();
}

double kirchhoff_love_parameter(const Mat3& phi) {
  if (!all_finite(phi)) throw Error(ErrorKind::Domain, "placement has non-finite entries");
  const Vec3 c1 = phi.col(0);
  const Vec3 c2 = phi.col(1);
  const Vec3 c3 = phi.col(2);
  const Vec3 cross = c1.cross(c2);
  const double cross_norm2 = cross.squaredNorm();
  if (cross_norm2 <= 1e-28 * c1.squaredNorm() * c2.squaredNorm() || cross_norm2 == 0.0) {
    throw Error(ErrorKind::DegenerateColumns, "first two columns are linearly dependent");
  }
  const double ell = c3.dot(cross) / cross_norm2;
  const double deviation = (c3 - ell * cross).norm();
  constexpr double kConstraintTol = 1e-9;
  if (!(ell > 0.0) || deviation > kConstraintTol * c3.norm()) {
    throw Error(ErrorKind::ConstraintViolation,
                "Kirchhoff-Love condition violated: third column is not a positive multiple "
                "of column1 x column2");
  }
  return ell;
}

Eigen::Matrix<double, 2, 3> left_inverse(const Eigen::Matrix<double, 3, 2>& phi) {
  if (!phi.allFinite()) throw Error(ErrorKind::Domain, "matrix has non-finite entries");
  Eigen::JacobiSVD<Eigen::Matrix<double, 3, 2>> svd(phi, Eigen::ComputeFullU |
                                                             Eigen::ComputeFullV);
  const Vec2 sigma = svd.singularValues();
  if (!(sigma(1) > 1e-12 * sigma(0))) {
    throw Error(ErrorKind::RankDeficiency, "left inverse requires a rank-2 matrix");
  }
  const Eigen::Matrix<double, 3, 2> u = svd.matrixU().leftCols<2>();
  return svd.matrixV() * sigma.cwiseInverse().asDiagonal() * u.transpose();
}

Mat3 green_tensor_rate(const ShapeCoords& shape, double theta_dot) {
  shape.validate();
  const Mat3 u = material_rotation(shape.theta).matrix().transpose();
  const Mat3 vartheta = material_spin_matrix(theta_dot);
  const Eigen::DiagonalMatrix<double, 3> d2(shape.lambda * shape.lambda,
                                            shape.mu * shape.mu, shape.rho * shape.rho);
  const Mat3 commutator = vartheta * d2 - d2 * vartheta;
  return u * commutator * u.transpose();
}

Mat3 spin_matrix(const Vec3& omega) {
  Mat3 w;
  w << 0.0, omega(2), -omega(1),
      -omega(2), 0.0, omega(0),
      omega(1), -omega(0), 0.0;
  return w;
}

Mat3 material_spin_matrix(double theta_dot) {
  Mat3 v = Mat3::Zero();
  v(0, 1) = -theta_dot;
  v(1, 0) = theta_dot;
  return v;
}

Mat3 spin_exponential(const Vec3& omega, double t) {
  const Mat3 a = t * spin_matrix(omega);
  const double phi = omega.norm() * std::abs(t);
  double s_coef;  // sin φ / φ
  double c_coef;  // (1 − cos φ) / φ²
  if (phi < 1e-4) {
    const double p2 = phi * phi;
    s_coef = 1.0 - p2 / 6.0 + p2 * p2 / 120.0;
    c_coef = 0.5 - p2 / 24.0 + p2 * p2 / 720.0;
  } else {
    s_coef = std::sin(phi) / phi;
    c_coef = (1.0 - std::cos(phi)) / (phi * phi);
  }
  return Mat3::Identity() + s_coef * a + c_coef * a * a;
}

}  // namespace flatbody
