#include "flatbody/common.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

namespace flatbody {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Domain: return "domain";
    case ErrorKind::Orientation: return "orientation";
    case ErrorKind::Structure: return "structure";
    case ErrorKind::Degenerate: return "degenerate";
    case ErrorKind::SingularMatrix: return "singular-matrix";
    case ErrorKind::ConstraintViolation: return "constraint-violation";
    case ErrorKind::DegenerateColumns: return "degenerate-columns";
    case ErrorKind::RankDeficiency: return "rank-deficiency";
    case ErrorKind::Misuse: return "misuse";
    case ErrorKind::Config: return "config";
  }
  return "unknown";
}

namespace {

double read_tolerance_from_env() {
  const char* raw = std::getenv("FLATBODY_EPS");
  if (raw == nullptr || *raw == '\0') return kDefaultDegeneracyTolerance;
  char* end = nullptr;
  const double value = std::strtod(raw, &end);
  if (end == raw || *end != '\0' || !std::isfinite(value) || value <= 0.0) {
    return kDefaultDegeneracyTolerance;
  }
  return value;
}

}  // namespace

double degeneracy_tolerance() {
  static const double tol = read_tolerance_from_env();
  return tol;
}

bool is_degenerate(double lambda, double mu) noexcept {
  const double l2 = lambda * lambda;
  const double m2 = mu * mu;
  return std::abs(l2 - m2) < degeneracy_tolerance() * std::max(l2, m2);
}

void require_non_degenerate(double lambda, double mu, std::string_view where) {
  if (is_degenerate(lambda, mu)) {
    throw Error(ErrorKind::Degenerate,
                std::string(where) + ": degenerate stretches (lambda = " +
                    std::to_string(lambda) + ", mu = " + std::to_string(mu) +
                    "); theta is undefined where lambda = mu");
  }
}

double orthogonality_defect(const Mat3& m) {
  return (m.transpose() * m - Mat3::Identity()).cwiseAbs().maxCoeff();
}

}  // namespace flatbody
