#include "flatbody/energetics.hpp"

#include "flatbody/detail/canonical_terms.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <regex>
#include <sstream>

namespace flatbody {

void InertiaSpec::validate() const {
  for (double j : {J1, J2, J3}) {
    if (!std::isfinite(j) || j <= 0.0) {
      throw Error(ErrorKind::Domain, "inertia entries must be positive and finite");
    }
  }
}

Vec7 to_vector(const VelocityCoords& v) {
  Vec7 x;
  x << v.omega1, v.omega2, v.omega3, v.theta_dot, v.lambda_dot, v.mu_dot, v.rho_dot;
  return x;
}

Vec7 to_vector(const MomentumCoords& m) {
  Vec7 x;
  x << m.s1, m.s2, m.s3, m.p_theta, m.p_lambda, m.p_mu, m.p_rho;
  return x;
}

VelocityCoords velocities_from_vector(const Vec7& x) {
  VelocityCoords v;
  v.omega1 = x(0);
  v.omega2 = x(1);
  v.omega3 = x(2);
  v.theta_dot = x(3);
  v.lambda_dot = x(4);
  v.mu_dot = x(5);
  v.rho_dot = x(6);
  return v;
}

MomentumCoords momenta_from_vector(const Vec7& x) {
  MomentumCoords m;
  m.s1 = x(0);
  m.s2 = x(1);
  m.s3 = x(2);
  m.p_theta = x(3);
  m.p_lambda = x(4);
  m.p_mu = x(5);
  m.p_rho = x(6);
  return m;
}

// ---------------------------------------------------------------- potentials

namespace {

bool positive_finite(double x) { return std::isfinite(x) && x > 0.0; }

void require_positive_stretches(double lambda, double mu, double rho) {
  if (!positive_finite(lambda) || !positive_finite(mu) || !positive_finite(rho)) {
    throw Error(ErrorKind::Domain, "potential requires positive finite stretches");
  }
}

std::string format_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

void PotentialSpec::validate() const {
  const bool flat_ok = std::visit(
      [](const auto& m) {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, HarmonicPotential>) {
          return positive_finite(m.k);
        } else if constexpr (std::is_same_v<M, SeparatedInversePotential>) {
          return positive_finite(m.c) && positive_finite(m.d);
        } else {
          return positive_finite(m.kappa);
        }
      },
      flat);
  if (!flat_ok) throw Error(ErrorKind::Domain, "flat potential coefficients must be positive");
  if (!positive_finite(thickness.a) || !positive_finite(thickness.b)) {
    throw Error(ErrorKind::Domain, "thickness potential coefficients must be positive");
  }
}

bool PotentialSpec::flat_symmetric() const {
  if (const auto* sep = std::get_if<SeparatedInversePotential>(&flat)) return sep->c == sep->d;
  return true;
}

std::string PotentialSpec::to_string() const {
  std::string out = std::visit(
      [](const auto& m) -> std::string {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, HarmonicPotential>) {
          return "HARMONIC(k=" + format_number(m.k) + ")";
        } else if constexpr (std::is_same_v<M, SeparatedInversePotential>) {
          return "SEPARATED_INVERSE(c=" + format_number(m.c) + ",d=" + format_number(m.d) + ")";
        } else {
          return "TRACE_INVERSE(kappa=" + format_number(m.kappa) + ")";
        }
      },
      flat);
  out += ";THICKNESS(a=" + format_number(thickness.a) + ",b=" + format_number(thickness.b) + ")";
  return out;
}

PotentialSpec PotentialSpec::parse(const std::string& text) {
  static const std::regex term(R"(^\s*([A-Z_]+)\s*\(([^()]*)\)\s*$)");
  static const std::regex arg(R"(^\s*([a-z]+)\s*=\s*(\S+)\s*$)");

  auto fail = [&](const std::string& why) -> Error {
    return Error(ErrorKind::Config, "potential \"" + text + "\": " + why);
  };

  std::map<std::string, std::map<std::string, double>> terms;
  std::stringstream parts(text);
  std::string part;
  while (std::getline(parts, part, ';')) {
    std::smatch m;
    if (!std::regex_match(part, m, term)) throw fail("cannot parse term \"" + part + "\"");
    auto& args = terms[m[1].str()];
    std::stringstream list(m[2].str());
    std::string item;
    while (std::getline(list, item, ',')) {
      std::smatch a;
      if (!std::regex_match(item, a, arg)) throw fail("cannot parse argument \"" + item + "\"");
      std::size_t used = 0;
      double value = 0.0;
      try {
        value = std::stod(a[2].str(), &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != a[2].str().size()) throw fail("bad number \"" + a[2].str() + "\"");
      args[a[1].str()] = value;
    }
  }

  auto take = [&](const std::string& model, const std::map<std::string, double>& args,
                  std::initializer_list<const char*> names) {
    if (args.size() != names.size()) throw fail(model + " expects " + std::to_string(names.size()) + " coefficient(s)");
    std::vector<double> out;
    for (const char* n : names) {
      auto it = args.find(n);
      if (it == args.end()) throw fail(model + " is missing coefficient " + n);
      out.push_back(it->second);
    }
    return out;
  };

  PotentialSpec spec;
  int flat_count = 0;
  bool have_thickness = false;
  for (const auto& [name, args] : terms) {
    if (name == "HARMONIC") {
      spec.flat = HarmonicPotential{take(name, args, {"k"})[0]};
      ++flat_count;
    } else if (name == "SEPARATED_INVERSE") {
      const auto v = take(name, args, {"c", "d"});
      spec.flat = SeparatedInversePotential{v[0], v[1]};
      ++flat_count;
    } else if (name == "TRACE_INVERSE") {
      spec.flat = TraceInversePotential{take(name, args, {"kappa"})[0]};
      ++flat_count;
    } else if (name == "THICKNESS") {
      const auto v = take(name, args, {"a", "b"});
      spec.thickness = ThicknessPotential{v[0], v[1]};
      have_thickness = true;
    } else {
      throw fail("unknown model " + name);
    }
  }
  if (flat_count != 1) throw fail("exactly one flat model is required");
  if (!have_thickness) throw fail("THICKNESS term is required");
  try {
    spec.validate();
  } catch (const Error& e) {
    throw fail(e.what());
  }
  return spec;
}

double flat_potential_value(const FlatPotential& flat, double lambda, double mu) {
  return detail::flat_potential<double>(flat, lambda, mu);
}

Vec2 flat_potential_gradient(const FlatPotential& flat, double lambda, double mu) {
  return std::visit(
      [&](const auto& m) -> Vec2 {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, HarmonicPotential>) {
          return {m.k * lambda, m.k * mu};
        } else if constexpr (std::is_same_v<M, SeparatedInversePotential>) {
          return {m.c * (2.0 * lambda - 2.0 / (lambda * lambda * lambda)),
                  m.d * (2.0 * mu - 2.0 / (mu * mu * mu))};
        } else {
          return {m.kappa * (lambda - 1.0 / (lambda * lambda * mu)),
                  m.kappa * (mu - 1.0 / (lambda * mu * mu))};
        }
      },
      flat);
}

double thickness_potential_value(const ThicknessPotential& th, double rho) {
  return detail::thickness_potential<double>(th, rho);
}

double thickness_potential_derivative(const ThicknessPotential& th, double rho) {
  return -th.a / (rho * rho) + th.b * rho;
}

double potential_value(const PotentialSpec& spec, double lambda, double mu, double rho) {
  require_positive_stretches(lambda, mu, rho);
  return flat_potential_value(spec.flat, lambda, mu) +
         thickness_potential_value(spec.thickness, rho);
}

Vec3 potential_gradient(const PotentialSpec& spec, double lambda, double mu, double rho) {
  require_positive_stretches(lambda, mu, rho);
  const Vec2 g = flat_potential_gradient(spec.flat, lambda, mu);
  return {g(0), g(1), thickness_potential_derivative(spec.thickness, rho)};
}

// ------------------------------------------------------------ kinetic energy

namespace {

void require_isotropic(const InertiaSpec& inertia, const char* where) {
  if (!inertia.is_isotropic()) {
    throw Error(ErrorKind::Misuse,
                std::string(where) + " requires J1 == J2 (isotropic in the plane)");
  }
}

// Angle-dependent combinations of the planar inertia.
struct PlanarInertia {
  double cos_weighted;  // J1 cos²θ + J2 sin²θ
  double sin_weighted;  // J1 sin²θ + J2 cos²θ
  double cross;         // (J1 − J2) sinθ cosθ
};

PlanarInertia planar_inertia(const InertiaSpec& j, double theta) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  return {j.J1 * c * c + j.J2 * s * s, j.J1 * s * s + j.J2 * c * c, (j.J1 - j.J2) * s * c};
}

}  // namespace

Mat3 placement_velocity(const Rotation3& attitude, const ShapeCoords& shape,
                        const VelocityCoords& vel) {
  shape.validate();
  const Eigen::DiagonalMatrix<double, 3> d(shape.lambda, shape.mu, shape.rho);
  const Mat3 d_dot = Vec3(vel.lambda_dot, vel.mu_dot, vel.rho_dot).asDiagonal();
  const Mat3 inner =
      d_dot + spin_matrix(vel.omega()) * d - d * material_spin_matrix(vel.theta_dot);
  return attitude.matrix() * inner * material_rotation(shape.theta).matrix();
}

double kinetic_energy_trace(const Mat3& phi_dot, const InertiaSpec& inertia) {
  const Vec3 j(inertia.J1, inertia.J2, inertia.J3);
  // Tr(J Φ̇ᵀΦ̇) = Σ_k J_k |column_k(Φ̇)|²
  return 0.5 * (phi_dot.colwise().squaredNorm().transpose().cwiseProduct(j)).sum();
}

double kinetic_energy_velocities(const ShapeCoords& shape, const VelocityCoords& v,
                                 const InertiaSpec& inertia) {
  shape.validate();
  const auto [jc, js, jx] = planar_inertia(inertia, shape.theta);
  const double l = shape.lambda;
  const double m = shape.mu;
  const double r2 = shape.rho * shape.rho;
  const double j3 = inertia.J3;

  double t = 0.5 * jc * v.lambda_dot * v.lambda_dot;
  t += 0.5 * js * v.mu_dot * v.mu_dot;
  t += 0.5 * j3 * v.rho_dot * v.rho_dot;
  t += 0.5 * (js * m * m + j3 * r2) * v.omega1 * v.omega1;
  t += 0.5 * (jc * l * l + j3 * r2) * v.omega2 * v.omega2;
  t += (inertia.J1 + inertia.J2) * l * m * v.omega3 * v.theta_dot;
  t += jx * ((m * v.mu_dot - l * v.lambda_dot) * v.theta_dot +
             (l * v.mu_dot - m * v.lambda_dot) * v.omega3 + l * m * v.omega1 * v.omega2);
  t += 0.5 * (jc * l * l + js * m * m) * v.omega3 * v.omega3;
  t += 0.5 * (js * l * l + jc * m * m) * v.theta_dot * v.theta_dot;
  return t;
}

double kinetic_energy_isotropic(const ShapeCoords& shape, const VelocityCoords& v,
                                const InertiaSpec& inertia) {
  require_isotropic(inertia, "kinetic_energy_isotropic");
  shape.validate();
  const double j = inertia.J1;
  const double j3 = inertia.J3;
  const double l = shape.lambda;
  const double m = shape.mu;
  const double r2 = shape.rho * shape.rho;
  return 0.5 * j * (v.lambda_dot * v.lambda_dot + v.mu_dot * v.mu_dot) +
         0.5 * j3 * v.rho_dot * v.rho_dot +
         0.5 * (j * m * m + j3 * r2) * v.omega1 * v.omega1 +
         0.5 * (j * l * l + j3 * r2) * v.omega2 * v.omega2 +
         2.0 * j * l * m * v.omega3 * v.theta_dot +
         0.5 * j * (l * l + m * m) * (v.omega3 * v.omega3 + v.theta_dot * v.theta_dot);
}

MomentumCoords legendre_forward(const ShapeCoords& shape, const VelocityCoords& v,
                                const InertiaSpec& inertia) {
  shape.validate();
  const double l = shape.lambda;
  const double m = shape.mu;
  const double r2 = shape.rho * shape.rho;
  const double j3 = inertia.J3;
  MomentumCoords p;

  if (inertia.is_isotropic()) {
    const double j = inertia.J1;
    p.s1 = (j * m * m + j3 * r2) * v.omega1;
    p.s2 = (j * l * l + j3 * r2) * v.omega2;
    p.s3 = j * (l * l + m * m) * v.omega3 + 2.0 * j * l * m * v.theta_dot;
    p.p_theta = j * (l * l + m * m) * v.theta_dot + 2.0 * j * l * m * v.omega3;
    p.p_lambda = j * v.lambda_dot;
    p.p_mu = j * v.mu_dot;
    p.p_rho = j3 * v.rho_dot;
    return p;
  }

  const auto [jc, js, jx] = planar_inertia(inertia, shape.theta);
  const double jsum = inertia.J1 + inertia.J2;
  p.s1 = (js * m * m + j3 * r2) * v.omega1 + jx * l * m * v.omega2;
  p.s2 = (jc * l * l + j3 * r2) * v.omega2 + jx * l * m * v.omega1;
  p.s3 = (jc * l * l + js * m * m) * v.omega3 + jsum * l * m * v.theta_dot +
         jx * (l * v.mu_dot - m * v.lambda_dot);
  p.p_theta = (js * l * l + jc * m * m) * v.theta_dot + jsum * l * m * v.omega3 +
              jx * (m * v.mu_dot - l * v.lambda_dot);
  p.p_lambda = jc * v.lambda_dot - jx * (l * v.theta_dot + m * v.omega3);
  p.p_mu = js * v.mu_dot + jx * (m * v.theta_dot + l * v.omega3);
  p.p_rho = j3 * v.rho_dot;
  return p;
}

VelocityCoords legendre_inverse_isotropic(const ShapeCoords& shape, const MomentumCoords& p,
                                          const InertiaSpec& inertia) {
  require_isotropic(inertia, "legendre_inverse_isotropic");
  shape.validate();
  require_non_degenerate(shape.lambda, shape.mu, "legendre_inverse_isotropic");
  const double j = inertia.J1;
  const double j3 = inertia.J3;
  const double l2 = shape.lambda * shape.lambda;
  const double m2 = shape.mu * shape.mu;
  const double r2 = shape.rho * shape.rho;
  const double lm2 = 2.0 * shape.lambda * shape.mu;
  const double gap = l2 - m2;
  const double denom = j * gap * gap;

  VelocityCoords v;
  v.omega1 = p.s1 / (j * m2 + j3 * r2);
  v.omega2 = p.s2 / (j * l2 + j3 * r2);
  v.omega3 = ((l2 + m2) * p.s3 - lm2 * p.p_theta) / denom;
  v.theta_dot = ((l2 + m2) * p.p_theta - lm2 * p.s3) / denom;
  v.lambda_dot = p.p_lambda / j;
  v.mu_dot = p.p_mu / j;
  v.rho_dot = p.p_rho / j3;
  return v;
}

double kinetic_energy_canonical(const ShapeCoords& shape, const MomentumCoords& p,
                                const InertiaSpec& inertia) {
  require_isotropic(inertia, "kinetic_energy_canonical");
  shape.validate();
  require_non_degenerate(shape.lambda, shape.mu, "kinetic_energy_canonical");
  const detail::CanonicalPoint<double> x{shape.lambda, shape.mu, shape.rho, shape.theta,
                                         p.p_lambda,   p.p_mu,   p.p_rho,   p.p_theta,
                                         p.s1,         p.s2,     p.s3};
  return detail::canonical_kinetic(x, inertia.J1, inertia.J3);
}

namespace experimental {

Mat7 mass_matrix(const ShapeCoords& shape, const InertiaSpec& inertia) {
  Mat7 m;
  for (int k = 0; k < 7; ++k) {
    m.col(k) = to_vector(legendre_forward(shape, velocities_from_vector(Vec7::Unit(k)), inertia));
  }
  return 0.5 * (m + m.transpose());
}

VelocityCoords legendre_inverse_numeric(const ShapeCoords& shape, const MomentumCoords& mom,
                                        const InertiaSpec& inertia) {
  require_non_degenerate(shape.lambda, shape.mu, "legendre_inverse_numeric");
  const Eigen::LDLT<Mat7> ldlt(mass_matrix(shape, inertia));
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive()) {
    throw Error(ErrorKind::SingularMatrix, "mass matrix is not positive-definite");
  }
  return velocities_from_vector(ldlt.solve(to_vector(mom)));
}

double kinetic_energy_canonical_numeric(const ShapeCoords& shape, const MomentumCoords& mom,
                                        const InertiaSpec& inertia) {
  const Vec7 v = to_vector(legendre_inverse_numeric(shape, mom, inertia));
  return 0.5 * to_vector(mom).dot(v);
}

}  // namespace experimental

}  // namespace flatbody
