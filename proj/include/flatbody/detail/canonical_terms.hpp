#pragma once

// Scalar-generic evaluation of the isotropic Hamiltonian pieces. The
// double instantiation backs the public API; the bracket oracle runs the
// long double one so its finite differences stay above rounding noise.

#include "flatbody/energetics.hpp"

#include <cmath>
#include <type_traits>
#include <variant>

namespace flatbody::detail {

template <class Real>
struct CanonicalPoint {
  Real lambda, mu, rho, theta;
  Real p_lambda, p_mu, p_rho, p_theta;
  Real s1, s2, s3;
};

template <class Real>
Real canonical_kinetic(const CanonicalPoint<Real>& x, Real j, Real j3) {
  const Real l2 = x.lambda * x.lambda;
  const Real m2 = x.mu * x.mu;
  const Real r2 = x.rho * x.rho;
  const Real gap = l2 - m2;
  const Real spin12 = x.s1 * x.s1 / (2 * (j * m2 + j3 * r2)) +
                      x.s2 * x.s2 / (2 * (j * l2 + j3 * r2));
  const Real planar = ((l2 + m2) * (x.s3 * x.s3 + x.p_theta * x.p_theta) -
                       4 * x.lambda * x.mu * x.p_theta * x.s3) /
                      (2 * j * gap * gap);
  const Real shape = (x.p_lambda * x.p_lambda + x.p_mu * x.p_mu) / (2 * j) +
                     x.p_rho * x.p_rho / (2 * j3);
  return spin12 + planar + shape;
}

template <class Real>
Real flat_potential(const FlatPotential& flat, Real lambda, Real mu) {
  return std::visit(
      [&](const auto& model) -> Real {
        using M = std::decay_t<decltype(model)>;
        if constexpr (std::is_same_v<M, HarmonicPotential>) {
          return Real(model.k) / 2 * (lambda * lambda + mu * mu);
        } else if constexpr (std::is_same_v<M, SeparatedInversePotential>) {
          return Real(model.c) * (1 / (lambda * lambda) + lambda * lambda) +
                 Real(model.d) * (1 / (mu * mu) + mu * mu);
        } else {
          return Real(model.kappa) * (1 / (lambda * mu) + (lambda * lambda + mu * mu) / 2);
        }
      },
      flat);
}

template <class Real>
Real thickness_potential(const ThicknessPotential& th, Real rho) {
  return Real(th.a) / rho + Real(th.b) / 2 * rho * rho;
}

template <class Real>
Real isotropic_hamiltonian(const CanonicalPoint<Real>& x, const InertiaSpec& inertia,
                           const PotentialSpec& potential) {
  return canonical_kinetic(x, Real(inertia.J1), Real(inertia.J3)) +
         flat_potential(potential.flat, x.lambda, x.mu) +
         thickness_potential(potential.thickness, x.rho);
}

}  // namespace flatbody::detail
