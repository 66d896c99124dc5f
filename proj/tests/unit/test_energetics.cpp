#include "flatbody/energetics.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

using namespace flatbody;
using flatbody::test::random_rotation;
using flatbody::test::random_velocities;
using flatbody::test::rel_diff;
using flatbody::test::uniform;

namespace {

const InertiaSpec kUnitIso = InertiaSpec::isotropic(1.0, 2.0);

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "expected an exception";
  return ErrorKind::Misuse;
}

}  // namespace

TEST(InertiaSpec, Validation) {
  EXPECT_NO_THROW((InertiaSpec{1, 2, 3}.validate()));
  EXPECT_EQ(kind_of([] { InertiaSpec{1, 0, 3}.validate(); }), ErrorKind::Domain);
  EXPECT_TRUE(InertiaSpec::isotropic(2, 1).is_isotropic());
  EXPECT_FALSE((InertiaSpec{1, 2, 3}.is_isotropic()));
}

TEST(KineticTrace, Examples) {
  EXPECT_EQ(kinetic_energy_trace(Mat3::Zero(), {1, 2, 3}), 0.0);
  EXPECT_DOUBLE_EQ(kinetic_energy_trace(Mat3::Identity(), {1, 2, 3}), 3.0);
}

TEST(KineticVelocities, AgreesWithTraceForm) {
  auto rng = test::rng_for(20);
  for (int i = 0; i < 500; ++i) {
    auto p = app::random_point(rng);
    InertiaSpec j{uniform(rng, 0.5, 3), uniform(rng, 0.5, 3), uniform(rng, 0.5, 3)};
    const VelocityCoords v = random_velocities(rng);
    const Mat3 phi_dot = placement_velocity(random_rotation(rng), p.state.shape, v);
    EXPECT_LE(rel_diff(kinetic_energy_velocities(p.state.shape, v, j),
                       kinetic_energy_trace(phi_dot, j)),
              1e-10);
  }
}

TEST(KineticVelocities, PlacementVelocityMatchesFiniteDifference) {
  auto rng = test::rng_for(21);
  auto p = app::random_point(rng);
  const Rotation3 r = random_rotation(rng);
  const VelocityCoords v = random_velocities(rng);
  const double h = 1e-6;
  const auto at = [&](double t) {
    ShapeCoords s = p.state.shape;
    s.lambda += v.lambda_dot * t;
    s.mu += v.mu_dot * t;
    s.rho += v.rho_dot * t;
    s.theta += v.theta_dot * t;
    const Mat3 rt = r.matrix() * spin_exponential(v.omega(), t);
    return assemble_placement(Rotation3::nearest(rt), s);
  };
  const Mat3 fd = (at(h) - at(-h)) / (2 * h);
  EXPECT_LE((fd - placement_velocity(r, p.state.shape, v)).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(KineticIsotropic, Examples) {
  const ShapeCoords s{2, 1, 1, 0.4};
  EXPECT_EQ(kinetic_energy_isotropic(s, {}, kUnitIso), 0.0);
  VelocityCoords v;
  v.rho_dot = 1;
  EXPECT_DOUBLE_EQ(kinetic_energy_isotropic(s, v, kUnitIso), 1.0);
  VelocityCoords w;
  w.omega3 = 1;
  w.theta_dot = 1;
  EXPECT_DOUBLE_EQ(kinetic_energy_isotropic(s, w, InertiaSpec::isotropic(1, 1)), 9.0);
  EXPECT_EQ(kind_of([&] { kinetic_energy_isotropic(s, w, {1, 2, 1}); }), ErrorKind::Misuse);
}

TEST(KineticIsotropic, ReducesFromVelocityForm) {
  auto rng = test::rng_for(22);
  for (int i = 0; i < 500; ++i) {
    auto p = app::random_point(rng);
    const VelocityCoords v = random_velocities(rng);
    EXPECT_LE(rel_diff(kinetic_energy_velocities(p.state.shape, v, p.inertia),
                       kinetic_energy_isotropic(p.state.shape, v, p.inertia)),
              1e-12);
  }
}

TEST(Legendre, ForwardExamples) {
  const ShapeCoords s{2, 1, 1, 0};
  const MomentumCoords zero = legendre_forward(s, {}, kUnitIso);
  EXPECT_EQ(to_vector(zero).norm(), 0.0);

  VelocityCoords v;
  v.lambda_dot = 0.5;
  const MomentumCoords m = legendre_forward(s, v, kUnitIso);
  EXPECT_DOUBLE_EQ(m.p_lambda, 0.5);
  EXPECT_EQ(to_vector(m).cwiseAbs().sum(), 0.5);

  VelocityCoords w;
  w.omega1 = 1;
  EXPECT_DOUBLE_EQ(legendre_forward(s, w, kUnitIso).s1, 3.0);
}

TEST(Legendre, InverseExample) {
  MomentumCoords m;
  m.s3 = 9;
  const VelocityCoords v = legendre_inverse_isotropic({2, 1, 1, 0}, m, InertiaSpec::isotropic(1, 1));
  EXPECT_DOUBLE_EQ(v.omega3, 5.0);
  EXPECT_EQ(to_vector(legendre_inverse_isotropic({2, 1, 1, 0}, {}, kUnitIso)).norm(), 0.0);
}

TEST(Legendre, InverseRejectsDegenerate) {
  EXPECT_EQ(kind_of([] { legendre_inverse_isotropic({1.5, 1.5, 1, 0}, {}, kUnitIso); }),
            ErrorKind::Degenerate);
  EXPECT_EQ(kind_of([] { kinetic_energy_canonical({1.5, 1.5, 1, 0}, {}, kUnitIso); }),
            ErrorKind::Degenerate);
}

TEST(Legendre, DualityAndEulerRelation) {
  auto rng = test::rng_for(23);
  for (int i = 0; i < 1000; ++i) {
    auto p = app::random_point(rng);
    const auto& s = p.state.shape;
    const Vec7 m0 = to_vector(p.state.mom);
    const Vec7 m1 =
        to_vector(legendre_forward(s, legendre_inverse_isotropic(s, p.state.mom, p.inertia), p.inertia));
    EXPECT_LE((m1 - m0).cwiseAbs().maxCoeff(), 1e-12);

    const VelocityCoords v = random_velocities(rng);
    const Vec7 v1 =
        to_vector(legendre_inverse_isotropic(s, legendre_forward(s, v, p.inertia), p.inertia));
    EXPECT_LE((v1 - to_vector(v)).cwiseAbs().maxCoeff(), 1e-12);

    const double pv = to_vector(legendre_forward(s, v, p.inertia)).dot(to_vector(v));
    EXPECT_LE(rel_diff(pv, 2 * kinetic_energy_velocities(s, v, p.inertia)), 1e-10);
  }
}

TEST(Legendre, AnisotropicEulerRelation) {
  auto rng = test::rng_for(24);
  for (int i = 0; i < 300; ++i) {
    auto p = app::random_point(rng);
    const InertiaSpec j{uniform(rng, 0.5, 3), uniform(rng, 0.5, 3), uniform(rng, 0.5, 3)};
    const VelocityCoords v = random_velocities(rng);
    const double pv = to_vector(legendre_forward(p.state.shape, v, j)).dot(to_vector(v));
    EXPECT_LE(rel_diff(pv, 2 * kinetic_energy_velocities(p.state.shape, v, j)), 1e-10);
  }
}

TEST(KineticCanonical, Examples) {
  EXPECT_EQ(kinetic_energy_canonical({2, 1, 1, 0}, {}, kUnitIso), 0.0);
  MomentumCoords m;
  m.p_rho = 2;
  EXPECT_DOUBLE_EQ(kinetic_energy_canonical({2, 1, 1, 0}, m, kUnitIso), 1.0);
}

TEST(KineticCanonical, MatchesVelocityFormAfterInverse) {
  auto rng = test::rng_for(25);
  for (int i = 0; i < 1000; ++i) {
    auto p = app::random_point(rng);
    const auto& s = p.state.shape;
    const double can = kinetic_energy_canonical(s, p.state.mom, p.inertia);
    const double iso =
        kinetic_energy_isotropic(s, legendre_inverse_isotropic(s, p.state.mom, p.inertia), p.inertia);
    EXPECT_LE(rel_diff(can, iso), 1e-10);
    EXPECT_GE(can, 0.0);
  }
}

TEST(ExperimentalInverse, MatchesClosedFormWhenIsotropic) {
  auto rng = test::rng_for(26);
  for (int i = 0; i < 100; ++i) {
    auto p = app::random_point(rng);
    const Vec7 a = to_vector(experimental::legendre_inverse_numeric(p.state.shape, p.state.mom, p.inertia));
    const Vec7 b = to_vector(legendre_inverse_isotropic(p.state.shape, p.state.mom, p.inertia));
    EXPECT_LE((a - b).cwiseAbs().maxCoeff(), 1e-9);
  }
}

TEST(ExperimentalInverse, InvertsAnisotropicForwardMap) {
  auto rng = test::rng_for(27);
  for (int i = 0; i < 100; ++i) {
    auto p = app::random_point(rng);
    const InertiaSpec j{uniform(rng, 0.5, 3), uniform(rng, 0.5, 3), uniform(rng, 0.5, 3)};
    const VelocityCoords v = random_velocities(rng);
    const MomentumCoords m = legendre_forward(p.state.shape, v, j);
    const Vec7 back = to_vector(experimental::legendre_inverse_numeric(p.state.shape, m, j));
    EXPECT_LE((back - to_vector(v)).cwiseAbs().maxCoeff(), 1e-9);
  }
}

TEST(Potential, ValueExamples) {
  const PotentialSpec harm{HarmonicPotential{1}, {1, 1}};
  EXPECT_DOUBLE_EQ(potential_value(harm, 2, 1, 1), 4.0);
  const PotentialSpec trace{TraceInversePotential{1}, {1, 1}};
  EXPECT_DOUBLE_EQ(potential_value(trace, 1, 1, 1), 2.0 + 1.5);
  const PotentialSpec sep{SeparatedInversePotential{1, 1}, {1, 1}};
  EXPECT_DOUBLE_EQ(potential_value(sep, 1, 1, 1), 4.0 + 1.5);
  EXPECT_EQ(kind_of([&] { potential_value(harm, -1, 1, 1); }), ErrorKind::Domain);
  EXPECT_EQ(kind_of([&] { potential_gradient(harm, 1, 1, 0); }), ErrorKind::Domain);
}

TEST(Potential, GradientExamples) {
  const PotentialSpec harm{HarmonicPotential{2}, {1, 8}};
  EXPECT_DOUBLE_EQ(potential_gradient(harm, 3, 1, 1)(0), 6.0);
  EXPECT_DOUBLE_EQ(potential_gradient(harm, 3, 1, 0.5)(2), 0.0);
  EXPECT_DOUBLE_EQ((ThicknessPotential{1, 8}.equilibrium()), 0.5);
}

TEST(Potential, GradientsMatchFiniteDifferences) {
  auto rng = test::rng_for(28);
  for (int i = 0; i < 300; ++i) {
    const auto p = app::random_point(rng);
    const Vec3 x(uniform(rng, 0.3, 3), uniform(rng, 0.3, 3), uniform(rng, 0.3, 3));
    const Vec3 g = potential_gradient(p.potential, x(0), x(1), x(2));
    for (int c = 0; c < 3; ++c) {
      Vec3 a = x;
      Vec3 b = x;
      a(c) += 1e-6;
      b(c) -= 1e-6;
      const double fd = (potential_value(p.potential, a(0), a(1), a(2)) -
                         potential_value(p.potential, b(0), b(1), b(2))) /
                        2e-6;
      EXPECT_LE(std::abs(fd - g(c)), 1e-6 * std::max(1.0, std::abs(g(c))));
    }
  }
}

TEST(PotentialSpec, TextRoundTrip) {
  const PotentialSpec spec = PotentialSpec::parse("SEPARATED_INVERSE(c=1.5,d=0.25);THICKNESS(a=1,b=8)");
  EXPECT_TRUE(std::holds_alternative<SeparatedInversePotential>(spec.flat));
  EXPECT_FALSE(spec.flat_symmetric());
  EXPECT_EQ(PotentialSpec::parse(spec.to_string()).to_string(), spec.to_string());
  EXPECT_TRUE(PotentialSpec::parse("TRACE_INVERSE(kappa=2);THICKNESS(a=1,b=1)").flat_symmetric());
}

TEST(PotentialSpec, ParseErrors) {
  for (const char* bad : {"HARMONIC(k=1)", "HARMONIC(k=-1);THICKNESS(a=1,b=1)",
                          "CUBIC(k=1);THICKNESS(a=1,b=1)", "HARMONIC(q=1);THICKNESS(a=1,b=1)",
                          "HARMONIC(k=1x);THICKNESS(a=1,b=1)"}) {
    EXPECT_THROW(PotentialSpec::parse(bad), Error) << bad;
  }
}
