#pragma once

// Built-in invariant suite behind `flatbody check`.

#include "flatbody/integrate.hpp"
#include "flatbody/stationary.hpp"

#include <cstdint>
#include <ostream>
#include <random>
#include <string>
#include <vector>

namespace flatbody::app {

struct CheckResult {
  std::string name;
  bool passed = false;
  double max_error = 0.0;
  double tolerance = 0.0;
  std::string detail;
};

struct CheckOptions {
  std::uint64_t seed = 20240607;
  int samples = 1000;
};

/// A random isotropic point: stretches and inertia uniform in [0.5, 3],
/// θ in (−π/2, π/2], momenta and spin in [−2, 2], |λ − μ| ≥ 0.2.
struct RandomPoint {
  CanonicalState state;
  InertiaSpec inertia;
  PotentialSpec potential;
};

RandomPoint random_point(std::mt19937_64& rng);

/// Bounded reference motion used by the conservation checks: J = J3 = 1,
/// HARMONIC(k=1) with THICKNESS(a=1,b=1).
CanonicalState bounded_fixture_state();
InertiaSpec bounded_fixture_inertia();
PotentialSpec bounded_fixture_potential();

/// Stationary fixture: SEPARATED_INVERSE(c=d=1) with THICKNESS(a=1,b=8).
StationaryProblem stationary_fixture_problem();

std::vector<CheckResult> run_check_suite(const CheckOptions& options);

void print_check_table(std::ostream& out, const std::vector<CheckResult>& results);

}  // namespace flatbody::app
