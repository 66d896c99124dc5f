#pragma once

// Time integration of the canonical equations with attitude
// reconstruction, conservation diagnostics and a hard stop near λ = μ.

#include "flatbody/hamiltonian.hpp"

#include <string>
#include <vector>

namespace flatbody {

enum class IntegratorMethod { Rk4Fixed, Rk45Adaptive };

struct IntegratorConfig {
  IntegratorMethod method = IntegratorMethod::Rk4Fixed;
  double dt = 1e-3;  // fixed step, or the initial step for the adaptive method
  double rel_tol = 1e-9;
  double abs_tol = 1e-12;
  double dt_min = 1e-10;
  double dt_max = 0.1;
  double t_end = 1.0;
  int sample_stride = 1;  // record every n-th accepted step
  /// Integration stops when |λ² − μ²| drops below this.
  double degeneracy_epsilon = 1e-6;

  /// Throws ErrorKind::Config naming the offending field.
  void validate() const;
};

std::string_view to_string(IntegratorMethod method) noexcept;

/// Snapshot with diagnostics recomputed from `state` (attitude, if any,
/// travels inside `state`).
struct TrajectorySample {
  double t = 0.0;
  CanonicalState state;
  double energy = 0.0;
  double p_theta = 0.0;
  Vec3 invariants = Vec3::Zero();  // (K1, K2, K3) descending
};

struct ConservationReport {
  double max_rel_energy_drift = 0.0;
  double max_abs_p_theta_drift = 0.0;
  double min_degeneracy_gap = 0.0;  // min |λ² − μ²|
  double attitude_orthogonality_max_defect = 0.0;
  double max_invariant_drift = 0.0;  // max |K_i(t) − K_i(0)|
};

enum class Termination { Completed, Degeneracy, LeftDomain, NonFinite, StepUnderflow };

std::string_view to_string(Termination t) noexcept;

struct IntegrationResult {
  std::vector<TrajectorySample> samples;
  ConservationReport report;
  Termination termination = Termination::Completed;
  std::string reason;
  double t_final = 0.0;
  CanonicalState final_state;
  long accepted_steps = 0;
  long rejected_steps = 0;

  bool completed() const noexcept { return termination == Termination::Completed; }
};

/// One classical Runge–Kutta step of the closed-form field. A carried
/// attitude advances with dR/dt = R ω through the same stages and is then
/// projected back onto SO(3).
CanonicalState step_rk4(const CanonicalState& state, double dt, const InertiaSpec& inertia,
                        const PotentialSpec& potential);

/// Integrates from `initial` to config.t_end. Approaching λ = μ, leaving
/// the chart (a stretch reaching 0) and non-finite values end the run early
/// with a flagged termination. An invalid configuration, or an initial
/// state that is already degenerate, throws.
IntegrationResult integrate(const CanonicalState& initial, const IntegratorConfig& config,
                            const InertiaSpec& inertia, const PotentialSpec& potential);

/// assemble_placement(R(t), shape(t)). Throws ErrorKind::Misuse if the
/// sample carries no attitude.
Mat3 reconstruct_placement(const TrajectorySample& sample);

TrajectorySample make_sample(double t, const CanonicalState& state, const InertiaSpec& inertia,
                             const PotentialSpec& potential);

}  // namespace flatbody
