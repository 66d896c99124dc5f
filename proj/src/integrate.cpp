#include "flatbody/integrate.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace flatbody {

std::string_view to_string(IntegratorMethod method) noexcept {
  switch (method) {
    case IntegratorMethod::Rk4Fixed: return "RK4_FIXED";
    case IntegratorMethod::Rk45Adaptive: return "RK45_ADAPTIVE";
  }
  return "unknown";
}

std::string_view to_string(Termination t) noexcept {
  switch (t) {
    case Termination::Completed: return "completed";
    case Termination::Degeneracy: return "degeneracy";
    case Termination::LeftDomain: return "left_domain";
    case Termination::NonFinite: return "non_finite";
    case Termination::StepUnderflow: return "step_underflow";
  }
  return "unknown";
}

void IntegratorConfig::validate() const {
  auto fail = [](const std::string& field, const std::string& why) {
    throw Error(ErrorKind::Config, "integrator." + field + ": " + why);
  };
  auto positive = [&](double v, const char* field) {
    if (!std::isfinite(v) || v <= 0.0) fail(field, "must be positive and finite");
  };
  positive(dt, "dt");
  positive(t_end, "t_end");
  positive(degeneracy_epsilon, "degeneracy_epsilon");
  if (sample_stride < 1) fail("sample_stride", "must be >= 1");
  if (method == IntegratorMethod::Rk45Adaptive) {
    positive(rel_tol, "rel_tol");
    positive(abs_tol, "abs_tol");
    positive(dt_min, "dt_min");
    positive(dt_max, "dt_max");
    if (dt_min > dt_max) fail("dt_min", "must not exceed dt_max");
  }
}

namespace {

// Phase coordinates followed by the attitude entries (row-major).
constexpr int kExtDim = kPhaseDim + 9;
using ExtVector = Eigen::Matrix<double, kExtDim, 1>;

ExtVector pack(const CanonicalState& s) {
  ExtVector y = ExtVector::Zero();
  y.head<kPhaseDim>() = to_phase_vector(s);
  if (s.attitude) {
    const Mat3& r = s.attitude->matrix();
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) y(kPhaseDim + 3 * i + j) = r(i, j);
  }
  return y;
}

Mat3 attitude_block(const ExtVector& y) {
  Mat3 r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r(i, j) = y(kPhaseDim + 3 * i + j);
  return r;
}

CanonicalState unpack(const ExtVector& y, bool with_attitude) {
  CanonicalState s = state_from_phase_vector(y.head<kPhaseDim>());
  if (with_attitude) s.attitude = Rotation3::nearest(attitude_block(y));
  return s;
}

class VectorField {
 public:
  VectorField(const InertiaSpec& inertia, const PotentialSpec& potential, bool with_attitude)
      : inertia_(inertia), potential_(potential), with_attitude_(with_attitude) {}

  ExtVector operator()(const ExtVector& y) const {
    const CanonicalState s = state_from_phase_vector(y.head<kPhaseDim>());
    ExtVector dy = ExtVector::Zero();
    dy.head<kPhaseDim>() = to_phase_vector(eom_closed_form(s, inertia_, potential_));
    if (with_attitude_) {
      // Stage values of R are not orthogonal; apply dR/dt = R ω directly.
      const Mat3 dr = attitude_block(y) * spin_matrix(angular_velocity_from_state(s, inertia_));
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) dy(kPhaseDim + 3 * i + j) = dr(i, j);
    }
    return dy;
  }

 private:
  const InertiaSpec& inertia_;
  const PotentialSpec& potential_;
  bool with_attitude_;
};

ExtVector rk4(const VectorField& f, const ExtVector& y, double h) {
  const ExtVector k1 = f(y);
  const ExtVector k2 = f(y + 0.5 * h * k1);
  const ExtVector k3 = f(y + 0.5 * h * k2);
  const ExtVector k4 = f(y + h * k3);
  return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

// Dormand–Prince 5(4).
struct EmbeddedStep {
  ExtVector y;
  ExtVector error;
};

EmbeddedStep dopri5(const VectorField& f, const ExtVector& y, double h) {
  constexpr double a21 = 1.0 / 5.0;
  constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
  constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
  constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0,
                   a54 = -212.0 / 729.0;
  constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                   a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
  constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0,
                   b5 = -2187.0 / 6784.0, b6 = 11.0 / 84.0;
  constexpr double e1 = b1 - 5179.0 / 57600.0, e3 = b3 - 7571.0 / 16695.0,
                   e4 = b4 - 393.0 / 640.0, e5 = b5 + 92097.0 / 339200.0,
                   e6 = b6 - 187.0 / 2100.0, e7 = -1.0 / 40.0;

  const ExtVector k1 = f(y);
  const ExtVector k2 = f(y + h * a21 * k1);
  const ExtVector k3 = f(y + h * (a31 * k1 + a32 * k2));
  const ExtVector k4 = f(y + h * (a41 * k1 + a42 * k2 + a43 * k3));
  const ExtVector k5 = f(y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
  const ExtVector k6 = f(y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
  const ExtVector y5 = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
  const ExtVector k7 = f(y5);
  return {y5, h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7)};
}

double error_norm(const EmbeddedStep& step, const ExtVector& y, const IntegratorConfig& cfg) {
  double sum = 0.0;
  for (int i = 0; i < kPhaseDim; ++i) {
    const double scale = cfg.abs_tol + cfg.rel_tol * std::max(std::abs(y(i)), std::abs(step.y(i)));
    const double e = step.error(i) / scale;
    sum += e * e;
  }
  return std::sqrt(sum / kPhaseDim);
}

double planar_gap(const CanonicalState& s) {
  return std::abs(s.shape.lambda * s.shape.lambda - s.shape.mu * s.shape.mu);
}

class Monitor {
 public:
  Monitor(const TrajectorySample& first) : first_(first) {
    report_.min_degeneracy_gap = planar_gap(first.state);
    observe_attitude(first.state);
  }

  void observe(const TrajectorySample& s) {
    const double h0 = first_.energy;
    const double drift = std::abs(s.energy - h0) / (h0 != 0.0 ? std::abs(h0) : 1.0);
    report_.max_rel_energy_drift = std::max(report_.max_rel_energy_drift, drift);
    report_.max_abs_p_theta_drift =
        std::max(report_.max_abs_p_theta_drift, std::abs(s.p_theta - first_.p_theta));
    report_.min_degeneracy_gap = std::min(report_.min_degeneracy_gap, planar_gap(s.state));
    report_.max_invariant_drift =
        std::max(report_.max_invariant_drift,
                 (s.invariants - first_.invariants).cwiseAbs().maxCoeff());
    observe_attitude(s.state);
  }

  const ConservationReport& report() const { return report_; }

 private:
  void observe_attitude(const CanonicalState& s) {
    if (s.attitude) {
      report_.attitude_orthogonality_max_defect =
          std::max(report_.attitude_orthogonality_max_defect,
                   orthogonality_defect(s.attitude->matrix()));
    }
  }

  TrajectorySample first_;
  ConservationReport report_;
};

bool shape_in_chart(const ExtVector& y) {
  return y(phase::lambda) > 0.0 && y(phase::mu) > 0.0 && y(phase::rho) > 0.0;
}

}  // namespace

TrajectorySample make_sample(double t, const CanonicalState& state, const InertiaSpec& inertia,
                             const PotentialSpec& potential) {
  TrajectorySample s;
  s.t = t;
  s.state = state;
  s.energy = hamiltonian(state, inertia, potential);
  s.p_theta = state.mom.p_theta;
  s.invariants = deformation_invariants(green_tensor(state.shape));
  return s;
}

CanonicalState step_rk4(const CanonicalState& state, double dt, const InertiaSpec& inertia,
                        const PotentialSpec& potential) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw Error(ErrorKind::Domain, "dt must be positive");
  const bool with_attitude = state.attitude.has_value();
  const VectorField f(inertia, potential, with_attitude);
  const ExtVector y = rk4(f, pack(state), dt);
  if (!y.allFinite()) throw Error(ErrorKind::Domain, "RK4 step produced non-finite values");
  return unpack(y, with_attitude);
}

IntegrationResult integrate(const CanonicalState& initial, const IntegratorConfig& config,
                            const InertiaSpec& inertia, const PotentialSpec& potential) {
  config.validate();
  inertia.validate();
  potential.validate();
  initial.shape.validate();
  require_non_degenerate(initial.shape.lambda, initial.shape.mu, "integrate");
  if (planar_gap(initial) < config.degeneracy_epsilon) {
    throw Error(ErrorKind::Degenerate,
                "integrate: initial |lambda^2 - mu^2| is below degeneracy_epsilon");
  }

  const bool with_attitude = initial.attitude.has_value();
  const VectorField f(inertia, potential, with_attitude);

  IntegrationResult result;
  TrajectorySample first = make_sample(0.0, initial, inertia, potential);
  Monitor monitor(first);
  result.samples.push_back(first);

  ExtVector y = pack(initial);
  CanonicalState current = initial;
  double t = 0.0;
  long since_sample = 0;

  auto flag = [&](Termination why, std::string reason) {
    result.termination = why;
    result.reason = std::move(reason);
  };

  // Returns false when the run must stop.
  auto accept = [&](const ExtVector& y_new, double t_new) {
    if (!y_new.allFinite()) {
      flag(Termination::NonFinite, "non-finite state at t = " + std::to_string(t_new));
      return false;
    }
    if (!shape_in_chart(y_new)) {
      flag(Termination::LeftDomain, "a stretch became non-positive at t = " + std::to_string(t_new));
      return false;
    }
    CanonicalState next = unpack(y_new, with_attitude);
    if (planar_gap(next) < config.degeneracy_epsilon || is_degenerate(next.shape.lambda, next.shape.mu)) {
      flag(Termination::Degeneracy,
           "|lambda^2 - mu^2| fell below degeneracy_epsilon at t = " + std::to_string(t_new));
      return false;
    }
    if (with_attitude) y.tail<9>() = pack(next).tail<9>();
    y.head<kPhaseDim>() = y_new.head<kPhaseDim>();
    t = t_new;
    current = std::move(next);
    ++result.accepted_steps;
    TrajectorySample sample = make_sample(t, current, inertia, potential);
    monitor.observe(sample);
    if (++since_sample >= config.sample_stride) {
      result.samples.push_back(std::move(sample));
      since_sample = 0;
    }
    return true;
  };

  auto guarded = [&](auto&& stage) -> bool {
    try {
      return stage();
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::Degenerate) {
        flag(Termination::Degeneracy, e.what());
      } else if (e.kind() == ErrorKind::Domain) {
        flag(Termination::LeftDomain, e.what());
      } else {
        throw;
      }
      return false;
    }
  };

  if (config.method == IntegratorMethod::Rk4Fixed) {
    const long n = static_cast<long>(std::ceil(config.t_end / config.dt - 1e-9));
    for (long i = 1; i <= n; ++i) {
      const double t_next = i == n ? config.t_end : static_cast<double>(i) * config.dt;
      const double h = t_next - t;
      if (!guarded([&] { return accept(rk4(f, y, h), t_next); })) break;
    }
  } else {
    double h = std::clamp(config.dt, config.dt_min, config.dt_max);
    while (t < config.t_end) {
      const bool last = t + h >= config.t_end;
      const double step = last ? config.t_end - t : h;
      bool keep_going = true;
      bool accepted = false;
      keep_going = guarded([&] {
        const EmbeddedStep trial = dopri5(f, y, step);
        const double err = error_norm(trial, y, config);
        const double factor =
            err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
        if (std::isfinite(err) && err <= 1.0) {
          accepted = true;
          if (!accept(trial.y, last ? config.t_end : t + step)) return false;
          h = std::min(config.dt_max, step * factor);
          if (!last) h = std::max(h, config.dt_min);
          return true;
        }
        ++result.rejected_steps;
        h = step * (std::isfinite(err) ? factor : 0.2);
        if (h < config.dt_min) {
          flag(Termination::StepUnderflow,
               "step size fell below dt_min at t = " + std::to_string(t));
          return false;
        }
        return true;
      });
      if (!keep_going) break;
      if (accepted && last) break;
    }
  }

  if (result.samples.back().t != t) {
    result.samples.push_back(make_sample(t, current, inertia, potential));
  }
  if (result.termination == Termination::Completed) result.reason = "reached t_end";
  result.t_final = t;
  result.final_state = current;
  result.report = monitor.report();
  return result;
}

Mat3 reconstruct_placement(const TrajectorySample& sample) {
  if (!sample.state.attitude) {
    throw Error(ErrorKind::Misuse, "reconstruct_placement needs a sample that carries attitude");
  }
  return assemble_placement(*sample.state.attitude, sample.state.shape);
}

}  // namespace flatbody
