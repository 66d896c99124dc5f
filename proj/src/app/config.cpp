#include "flatbody/app/config.hpp"

#include <cmath>
#include <fstream>
#include <set>

namespace flatbody::app {

using nlohmann::json;

namespace {

[[noreturn]] void config_error(const std::string& key, const std::string& why) {
  throw Error(ErrorKind::Config, "config error at '" + key + "': " + why);
}

std::string join(const std::string& prefix, const std::string& key) {
  return prefix.empty() ? key : prefix + "." + key;
}

void require_object(const json& node, const std::string& key) {
  if (!node.is_object()) config_error(key, "expected an object");
}

void reject_unknown(const json& node, const std::string& prefix,
                    std::initializer_list<const char*> allowed) {
  const std::set<std::string> names(allowed.begin(), allowed.end());
  for (const auto& item : node.items()) {
    if (!names.contains(item.key())) config_error(join(prefix, item.key()), "unknown key");
  }
}

double number(const json& node, const std::string& key) {
  if (!node.is_number()) config_error(key, "expected a number");
  const double v = node.get<double>();
  if (!std::isfinite(v)) config_error(key, "must be finite");
  return v;
}

double required_number(const json& obj, const std::string& prefix, const char* key) {
  if (!obj.contains(key)) config_error(join(prefix, key), "missing");
  return number(obj.at(key), join(prefix, key));
}

double optional_number(const json& obj, const std::string& prefix, const char* key,
                       double fallback) {
  return obj.contains(key) ? number(obj.at(key), join(prefix, key)) : fallback;
}

InertiaSpec parse_inertia(const json& node) {
  require_object(node, "inertia");
  reject_unknown(node, "inertia", {"J1", "J2", "J3"});
  InertiaSpec j{required_number(node, "inertia", "J1"), required_number(node, "inertia", "J2"),
                required_number(node, "inertia", "J3")};
  for (auto [name, v] : {std::pair{"J1", j.J1}, std::pair{"J2", j.J2}, std::pair{"J3", j.J3}}) {
    if (v <= 0.0) config_error(join("inertia", name), "must be positive");
  }
  return j;
}

PotentialSpec parse_potential(const json& node) {
  if (node.is_string()) {
    try {
      return PotentialSpec::parse(node.get<std::string>());
    } catch (const Error& e) {
      config_error("potential", e.what());
    }
  }
  require_object(node, "potential");
  reject_unknown(node, "potential", {"flat", "thickness"});
  if (!node.contains("flat")) config_error("potential.flat", "missing");
  if (!node.contains("thickness")) config_error("potential.thickness", "missing");

  PotentialSpec spec;
  const json& flat = node.at("flat");
  require_object(flat, "potential.flat");
  if (!flat.contains("model") || !flat.at("model").is_string()) {
    config_error("potential.flat.model", "expected HARMONIC, SEPARATED_INVERSE or TRACE_INVERSE");
  }
  const std::string model = flat.at("model").get<std::string>();
  const std::string p = "potential.flat";
  if (model == "HARMONIC") {
    reject_unknown(flat, p, {"model", "k"});
    spec.flat = HarmonicPotential{required_number(flat, p, "k")};
  } else if (model == "SEPARATED_INVERSE") {
    reject_unknown(flat, p, {"model", "c", "d"});
    spec.flat = SeparatedInversePotential{required_number(flat, p, "c"),
                                          required_number(flat, p, "d")};
  } else if (model == "TRACE_INVERSE") {
    reject_unknown(flat, p, {"model", "kappa"});
    spec.flat = TraceInversePotential{required_number(flat, p, "kappa")};
  } else {
    config_error("potential.flat.model", "unknown model '" + model + "'");
  }

  const json& th = node.at("thickness");
  require_object(th, "potential.thickness");
  reject_unknown(th, "potential.thickness", {"a", "b"});
  spec.thickness = {required_number(th, "potential.thickness", "a"),
                    required_number(th, "potential.thickness", "b")};
  try {
    spec.validate();
  } catch (const Error& e) {
    config_error("potential", e.what());
  }
  return spec;
}

CanonicalState parse_initial_state(const json& node) {
  const std::string p = "initial_state";
  require_object(node, p);
  reject_unknown(node, p,
                 {"lambda", "mu", "rho", "theta", "p_lambda", "p_mu", "p_rho", "p_theta", "s1",
                  "s2", "s3", "attitude"});
  CanonicalState s;
  s.shape.lambda = required_number(node, p, "lambda");
  s.shape.mu = required_number(node, p, "mu");
  s.shape.rho = required_number(node, p, "rho");
  s.shape.theta = optional_number(node, p, "theta", 0.0);
  s.mom.p_lambda = optional_number(node, p, "p_lambda", 0.0);
  s.mom.p_mu = optional_number(node, p, "p_mu", 0.0);
  s.mom.p_rho = optional_number(node, p, "p_rho", 0.0);
  s.mom.p_theta = optional_number(node, p, "p_theta", 0.0);
  s.mom.s1 = optional_number(node, p, "s1", 0.0);
  s.mom.s2 = optional_number(node, p, "s2", 0.0);
  s.mom.s3 = optional_number(node, p, "s3", 0.0);
  for (auto [name, v] : {std::pair{"lambda", s.shape.lambda}, std::pair{"mu", s.shape.mu},
                         std::pair{"rho", s.shape.rho}}) {
    if (v <= 0.0) config_error(join(p, name), "must be positive");
  }

  s.attitude = Rotation3::identity();
  if (node.contains("attitude")) {
    const json& a = node.at("attitude");
    const std::string key = join(p, "attitude");
    if (!a.is_array() || a.size() != 9) config_error(key, "expected 9 numbers (row-major)");
    Mat3 m;
    for (int i = 0; i < 9; ++i) m(i / 3, i % 3) = number(a.at(static_cast<std::size_t>(i)), key);
    if (orthogonality_defect(m) > 1e-9 || std::abs(m.determinant() - 1.0) > 1e-9) {
      config_error(key, "must be a rotation matrix (orthogonal, det = +1)");
    }
    s.attitude = Rotation3::nearest(m);
  }
  return s;
}

StationarySection parse_stationary(const json& node) {
  const std::string p = "stationary";
  require_object(node, p);
  reject_unknown(node, p, {"s3", "p_theta", "guess", "theta0"});
  StationarySection s;
  s.s3 = required_number(node, p, "s3");
  s.p_theta = required_number(node, p, "p_theta");
  s.theta0 = optional_number(node, p, "theta0", 0.0);
  if (node.contains("guess")) {
    const json& g = node.at("guess");
    const std::string key = join(p, "guess");
    if (!g.is_array() || g.size() != 3) config_error(key, "expected [lambda0, mu0, rho0]");
    for (std::size_t i = 0; i < 3; ++i) {
      s.guess[i] = number(g.at(i), key);
      if (s.guess[i] <= 0.0) config_error(key, "entries must be positive");
    }
  }
  return s;
}

IntegratorConfig parse_integrator(const json& node) {
  const std::string p = "integrator";
  require_object(node, p);
  reject_unknown(node, p,
                 {"method", "dt", "t_end", "sample_stride", "degeneracy_epsilon", "rel_tol",
                  "abs_tol", "dt_min", "dt_max"});
  IntegratorConfig c;
  if (node.contains("method")) {
    const json& m = node.at("method");
    const std::string name = m.is_string() ? m.get<std::string>() : "";
    if (name == "RK4_FIXED") {
      c.method = IntegratorMethod::Rk4Fixed;
    } else if (name == "RK45_ADAPTIVE") {
      c.method = IntegratorMethod::Rk45Adaptive;
    } else {
      config_error("integrator.method", "expected RK4_FIXED or RK45_ADAPTIVE");
    }
  }
  c.dt = required_number(node, p, "dt");
  c.t_end = required_number(node, p, "t_end");
  if (node.contains("sample_stride")) {
    const json& s = node.at("sample_stride");
    if (!s.is_number_integer()) config_error("integrator.sample_stride", "expected an integer");
    c.sample_stride = s.get<int>();
  }
  c.degeneracy_epsilon = optional_number(node, p, "degeneracy_epsilon", c.degeneracy_epsilon);
  c.rel_tol = optional_number(node, p, "rel_tol", c.rel_tol);
  c.abs_tol = optional_number(node, p, "abs_tol", c.abs_tol);
  c.dt_min = optional_number(node, p, "dt_min", c.dt_min);
  c.dt_max = optional_number(node, p, "dt_max", c.dt_max);
  try {
    c.validate();
  } catch (const Error& e) {
    // validate() names the field as "integrator.<field>: ..."
    const std::string what = e.what();
    const auto colon = what.find(':');
    config_error(what.substr(0, colon), what.substr(colon + 2));
  }
  return c;
}

OutputSection parse_output(const json& node) {
  require_object(node, "output");
  reject_unknown(node, "output", {"trajectory", "summary", "stationary"});
  OutputSection o;
  for (auto [key, field] : {std::pair{"trajectory", &o.trajectory},
                            std::pair{"summary", &o.summary},
                            std::pair{"stationary", &o.stationary}}) {
    if (!node.contains(key)) continue;
    if (!node.at(key).is_string()) config_error(join("output", key), "expected a file name");
    *field = node.at(key).get<std::string>();
  }
  return o;
}

SweepSection parse_sweep(const json& node) {
  require_object(node, "sweep");
  reject_unknown(node, "sweep", {"parameter", "values"});
  SweepSection s;
  if (!node.contains("parameter") || !node.at("parameter").is_string()) {
    config_error("sweep.parameter", "expected a dotted key such as \"initial_state.s3\"");
  }
  s.parameter = node.at("parameter").get<std::string>();
  if (!node.contains("values") || !node.at("values").is_array() || node.at("values").empty()) {
    config_error("sweep.values", "expected a non-empty array of numbers");
  }
  for (const json& v : node.at("values")) s.values.push_back(number(v, "sweep.values"));
  return s;
}

}  // namespace

StationaryProblem RunConfig::stationary_problem() const {
  if (!stationary) throw Error(ErrorKind::Config, "config error at 'stationary': missing");
  StationaryProblem p;
  p.s3 = stationary->s3;
  p.p_theta = stationary->p_theta;
  p.inertia = inertia;
  p.potential = potential;
  p.guess = stationary->guess;
  return p;
}

RunConfig parse_run_config(const json& doc) {
  if (!doc.is_object()) config_error("<root>", "expected a JSON object");
  reject_unknown(doc, "",
                 {"inertia", "potential", "initial_state", "stationary", "integrator", "output",
                  "sweep"});
  RunConfig cfg;
  if (!doc.contains("inertia")) config_error("inertia", "missing");
  cfg.inertia = parse_inertia(doc.at("inertia"));
  if (!doc.contains("potential")) config_error("potential", "missing");
  cfg.potential = parse_potential(doc.at("potential"));
  if (doc.contains("initial_state")) cfg.initial_state = parse_initial_state(doc.at("initial_state"));
  if (doc.contains("stationary")) cfg.stationary = parse_stationary(doc.at("stationary"));
  if (doc.contains("integrator")) {
    cfg.integrator = parse_integrator(doc.at("integrator"));
    cfg.has_integrator = true;
  }
  if (doc.contains("output")) cfg.output = parse_output(doc.at("output"));
  if (doc.contains("sweep")) {
    cfg.sweep = parse_sweep(doc.at("sweep"));
    // The path must exist in this document.
    json probe = doc;
    set_json_path(probe, cfg.sweep->parameter, cfg.sweep->values.front());
  }
  return cfg;
}

json load_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Config, "cannot open config file '" + path.string() + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::Config, "config file '" + path.string() + "' is not valid JSON: " +
                                       e.what());
  }
}

void set_json_path(json& doc, const std::string& dotted, double value) {
  json* node = &doc;
  std::size_t start = 0;
  while (true) {
    const std::size_t dot = dotted.find('.', start);
    const std::string key = dotted.substr(start, dot - start);
    if (!node->is_object() || !node->contains(key)) {
      config_error("sweep.parameter", "'" + dotted + "' does not name an existing entry");
    }
    node = &(*node)[key];
    if (dot == std::string::npos) break;
    start = dot + 1;
  }
  if (!node->is_number()) {
    config_error("sweep.parameter", "'" + dotted + "' does not name a number");
  }
  *node = value;
}

}  // namespace flatbody::app
