#include "monokin/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "monokin/expression.hpp"
#include "monokin/numerics.hpp"

namespace monokin {

ParseError::ParseError(const std::string& source, int line, const std::string& what)
    : std::runtime_error(source + ":" + std::to_string(line) + ": " + what), line_(line) {}

ValidationError::ValidationError(std::string field, const std::string& what)
    : std::invalid_argument("invalid '" + field + "': " + what), field_(std::move(field)) {}

std::string to_string(Scenario s) {
  switch (s) {
    case Scenario::Eas: return "eas";
    case Scenario::Profile: return "profile";
    case Scenario::Vlasov: return "vlasov";
    case Scenario::Fp: return "fp";
    case Scenario::Characteristics: return "characteristics";
    case Scenario::Particles: return "particles";
  }
  return "?";
}

std::vector<double> RunConfig::sample_times() const {
  if (!snapshot_times.empty()) return snapshot_times;
  return {0.0, t_final / 3.0, 2.0 * t_final / 3.0, t_final};
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("path", "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ValidationError(key, "not a number: '" + v + "'");
  }
}

int to_int(const std::string& key, const std::string& v) {
  const double d = to_double(key, v);
  if (d != std::floor(d) || std::fabs(d) > 1e9) throw ValidationError(key, "not an integer: '" + v + "'");
  return static_cast<int>(d);
}

std::vector<double> to_list(const std::string& key, const std::string& v) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(to_double(key, item));
  }
  return out;
}

const std::set<std::string> kRunKeys = {
    "scenario", "nx",      "nxi",         "xi_max",   "t_final",     "dt",
    "cfl",      "epsilon", "sigma",       "delta",    "alpha",       "kernel",
    "kernel_beta", "u0",   "out_dir",     "sigma_g0", "seed",        "n_particles",
    "length",   "dynamics", "n_characteristics", "sigma_dims", "perturbed_init",
    "snapshot_times"};

const std::set<std::string> kPlanKeys = {"sweep_param", "sweep_values", "coupling",
                                         "sample_times"};

RunConfig build_config(const std::map<std::string, std::string>& kv) {
  RunConfig c;
  c.raw = kv;
  auto get = [&](const char* k) -> const std::string* {
    auto it = kv.find(k);
    return it == kv.end() ? nullptr : &it->second;
  };
  if (!get("scenario")) throw ValidationError("scenario", "required key is missing");
  const std::string& sc = *get("scenario");
  if (sc == "eas") c.scenario = Scenario::Eas;
  else if (sc == "profile") c.scenario = Scenario::Profile;
  else if (sc == "vlasov") c.scenario = Scenario::Vlasov;
  else if (sc == "fp") c.scenario = Scenario::Fp;
  else if (sc == "characteristics") c.scenario = Scenario::Characteristics;
  else if (sc == "particles") c.scenario = Scenario::Particles;
  else throw ValidationError("scenario", "unknown scenario '" + sc + "'");
  for (const char* req : {"nx", "nxi", "xi_max"}) {
    if (!get(req)) throw ValidationError(req, "required key is missing");
  }

  c.nx = to_int("nx", *get("nx"));
  c.nxi = to_int("nxi", *get("nxi"));
  c.xi_max = to_double("xi_max", *get("xi_max"));
  if (auto v = get("length")) c.length = to_double("length", *v);
  if (auto v = get("t_final")) c.t_final = to_double("t_final", *v);
  if (auto v = get("dt")) c.dt = to_double("dt", *v);
  if (auto v = get("cfl")) c.cfl = to_double("cfl", *v);
  if (auto v = get("epsilon")) c.params.epsilon = to_double("epsilon", *v);
  if (auto v = get("sigma")) c.params.sigma = to_double("sigma", *v);
  if (auto v = get("delta")) c.params.delta = to_double("delta", *v);
  if (auto v = get("alpha")) c.params.alpha = to_double("alpha", *v);
  if (auto v = get("kernel")) {
    if (*v == "const") c.kernel.kind = KernelKind::Constant;
    else if (*v == "algebraic") c.kernel.kind = KernelKind::Algebraic;
    else throw ValidationError("kernel", "expected const or algebraic, got '" + *v + "'");
  }
  if (auto v = get("kernel_beta")) c.kernel.beta = to_double("kernel_beta", *v);
  if (auto v = get("u0")) c.u0 = *v;
  if (auto v = get("out_dir")) c.out_dir = *v;
  if (auto v = get("sigma_g0")) c.sigma_g0 = to_double("sigma_g0", *v);
  if (auto v = get("seed")) {
    const double d = to_double("seed", *v);
    if (d < 0 || d != std::floor(d)) throw ValidationError("seed", "expected a nonnegative integer");
    c.seed = static_cast<std::uint64_t>(d);
  }
  if (auto v = get("n_particles")) c.n_particles = to_int("n_particles", *v);
  if (auto v = get("dynamics")) c.dynamics = *v;
  if (auto v = get("n_characteristics")) c.n_characteristics = to_int("n_characteristics", *v);
  if (auto v = get("sigma_dims")) c.sigma_dims = to_int("sigma_dims", *v);
  if (auto v = get("perturbed_init")) {
    if (*v != "true" && *v != "false") throw ValidationError("perturbed_init", "expected true or false");
    c.perturbed_init = *v == "true";
  }
  if (auto v = get("snapshot_times")) c.snapshot_times = to_list("snapshot_times", *v);
  return c;
}

}  // namespace

std::map<std::string, std::string> parse_key_values(const std::string& text,
                                                    const std::string& source) {
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError(source, lineno, "expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ParseError(source, lineno, "empty key");
    if (value.empty()) throw ParseError(source, lineno, "empty value for '" + key + "'");
    if (kv.count(key)) throw ParseError(source, lineno, "duplicate key '" + key + "'");
    kv[key] = value;
  }
  return kv;
}

void validate(const RunConfig& c) {
  if (c.nx < 4) throw ValidationError("nx", "must be at least 4");
  if (c.nxi < 2) throw ValidationError("nxi", "must be at least 2");
  if (!(c.xi_max > 0.0)) throw ValidationError("xi_max", "must be positive");
  if (!(c.length > 0.0)) throw ValidationError("length", "must be positive");
  if (!(c.t_final > 0.0)) throw ValidationError("t_final", "must be positive");
  if (c.dt && !(*c.dt > 0.0)) throw ValidationError("dt", "must be positive");
  if (!(c.cfl > 0.0 && c.cfl <= 0.9)) throw ValidationError("cfl", "must lie in (0, 0.9]");
  if (!(c.params.epsilon > 0.0)) throw ValidationError("epsilon", "must be positive");
  if (!(c.params.sigma >= 0.0)) throw ValidationError("sigma", "must be nonnegative");
  if (c.scenario == Scenario::Fp && !(c.params.sigma > 0.0)) {
    throw ValidationError("sigma", "the fp scenario requires sigma > 0");
  }
  if (!(c.params.delta > 0.0)) throw ValidationError("delta", "must be positive");
  if (!(c.params.alpha > 0.0 && c.params.alpha <= 1.0)) throw ValidationError("alpha", "must lie in (0, 1]");
  if (!(c.kernel.beta > 0.0)) throw ValidationError("kernel_beta", "must be positive");
  if (!(c.sigma_g0 > 0.0)) throw ValidationError("sigma_g0", "must be positive");
  if (c.n_particles < 1) throw ValidationError("n_particles", "must be positive");
  if (c.dynamics != "cs" && c.dynamics != "langevin") {
    throw ValidationError("dynamics", "expected cs or langevin, got '" + c.dynamics + "'");
  }
  if (c.n_characteristics < 1) throw ValidationError("n_characteristics", "must be positive");
  if (c.sigma_dims < 1 || c.sigma_dims > 8) throw ValidationError("sigma_dims", "must lie in [1, 8]");
  if (c.u0 != "sym" && c.u0 != "asym" && c.u0 != "zero") {
    try {
      Expression::compile(c.u0);
    } catch (const ExpressionError& e) {
      throw ValidationError("u0", e.what());
    }
  }
  for (double t : c.snapshot_times) {
    if (t < 0.0 || t > c.t_final) throw ValidationError("snapshot_times", "times must lie in [0, t_final]");
  }
  if (c.scenario == Scenario::Fp && c.xi_max < 6.0) {
    throw ValidationError("xi_max", "the fp scenario needs a xi-box of at least 6 standard units");
  }
}

RunConfig parse_config(const std::string& text, const std::string& source) {
  const auto kv = parse_key_values(text, source);
  for (const auto& [k, v] : kv) {
    if (!kRunKeys.count(k)) throw ValidationError(k, "unknown key");
  }
  RunConfig c = build_config(kv);
  validate(c);
  return c;
}

RunConfig load_config(const std::string& path) { return parse_config(read_file(path), path); }

double sigma_from_eps(double eps) {
  const double top = std::exp(-1.0);
  if (!(eps > 0.0) || !(eps < top)) {
    throw ValidationError("epsilon", "sigma log(1/sigma) = eps needs eps in (0, 1/e)");
  }
  return bisect([eps](double s) { return s * std::log(1.0 / s) - eps; }, 1e-300, top, 1e-16);
}

SweepPlan parse_plan(const std::string& text, const std::string& source) {
  auto kv = parse_key_values(text, source);
  SweepPlan plan;
  std::map<std::string, std::string> run_kv;
  for (const auto& [k, v] : kv) {
    if (kPlanKeys.count(k)) continue;
    if (!kRunKeys.count(k)) throw ValidationError(k, "unknown key");
    run_kv[k] = v;
  }
  if (!kv.count("sweep_param")) throw ValidationError("sweep_param", "required key is missing");
  if (!kv.count("sweep_values")) throw ValidationError("sweep_values", "required key is missing");
  plan.param = kv["sweep_param"];
  if (plan.param != "epsilon" && plan.param != "sigma" && plan.param != "delta") {
    throw ValidationError("sweep_param", "expected epsilon, sigma or delta");
  }
  plan.values = to_list("sweep_values", kv["sweep_values"]);
  if (plan.values.empty()) throw ValidationError("sweep_values", "empty list");
  if (!std::is_sorted(plan.values.begin(), plan.values.end(), std::greater<>())) {
    throw ValidationError("sweep_values", "values must be sorted decreasing");
  }
  if (std::adjacent_find(plan.values.begin(), plan.values.end()) != plan.values.end()) {
    throw ValidationError("sweep_values", "values must be distinct");
  }
  if (kv.count("coupling")) {
    if (kv["coupling"] == "none") plan.coupling = Coupling::None;
    else if (kv["coupling"] == "optimal") plan.coupling = Coupling::Optimal;
    else throw ValidationError("coupling", "expected none or optimal");
  }
  if (plan.coupling == Coupling::Optimal && plan.param != "epsilon") {
    throw ValidationError("coupling", "optimal coupling sweeps epsilon");
  }
  if (kv.count("sample_times")) run_kv["snapshot_times"] = kv["sample_times"];
  plan.base = build_config(run_kv);
  // Validate the first member so that plan errors surface before any run.
  plan_member(plan, plan.values.front());
  return plan;
}

SweepPlan load_plan(const std::string& path) { return parse_plan(read_file(path), path); }

RunConfig plan_member(const SweepPlan& plan, double value) {
  RunConfig c = plan.base;
  if (plan.param == "epsilon") c.params.epsilon = value;
  else if (plan.param == "sigma") c.params.sigma = value;
  else c.params.delta = value;
  if (plan.coupling == Coupling::Optimal) {
    c.params.delta = value * value;
    c.params.sigma = sigma_from_eps(value);
  }
  validate(c);
  return c;
}

}  // namespace monokin
