#include "monokin/app.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <mutex>
#include <json.hpp>
#include <ostream>
#include <sstream>

#include "monokin/characteristics.hpp"
#include "monokin/eas.hpp"
#include "monokin/io.hpp"
#include "monokin/metrics.hpp"
#include "monokin/parallel.hpp"
#include "monokin/particles.hpp"
#include "monokin/profile.hpp"
#include "monokin/studies.hpp"
#include "monokin/transport.hpp"

namespace fs = std::filesystem;

namespace monokin {

void apply_overrides(RunConfig& c, const Overrides& o) {
  if (o.out_dir) {
    c.out_dir = *o.out_dir;
    c.raw["out_dir"] = *o.out_dir;
  }
  if (o.seed) {
    c.seed = *o.seed;
    c.raw["seed"] = std::to_string(*o.seed);
  }
  if (o.snapshot_times) {
    c.snapshot_times = *o.snapshot_times;
    std::string s;
    for (double t : c.snapshot_times) s += (s.empty() ? "" : ",") + format_number(t);
    c.raw["snapshot_times"] = s;
  }
}

namespace {

fs::path snapshot_path(const RunConfig& c, const std::string& prefix, double t,
                       const std::string& ext) {
  return fs::path(c.out_dir) / (prefix + format_time_tag(t) + ext);
}

void write_profile(const RunConfig& c, const std::string& prefix, double t, const Profile& g) {
  Profile tagged = g;
  tagged.t = t;
  atomic_write(snapshot_path(c, prefix, t, ".csv"), profile_csv(tagged));
  atomic_write(snapshot_path(c, prefix, t, ".json"), profile_sidecar(tagged));
}

void write_macro(const RunConfig& c, const MacroState& s, const TabulatedKernel& phi, double t) {
  atomic_write(snapshot_path(c, "eas_t", t, ".csv"), macro_snapshot_csv(s, e_quantity(s, phi)));
}

void macro_record(DiagnosticsRecord& r, const MacroState& s, const TabulatedKernel& phi) {
  const Field e = e_quantity(s, phi);
  r.set("mass", s.mass());
  r.set("momentum", s.momentum());
  r.set("energy", s.energy());
  r.set("e_min", *std::min_element(e.begin(), e.end()));
  r.set("e_total", quadrature_x(e, s.grid));
}

int count_steps(const std::vector<double>& times, double dt) {
  int n = 0;
  double t0 = 0.0;
  for (double t : times) {
    n += plan_steps(t0, t, dt).n;
    t0 = t;
  }
  return n;
}

nlohmann::ordered_json run_metadata(const RunConfig& c, double dt) {
  nlohmann::ordered_json j;
  j["scenario"] = to_string(c.scenario);
  const bool has_eps = c.scenario == Scenario::Vlasov || c.scenario == Scenario::Fp ||
                       (c.scenario == Scenario::Particles && c.dynamics == "langevin");
  const bool has_fp = c.scenario == Scenario::Fp ||
                      (c.scenario == Scenario::Particles && c.dynamics == "langevin");
  j["eps"] = has_eps ? nlohmann::ordered_json(c.params.epsilon) : nlohmann::ordered_json();
  j["sigma"] = has_fp ? nlohmann::ordered_json(c.params.sigma) : nlohmann::ordered_json();
  j["delta"] = has_fp ? nlohmann::ordered_json(c.params.delta) : nlohmann::ordered_json();
  j["dt"] = dt;
  j["seed"] = c.seed;
  j["sample_times"] = c.sample_times();
  if (c.scenario == Scenario::Particles) j["n_particles"] = c.n_particles;
  if (c.scenario == Scenario::Vlasov || c.scenario == Scenario::Profile ||
      c.scenario == Scenario::Characteristics) {
    j["g0"] = "Gaussian in xi with variance sigma_g0, truncated to [-xi_max, xi_max]";
  }
  if (c.scenario == Scenario::Fp && c.perturbed_init) {
    j["perturbed_init"] = "Gaussian in xi with variance 1.5";
  }
  nlohmann::ordered_json cfg;
  for (const auto& [k, v] : c.raw) cfg[k] = v;
  j["config"] = cfg;
  return j;
}

std::string comparison_table(Scenario s, const std::vector<ComparisonRow>& rows) {
  const std::vector<std::string> cols = sweep_key_columns(s);
  std::vector<std::string> head = cols;
  for (const std::string& m : sweep_metrics(s)) head.push_back(m);
  std::string out = csv_line(head);
  for (const ComparisonRow& r : rows) {
    std::vector<std::string> cells;
    for (const std::string& h : head) cells.push_back(format_number(row_value(r, h)));
    out += csv_line(cells);
  }
  return out;
}

RunSummary run_eas(const RunConfig& c, double dt) {
  RunSummary sum;
  EasSolver eas(initial_macro(c), c.kernel);
  for (double t : c.sample_times()) {
    const StepPlan plan = plan_steps(eas.state().t, t, dt);
    for (int s = 0; s < plan.n; ++s) eas.step(plan.h);
    sum.steps += plan.n;
    MacroState st = eas.state();
    st.t = t;
    write_macro(c, st, eas.kernel(), t);
    DiagnosticsRecord r;
    r.t = t;
    macro_record(r, st, eas.kernel());
    sum.diagnostics.push_back(r);
  }
  return sum;
}

RunSummary run_profile(const RunConfig& c, double dt) {
  RunSummary sum;
  const LimitRun limit = limit_for(c, true);
  const TabulatedKernel phi = tabulate(c.kernel, c.x_grid());
  const std::vector<double> times = c.sample_times();
  for (std::size_t k = 0; k < times.size(); ++k) {
    const LimitSample& s = limit.samples[k];
    write_profile(c, "g_t", times[k], *s.g);
    write_macro(c, s.macro, phi, times[k]);
    DiagnosticsRecord r;
    r.t = times[k];
    macro_record(r, s.macro, phi);
    r.set("mass", quadrature_phase(*s.g));
    r.set("boltzmann", boltzmann_entropy(*s.g));
    r.set("xi_m2", second_xi_moment(*s.g));
    sum.diagnostics.push_back(r);
  }
  sum.steps = count_steps(times, dt);
  return sum;
}

DiagnosticsRecord comparison_record(const ComparisonRow& row) {
  DiagnosticsRecord r;
  r.t = row.t;
  const std::vector<std::pair<std::string, std::string>> map = {
      {"mass", "mass"},         {"momentum", "momentum"},       {"energy", "energy"},
      {"mod_energy", "mod_energy"}, {"boltzmann", "boltzmann"}, {"rel_entropy", "rel_entropy"},
      {"fisher", "fisher"},     {"w1_rho", "w1_rho"},           {"w1_mom", "w1_mom_u"},
      {"w1_g", "w1_g"},         {"xi_m2", "xi_m2"}};
  for (const auto& [col, field] : map) {
    const double v = row_value(row, field);
    if (std::isfinite(v)) r.set(col, v);
  }
  return r;
}

RunSummary run_kinetic(const RunConfig& c, double dt) {
  RunSummary sum;
  const bool vlasov = c.scenario == Scenario::Vlasov;
  const LimitRun limit = limit_for(c, vlasov);
  const std::string prefix = vlasov ? "gveps_t" : "gfp_t";
  const SampleHook hook = [&](double t, const Profile& g) { write_profile(c, prefix, t, g); };
  const std::vector<ComparisonRow> rows =
      vlasov ? vlasov_comparison(c, limit, dt, hook) : fp_comparison(c, limit, dt, hook);
  for (const ComparisonRow& row : rows) sum.diagnostics.push_back(comparison_record(row));
  atomic_write(fs::path(c.out_dir) / "comparison.csv", comparison_table(c.scenario, rows));
  sum.steps = count_steps(c.sample_times(), dt);
  return sum;
}

RunSummary run_characteristics(const RunConfig& c, double dt) {
  RunSummary sum;
  std::vector<double> times = c.sample_times();
  const LimitRun limit = limit_for(c, false, true);
  const TorusGrid grid = c.x_grid();
  const TabulatedKernel phi = tabulate(c.kernel, grid);
  for (std::size_t k = 0; k < times.size(); ++k) {
    DiagnosticsRecord r;
    r.t = times[k];
    macro_record(r, limit.samples[k].macro, phi);
    write_macro(c, limit.samples[k].macro, phi, times[k]);
    sum.diagnostics.push_back(r);
  }
  const SnapshotCoefficients field(grid, limit.history_t, limit.history_u,
                                   limit.history_rho_phi);
  const double t_end = field.t_max();
  std::vector<std::string> head = {"k", "x0"};
  for (int d = 1; d <= c.sigma_dims; ++d) head.push_back("xi0_" + std::to_string(d));
  for (const char* h : {"rate", "r_squared", "identity_residual"}) head.push_back(h);
  std::vector<std::string> lines(c.n_characteristics);
  parallel_for(c.n_characteristics, [&](int k) {
    const double x0 = counter_uniform(c.seed, static_cast<std::uint64_t>(k), 0) * c.length;
    std::vector<double> xi0(c.sigma_dims);
    for (int d = 0; d < c.sigma_dims; ++d) {
      xi0[d] = std::sqrt(c.sigma_g0) *
               counter_normal(c.seed, static_cast<std::uint64_t>(k), 1 + static_cast<std::uint64_t>(d));
    }
    CharOptions opts;
    opts.n_dims = c.sigma_dims;
    const CharTrajectory tr = integrate_characteristics(field, x0, xi0, 0.0, t_end, dt, opts);
    char name[32];
    std::snprintf(name, sizeof name, "traj_%03d.csv", k);
    atomic_write(fs::path(c.out_dir) / name, trajectory_csv(tr));
    const SqueezeFit fit = squeeze_rate(tr);
    std::vector<std::string> cells = {std::to_string(k), format_number(x0)};
    for (double v : xi0) cells.push_back(format_number(v));
    cells.push_back(format_number(fit.rate));
    cells.push_back(format_number(fit.r_squared));
    cells.push_back(format_number(jacobian_identity_check(tr)));
    lines[k] = csv_line(cells);
  });
  std::string table = csv_line(head);
  for (const std::string& l : lines) table += l;
  atomic_write(fs::path(c.out_dir) / "characteristics.csv", table);
  sum.steps = count_steps(times, dt);
  return sum;
}

RunSummary run_particles(const RunConfig& c, double dt) {
  RunSummary sum;
  const std::vector<double> times = c.sample_times();
  const LimitRun limit = limit_for(c, false);
  Swarm swarm = sample_swarm(initial_macro(c), c.n_particles, c.seed);
  const bool langevin = c.dynamics == "langevin";
  std::optional<Mollifier> psi;
  ForceModel force;
  LangevinParams lp;
  if (langevin) {
    psi.emplace(build_mollifier(c.params.delta, c.params.alpha, c.x_grid()));
    force = empirical_force(c.kernel, &*psi);
    lp.epsilon = c.params.epsilon;
    lp.sigma = c.params.sigma;
    lp.seed = c.seed;
    // explicit relaxation needs dt well below eps
    dt = std::min(dt, 0.5 * c.params.epsilon);
  }
  std::uint64_t step_index = 0;
  for (std::size_t k = 0; k < times.size(); ++k) {
    const StepPlan plan = plan_steps(swarm.t, times[k], dt);
    for (int s = 0; s < plan.n; ++s) {
      if (langevin) {
        lp.dt = plan.h;
        step_langevin(swarm, force, lp, step_index++);
      } else {
        step_cs(swarm, c.kernel, plan.h);
      }
    }
    sum.steps += plan.n;
    swarm.t = times[k];
    atomic_write(snapshot_path(c, "swarm_t", times[k], ".csv"), swarm_csv(swarm));
    DiagnosticsRecord r;
    r.t = times[k];
    r.set("mass", swarm.mass());
    r.set("momentum", swarm.momentum());
    double energy = 0.0;
    for (int i = 0; i < swarm.size(); ++i) energy += 0.5 * swarm.m[i] * swarm.v[i] * swarm.v[i];
    r.set("energy", energy);
    r.set("w1_rho", empirical_vs_grid(swarm, limit.samples[k].macro).w1_x);
    sum.diagnostics.push_back(r);
  }
  return sum;
}

struct Failure {
  int code;
  std::string message;
};

/// Maps an in-flight exception to an exit code and message.
Failure classify(std::exception_ptr e) {
  try {
    std::rethrow_exception(e);
  } catch (const ValidationError& ex) {
    return {kExitValidation, ex.what()};
  } catch (const ParseError& ex) {
    return {kExitValidation, ex.what()};
  } catch (const UnderResolved& ex) {
    return {kExitValidation, ex.what()};
  } catch (const RuntimeGuard& ex) {
    return {kExitGuard, ex.what()};
  } catch (const std::invalid_argument& ex) {
    return {kExitValidation, ex.what()};
  } catch (const std::exception& ex) {
    return {kExitFailure, ex.what()};
  }
}

}  // namespace

std::vector<std::string> sweep_metrics(Scenario s) {
  if (s == Scenario::Fp) return {"mod_energy", "w2sq_rho", "w1sq_mom", "rel_entropy", "fisher"};
  return {"w1_rho", "w1_mom_u", "w1_mom_m", "w1_g"};
}

std::vector<std::string> sweep_key_columns(Scenario s) {
  if (s == Scenario::Fp) return {"eps", "sigma", "delta", "t"};
  return {"eps", "t"};
}

RunSummary run_scenario(const RunConfig& c) {
  validate(c);
  fs::create_directories(c.out_dir);
  const double dt = common_dt(c);
  RunSummary sum;
  switch (c.scenario) {
    case Scenario::Eas: sum = run_eas(c, dt); break;
    case Scenario::Profile: sum = run_profile(c, dt); break;
    case Scenario::Vlasov:
    case Scenario::Fp: sum = run_kinetic(c, dt); break;
    case Scenario::Characteristics: sum = run_characteristics(c, dt); break;
    case Scenario::Particles: sum = run_particles(c, dt); break;
  }
  sum.dt = dt;
  atomic_write(fs::path(c.out_dir) / "diagnostics.csv", diagnostics_csv(sum.diagnostics));
  atomic_write(fs::path(c.out_dir) / "run.json", run_metadata(c, dt).dump(2) + "\n");
  return sum;
}

int cmd_run(const std::string& config_path, const Overrides& o, std::ostream& out,
            std::ostream& err) {
  try {
    RunConfig c = load_config(config_path);
    apply_overrides(c, o);
    const RunSummary sum = run_scenario(c);
    out << "run " << to_string(c.scenario) << ": " << sum.steps << " steps, dt "
        << format_number(sum.dt) << ", " << sum.diagnostics.size() << " samples -> "
        << c.out_dir << "\n";
    return kExitOk;
  } catch (...) {
    const Failure f = classify(std::current_exception());
    err << "error: " << f.message << "\n";
    return f.code;
  }
}

int cmd_sweep(const std::string& plan_path, const Overrides& o, std::ostream& out,
              std::ostream& err) {
  SweepPlan plan;
  std::vector<RunConfig> members;
  try {
    plan = load_plan(plan_path);
    apply_overrides(plan.base, o);
    if (plan.base.scenario != Scenario::Vlasov && plan.base.scenario != Scenario::Fp) {
      throw ValidationError("scenario", "sweeps support vlasov and fp");
    }
    for (double v : plan.values) {
      RunConfig m = plan_member(plan, v);
      m.out_dir = (fs::path(plan.base.out_dir) / (plan.param + "_" + format_time_tag(v))).string();
      m.raw["out_dir"] = m.out_dir;
      members.push_back(std::move(m));
    }
  } catch (...) {
    const Failure f = classify(std::current_exception());
    err << "error: " << f.message << "\n";
    return f.code;
  }

  const int n = static_cast<int>(members.size());
  std::vector<std::vector<ComparisonRow>> results(n);
  std::vector<std::optional<Failure>> failures(n);
  parallel_for(n, [&](int k) {
    const RunConfig& c = members[k];
    try {
      validate(c);
      fs::create_directories(c.out_dir);
      const double dt = common_dt(c);
      const bool vlasov = c.scenario == Scenario::Vlasov;
      const LimitRun limit = limit_for(c, vlasov);
      results[k] = vlasov ? vlasov_comparison(c, limit, dt) : fp_comparison(c, limit, dt);
      RunSummary sum;
      for (const ComparisonRow& row : results[k]) sum.diagnostics.push_back(comparison_record(row));
      atomic_write(fs::path(c.out_dir) / "diagnostics.csv", diagnostics_csv(sum.diagnostics));
      atomic_write(fs::path(c.out_dir) / "run.json", run_metadata(c, dt).dump(2) + "\n");
    } catch (...) {
      failures[k] = classify(std::current_exception());
    }
  });
  for (int k = 0; k < n; ++k) {
    if (failures[k]) {
      err << "error: sweep point " << plan.param << " = " << format_number(plan.values[k])
          << " failed: " << failures[k]->message << "\n";
      return kExitSweepMember;
    }
  }

  const Scenario sc = plan.base.scenario;
  std::vector<ComparisonRow> rows;
  for (const auto& r : results) rows.insert(rows.end(), r.begin(), r.end());
  std::string table = comparison_table(sc, rows);
  table += "# metric,t,slope,ci_lo,ci_hi,r_squared\n";
  const std::string abscissa = plan.param == "epsilon" ? "eps" : plan.param;
  for (const std::string& metric : sweep_metrics(sc)) {
    for (double t : plan.base.sample_times()) {
      if (t <= 0.0) continue;
      const RateFit fit = fit_rate(rows, metric, t, {}, abscissa);
      std::vector<std::string> cells = {"# " + metric, format_number(t)};
      if (fit.raw) {
        for (double v : {fit.raw->slope, fit.raw->slope_lo, fit.raw->slope_hi, fit.raw->r_squared}) {
          cells.push_back(format_number(v));
        }
      } else {
        cells.insert(cells.end(), 4, "");
      }
      table += csv_line(cells);
    }
  }
  atomic_write(fs::path(plan.base.out_dir) / "rates.csv", table);
  out << "sweep " << to_string(sc) << ": " << n << " points -> "
      << (fs::path(plan.base.out_dir) / "rates.csv").string() << "\n";
  return kExitOk;
}

namespace {

double parse_or_nan(const std::string& s) {
  if (s.empty()) return std::numeric_limits<double>::quiet_NaN();
  return std::stod(s);
}

/// NaN sorts before every number so that empty keys group together.
bool key_less(const std::vector<double>& a, const std::vector<double>& b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    const bool na = std::isnan(a[i]), nb = std::isnan(b[i]);
    if (na != nb) return na;
    if (!na && a[i] != b[i]) return a[i] < b[i];
  }
  return false;
}

std::string json_number(const nlohmann::json& v) {
  return v.is_number() ? format_number(v.get<double>()) : "";
}

}  // namespace

int cmd_report(const std::string& dir, std::ostream& out, std::ostream& err) {
  try {
    if (!fs::is_directory(dir)) {
      err << "error: " << dir << " is not a directory\n";
      return kExitValidation;
    }
    std::vector<fs::path> run_dirs;
    for (const auto& entry : fs::recursive_directory_iterator(dir)) {
      if (entry.is_regular_file() && entry.path().filename() == "run.json") {
        run_dirs.push_back(entry.path().parent_path());
      }
    }
    if (run_dirs.empty()) {
      err << "error: no completed runs (run.json) under " << dir << "\n";
      return kExitValidation;
    }
    std::sort(run_dirs.begin(), run_dirs.end());
    std::vector<std::string> missing;
    for (const fs::path& d : run_dirs) {
      if (!fs::exists(d / "diagnostics.csv")) missing.push_back((d / "diagnostics.csv").string());
    }
    if (!missing.empty()) {
      err << "error: missing files:\n";
      for (const std::string& m : missing) err << "  " << m << "\n";
      return kExitValidation;
    }

    struct Row {
      std::string scenario;
      std::vector<double> key;
      std::string run;
      std::vector<std::string> cells;
    };
    std::vector<Row> rows;
    const std::vector<std::string>& cols = diagnostics_columns();
    for (const fs::path& d : run_dirs) {
      std::ifstream in(d / "run.json");
      const nlohmann::json meta = nlohmann::json::parse(in);
      const CsvTable diag = read_csv(d / "diagnostics.csv");
      const std::string rel = fs::relative(d, dir).generic_string();
      for (const auto& r : diag.rows) {
        Row row;
        row.scenario = meta.value("scenario", "");
        row.run = rel;
        row.cells = {row.scenario, json_number(meta["eps"]), json_number(meta["sigma"]),
                     json_number(meta["delta"])};
        std::map<std::string, std::string> byname;
        for (std::size_t i = 0; i < diag.header.size() && i < r.size(); ++i) {
          byname[diag.header[i]] = r[i];
        }
        for (const std::string& c : cols) row.cells.push_back(byname[c]);
        row.cells.push_back(rel);
        row.key = {parse_or_nan(row.cells[1]), parse_or_nan(row.cells[2]),
                   parse_or_nan(row.cells[3]), parse_or_nan(byname["t"])};
        rows.push_back(std::move(row));
      }
    }
    std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
      if (a.scenario != b.scenario) return a.scenario < b.scenario;
      if (key_less(a.key, b.key)) return true;
      if (key_less(b.key, a.key)) return false;
      return a.run < b.run;
    });
    std::vector<std::string> head = {"scenario", "eps", "sigma", "delta"};
    head.insert(head.end(), cols.begin(), cols.end());
    head.push_back("run");
    std::string text = csv_line(head);
    for (const Row& r : rows) text += csv_line(r.cells);
    const fs::path target = fs::path(dir) / "summary.csv";
    atomic_write(target, text);
    out << "report: " << run_dirs.size() << " runs, " << rows.size() << " rows -> "
        << target.string() << "\n";
    return kExitOk;
  } catch (...) {
    const Failure f = classify(std::current_exception());
    err << "error: " << f.message << "\n";
    return f.code;
  }
}

}  // namespace monokin
