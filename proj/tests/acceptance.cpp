// Acceptance run: one PASS/FAIL line per criterion, then a tally. The exit
// status is 0 whenever every criterion ran to completion; a criterion that
// throws counts as FAIL and sets exit status 1.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "monokin/characteristics.hpp"
#include "monokin/config.hpp"
#include "monokin/eas.hpp"
#include "monokin/fokker_planck.hpp"
#include "monokin/initial.hpp"
#include "monokin/kernels.hpp"
#include "monokin/metrics.hpp"
#include "monokin/parallel.hpp"
#include "monokin/particles.hpp"
#include "monokin/profile.hpp"
#include "monokin/studies.hpp"
#include "monokin/vlasov.hpp"

using namespace monokin;
using std::numbers::pi;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

MacroState sym_macro(int nx) {
  const TorusGrid g(nx);
  return MacroState{g, Field(nx, 1.0), sample(g, u0_symmetric), std::nullopt, 0.0};
}

double max_of(const std::vector<double>& v) {
  return v.empty() ? 0.0 : *std::max_element(v.begin(), v.end());
}

// ---------------------------------------------------------------------------

Outcome conservation() {
  const int nx = 256;
  std::vector<double> drift;  // max per-step mass change per solver

  EasSolver eas(sym_macro(nx), KernelSpec{});
  std::optional<ProfileSolver> prof;
  prof.emplace(gaussian_profile(PhaseGrid{TorusGrid(nx), XiGrid(128, 2.53)}, Field(nx, 1.0), 0.1));
  std::vector<MacroState> traj{eas.state()};
  const StepPlan plan = plan_steps(0.0, 1.0, 0.5 * eas.stable_dt(0.45));
  double d_eas = 0.0, d_prof = 0.0;
  for (int k = 0; k < plan.n; ++k) {
    const double m0 = quadrature_x(eas.state().rho, eas.state().grid);
    const double g0 = quadrature_phase(prof->profile());
    prof->step(eas.state().u, eas.rho_phi(), plan.h);
    eas.step(plan.h);
    traj.push_back(eas.state());
    d_eas = std::max(d_eas, std::fabs(quadrature_x(eas.state().rho, eas.state().grid) - m0));
    d_prof = std::max(d_prof, std::fabs(quadrature_phase(prof->profile()) - g0));
  }
  const double e_drift = e_evolution_check(traj, eas.kernel()).drift_per_time;

  const PhaseGrid vg{TorusGrid(nx), XiGrid(128, 2.53)};
  VlasovSolver vs(init_vlasov(gaussian_profile(vg, Field(nx, 1.0), 0.1), sample(vg.x, u0_symmetric), 0.1),
                  KernelSpec{});
  double d_vl = 0.0;
  const double vdt = 0.5 * vs.stable_dt(0.45);
  for (int k = 0; k < 200; ++k) {
    const double before = quadrature_phase(vs.state().g);
    vs.step(vdt);
    d_vl = std::max(d_vl, std::fabs(quadrature_phase(vs.state().g) - before));
  }

  const PhaseGrid fg{TorusGrid(nx), XiGrid(96, 8.0)};
  ModulationParams p;
  p.epsilon = 0.1;
  p.sigma = sigma_from_eps(0.1);
  p.delta = 0.01;
  FpSolver fs(init_fp(fg, Field(nx, 1.0), sample(fg.x, u0_symmetric), p), KernelSpec{});
  double d_fp = 0.0;
  const double fdt = 0.5 * fs.stable_dt(0.45);
  for (int k = 0; k < 200; ++k) {
    const double before = quadrature_phase(fs.state().g);
    fs.step(fdt);
    d_fp = std::max(d_fp, std::fabs(quadrature_phase(fs.state().g) - before));
  }

  KernelSpec alg;
  alg.kind = KernelKind::Algebraic;
  Swarm s = sample_swarm(sym_macro(nx), 512, 3);
  const double p0 = s.momentum(), mass0 = s.mass();
  for (int k = 0; k < 100; ++k) step_cs(s, alg, 0.01);
  const double mom_rate = std::fabs(s.momentum() - p0) / s.t;
  const bool swarm_mass = s.mass() == mass0;

  const double worst = max_of({d_eas, d_prof, d_vl, d_fp});
  return {worst <= 1e-12 && mom_rate <= 1e-12 && swarm_mass && e_drift <= 1e-6,
          fmt("max mass change per step %.2e (eas %.1e, profile %.1e, vlasov %.1e, fp %.1e); "
              "CS momentum drift %.2e per unit time; int e drift %.2e per unit time",
              worst, d_eas, d_prof, d_vl, d_fp, mom_rate, e_drift)};
}

Outcome fixed_points() {
  const PhaseGrid og{TorusGrid(4), XiGrid(128, 8.0)};
  const Profile mu = gaussian_profile_normalized(og, Field(4, 1.0), 1.0);
  double ou = 0.0;
  for (double tau : {1e-3, 1.0, 1e3}) {
    const Profile out = ou_implicit_substep(mu, tau);
    for (std::size_t k = 0; k < mu.g.size(); ++k) ou = std::max(ou, std::fabs(out.g[k] - mu.g[k]));
  }

  // u = 0, rho = 1, phi = 1: g(t) = e^t g0(x, e^t xi), second moment v0 e^{-2t}
  std::vector<double> err, scale;
  for (int r = 0; r < 3; ++r) {
    const PhaseGrid pg{TorusGrid(8), XiGrid(64 << r, 2.53)};
    const double dt = 0.01 / (1 << r);
    ProfileSolver ps(gaussian_profile(pg, Field(8, 1.0), 0.1));
    const double v0 = second_xi_moment(ps.profile());
    const StepPlan plan = plan_steps(0.0, 1.0, dt);
    for (int k = 0; k < plan.n; ++k) ps.step(Field(8, 0.0), Field(8, 1.0), plan.h);
    err.push_back(std::fabs(second_xi_moment(ps.profile()) - v0 * std::exp(-2.0)));
    scale.push_back(pg.xi.dxi() + dt);
  }
  const double c0 = err[0] / scale[0], c2 = err[2] / scale[2];
  const bool contraction_ok = err[1] < err[0] && err[2] < err[1] && c2 <= 2.0 * c0;

  Swarm s{{0.5, 0.5}, {0.1, 0.6}, {1.0, -1.0}};
  for (int k = 0; k < 1000; ++k) step_cs(s, KernelSpec{}, 1e-3);
  const double cs = std::max(std::fabs(s.v[0] - std::exp(-1.0)), std::fabs(s.v[1] + std::exp(-1.0)));

  return {ou <= 1e-13 && contraction_ok && cs <= 1e-8,
          fmt("OU fixed point %.1e; contraction second-moment error %.2e, %.2e, %.2e "
              "(error / (dxi + dt) = %.3f -> %.3f); two-body error %.1e",
              ou, err[0], err[1], err[2], c0, c2, cs)};
}

Outcome characteristic_identities() {
  const int nx = 256;
  const LimitRun run = run_limit(sym_macro(nx), KernelSpec{}, std::nullopt, {1.0}, 0.002, true);
  const SnapshotCoefficients field(TorusGrid(nx), run.history_t, run.history_u, run.history_rho_phi);
  double worst = 0.0;
  for (int k = 0; k < 20; ++k) {
    const double x0 = counter_uniform(1, k, 0);
    const double xi0 = std::sqrt(0.1) * counter_normal(1, k, 1);
    worst = std::max(worst, jacobian_identity_check(integrate_characteristics(field, x0, {xi0}, 0.0, 1.0, 1e-3)));
  }

  // Solver snapshots are only piecewise linear in time, so the order is
  // measured on smooth coefficients with a closed-form solution:
  // u = 0.3, rho_phi = 1 + 0.5 sin(2 pi x).
  const AnalyticCoefficients smooth([](double, double x) {
    CoefficientSample c;
    c.u = 0.3;
    c.rho_phi = 1.0 + 0.5 * std::sin(2 * pi * x);
    c.rho_phi_x = pi * std::cos(2 * pi * x);
    return c;
  });
  auto exact = [](double x0, double s0, double t) {
    const double xt = x0 + 0.3 * t;
    return s0 * std::exp(-(t - (0.5 / (0.6 * pi)) * (std::cos(2 * pi * xt) - std::cos(2 * pi * x0))));
  };
  auto rk_err = [&](double dt) {
    const CharTrajectory tr = integrate_characteristics(smooth, 0.1, {0.7}, 0.0, 2.0, dt);
    return std::fabs(tr.Sigma.back()[0] - exact(0.1, 0.7, 2.0));
  };
  const double ratio = rk_err(0.1) / rk_err(0.05);
  return {worst <= 1e-6 && ratio >= 14.0 && ratio <= 18.0,
          fmt("max Jacobian identity residual %.2e over 20 characteristics (dt 1e-3, nx %d); "
              "RK4 error ratio %.2f", worst, nx, ratio)};
}

Outcome oracle_equivalence() {
  // grid profile vs backward push-forward through the same EAS coefficients
  std::vector<double> l1;
  const double t = 0.5;
  for (int r = 0; r < 4; ++r) {
    const int n = 32 << r;
    const double dt = 0.004 / (1 << r);
    const PhaseGrid pg{TorusGrid(n), XiGrid(n, 2.53)};
    const LimitRun run = run_limit(sym_macro(n), KernelSpec{}, gaussian_profile(pg, Field(n, 1.0), 0.1), {t},
                                   dt, true);
    const SnapshotCoefficients field(pg.x, run.history_t, run.history_u, run.history_rho_phi);
    const PhaseFunction g0 = [](double, double xi) {
      return std::exp(-xi * xi / 0.2) / std::sqrt(0.2 * pi);
    };
    const Pushforward pf = pushforward_reconstruct(g0, INFINITY, field, pg, t, dt);
    const Profile& g = *run.samples.back().g;
    double d = 0.0;
    for (std::size_t k = 0; k < g.g.size(); ++k) d += std::fabs(g.g[k] - pf.g.g[k]);
    l1.push_back(d * pg.cell_measure());
  }
  bool ok = true;
  std::string ratios;
  for (std::size_t k = 1; k < l1.size(); ++k) {
    const double q = l1[k] / l1[k - 1];
    ok = ok && q >= 0.4 && q <= 0.65;
    ratios += fmt("%s%.3f", k > 1 ? ", " : "", q);
  }
  return {ok, fmt("L1 distances %.3e, %.3e, %.3e, %.3e (n = 32..256); ratios %s", l1[0], l1[1], l1[2], l1[3],
                  ratios.c_str())};
}

Outcome squeezing() {
  // t_final = 2: over [0, 1] the slowest characteristics still sit where
  // d_x u + rho_phi < 1/2 for most of the window.
  const int nx = 256;
  const double T = 2.0;
  const LimitRun run = run_limit(sym_macro(nx), KernelSpec{}, std::nullopt, {T}, 0.002, true);
  const SnapshotCoefficients field(TorusGrid(nx), run.history_t, run.history_u, run.history_rho_phi);
  double min_rho_phi = INFINITY;
  for (const Field& f : run.history_rho_phi) min_rho_phi = std::min(min_rho_phi, *std::min_element(f.begin(), f.end()));
  double worst_rate = -INFINITY, worst_r2 = 1.0;
  for (int k = 0; k < 20; ++k) {
    const double x0 = counter_uniform(1, k, 0);
    const double xi0 = std::sqrt(0.1) * counter_normal(1, k, 1);
    const SqueezeFit f = squeeze_rate(integrate_characteristics(field, x0, {xi0}, 0.0, T, 1e-3));
    worst_rate = std::max(worst_rate, f.rate);
    worst_r2 = std::min(worst_r2, f.r_squared);
  }
  const double need = 0.5 * min_rho_phi;
  return {worst_r2 >= 0.99 && worst_rate < 0.0 && -worst_rate >= need,
          fmt("20 characteristics to t = %.0f: min R^2 %.4f, slowest rate %.3f (need <= -%.3f)", T, worst_r2,
              worst_rate, need)};
}

Outcome symmetry() {
  const int nx = 256;
  EasSolver eas(sym_macro(nx), KernelSpec{});
  const StepPlan plan = plan_steps(0.0, 1.0, 0.5 * eas.stable_dt(0.45));
  double worst = symmetry_residual(eas.state(), 0.25);
  for (int k = 0; k < plan.n; ++k) {
    eas.step(plan.h);
    worst = std::max(worst, symmetry_residual(eas.state(), 0.25));
  }
  const double dx = 1.0 / nx;
  return {worst <= 5.0 * dx, fmt("max residual about x = 1/4 up to t = 1: %.2e (bound %.2e)", worst, 5.0 * dx)};
}

struct SweepResult {
  std::vector<ComparisonRow> rows;
  std::vector<ComparisonRow> floor_rows;
};

// Members run in parallel; the floor member sits a factor 4 below the
// smallest epsilon, where the theoretical bound is below the discretization
// error of the matched grids.
SweepResult run_sweep(const std::string& plan_text, const std::vector<double>& eps, bool vlasov) {
  const SweepPlan plan = parse_plan(plan_text, "acceptance");
  std::vector<double> values = eps;
  values.push_back(eps.back() / 4.0);
  std::vector<std::vector<ComparisonRow>> out(values.size());
  parallel_for(static_cast<int>(values.size()), [&](int k) {
    const RunConfig c = plan_member(plan, values[k]);
    const LimitRun limit = limit_for(c, vlasov);
    out[k] = vlasov ? vlasov_comparison(c, limit, common_dt(c)) : fp_comparison(c, limit, common_dt(c));
  });
  SweepResult r;
  for (std::size_t k = 0; k + 1 < out.size(); ++k) r.rows.insert(r.rows.end(), out[k].begin(), out[k].end());
  r.floor_rows = out.back();
  return r;
}

std::string describe(const std::vector<ComparisonRow>& rows, const std::string& metric, double t) {
  std::string s = metric + " [";
  bool first = true;
  for (const ComparisonRow& r : rows) {
    if (std::fabs(r.t - t) > 1e-12) continue;
    s += fmt("%s%.3g", first ? "" : ", ", row_value(r, metric));
    first = false;
  }
  return s + "]";
}

Outcome vlasov_rates() {
  const std::string plan =
      "scenario = vlasov\nnx = 256\nnxi = 128\nxi_max = 2.53\nt_final = 0.5\nkernel = const\nu0 = sym\n"
      "sweep_param = epsilon\nsweep_values = 0.4, 0.2, 0.1, 0.05\nsample_times = 0.5\n";
  const SweepResult s = run_sweep(plan, {0.4, 0.2, 0.1, 0.05}, true);
  bool monotone = true;
  std::string detail;
  for (const char* m : {"w1_rho", "w1_mom_u", "w1_mom_m", "w1_g"}) {
    const RateFit f = fit_rate(s.rows, m, 0.5);
    monotone = monotone && f.monotone;
    detail += describe(s.rows, m, 0.5) + (f.monotone ? " " : " (not monotone) ");
  }
  const RateFit rho = fit_rate(s.rows, "w1_rho", 0.5, s.floor_rows);
  const bool slope_ok = rho.corrected && rho.corrected->slope >= 0.35;
  detail += rho.corrected ? fmt("; floor-corrected w1_rho slope %.3f [%.3f, %.3f]", rho.corrected->slope,
                                rho.corrected->slope_lo, rho.corrected->slope_hi)
                          : std::string("; floor-corrected w1_rho fit unavailable");
  return {monotone && slope_ok, detail};
}

Outcome fp_rates() {
  const std::string plan =
      "scenario = fp\nnx = 256\nnxi = 96\nxi_max = 8\nt_final = 0.5\nkernel = const\nu0 = sym\n"
      "sweep_param = epsilon\nsweep_values = 0.2, 0.1, 0.05\ncoupling = optimal\nsample_times = 0.5\n";
  const SweepResult s = run_sweep(plan, {0.2, 0.1, 0.05}, false);
  bool monotone = true;
  std::string detail;
  for (const char* m : {"mod_energy", "w2sq_rho", "w1sq_mom", "rel_entropy"}) {
    const RateFit f = fit_rate(s.rows, m, 0.5);
    monotone = monotone && f.monotone;
    detail += describe(s.rows, m, 0.5) + (f.monotone ? " " : " (not monotone) ");
  }
  const RateFit h = fit_rate(s.rows, "rel_entropy", 0.5, s.floor_rows);
  const bool slope_ok = h.corrected && h.corrected->slope >= 0.7;
  detail += h.corrected ? fmt("; floor-corrected H slope %.3f [%.3f, %.3f]", h.corrected->slope,
                              h.corrected->slope_lo, h.corrected->slope_hi)
                        : std::string("; floor-corrected H fit unavailable");
  return {monotone && slope_ok, detail};
}

Outcome favre() {
  const TorusGrid g(1024);
  const Field u = sample(g, [](double x) { return std::sin(2 * pi * x); });
  const Field rho = sample(g, [](double x) { return 1.0 + 0.5 * std::cos(2 * pi * x); });
  std::vector<Field> tests = {sample(g, [](double x) { return std::cos(2 * pi * x); }),
                              sample(g, [](double x) { return std::sin(6 * pi * x) + 0.3; }),
                              sample(g, [](double x) { return std::fabs(x - 0.5); })};
  double sym = 0.0, psd = INFINITY;
  for (double d : {0.2, 0.1, 0.05}) {
    const FavreReport r = favre_properties_check(u, rho, build_mollifier(d, 1.0, g), tests);
    sym = std::max(sym, r.symmetry_residual);
    psd = std::min(psd, r.psd_residual);
  }
  const FavreDeltaStudy study = favre_delta_study(u, Field(g.size(), 1.0), g, 1.0, {0.2, 0.1, 0.05});
  bool ratios_ok = true;
  for (double q : study.ratios) ratios_ok = ratios_ok && q >= 0.4 && q <= 0.6;
  // reported for reference: the same ratio deeper in the small-delta regime
  const FavreDeltaStudy deep = favre_delta_study(u, Field(g.size(), 1.0), g, 1.0, {0.025, 0.0125});
  return {sym <= 1e-10 && psd >= -1e-10 && ratios_ok,
          fmt("symmetry residual %.1e; psd residual %.1e; L1 error ratios %.3f, %.3f for delta 0.2 -> 0.1 -> "
              "0.05 (closed form 1 - e^{-4 pi delta} gives 0.778, 0.652); ratio %.3f for 0.025 -> 0.0125",
              sym, psd, study.ratios[0], study.ratios[1], deep.ratios[0])};
}

Outcome monte_carlo() {
  const int n = 10000;
  const double sigma = 0.3;
  Swarm s;
  s.m.assign(n, 1.0 / n);
  s.v.assign(n, 0.0);
  for (int i = 0; i < n; ++i) s.x.push_back(counter_uniform(2, i, 0));
  LangevinParams p;
  p.epsilon = 1.0;
  p.sigma = sigma;
  p.dt = 0.005;
  p.seed = 17;
  const ForceModel zero = zero_force();
  for (int k = 0; k < 2000; ++k) step_langevin(s, zero, p, k);
  double mean = 0.0, var = 0.0;
  for (double v : s.v) mean += v;
  mean /= n;
  for (double v : s.v) var += (v - mean) * (v - mean);
  var /= n;
  const double rel = std::fabs(var / sigma - 1.0);

  // CS particles vs the EAS solution at t = 0.5, averaged over 8 seeds
  const int nx = 256;
  EasSolver eas(sym_macro(nx), KernelSpec{});
  const StepPlan plan = plan_steps(0.0, 0.5, 0.5 * eas.stable_dt(0.45));
  for (int k = 0; k < plan.n; ++k) eas.step(plan.h);
  std::vector<double> w1;
  for (int np : {128, 256, 512, 1024}) {
    std::vector<double> per_seed(8);
    parallel_for(8, [&](int k) {
      Swarm sw = sample_swarm(sym_macro(nx), np, k + 1);
      const StepPlan pp = plan_steps(0.0, 0.5, 0.01);
      for (int j = 0; j < pp.n; ++j) step_cs(sw, KernelSpec{}, pp.h);
      per_seed[k] = empirical_vs_grid(sw, eas.state()).w1_x;
    });
    double avg = 0.0;
    for (double w : per_seed) avg += w / 8.0;
    w1.push_back(avg);
  }
  bool decreasing = true;
  for (std::size_t k = 1; k < w1.size(); ++k) decreasing = decreasing && w1[k] < w1[k - 1];
  return {rel <= 3.0 / std::sqrt(n) && decreasing,
          fmt("OU variance %.4f vs sigma %.2f (relative error %.4f, bound %.4f); "
              "w1_x at t = 0.5 for N = 128..1024: %.4f, %.4f, %.4f, %.4f",
              var, sigma, rel, 3.0 / std::sqrt(n), w1[0], w1[1], w1[2], w1[3])};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    double budget_s;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {"conservation", 60, conservation},
      {"analytic fixed points", 60, fixed_points},
      {"characteristic identities", 60, characteristic_identities},
      {"oracle equivalence", 600, oracle_equivalence},
      {"unidirectional squeezing", 120, squeezing},
      {"symmetry preservation", 120, symmetry},
      {"vlasov rates", 1800, vlasov_rates},
      {"fokker-planck rates", 1800, fp_rates},
      {"favre filter", 60, favre},
      {"monte carlo", 300, monte_carlo},
  };
  int passed = 0;
  bool crashed = false;
  for (const Criterion& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
      crashed = true;
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs <= c.budget_s;
    const bool ok = o.pass && in_time;
    passed += ok ? 1 : 0;
    std::printf("%s %s: %s; %.1f s (budget %.0f s)%s\n", ok ? "PASS" : "FAIL", c.name, o.detail.c_str(), secs,
                c.budget_s, in_time ? "" : " over budget");
    std::fflush(stdout);
  }
  std::printf("%d/%zu PASS\n", passed, criteria.size());
  return crashed ? 1 : 0;
}
