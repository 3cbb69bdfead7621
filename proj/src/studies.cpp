#include "monokin/studies.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "monokin/eas.hpp"
#include "monokin/fokker_planck.hpp"
#include "monokin/initial.hpp"
#include "monokin/metrics.hpp"
#include "monokin/vlasov.hpp"

namespace monokin {

MacroState initial_macro(const RunConfig& c) {
  MacroState s;
  s.grid = c.x_grid();
  s.rho.assign(c.nx, 1.0 / c.length);
  s.u = sample(s.grid, velocity_profile(c.u0));
  return s;
}

Profile initial_profile(const RunConfig& c) {
  const MacroState s = initial_macro(c);
  return gaussian_profile(c.phase_grid(), s.rho, c.sigma_g0);
}

double common_dt(const RunConfig& c) {
  if (c.dt) return *c.dt;
  const MacroState s = initial_macro(c);
  EasSolver eas(s, c.kernel);
  double dt = eas.stable_dt(c.cfl);
  if (c.scenario == Scenario::Vlasov || c.scenario == Scenario::Profile) {
    VlasovSolver v(init_vlasov(initial_profile(c), s.u, c.params.epsilon), c.kernel);
    dt = std::min(dt, v.stable_dt(c.cfl));
  } else if (c.scenario == Scenario::Fp) {
    FpSolver f(init_fp(c.phase_grid(), s.rho, s.u, c.params, c.perturbed_init), c.kernel);
    dt = std::min(dt, f.stable_dt(c.cfl));
  }
  return 0.5 * dt;
}

LimitRun limit_for(const RunConfig& c, bool with_profile, bool record_history) {
  std::optional<Profile> g0;
  if (with_profile) g0 = initial_profile(c);
  return run_limit(initial_macro(c), c.kernel, g0, c.sample_times(), common_dt(c), record_history);
}

double momentum_w1(std::span<const double> a, std::span<const double> b, const TorusGrid& grid) {
  const SignedMeasure1D ma = SignedMeasure1D::from_density(a, grid);
  const SignedMeasure1D mb = SignedMeasure1D::from_density(b, grid);
  if (std::fabs(ma.mass() - mb.mass()) > 1e-8) return NAN;
  return w1_periodic(ma, mb, 1e-8);
}

namespace {

Field product(std::span<const double> a, std::span<const double> b) {
  Field out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * b[i];
  return out;
}

void check_limit(const LimitRun& limit, const std::vector<double>& times) {
  if (limit.samples.size() != times.size()) {
    throw std::invalid_argument("comparison: limit run does not match the sample times");
  }
}

}  // namespace

std::vector<ComparisonRow> vlasov_comparison(const RunConfig& c, const LimitRun& limit, double dt,
                                             const SampleHook& hook) {
  const std::vector<double> times = c.sample_times();
  check_limit(limit, times);
  const MacroState s0 = initial_macro(c);
  VlasovSolver solver(init_vlasov(initial_profile(c), s0.u, c.params.epsilon), c.kernel);
  std::vector<ComparisonRow> rows;
  for (std::size_t k = 0; k < times.size(); ++k) {
    const StepPlan plan = plan_steps(solver.state().t, times[k], dt);
    for (int s = 0; s < plan.n; ++s) solver.step(plan.h);
    const VlasovState& st = solver.state();
    if (hook) hook(times[k], st.g);
    const LimitSample& ref = limit.samples[k];
    if (!ref.g) throw std::invalid_argument("vlasov_comparison: limit run has no profile");
    const TorusGrid& xg = st.g.grid.x;
    ComparisonRow r;
    r.eps = c.params.epsilon;
    r.sigma = c.params.sigma;
    r.delta = c.params.delta;
    r.t = times[k];
    const Field rho = st.rho();
    const Field mom_u = st.momentum_density();
    const Field mom_m = product(rho, st.m);
    const Field mom_ref = product(ref.macro.rho, ref.macro.u);
    r.w1_rho = w1_periodic(SignedMeasure1D::from_density(rho, xg),
                           SignedMeasure1D::from_density(ref.macro.rho, xg));
    r.w1_mom_u = momentum_w1(mom_u, mom_ref, xg);
    r.w1_mom_m = momentum_w1(mom_m, mom_ref, xg);
    r.w1_g = w1_phase(st.g, *ref.g);
    r.mod_energy = modulated_energy(st.g, st.omega(), st.m, ref.macro.u);
    r.boltzmann = boltzmann_entropy(st.g);
    r.xi_m2 = second_xi_moment(st.g);
    r.mass = quadrature_phase(st.g);
    r.momentum = quadrature_x(mom_u, xg);
    const Field u = st.u();
    r.energy = 0.5 * quadrature_x(product(mom_u, u), xg);
    rows.push_back(r);
  }
  return rows;
}

std::vector<ComparisonRow> fp_comparison(const RunConfig& c, const LimitRun& limit, double dt,
                                         const SampleHook& hook) {
  const std::vector<double> times = c.sample_times();
  check_limit(limit, times);
  const MacroState s0 = initial_macro(c);
  FpSolver solver(init_fp(c.phase_grid(), s0.rho, s0.u, c.params, c.perturbed_init), c.kernel);
  std::vector<ComparisonRow> rows;
  const double sq = std::sqrt(c.params.sigma);
  for (std::size_t k = 0; k < times.size(); ++k) {
    const StepPlan plan = plan_steps(solver.state().t, times[k], dt);
    for (int s = 0; s < plan.n; ++s) solver.step(plan.h);
    const FpState& st = solver.state();
    if (hook) hook(times[k], st.g);
    const LimitSample& ref = limit.samples[k];
    const TorusGrid& xg = st.g.grid.x;
    ComparisonRow r;
    r.eps = c.params.epsilon;
    r.sigma = c.params.sigma;
    r.delta = c.params.delta;
    r.t = times[k];
    const Field rho = st.rho();
    const Field mom_u = st.momentum_density();
    const Field mom_m = product(rho, st.m);
    const Field mom_ref = product(ref.macro.rho, ref.macro.u);
    const SignedMeasure1D mr = SignedMeasure1D::from_density(rho, xg);
    const SignedMeasure1D mref = SignedMeasure1D::from_density(ref.macro.rho, xg);
    r.w1_rho = w1_periodic(mr, mref);
    const double w2 = w2_periodic(mr, mref);
    r.w2sq_rho = w2 * w2;
    r.w1_mom_u = momentum_w1(mom_u, mom_ref, xg);
    r.w1_mom_m = momentum_w1(mom_m, mom_ref, xg);
    r.w1sq_mom = r.w1_mom_u * r.w1_mom_u;
    r.w1sq_mom_m = r.w1_mom_m * r.w1_mom_m;
    r.mod_energy = modulated_energy(st.g, sq, st.m, ref.macro.u);
    r.rel_entropy = relative_entropy_maxwellian(st.g, ref.macro.rho);
    r.fisher = fisher_information(st.g);
    r.boltzmann = boltzmann_entropy(st.g);
    r.xi_m2 = second_xi_moment(st.g);
    r.mass = quadrature_phase(st.g);
    r.momentum = quadrature_x(mom_u, xg);
    const Field u = st.u();
    r.energy = 0.5 * quadrature_x(product(mom_u, u), xg);
    rows.push_back(r);
  }
  return rows;
}

double row_value(const ComparisonRow& r, const std::string& m) {
  static const std::map<std::string, double ComparisonRow::*> fields = {
      {"w1_rho", &ComparisonRow::w1_rho},         {"w1_mom_u", &ComparisonRow::w1_mom_u},
      {"w1_mom_m", &ComparisonRow::w1_mom_m},     {"w1_g", &ComparisonRow::w1_g},
      {"mod_energy", &ComparisonRow::mod_energy}, {"w2sq_rho", &ComparisonRow::w2sq_rho},
      {"w1sq_mom", &ComparisonRow::w1sq_mom},     {"w1sq_mom_m", &ComparisonRow::w1sq_mom_m},
      {"rel_entropy", &ComparisonRow::rel_entropy}, {"fisher", &ComparisonRow::fisher},
      {"boltzmann", &ComparisonRow::boltzmann},   {"xi_m2", &ComparisonRow::xi_m2},
      {"mass", &ComparisonRow::mass},             {"momentum", &ComparisonRow::momentum},
      {"energy", &ComparisonRow::energy},         {"eps", &ComparisonRow::eps},
      {"sigma", &ComparisonRow::sigma},           {"delta", &ComparisonRow::delta},
      {"t", &ComparisonRow::t}};
  const auto it = fields.find(m);
  if (it == fields.end()) throw std::invalid_argument("unknown metric '" + m + "'");
  return r.*(it->second);
}

RateFit fit_rate(const std::vector<ComparisonRow>& rows, const std::string& metric, double t,
                 const std::vector<ComparisonRow>& floor_rows, const std::string& abscissa) {
  RateFit fit;
  fit.metric = metric;
  fit.t = t;
  std::vector<std::pair<double, double>> pts;
  for (const ComparisonRow& r : rows) {
    if (std::fabs(r.t - t) <= 1e-12) pts.emplace_back(row_value(r, abscissa), row_value(r, metric));
  }
  std::sort(pts.begin(), pts.end(), std::greater<>());
  fit.monotone = pts.size() >= 2;
  for (std::size_t k = 1; k < pts.size(); ++k) {
    if (!(pts[k].second < pts[k - 1].second)) fit.monotone = false;
  }
  auto try_fit = [](const std::vector<std::pair<double, double>>& p) -> std::optional<LineFit> {
    std::vector<double> x, y;
    for (auto [e, v] : p) {
      if (v > 0.0 && std::isfinite(v)) {
        x.push_back(e);
        y.push_back(v);
      }
    }
    if (x.size() < 2 || x.size() != p.size()) return std::nullopt;
    return fit_loglog(x, y);
  };
  fit.raw = try_fit(pts);
  double floor = NAN;
  for (const ComparisonRow& r : floor_rows) {
    if (std::fabs(r.t - t) <= 1e-12) floor = row_value(r, metric);
  }
  if (std::isfinite(floor)) {
    auto corrected = pts;
    for (auto& p : corrected) p.second -= floor;
    fit.corrected = try_fit(corrected);
  } else {
    fit.corrected = fit.raw;
  }
  return fit;
}

}  // namespace monokin
