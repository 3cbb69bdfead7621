#include "monokin/profile.hpp"

#include <cmath>
#include <string>

#include "monokin/metrics.hpp"
#include "monokin/transport.hpp"

namespace monokin {

ProfileSolver::ProfileSolver(Profile g0, double leak_tolerance)
    : g_(std::move(g0)), mass0_(quadrature_phase(g_)), leak_tol_(leak_tolerance) {}

void ProfileSolver::step(std::span<const double> u, std::span<const double> rho_phi, double dt) {
  const Field uf = face_average(u);
  const Field du = centered_derivative(u, g_.grid.x);
  Field k(du.size());
  for (std::size_t i = 0; i < k.size(); ++i) k[i] = du[i] + rho_phi[i];
  advect_x(g_, uf, 0.0, dt);
  leaked_ += drift_xi(g_, k, dt);
  g_.t += dt;
  if (leaked_ > leak_tol_ * std::max(mass0_, 1e-300)) {
    throw LeakError("profile: mass " + std::to_string(leaked_) +
                    " left the xi-box; increase xi_max");
  }
}

double marginal_consistency(const Profile& g, std::span<const double> rho) {
  const Field m = g.marginal();
  Field d(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) d[i] = std::fabs(m[i] - rho[i]);
  return quadrature_x(d, g.grid.x);
}

Field profile_momentum(const Profile& g) { return g.moment(1); }

LimitRun run_limit(const MacroState& initial, const KernelSpec& kernel,
                   const std::optional<Profile>& g0, const std::vector<double>& times, double dt,
                   bool record_history) {
  EasSolver eas(initial, kernel);
  std::optional<ProfileSolver> prof;
  if (g0) prof.emplace(*g0);
  LimitRun run;
  auto record = [&] {
    if (!record_history) return;
    run.history_t.push_back(eas.state().t);
    run.history_u.push_back(eas.state().u);
    run.history_rho_phi.push_back(eas.rho_phi());
  };
  record();
  for (double target : times) {
    const StepPlan plan = plan_steps(eas.state().t, target, dt);
    for (int s = 0; s < plan.n; ++s) {
      if (prof) prof->step(eas.state().u, eas.rho_phi(), plan.h);
      eas.step(plan.h);
      record();
    }
    LimitSample sample{eas.state(), eas.rho_phi(), std::nullopt};
    sample.macro.t = target;
    if (prof) {
      sample.g = prof->profile();
      sample.g->t = target;
    }
    run.samples.push_back(std::move(sample));
  }
  return run;
}

}  // namespace monokin
