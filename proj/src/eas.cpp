#include "monokin/eas.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "monokin/metrics.hpp"
#include "monokin/transport.hpp"

namespace monokin {

EasSolver::EasSolver(MacroState initial, const KernelSpec& kernel, double blowup_threshold)
    : state_(std::move(initial)), phi_(tabulate(kernel, state_.grid)), blowup_(blowup_threshold) {
  refresh();
}

void EasSolver::refresh() {
  rho_phi_ = convolve_periodic(state_.rho, phi_);
  Field urho(state_.rho.size());
  for (std::size_t i = 0; i < urho.size(); ++i) urho[i] = state_.u[i] * state_.rho[i];
  urho_phi_ = convolve_periodic(urho, phi_);
}

double EasSolver::stable_dt(double cfl) const {
  const Field uf = face_average(state_.u);
  double s = 0.0;
  const std::size_t n = uf.size();
  for (std::size_t i = 0; i < n; ++i) {
    s = std::max(s, std::max(uf[i], 0.0) - std::min(uf[(i + n - 1) % n], 0.0));
    s = std::max(s, std::fabs(state_.u[i]));
  }
  return s > 0.0 ? cfl * state_.grid.dx() / s : std::numeric_limits<double>::infinity();
}

void EasSolver::step(double dt) {
  const double dx = state_.grid.dx();
  const std::size_t n = state_.u.size();
  for (double ui : state_.u) {
    if (std::fabs(ui) * dt / dx > kCourantLimit) {
      throw CflViolation("eas: velocity Courant number exceeds " + std::to_string(kCourantLimit));
    }
  }
  const Field adv = upwind_advection(state_.u, dx);
  Field u_new(n);
  for (std::size_t i = 0; i < n; ++i) {
    u_new[i] = (state_.u[i] - dt * adv[i] + dt * urho_phi_[i]) / (1.0 + dt * rho_phi_[i]);
  }
  const Field uf = face_average(state_.u);
  advect_periodic(state_.rho, uf, dt, dx);
  state_.u = std::move(u_new);
  state_.t += dt;
  double slope = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    slope = std::max(slope, std::fabs(state_.u[(i + 1) % n] - state_.u[i]) / dx);
  }
  if (!(slope <= blowup_)) {
    throw BlowUp("eas: max |d_x u| = " + std::to_string(slope) + " exceeds " +
                 std::to_string(blowup_) + " at t = " + std::to_string(state_.t));
  }
  refresh();
}

StepPlan plan_steps(double t0, double t1, double dt) {
  const double span = t1 - t0;
  if (span <= 0.0) return {};
  const int n = static_cast<int>(std::ceil(span / dt - 1e-9));
  return {std::max(n, 1), span / std::max(n, 1)};
}

double symmetry_residual(const MacroState& s, double x_star) {
  double r = 0.0;
  for (int i = 0; i < s.grid.size(); ++i) {
    const double y = s.grid.center(i) - x_star;
    const double rp = interpolate_linear(s.rho, s.grid, x_star + y);
    const double rm = interpolate_linear(s.rho, s.grid, x_star - y);
    const double up = interpolate_linear(s.u, s.grid, x_star + y);
    const double um = interpolate_linear(s.u, s.grid, x_star - y);
    r = std::max(r, std::fabs(rp - rm) + std::fabs(up + um));
  }
  return r;
}

EEvolutionReport e_evolution_check(const std::vector<MacroState>& traj, const TabulatedKernel& phi) {
  EEvolutionReport rep;
  for (const MacroState& s : traj) {
    const Field e = e_quantity(s, phi);
    rep.t.push_back(s.t);
    rep.e_min.push_back(*std::min_element(e.begin(), e.end()));
    rep.e_total.push_back(quadrature_x(e, s.grid));
  }
  for (std::size_t k = 1; k < rep.t.size(); ++k) {
    const double dt = rep.t[k] - rep.t[0];
    if (dt > 0.0) {
      rep.drift_per_time =
          std::max(rep.drift_per_time, std::fabs(rep.e_total[k] - rep.e_total[0]) / dt);
    }
  }
  return rep;
}

double momentum_residual(const MacroState& a, const MacroState& b, const TabulatedKernel& phi) {
  const double dt = b.t - a.t;
  const int n = a.grid.size();
  const double dx = a.grid.dx();
  Field flux(n);
  for (int i = 0; i < n; ++i) {
    // upwind momentum flux rho u^2 at face i + 1/2
    const int ip = a.grid.wrap(i + 1);
    const double uf = 0.5 * (a.u[i] + a.u[ip]);
    flux[i] = uf >= 0.0 ? uf * a.rho[i] * a.u[i] : uf * a.rho[ip] * a.u[ip];
  }
  const Field rp = convolve_periodic(a.rho, phi);
  Field urho(n);
  for (int i = 0; i < n; ++i) urho[i] = a.u[i] * a.rho[i];
  const Field up = convolve_periodic(urho, phi);
  Field res(n);
  for (int i = 0; i < n; ++i) {
    const double dtm = (b.rho[i] * b.u[i] - a.rho[i] * a.u[i]) / dt;
    const double div = (flux[i] - flux[a.grid.wrap(i - 1)]) / dx;
    res[i] = std::fabs(dtm + div - a.rho[i] * (up[i] - a.u[i] * rp[i]));
  }
  return quadrature_x(res, a.grid);
}

}  // namespace monokin
