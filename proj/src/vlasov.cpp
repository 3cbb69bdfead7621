#include "monokin/vlasov.hpp"

#include <cmath>
#include <string>

#include "monokin/metrics.hpp"
#include "monokin/transport.hpp"

namespace monokin {

double omega_of(double epsilon, double t) { return epsilon * std::exp(-t / epsilon); }

Field VlasovState::u() const {
  const Field r = g.marginal();
  const Field J = g.moment(1);
  const double w = omega();
  Field out(m);
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (r[i] > 0.0) out[i] += w * J[i] / r[i];
  }
  return out;
}

Field VlasovState::momentum_density() const {
  const Field r = g.marginal();
  const Field J = g.moment(1);
  const double w = omega();
  Field out(m.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = r[i] * m[i] + w * J[i];
  return out;
}

VlasovState init_vlasov(const Profile& g0, std::span<const double> u0, double epsilon) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("init_vlasov: epsilon must be positive");
  const int nxi = g0.grid.xi.size();
  double edge = 0.0;
  for (int i = 0; i < g0.grid.x.size(); ++i) edge += g0.at(i, 0) + g0.at(i, nxi - 1);
  edge *= g0.grid.cell_measure();
  const double mass = quadrature_phase(g0);
  if (edge > 1e-12 * mass) {
    throw std::invalid_argument("init_vlasov: g0 is not supported inside the xi-box (edge mass " +
                                std::to_string(edge) + ")");
  }
  return VlasovState{g0, Field(u0.begin(), u0.end()), epsilon, g0.t};
}

Field kinetic_stress(const VlasovState& s) {
  Field R = s.g.moment(2);
  const double w = s.omega();
  for (double& r : R) r *= w * w;
  return R;
}

VlasovSolver::VlasovSolver(VlasovState initial, const KernelSpec& kernel, double leak_tolerance)
    : s_(std::move(initial)),
      phi_(tabulate(kernel, s_.g.grid.x)),
      mass0_(quadrature_phase(s_.g)),
      leak_tol_(leak_tolerance) {}

double VlasovSolver::stable_dt(double cfl) const {
  const Field rp = convolve_periodic(s_.rho(), phi_);
  const Field dm = centered_derivative(s_.m, s_.g.grid.x);
  Field k(dm.size());
  for (std::size_t i = 0; i < k.size(); ++i) k[i] = dm[i] + rp[i];
  return profile_stable_dt(s_.g.grid, face_average(s_.m), s_.omega(), k, cfl);
}

void VlasovSolver::step(double dt) {
  const TorusGrid& xg = s_.g.grid.x;
  const std::size_t n = s_.m.size();
  const double w = s_.omega();
  const Field rho = s_.g.marginal();
  const Field J = s_.g.moment(1);
  const Field rho_phi = convolve_periodic(rho, phi_);
  Field urho(n), u_old(n);
  for (std::size_t i = 0; i < n; ++i) {
    urho[i] = rho[i] * s_.m[i] + w * J[i];
    u_old[i] = rho[i] > 0.0 ? urho[i] / rho[i] : s_.m[i];
  }
  const Field urho_phi = convolve_periodic(urho, phi_);
  const Field dm = centered_derivative(s_.m, xg);
  Field k(n);
  for (std::size_t i = 0; i < n; ++i) k[i] = dm[i] + rho_phi[i];
  const Field adv = upwind_advection(s_.m, xg.dx());
  const Field R_old = kinetic_stress(s_);

  advect_x(s_.g, face_average(s_.m), w, dt);
  leaked_ += drift_xi(s_.g, k, dt);
  if (leaked_ > leak_tol_ * std::max(mass0_, 1e-300)) {
    throw LeakError("vlasov: mass " + std::to_string(leaked_) + " left the xi-box");
  }
  const Field rho_new = s_.g.marginal();
  const Field J_new = s_.g.moment(1);
  const double t_new = s_.t + dt;
  const double relax = std::exp(-t_new / s_.epsilon);  // omega(t') / eps
  Field m_new(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (rho_new[i] < 0.0) {
      throw RuntimeGuard("vlasov: negative marginal at cell " + std::to_string(i));
    }
    const double drift = rho_new[i] > 0.0 ? J_new[i] / rho_new[i] : 0.0;
    m_new[i] = (s_.m[i] - dt * adv[i] + dt * urho_phi[i] + dt * relax * drift) /
               (1.0 + dt * rho_phi[i]);
  }
  const Field m_old = s_.m;
  s_.m = std::move(m_new);
  s_.t = t_new;

  // momentum form: d_t(rho u) + d_x(rho u^2 - rho (u - m)^2 + R) = rho((rho u)_phi - u rho_phi)
  const Field urho_new = s_.momentum_density();
  Field res(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto flux = [&](std::size_t c) {
      const double d = u_old[c] - m_old[c];
      return rho[c] * (u_old[c] * u_old[c] - d * d) + R_old[c];
    };
    const std::size_t ip = (i + 1) % n;
    const std::size_t im = (i + n - 1) % n;
    const double div = (flux(ip) - flux(im)) / (2.0 * xg.dx());
    const double src = rho[i] * (urho_phi[i] - u_old[i] * rho_phi[i]);
    res[i] = std::fabs((urho_new[i] - urho[i]) / dt + div - src);
  }
  momentum_residual_ = quadrature_x(res, xg);
}

}  // namespace monokin
