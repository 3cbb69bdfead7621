#include "monokin/fokker_planck.hpp"

#include <cmath>
#include <string>

#include "monokin/initial.hpp"
#include "monokin/metrics.hpp"
#include "monokin/numerics.hpp"
#include "monokin/transport.hpp"

namespace monokin {

double bernoulli_weight(double z) {
  if (std::fabs(z) < 1e-4) return 1.0 - 0.5 * z + z * z / 12.0;
  return z / std::expm1(z);
}

void ou_implicit_substep_inplace(Profile& g, double tau) {
  if (!(tau > 0.0)) throw std::invalid_argument("ou_implicit_substep: tau must be positive");
  const int nxi = g.grid.xi.size();
  const double dxi = g.grid.xi.dxi();
  // flux_{j+1/2} = a_j g_{j+1} - b_j g_j
  std::vector<double> a(nxi - 1), b(nxi - 1);
  for (int j = 0; j + 1 < nxi; ++j) {
    const double z = g.grid.xi.face(j + 1) * dxi;
    a[j] = bernoulli_weight(-z) / dxi;
    b[j] = bernoulli_weight(z) / dxi;
  }
  const double r = tau / dxi;
  std::vector<double> lower(nxi, 0.0), diag(nxi, 1.0), upper(nxi, 0.0);
  for (int j = 0; j < nxi; ++j) {
    if (j + 1 < nxi) {
      diag[j] += r * b[j];
      upper[j] = -r * a[j];
    }
    if (j > 0) {
      diag[j] += r * a[j - 1];
      lower[j] = -r * b[j - 1];
    }
  }
  std::vector<double> col(nxi);
  for (int i = 0; i < g.grid.x.size(); ++i) {
    for (int j = 0; j < nxi; ++j) col[j] = g.at(i, j);
    const double mass = compensated_sum(col);
    if (!solve_tridiagonal(lower, diag, upper, col)) {
      throw std::runtime_error("ou_implicit_substep: tridiagonal solve failed");
    }
    // the solve conserves mass only up to roundoff growing with tau
    const double out = compensated_sum(col);
    const double scale = out > 0.0 ? mass / out : 1.0;
    for (int j = 0; j < nxi; ++j) g.at(i, j) = col[j] * scale;
  }
}

Profile ou_implicit_substep(const Profile& g, double tau) {
  Profile out = g;
  ou_implicit_substep_inplace(out, tau);
  return out;
}

Field FpState::u() const {
  const Field r = g.marginal();
  const Field J = g.moment(1);
  const double s = std::sqrt(params.sigma);
  Field out(m);
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (r[i] > 0.0) out[i] += s * J[i] / r[i];
  }
  return out;
}

Field FpState::momentum_density() const {
  const Field r = g.marginal();
  const Field J = g.moment(1);
  const double s = std::sqrt(params.sigma);
  Field out(m.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = r[i] * m[i] + s * J[i];
  return out;
}

FpState init_fp(const PhaseGrid& grid, std::span<const double> rho0, std::span<const double> u0,
                const ModulationParams& params, bool perturbed) {
  params.validate(true);
  if (grid.xi.xi_max() < 6.0) {
    throw std::invalid_argument("init_fp: xi-box must extend at least 6 standard units");
  }
  FpState s;
  s.g = perturbed ? gaussian_profile_normalized(grid, rho0, 1.5) : gaussian_profile(grid, rho0, 1.0);
  s.m.assign(u0.begin(), u0.end());
  s.params = params;
  return s;
}

FpSolver::FpSolver(FpState initial, const KernelSpec& kernel, double leak_tolerance)
    : s_(std::move(initial)),
      phi_(tabulate(kernel, s_.g.grid.x)),
      psi_(build_mollifier(s_.params.delta, s_.params.alpha, s_.g.grid.x)),
      mass0_(quadrature_phase(s_.g)),
      leak_tol_(leak_tolerance) {
  s_.params.validate(true);
}

double FpSolver::stable_dt(double cfl) const {
  const Field rp = convolve_periodic(s_.rho(), phi_);
  const Field dm = centered_derivative(s_.m, s_.g.grid.x);
  Field k(dm.size());
  for (std::size_t i = 0; i < k.size(); ++i) k[i] = dm[i] + rp[i];
  return profile_stable_dt(s_.g.grid, face_average(s_.m), std::sqrt(s_.params.sigma), k, cfl);
}

void FpSolver::step(double dt) {
  const TorusGrid& xg = s_.g.grid.x;
  const std::size_t n = s_.m.size();
  const double sq = std::sqrt(s_.params.sigma);
  const double eps = s_.params.epsilon;
  const Field rho = s_.g.marginal();
  const Field rho_phi = convolve_periodic(rho, phi_);
  const Field urho_phi = convolve_periodic(s_.momentum_density(), phi_);
  const Field dm = centered_derivative(s_.m, xg);
  Field k(n);
  for (std::size_t i = 0; i < n; ++i) k[i] = dm[i] + rho_phi[i];
  const Field adv = upwind_advection(s_.m, xg.dx());

  advect_x(s_.g, face_average(s_.m), sq, dt);
  leaked_ += drift_xi(s_.g, k, dt);
  if (leaked_ > leak_tol_ * std::max(mass0_, 1e-300)) {
    throw LeakError("fp: mass " + std::to_string(leaked_) + " left the xi-box");
  }
  ou_implicit_substep_inplace(s_.g, dt / eps);

  const Field rho_new = s_.g.marginal();
  const Field J_new = s_.g.moment(1);
  Field w(n), weights(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(rho_new[i] > 0.0)) {
      throw RuntimeGuard("fp: marginal vanishes at cell " + std::to_string(i));
    }
    w[i] = sq * J_new[i] / rho_new[i];
    weights[i] = rho_new[i] * xg.dx();
  }
  const Field Fw = favre_filter(w, rho_new, psi_);
  Field rhs(n), D(n);
  for (std::size_t i = 0; i < n; ++i) {
    rhs[i] = s_.m[i] - dt * adv[i] + dt * urho_phi[i] + dt / eps * Fw[i];
    D[i] = 1.0 + dt / eps + dt * rho_phi[i];
  }
  auto apply = [&](std::span<const double> v, std::span<double> out) {
    const Field Fv = favre_filter(v, rho_new, psi_);
    for (std::size_t i = 0; i < n; ++i) out[i] = D[i] * v[i] - dt / eps * Fv[i];
  };
  Field m_new = s_.m;
  cg_iterations_ = conjugate_gradient(apply, weights, rhs, m_new, 1e-13, 500);
  s_.m = std::move(m_new);
  s_.t += dt;
}

}  // namespace monokin
