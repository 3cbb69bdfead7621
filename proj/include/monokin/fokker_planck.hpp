/// @file fokker_planck.hpp
/// @brief Modulated Fokker-Planck-alignment system with stiff
///        Ornstein-Uhlenbeck relaxation in xi and Favre-filtered velocity.
#pragma once

#include <span>

#include "monokin/kernels.hpp"
#include "monokin/state.hpp"

namespace monokin {

/// B(z) = z / (e^z - 1), B(0) = 1.
double bernoulli_weight(double z);

/// Backward-Euler step of d_tau g = d_xi(d_xi g + xi g) in every x-column,
/// exponentially fitted (Scharfetter-Gummel) fluxes, zero flux at the
/// xi-box faces. The sampled standard Gaussian is an exact discrete steady
/// state; mass and positivity are preserved for any tau > 0.
void ou_implicit_substep_inplace(Profile& g, double tau);
Profile ou_implicit_substep(const Profile& g, double tau);

struct FpState {
  Profile g;
  Field m;
  ModulationParams params;
  double t = 0.0;

  Field rho() const { return g.marginal(); }
  /// u = m + (sqrt(sigma) / rho) int xi g dxi.
  Field u() const;
  Field momentum_density() const;
};

/// g0 = rho0 (2 pi)^-1/2 exp(-xi^2 / 2), m0 = u0. With `perturbed`, the
/// xi-profile has variance 3/2 instead (column mass still rho0).
FpState init_fp(const PhaseGrid& grid, std::span<const double> rho0, std::span<const double> u0,
                const ModulationParams& params, bool perturbed = false);

class FpSolver {
 public:
  FpSolver(FpState initial, const KernelSpec& kernel, double leak_tolerance = 1e-8);

  const FpState& state() const { return s_; }
  const Mollifier& mollifier() const { return psi_; }
  const TabulatedKernel& kernel() const { return phi_; }
  int last_cg_iterations() const { return cg_iterations_; }

  double stable_dt(double cfl) const;

  /// x-transport (speed m + sqrt(sigma) xi), xi-drift, implicit OU with
  /// dt/eps, moments, then the m-update implicit in m and in the relaxation
  /// toward the filtered velocity:
  /// [(1 + dt/eps + dt rho_phi) - (dt/eps) F] m' = m - dt (m d_x m)
  ///     + dt (rho u)_phi + (dt/eps) F(sqrt(sigma) J'/rho'),
  /// F the Favre filter at rho'. Solved by CG in the rho'-weighted product.
  void step(double dt);

 private:
  FpState s_;
  TabulatedKernel phi_;
  Mollifier psi_;
  double mass0_;
  double leak_tol_;
  double leaked_ = 0.0;
  int cg_iterations_ = 0;
};

}  // namespace monokin
