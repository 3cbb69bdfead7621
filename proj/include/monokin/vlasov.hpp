/// @file vlasov.hpp
/// @brief Modulated Vlasov-alignment system: profile g, modulated velocity m
///        and the closed-form scale omega = eps exp(-t / eps).
#pragma once

#include <span>

#include "monokin/kernels.hpp"
#include "monokin/state.hpp"

namespace monokin {

double omega_of(double epsilon, double t);

struct VlasovState {
  Profile g;
  Field m;
  double epsilon = 0.1;
  double t = 0.0;

  double omega() const { return omega_of(epsilon, t); }
  Field rho() const { return g.marginal(); }
  /// u = m + (omega / rho) int xi g dxi; cells with rho == 0 get u = m.
  Field u() const;
  /// rho u as a field.
  Field momentum_density() const;
};

/// g(0) = g0, m(0) = u0. Throws std::invalid_argument when g0 carries more
/// than 1e-12 of its mass in the outermost xi-cells.
VlasovState init_vlasov(const Profile& g0, std::span<const double> u0, double epsilon);

/// omega^2 int xi^2 g dxi.
Field kinetic_stress(const VlasovState& s);

class VlasovSolver {
 public:
  VlasovSolver(VlasovState initial, const KernelSpec& kernel, double leak_tolerance = 1e-8);

  const VlasovState& state() const { return s_; }
  const TabulatedKernel& kernel() const { return phi_; }
  double leaked() const { return leaked_; }

  double stable_dt(double cfl) const;

  /// (1) x-transport with speed m + omega(t^n) xi, (2) xi-drift with
  /// d_x m + rho_phi, (3) moments, (4) m-update implicit in m:
  /// m'(1 + dt rho_phi) = m - dt (m d_x m) + dt (rho m + omega J)_phi
  ///                       + dt exp(-t'/eps) J'/rho'.
  void step(double dt);

  /// L1 residual of the momentum-form equations over the last step.
  double last_momentum_residual() const { return momentum_residual_; }

 private:
  VlasovState s_;
  TabulatedKernel phi_;
  double mass0_;
  double leak_tol_;
  double leaked_ = 0.0;
  double momentum_residual_ = 0.0;
};

}  // namespace monokin
