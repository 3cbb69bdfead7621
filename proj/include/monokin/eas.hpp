/// @file eas.hpp
/// @brief Pressureless Euler-Alignment solver (velocity form).
///
/// rho: conservative upwind with face velocity (u_i + u_{i+1}) / 2.
/// u:   u^{n+1} (1 + dt rho_phi) = u - dt (u d_x u)_upwind + dt (u rho)_phi.
#pragma once

#include <vector>

#include "monokin/kernels.hpp"
#include "monokin/state.hpp"

namespace monokin {

class EasSolver {
 public:
  EasSolver(MacroState initial, const KernelSpec& kernel, double blowup_threshold = 1e3);

  const MacroState& state() const { return state_; }
  const TabulatedKernel& kernel() const { return phi_; }
  /// rho * phi and (u rho) * phi at the current time level.
  const Field& rho_phi() const { return rho_phi_; }
  const Field& urho_phi() const { return urho_phi_; }

  double stable_dt(double cfl) const;
  /// One step; throws CflViolation or BlowUp.
  void step(double dt);

 private:
  void refresh();

  MacroState state_;
  TabulatedKernel phi_;
  Field rho_phi_;
  Field urho_phi_;
  double blowup_;
};

/// Number of equal steps of size <= dt covering [t0, t1], and their size.
struct StepPlan {
  int n = 0;
  double h = 0.0;
};
StepPlan plan_steps(double t0, double t1, double dt);

/// max_y |rho(x*+y) - rho(x*-y)| + |u(x*+y) + u(x*-y)|, periodic reflection
/// with linear interpolation, y ranging over the offsets of the cell centres.
double symmetry_residual(const MacroState& state, double x_star);

struct EEvolutionReport {
  std::vector<double> t;
  std::vector<double> e_min;
  std::vector<double> e_total;
  double drift_per_time = 0.0;  ///< max |int e(t) - int e(0)| / t over t > 0
};

EEvolutionReport e_evolution_check(const std::vector<MacroState>& trajectory,
                                   const TabulatedKernel& phi);

/// Momentum-form residual of a step: discrete d_t(rho u) + d_x(rho u^2) -
/// rho ((u rho)_phi - u rho_phi), L1 over the torus.
double momentum_residual(const MacroState& before, const MacroState& after,
                         const TabulatedKernel& phi);

}  // namespace monokin
