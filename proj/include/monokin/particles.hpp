/// @file particles.hpp
/// @brief Cucker-Smale particles (RK4) and Langevin particles
///        (Euler-Maruyama with counter-based Gaussian draws).
#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "monokin/kernels.hpp"
#include "monokin/state.hpp"

namespace monokin {

struct Swarm {
  std::vector<double> m;
  std::vector<double> x;  ///< periodic positions, kept in [0, length)
  std::vector<double> v;
  double length = 1.0;
  double t = 0.0;

  int size() const { return static_cast<int>(x.size()); }
  double mass() const;
  double momentum() const;
  double velocity_diameter() const;
};

/// Counter-based uniform in (0, 1) and standard normal draws: the same
/// (seed, stream, counter) always gives the same value.
double counter_uniform(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter);
double counter_normal(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter);

/// N equal-mass particles with positions drawn from rho (piecewise constant
/// per cell) and monokinetic velocities v = u(x) (linear interpolation).
Swarm sample_swarm(const MacroState& state, int n, std::uint64_t seed);

/// x_i' = v_i, v_i' = sum_j m_j phi(x_i - x_j)(v_j - v_i); one RK4 step.
void step_cs(Swarm& s, const KernelSpec& phi, double dt);

/// Mean-field terms at the particle positions.
struct ForceSample {
  std::vector<double> urho_phi;
  std::vector<double> rho_phi;
  std::vector<double> u_delta;
};
using ForceModel = std::function<void(const Swarm&, ForceSample&)>;

/// All three terms zero.
ForceModel zero_force();

/// Terms interpolated linearly from grid fields (one-way coupling).
ForceModel grid_force(const TorusGrid& grid, Field urho_phi, Field rho_phi, Field u_delta);

/// Terms from the empirical measure: (u rho)_phi and rho_phi summed over
/// atoms; u_delta by the Favre filter of the atoms on the mollifier grid.
/// Without a mollifier, u_delta is left zero.
ForceModel empirical_force(const KernelSpec& phi, const Mollifier* psi = nullptr);

struct LangevinParams {
  double epsilon = 1.0;  ///< infinity switches relaxation and noise off
  double sigma = 0.0;
  double dt = 1e-3;
  std::uint64_t seed = 1;
};

/// V' = (u rho)_phi - rho_phi V + (u_delta - V)/eps + sqrt(2 sigma / eps) dB,
/// X' = V. The Gaussian increment of particle i at step k is
/// counter_normal(seed, i, k).
void step_langevin(Swarm& s, const ForceModel& force, const LangevinParams& p,
                   std::uint64_t step_index);

struct EmpiricalVsGrid {
  double w1_x = 0.0;       ///< circle W1 between particle positions and rho
  double w1_v_proj = 0.0;  ///< line W1 between velocity marginals
};

EmpiricalVsGrid empirical_vs_grid(const Swarm& s, const MacroState& grid_state);

}  // namespace monokin
