/// @file transport.hpp
/// @brief Conservative first-order upwind transport on the torus and in xi,
///        and the runtime guards shared by the solvers.
#pragma once

#include <span>
#include <stdexcept>

#include "monokin/grid.hpp"
#include "monokin/state.hpp"

namespace monokin {

/// Base of the errors that abort a run after it started (CLI exit code 3).
class RuntimeGuard : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class CflViolation : public RuntimeGuard {
 public:
  using RuntimeGuard::RuntimeGuard;
};

class BlowUp : public RuntimeGuard {
 public:
  using RuntimeGuard::RuntimeGuard;
};

class LeakError : public RuntimeGuard {
 public:
  using RuntimeGuard::RuntimeGuard;
};

/// Largest admissible Courant number (outflow through both faces of a cell).
inline constexpr double kCourantLimit = 0.9;

/// (u_i + u_{i+1}) / 2 at face i + 1/2.
Field face_average(std::span<const double> u);

/// Largest cell outflow fraction (max(a_{i+1/2}, 0) - min(a_{i-1/2}, 0)) dt / dx.
double courant_periodic(std::span<const double> face_speed, double dt, double dx);

/// q_i -= dt/dx (F_{i+1/2} - F_{i-1/2}) with upwind fluxes F = a q_upwind.
/// Throws CflViolation above kCourantLimit.
void advect_periodic(std::span<double> q, std::span<const double> face_speed, double dt,
                     double dx);

/// x-advection of every xi-row of g with face speed base[i] + xi_coeff * xi_j.
void advect_x(Profile& g, std::span<const double> base_face_speed, double xi_coeff, double dt);

/// xi-advection with velocity -xi k_i in column i. Interior faces are
/// upwinded; boundary faces only let mass out. Returns the mass that left
/// through the xi-boundaries (already multiplied by dx dxi).
double drift_xi(Profile& g, std::span<const double> k, double dt);

/// Upwind estimate of u d_x u.
Field upwind_advection(std::span<const double> u, double dx);

/// Largest stable dt for the split profile transport: x face speeds
/// base + xi_coeff xi and xi drift -xi k.
double profile_stable_dt(const PhaseGrid& grid, std::span<const double> base_face_speed,
                         double xi_coeff, std::span<const double> k, double cfl);

}  // namespace monokin
