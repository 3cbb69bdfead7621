/// @file initial.hpp
/// @brief Initial data: velocity profiles and Gaussian-in-xi profiles.
#pragma once

#include <functional>
#include <span>
#include <string>

#include "monokin/grid.hpp"
#include "monokin/state.hpp"

namespace monokin {

/// (1 / 3 pi) cos(2 pi x): odd about its zeros x = 1/4, 3/4.
double u0_symmetric(double x);

/// Six-mode profile without odd symmetry about its zeros.
double u0_asymmetric(double x);

/// Velocity profile by name: sym | asym | zero | expression in x.
std::function<double(double)> velocity_profile(const std::string& spec);

/// Density rho(x) / sqrt(2 pi v) exp(-(xi - mean)^2 / (2 v)) at grid nodes.
Profile gaussian_profile(const PhaseGrid& grid, std::span<const double> rho, double variance,
                         double mean = 0.0);

/// Same Gaussian, rescaled per column so each column integrates exactly to
/// rho on the truncated grid.
Profile gaussian_profile_normalized(const PhaseGrid& grid, std::span<const double> rho,
                                    double variance);

}  // namespace monokin
