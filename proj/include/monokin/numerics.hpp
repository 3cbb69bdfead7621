/// @file numerics.hpp
/// @brief Small numerical building blocks shared by the solvers.
#pragma once

#include <functional>
#include <span>
#include <vector>

namespace monokin {

/// Kahan-Neumaier summation.
double compensated_sum(std::span<const double> values);

/// Solves a tridiagonal system in place (Thomas algorithm).
/// lower[0] and upper[n-1] are ignored. Returns false on a zero pivot.
bool solve_tridiagonal(std::span<const double> lower, std::span<const double> diag,
                       std::span<const double> upper, std::span<double> rhs);

/// Second-derivative coefficients of the periodic cubic spline through
/// equally spaced samples with spacing h.
std::vector<double> periodic_spline_second_derivatives(std::span<const double> y, double h);

/// Conjugate gradients for a self-adjoint positive operator in the inner
/// product <a, b> = sum(w_i a_i b_i). Returns the number of iterations used.
int conjugate_gradient(const std::function<void(std::span<const double>, std::span<double>)>& apply,
                       std::span<const double> weights, std::span<const double> rhs,
                       std::span<double> x, double rel_tol = 1e-13, int max_iter = 500);

/// Root of a continuous function with a sign change on [lo, hi].
double bisect(const std::function<double(double)>& f, double lo, double hi,
              double tol = 1e-15, int max_iter = 200);

}  // namespace monokin
