/// @file kernels.hpp
/// @brief Communication kernels, the periodised algebraic mollifier and the
///        density-weighted (Favre) velocity filter.
#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#include "monokin/grid.hpp"

namespace monokin {

enum class KernelKind { Constant, Algebraic };

/// phi(r) = 1 (constant) or (1 + r^2)^(-beta/2) with r the periodic distance.
struct KernelSpec {
  KernelKind kind = KernelKind::Constant;
  double beta = 2.0;
  bool normalized = false;

  double operator()(double periodic_distance) const;
};

/// Kernel values by periodic cell offset: values[k] = kernel(k * dx).
/// values[k] == values[n - k] for every tabulated kernel.
struct TabulatedKernel {
  TorusGrid grid;
  std::vector<double> values;

  /// Periodic linear interpolation at an arbitrary displacement.
  double at(double displacement) const;
};

TabulatedKernel tabulate(const KernelSpec& spec, const TorusGrid& grid);

class GridMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// (field * kernel)_i = sum_j kernel[i - j] field_j dx.
Field convolve_periodic(std::span<const double> field, const TabulatedKernel& kernel);

/// Raised when psi_delta cannot be represented on the grid.
class UnderResolved : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// psi_delta(x) = delta^-1 sum_k psi((x + k L) / delta), psi(y) = c <y>^-(1 + alpha),
/// renormalised to unit discrete mass on the torus.
struct Mollifier {
  double delta = 0.0;
  double alpha = 0.0;
  double c_n = 0.0;  ///< normalisation of psi on the real line
  TabulatedKernel kernel;

  double min_value() const;
};

Mollifier build_mollifier(double delta, double alpha, const TorusGrid& grid);

/// u_delta = (((u rho) * psi) / (rho * psi)) * psi.
Field favre_filter(std::span<const double> u, std::span<const double> rho, const Mollifier& psi);

/// rho-weighted inner product (a, b)_rho = int rho a b dx.
double weighted_inner(std::span<const double> a, std::span<const double> b,
                      std::span<const double> rho, const TorusGrid& grid);

/// Largest adjacent-cell slope |u_{i+1} - u_i| / dx.
double discrete_lipschitz(std::span<const double> u, const TorusGrid& grid);

struct FavreReport {
  double symmetry_residual = 0.0;  ///< max |(u_d, v)_rho - (u, v_d)_rho| over test fields
  double psd_residual = 0.0;       ///< (u_d, u)_rho - (u_d, u_d)_rho, expected >= 0
  double approximation_error = 0.0;  ///< ||u_d - u||_{L1(rho)}
  double lipschitz = 0.0;
  double approximation_constant = 0.0;  ///< error / (delta * Lip(u)), 0 when Lip(u) == 0
};

FavreReport favre_properties_check(std::span<const double> u, std::span<const double> rho,
                                   const Mollifier& psi,
                                   const std::vector<Field>& test_fields);

struct FavreDeltaStudy {
  std::vector<double> deltas;
  std::vector<double> errors;
  std::vector<double> ratios;     ///< errors[k + 1] / errors[k]
  std::vector<double> constants;  ///< fitted C per delta
  std::vector<double> derivative_constants;  ///< ||d_x u_d||_inf / (delta^(-1-alpha) E^(1/2))
};

/// Refinement study of the approximation bound ||u_d - u|| <= C delta Lip(u)
/// and of the derivative bound over the given deltas.
FavreDeltaStudy favre_delta_study(std::span<const double> u, std::span<const double> rho,
                                  const TorusGrid& grid, double alpha,
                                  const std::vector<double>& deltas);

}  // namespace monokin
