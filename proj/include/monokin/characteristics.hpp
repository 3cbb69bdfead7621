/// @file characteristics.hpp
/// @brief Characteristics of the profile equation, their Jacobian, backward
///        push-forward reconstruction and squeezing-rate fits.
///
/// X' = u(t, X) [+ omega(t) Sigma_1],
/// Sigma_1' = -(d_x u + rho_phi) Sigma_1,  Sigma_k' = -rho_phi Sigma_k (k >= 2).
#pragma once

#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

#include "monokin/grid.hpp"
#include "monokin/state.hpp"

namespace monokin {

struct CoefficientSample {
  double u = 0.0;
  double u_x = 0.0;
  double u_xx = 0.0;
  double rho_phi = 0.0;
  double rho_phi_x = 0.0;
};

class TimeRangeExceeded : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

class CoefficientField {
 public:
  virtual ~CoefficientField() = default;
  virtual CoefficientSample at(double t, double x) const = 0;
};

class AnalyticCoefficients final : public CoefficientField {
 public:
  using Fn = std::function<CoefficientSample(double t, double x)>;
  explicit AnalyticCoefficients(Fn fn) : fn_(std::move(fn)) {}
  CoefficientSample at(double t, double x) const override { return fn_(t, x); }

 private:
  Fn fn_;
};

/// Solver snapshots: periodic cubic spline in x for u (u_x, u_xx from the
/// same spline), linear in x for rho_phi, linear in time between snapshots.
class SnapshotCoefficients final : public CoefficientField {
 public:
  SnapshotCoefficients(TorusGrid grid, std::vector<double> times, std::vector<Field> u,
                       std::vector<Field> rho_phi);
  CoefficientSample at(double t, double x) const override;
  double t_min() const { return times_.front(); }
  double t_max() const { return times_.back(); }

 private:
  CoefficientSample at_snapshot(std::size_t k, double x) const;

  TorusGrid grid_;
  std::vector<double> times_;
  std::vector<Field> u_;
  std::vector<Field> m_;  // spline second derivatives of u
  std::vector<Field> rho_phi_;
};

struct CharOptions {
  int n_dims = 1;
  /// Optional omega(t) drift: X' = u + omega(t) Sigma_1.
  std::function<double(double)> omega;
};

struct CharTrajectory {
  int n_dims = 1;
  std::vector<double> times;
  std::vector<double> X;
  std::vector<std::vector<double>> Sigma;
  std::vector<double> jacobian_det;      ///< det of d(X, Sigma)/d(X0, Sigma0)
  std::vector<double> damping_integral;  ///< int_0^t rho_phi(X(s)) ds
};

/// RK4 with steps of size <= |dt| from t0 to t1 (t1 < t0 integrates
/// backward). The variational system is integrated alongside.
CharTrajectory integrate_characteristics(const CoefficientField& field, double x0,
                                         const std::vector<double>& xi0, double t0, double t1,
                                         double dt, const CharOptions& options = {});

/// max_t |det - exp(-n I)| / exp(-n I).
double jacobian_identity_check(const CharTrajectory& traj);

struct SqueezeFit {
  double rate = 0.0;
  double r_squared = 0.0;
};

/// Least-squares slope of log|Sigma(t)|, skipping the first skip_fraction of
/// the time range and any samples after |Sigma| underflows.
SqueezeFit squeeze_rate(const CharTrajectory& traj, double skip_fraction = 0.1);

struct Pushforward {
  Profile g;
  int exits = 0;  ///< nodes whose backward characteristic left the xi-box
};

using PhaseFunction = std::function<double(double x, double xi)>;

/// g(t, x, xi) = g0(X(0), Sigma(0)) exp(int_0^t rho_phi(X(s)) ds) with the
/// characteristic traced backward from every node of `grid`. Characteristics
/// with |Sigma(0)| > g0_xi_max get 0.
Pushforward pushforward_reconstruct(const PhaseFunction& g0, double g0_xi_max,
                                    const CoefficientField& field, const PhaseGrid& grid,
                                    double t, double dt);

/// Bilinear interpolation of a profile (periodic in x, constant extension to
/// the xi-box faces, zero outside).
PhaseFunction interpolate_profile(const Profile& g);

}  // namespace monokin
