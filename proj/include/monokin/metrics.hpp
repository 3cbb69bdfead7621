/// @file metrics.hpp
/// @brief Transport distances, energies and entropy functionals.
///
/// Circle distances use the geodesic ground cost. W1 on the circle is the
/// minimum over constants c of int |F_mu - F_nu - c| (exact for atoms); W2 is
/// the quantile cost minimised over the level shift of one quantile function.
#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#include "monokin/grid.hpp"
#include "monokin/kernels.hpp"
#include "monokin/state.hpp"

namespace monokin {

class MassMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Weighted point masses. Positions may be arbitrary reals; circle routines
/// wrap them into [0, L).
struct Atoms {
  std::vector<double> positions;
  std::vector<double> weights;

  double mass() const;
};

/// Cell masses on a torus grid, treated as atoms at the cell centres.
struct SignedMeasure1D {
  TorusGrid grid;
  std::vector<double> weights;

  static SignedMeasure1D from_density(std::span<const double> density, const TorusGrid& grid);
  double mass() const;
  Atoms atoms() const;
};

double w1_circle(const Atoms& mu, const Atoms& nu, double length, double mass_tol = 1e-8);
double w1_line(const Atoms& mu, const Atoms& nu, double mass_tol = 1e-8);
double w2_circle(const Atoms& mu, const Atoms& nu, double length, double mass_tol = 1e-8);

double w1_periodic(const SignedMeasure1D& mu, const SignedMeasure1D& nu, double mass_tol = 1e-8);
double w2_periodic(const SignedMeasure1D& mu, const SignedMeasure1D& nu, double mass_tol = 1e-8);

/// Sliced W1 over directions k*pi/n_slices (k = 0..n_slices-1). Direction 0
/// is the x-marginal on the circle; the others project (x, xi) with x taken
/// in [0, L) onto the line.
double w1_phase(const Profile& g1, const Profile& g2, int n_slices = 16);

/// 1/2 int |m + omega xi - u_ref|^2 g dxi dx.
double modulated_energy(const Profile& g, double omega, std::span<const double> m,
                        std::span<const double> u_ref);

/// int g log g with 0 log 0 = 0 (cells with g < 1e-14 are skipped).
double boltzmann_entropy(const Profile& g);

/// int g log(g / mu), mu = rho_ref(x) (2 pi)^-1/2 exp(-xi^2 / 2).
double relative_entropy_maxwellian(const Profile& g, std::span<const double> rho_ref);

/// int |d_xi g + xi g|^2 / g with centred differences.
double fisher_information(const Profile& g);

/// Total second xi-moment int xi^2 g.
double second_xi_moment(const Profile& g);

Field centered_derivative(std::span<const double> u, const TorusGrid& grid);

/// e = d_x u + rho * phi.
Field e_quantity(const MacroState& state, const TabulatedKernel& phi);

double standard_gaussian(double xi);

}  // namespace monokin
