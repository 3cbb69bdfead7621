#include "monokin/initial.hpp"

#include <cmath>
#include <numbers>

#include "monokin/expression.hpp"
#include "monokin/numerics.hpp"

namespace monokin {

namespace {
constexpr double pi = std::numbers::pi;
}

double u0_symmetric(double x) { return std::cos(2.0 * pi * x) / (3.0 * pi); }

double u0_asymmetric(double x) {
  return 0.25 * (std::sin(2.0 * pi * x) / (2.0 * pi) + std::cos(2.0 * pi * x) / (3.0 * pi) +
                 std::sin(4.0 * pi * x) / (2.0 * pi) + std::cos(4.0 * pi * x) / (4.0 * pi) +
                 std::sin(6.0 * pi * x) / (8.0 * pi) + std::cos(6.0 * pi * x) / (5.0 * pi));
}

std::function<double(double)> velocity_profile(const std::string& spec) {
  if (spec == "sym") return u0_symmetric;
  if (spec == "asym") return u0_asymmetric;
  if (spec == "zero") return [](double) { return 0.0; };
  const Expression e = Expression::compile(spec);
  return [e](double x) { return e(x); };
}

Profile gaussian_profile(const PhaseGrid& grid, std::span<const double> rho, double variance,
                         double mean) {
  Profile p(grid);
  const double norm = 1.0 / std::sqrt(2.0 * pi * variance);
  for (int i = 0; i < grid.x.size(); ++i) {
    for (int j = 0; j < grid.xi.size(); ++j) {
      const double d = grid.xi.center(j) - mean;
      p.at(i, j) = rho[i] * norm * std::exp(-0.5 * d * d / variance);
    }
  }
  return p;
}

Profile gaussian_profile_normalized(const PhaseGrid& grid, std::span<const double> rho,
                                    double variance) {
  std::vector<double> column(grid.xi.size());
  for (int j = 0; j < grid.xi.size(); ++j) {
    const double c = grid.xi.center(j);
    column[j] = std::exp(-0.5 * c * c / variance);
  }
  const double mass = compensated_sum(column) * grid.xi.dxi();
  Profile p(grid);
  for (int i = 0; i < grid.x.size(); ++i) {
    for (int j = 0; j < grid.xi.size(); ++j) p.at(i, j) = rho[i] * column[j] / mass;
  }
  return p;
}

}  // namespace monokin
