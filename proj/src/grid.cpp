#include "monokin/grid.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "monokin/numerics.hpp"

namespace monokin {

TorusGrid::TorusGrid(int n_cells, double length) : n_(n_cells), length_(length) {
  if (n_cells < 4) {
    throw std::invalid_argument("TorusGrid: n_cells must be >= 4, got " +
                                std::to_string(n_cells));
  }
  if (!(length > 0.0) || !std::isfinite(length)) {
    throw std::invalid_argument("TorusGrid: length must be positive");
  }
}

std::vector<double> TorusGrid::centers() const {
  std::vector<double> c(n_);
  for (int i = 0; i < n_; ++i) c[i] = center(i);
  return c;
}

double TorusGrid::wrap_coordinate(double x) const {
  double r = std::fmod(x, length_);
  if (r < 0.0) r += length_;
  if (r >= length_) r = 0.0;
  return r;
}

double TorusGrid::periodic_distance(double a, double b) const {
  double d = std::fabs(wrap_coordinate(a) - wrap_coordinate(b));
  return std::min(d, length_ - d);
}

XiGrid::XiGrid(int n_cells, double xi_max) : n_(n_cells), xi_max_(xi_max) {
  if (n_cells < 2) {
    throw std::invalid_argument("XiGrid: n_cells must be >= 2, got " +
                                std::to_string(n_cells));
  }
  if (!(xi_max > 0.0) || !std::isfinite(xi_max)) {
    throw std::invalid_argument("XiGrid: xi_max must be positive");
  }
}

double quadrature_x(std::span<const double> field, const TorusGrid& grid) {
  return compensated_sum(field) * grid.dx();
}

Field shift_cells(std::span<const double> field, long shift) {
  const long n = static_cast<long>(field.size());
  Field out(field.size());
  for (long i = 0; i < n; ++i) {
    long src = ((i - shift) % n + n) % n;
    out[i] = field[src];
  }
  return out;
}

double interpolate_linear(std::span<const double> field, const TorusGrid& grid, double x) {
  const double s = grid.wrap_coordinate(x) / grid.dx() - 0.5;
  const double fl = std::floor(s);
  const double w = s - fl;
  const long i0 = static_cast<long>(fl);
  return (1.0 - w) * field[grid.wrap(i0)] + w * field[grid.wrap(i0 + 1)];
}

}  // namespace monokin
