/// @file grid.hpp
/// @brief Periodic spatial grid, truncated velocity grid and their product.
///
/// All fields are cell-centred. Spatial indexing wraps modulo the number of
/// cells; the velocity grid is symmetric about zero so that cell centres come
/// in +/- pairs.
#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace monokin {

using Field = std::vector<double>;

class TorusGrid {
 public:
  TorusGrid() = default;
  explicit TorusGrid(int n_cells, double length = 1.0);

  int size() const { return n_; }
  double length() const { return length_; }
  double dx() const { return length_ / n_; }
  double center(int i) const { return (i + 0.5) * dx(); }
  std::vector<double> centers() const;

  /// Periodic index, valid for any (possibly negative) integer.
  int wrap(long i) const {
    long r = i % n_;
    return static_cast<int>(r < 0 ? r + n_ : r);
  }

  /// Geodesic distance on the circle of circumference length().
  double periodic_distance(double a, double b) const;
  /// Maps a coordinate into [0, length).
  double wrap_coordinate(double x) const;

  bool operator==(const TorusGrid& o) const {
    return n_ == o.n_ && length_ == o.length_;
  }

 private:
  int n_ = 4;
  double length_ = 1.0;
};

class XiGrid {
 public:
  XiGrid() = default;
  XiGrid(int n_cells, double xi_max);

  int size() const { return n_; }
  double xi_max() const { return xi_max_; }
  double dxi() const { return 2.0 * xi_max_ / n_; }
  double center(int j) const { return -xi_max_ + (j + 0.5) * dxi(); }
  /// Coordinate of the lower face of cell j (face n is the upper boundary).
  double face(int j) const { return -xi_max_ + j * dxi(); }
  /// Index of the mirror cell, centre(j) == -centre(mirror(j)).
  int mirror(int j) const { return n_ - 1 - j; }

  bool operator==(const XiGrid& o) const {
    return n_ == o.n_ && xi_max_ == o.xi_max_;
  }

 private:
  int n_ = 2;
  double xi_max_ = 1.0;
};

/// Row-major (x-major) product grid: index(i, j) = i * nxi + j.
struct PhaseGrid {
  TorusGrid x;
  XiGrid xi;

  std::size_t size() const {
    return static_cast<std::size_t>(x.size()) * static_cast<std::size_t>(xi.size());
  }
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(i) * xi.size() + j;
  }
  double cell_measure() const { return x.dx() * xi.dxi(); }

  bool operator==(const PhaseGrid& o) const { return x == o.x && xi == o.xi; }
};

/// Midpoint rule: sum(field) * dx.
double quadrature_x(std::span<const double> field, const TorusGrid& grid);

/// Field sampled at cell centres.
template <class F>
Field sample(const TorusGrid& grid, F&& f) {
  Field out(grid.size());
  for (int i = 0; i < grid.size(); ++i) out[i] = f(grid.center(i));
  return out;
}

/// Periodic shift: out[i] = field[i - shift].
Field shift_cells(std::span<const double> field, long shift);

/// Periodic linear interpolation of a cell-centred field at coordinate x.
double interpolate_linear(std::span<const double> field, const TorusGrid& grid, double x);

}  // namespace monokin
