#include "monokin/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace monokin {

Field face_average(std::span<const double> u) {
  const std::size_t n = u.size();
  Field f(n);
  for (std::size_t i = 0; i < n; ++i) f[i] = 0.5 * (u[i] + u[(i + 1) % n]);
  return f;
}

double courant_periodic(std::span<const double> a, double dt, double dx) {
  const std::size_t n = a.size();
  double c = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double out = std::max(a[i], 0.0) - std::min(a[(i + n - 1) % n], 0.0);
    c = std::max(c, out);
  }
  return c * dt / dx;
}

namespace {

void check_courant(double c, const char* where) {
  if (!(c <= kCourantLimit)) {
    throw CflViolation(std::string(where) + ": Courant number " + std::to_string(c) +
                       " exceeds " + std::to_string(kCourantLimit));
  }
}

}  // namespace

void advect_periodic(std::span<double> q, std::span<const double> a, double dt, double dx) {
  check_courant(courant_periodic(a, dt, dx), "advect_periodic");
  const std::size_t n = q.size();
  std::vector<double> flux(n);
  for (std::size_t i = 0; i < n; ++i) {
    flux[i] = a[i] >= 0.0 ? a[i] * q[i] : a[i] * q[(i + 1) % n];
  }
  const double r = dt / dx;
  for (std::size_t i = 0; i < n; ++i) q[i] -= r * (flux[i] - flux[(i + n - 1) % n]);
}

void advect_x(Profile& g, std::span<const double> base, double xi_coeff, double dt) {
  const int nx = g.grid.x.size();
  const int nxi = g.grid.xi.size();
  const double dx = g.grid.x.dx();
  double courant = 0.0;
  for (int j = 0; j < nxi; ++j) {
    const double s = xi_coeff * g.grid.xi.center(j);
    for (int i = 0; i < nx; ++i) {
      const double right = base[i] + s;
      const double left = base[(i + nx - 1) % nx] + s;
      courant = std::max(courant, std::max(right, 0.0) - std::min(left, 0.0));
    }
  }
  check_courant(courant * dt / dx, "x-advection");
  // flux[i * nxi + j] lives on face i + 1/2 of row j
  std::vector<double> flux(g.g.size());
  for (int i = 0; i < nx; ++i) {
    const int ip = (i + 1) % nx;
    for (int j = 0; j < nxi; ++j) {
      const double a = base[i] + xi_coeff * g.grid.xi.center(j);
      flux[g.grid.index(i, j)] = a >= 0.0 ? a * g.at(i, j) : a * g.at(ip, j);
    }
  }
  const double r = dt / dx;
  for (int i = 0; i < nx; ++i) {
    const int im = (i + nx - 1) % nx;
    for (int j = 0; j < nxi; ++j) {
      g.at(i, j) -= r * (flux[g.grid.index(i, j)] - flux[g.grid.index(im, j)]);
    }
  }
}

double drift_xi(Profile& g, std::span<const double> k, double dt) {
  const int nx = g.grid.x.size();
  const int nxi = g.grid.xi.size();
  const double dxi = g.grid.xi.dxi();
  const double r = dt / dxi;
  std::vector<double> flux(nxi + 1);
  double lost = 0.0;
  for (int i = 0; i < nx; ++i) {
    double courant = 0.0;
    for (int f = 0; f <= nxi; ++f) {
      const double b = -g.grid.xi.face(f) * k[i];
      double F;
      if (f == 0) F = b < 0.0 ? b * g.at(i, 0) : 0.0;
      else if (f == nxi) F = b > 0.0 ? b * g.at(i, nxi - 1) : 0.0;
      else F = b >= 0.0 ? b * g.at(i, f - 1) : b * g.at(i, f);
      flux[f] = F;
    }
    for (int j = 0; j < nxi; ++j) {
      const double out = std::max(-g.grid.xi.face(j + 1) * k[i], 0.0) -
                         std::min(-g.grid.xi.face(j) * k[i], 0.0);
      courant = std::max(courant, out);
    }
    check_courant(courant * r, "xi-drift");
    for (int j = 0; j < nxi; ++j) g.at(i, j) -= r * (flux[j + 1] - flux[j]);
    lost += (flux[nxi] - flux[0]) * dt;
  }
  return lost * g.grid.x.dx();
}

Field upwind_advection(std::span<const double> u, double dx) {
  const std::size_t n = u.size();
  Field a(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double ui = u[i];
    a[i] = ui >= 0.0 ? ui * (ui - u[(i + n - 1) % n]) / dx : ui * (u[(i + 1) % n] - ui) / dx;
  }
  return a;
}

double profile_stable_dt(const PhaseGrid& grid, std::span<const double> base, double xi_coeff,
                         std::span<const double> k, double cfl) {
  double sx = 0.0;
  const int nx = grid.x.size();
  const double xm = grid.xi.xi_max();
  for (int i = 0; i < nx; ++i) {
    const double left = base[(i + nx - 1) % nx];
    for (double s : {-std::fabs(xi_coeff) * xm, std::fabs(xi_coeff) * xm}) {
      sx = std::max(sx, std::max(base[i] + s, 0.0) - std::min(left + s, 0.0));
    }
  }
  double sxi = 0.0;
  for (double ki : k) sxi = std::max(sxi, std::fabs(ki) * xm);
  const double inf = std::numeric_limits<double>::infinity();
  const double dtx = sx > 0.0 ? cfl * grid.x.dx() / sx : inf;
  const double dtxi = sxi > 0.0 ? cfl * grid.xi.dxi() / sxi : inf;
  return std::min(dtx, dtxi);
}

}  // namespace monokin
