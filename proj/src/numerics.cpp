#include "monokin/numerics.hpp"

#include <cmath>
#include <stdexcept>

namespace monokin {

double compensated_sum(std::span<const double> values) {
  double sum = 0.0;
  double c = 0.0;
  for (double v : values) {
    const double t = sum + v;
    if (std::fabs(sum) >= std::fabs(v)) {
      c += (sum - t) + v;
    } else {
      c += (v - t) + sum;
    }
    sum = t;
  }
  return sum + c;
}

bool solve_tridiagonal(std::span<const double> lower, std::span<const double> diag,
                       std::span<const double> upper, std::span<double> rhs) {
  const std::size_t n = diag.size();
  if (n == 0) return true;
  std::vector<double> c(n);
  double b = diag[0];
  if (b == 0.0) return false;
  c[0] = upper[0] / b;
  rhs[0] /= b;
  for (std::size_t i = 1; i < n; ++i) {
    b = diag[i] - lower[i] * c[i - 1];
    if (b == 0.0) return false;
    c[i] = i + 1 < n ? upper[i] / b : 0.0;
    rhs[i] = (rhs[i] - lower[i] * rhs[i - 1]) / b;
  }
  for (std::size_t i = n - 1; i-- > 0;) rhs[i] -= c[i] * rhs[i + 1];
  return true;
}

std::vector<double> periodic_spline_second_derivatives(std::span<const double> y, double h) {
  // M_{i-1} + 4 M_i + M_{i+1} = 6 (y_{i+1} - 2 y_i + y_{i-1}) / h^2, cyclic.
  // Sherman-Morrison on the cyclic tridiagonal system.
  const std::size_t n = y.size();
  std::vector<double> rhs(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double ym = y[(i + n - 1) % n];
    const double yp = y[(i + 1) % n];
    rhs[i] = 6.0 * (yp - 2.0 * y[i] + ym) / (h * h);
  }
  const double alpha = 1.0;  // corner entries
  const double beta = 1.0;
  const double gamma = -4.0;
  std::vector<double> lower(n, 1.0), diag(n, 4.0), upper(n, 1.0);
  diag[0] = 4.0 - gamma;
  diag[n - 1] = 4.0 - alpha * beta / gamma;
  std::vector<double> u(n, 0.0);
  u[0] = gamma;
  u[n - 1] = alpha;
  std::vector<double> x = rhs;
  if (!solve_tridiagonal(lower, diag, upper, x) || !solve_tridiagonal(lower, diag, upper, u)) {
    throw std::runtime_error("periodic spline: singular system");
  }
  const double fact = (x[0] + beta * x[n - 1] / gamma) / (1.0 + u[0] + beta * u[n - 1] / gamma);
  for (std::size_t i = 0; i < n; ++i) x[i] -= fact * u[i];
  return x;
}

int conjugate_gradient(const std::function<void(std::span<const double>, std::span<double>)>& apply,
                       std::span<const double> weights, std::span<const double> rhs,
                       std::span<double> x, double rel_tol, int max_iter) {
  const std::size_t n = rhs.size();
  auto dot = [&](std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += weights[i] * a[i] * b[i];
    return s;
  };
  std::vector<double> r(n), p(n), ap(n);
  apply(x, ap);
  for (std::size_t i = 0; i < n; ++i) r[i] = rhs[i] - ap[i];
  p = r;
  double rr = dot(r, r);
  const double norm_b = std::sqrt(dot(rhs, rhs));
  const double target = rel_tol * (norm_b > 0.0 ? norm_b : 1.0);
  int it = 0;
  while (std::sqrt(rr) > target && it < max_iter) {
    apply(p, ap);
    const double pap = dot(p, ap);
    if (!(pap > 0.0)) throw std::runtime_error("conjugate_gradient: operator not positive");
    const double a = rr / pap;
    for (std::size_t i = 0; i < n; ++i) {
      x[i] += a * p[i];
      r[i] -= a * ap[i];
    }
    const double rr_new = dot(r, r);
    const double b = rr_new / rr;
    for (std::size_t i = 0; i < n; ++i) p[i] = r[i] + b * p[i];
    rr = rr_new;
    ++it;
  }
  if (std::sqrt(rr) > target) throw std::runtime_error("conjugate_gradient: no convergence");
  return it;
}

double bisect(const std::function<double(double)>& f, double lo, double hi, double tol,
              int max_iter) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0)) throw std::invalid_argument("bisect: no sign change");
  for (int k = 0; k < max_iter && hi - lo > tol; ++k) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace monokin
