#include "monokin/characteristics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "monokin/eas.hpp"
#include "monokin/fit.hpp"
#include "monokin/numerics.hpp"
#include "monokin/parallel.hpp"

namespace monokin {

SnapshotCoefficients::SnapshotCoefficients(TorusGrid grid, std::vector<double> times,
                                           std::vector<Field> u, std::vector<Field> rho_phi)
    : grid_(grid), times_(std::move(times)), u_(std::move(u)), rho_phi_(std::move(rho_phi)) {
  if (times_.empty() || times_.size() != u_.size() || times_.size() != rho_phi_.size()) {
    throw std::invalid_argument("SnapshotCoefficients: inconsistent snapshot lists");
  }
  if (!std::is_sorted(times_.begin(), times_.end())) {
    throw std::invalid_argument("SnapshotCoefficients: times must be increasing");
  }
  for (const Field& f : u_) m_.push_back(periodic_spline_second_derivatives(f, grid_.dx()));
}

CoefficientSample SnapshotCoefficients::at_snapshot(std::size_t k, double x) const {
  const double h = grid_.dx();
  const int n = grid_.size();
  double s = (grid_.wrap_coordinate(x) - 0.5 * h) / h;
  if (s < 0.0) s += n;
  const double fl = std::floor(s);
  const double w = s - fl;
  const int a = grid_.wrap(static_cast<long>(fl));
  const int b = grid_.wrap(a + 1);
  const Field& y = u_[k];
  const Field& M = m_[k];
  const double v = 1.0 - w;
  CoefficientSample c;
  c.u = v * y[a] + w * y[b] + h * h / 6.0 * ((v * v * v - v) * M[a] + (w * w * w - w) * M[b]);
  c.u_x = (y[b] - y[a]) / h + h / 6.0 * (-(3.0 * v * v - 1.0) * M[a] + (3.0 * w * w - 1.0) * M[b]);
  c.u_xx = v * M[a] + w * M[b];
  const Field& r = rho_phi_[k];
  c.rho_phi = v * r[a] + w * r[b];
  c.rho_phi_x = (r[b] - r[a]) / h;
  return c;
}

CoefficientSample SnapshotCoefficients::at(double t, double x) const {
  const double tol = 1e-9 * std::max(1.0, std::fabs(times_.back()));
  if (t < times_.front() - tol || t > times_.back() + tol) {
    throw TimeRangeExceeded("coefficients requested at t = " + std::to_string(t) +
                            " outside [" + std::to_string(times_.front()) + ", " +
                            std::to_string(times_.back()) + "]");
  }
  if (times_.size() == 1) return at_snapshot(0, x);
  t = std::clamp(t, times_.front(), times_.back());
  std::size_t k = static_cast<std::size_t>(
      std::upper_bound(times_.begin(), times_.end(), t) - times_.begin());
  k = std::clamp<std::size_t>(k, 1, times_.size() - 1);
  const double t0 = times_[k - 1];
  const double t1 = times_[k];
  const double w = (t - t0) / (t1 - t0);
  if (w <= 0.0) return at_snapshot(k - 1, x);
  if (w >= 1.0) return at_snapshot(k, x);
  const CoefficientSample a = at_snapshot(k - 1, x);
  const CoefficientSample b = at_snapshot(k, x);
  const double v = 1.0 - w;
  return {v * a.u + w * b.u, v * a.u_x + w * b.u_x, v * a.u_xx + w * b.u_xx,
          v * a.rho_phi + w * b.rho_phi, v * a.rho_phi_x + w * b.rho_phi_x};
}

namespace {

// State: X, Sigma_1..n, I, then the (1+n)x(1+n) variational matrix row-major.
struct CharSystem {
  const CoefficientField& field;
  int n;
  const std::function<double(double)>& omega;

  int size() const { return 2 + n + (1 + n) * (1 + n); }

  void rhs(double t, const std::vector<double>& y, std::vector<double>& dy) const {
    const CoefficientSample c = field.at(t, y[0]);
    const double w = omega ? omega(t) : 0.0;
    dy[0] = c.u + w * y[1];
    dy[1] = -(c.u_x + c.rho_phi) * y[1];
    for (int k = 2; k <= n; ++k) dy[k] = -c.rho_phi * y[k];
    dy[n + 1] = c.rho_phi;
    // A = d(rhs)/d(X, Sigma)
    const int d = 1 + n;
    std::vector<double> A(d * d, 0.0);
    A[0] = c.u_x;
    A[1] = w;
    A[d] = -(c.u_xx + c.rho_phi_x) * y[1];
    A[d + 1] = -(c.u_x + c.rho_phi);
    for (int k = 2; k <= n; ++k) {
      A[k * d] = -c.rho_phi_x * y[k];
      A[k * d + k] = -c.rho_phi;
    }
    const double* J = y.data() + n + 2;
    double* dJ = dy.data() + n + 2;
    for (int r = 0; r < d; ++r) {
      for (int col = 0; col < d; ++col) {
        double s = 0.0;
        for (int q = 0; q < d; ++q) s += A[r * d + q] * J[q * d + col];
        dJ[r * d + col] = s;
      }
    }
  }
};

double determinant(std::vector<double> a, int d) {
  double det = 1.0;
  for (int c = 0; c < d; ++c) {
    int p = c;
    for (int r = c + 1; r < d; ++r) {
      if (std::fabs(a[r * d + c]) > std::fabs(a[p * d + c])) p = r;
    }
    if (a[p * d + c] == 0.0) return 0.0;
    if (p != c) {
      for (int k = 0; k < d; ++k) std::swap(a[p * d + k], a[c * d + k]);
      det = -det;
    }
    det *= a[c * d + c];
    for (int r = c + 1; r < d; ++r) {
      const double f = a[r * d + c] / a[c * d + c];
      for (int k = c; k < d; ++k) a[r * d + k] -= f * a[c * d + k];
    }
  }
  return det;
}

template <class Rhs>
void rk4_step(const Rhs& rhs, double t, double h, std::vector<double>& y,
              std::vector<std::vector<double>>& work) {
  const std::size_t m = y.size();
  auto& k1 = work[0];
  auto& k2 = work[1];
  auto& k3 = work[2];
  auto& k4 = work[3];
  auto& tmp = work[4];
  rhs(t, y, k1);
  for (std::size_t i = 0; i < m; ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
  rhs(t + 0.5 * h, tmp, k2);
  for (std::size_t i = 0; i < m; ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
  rhs(t + 0.5 * h, tmp, k3);
  for (std::size_t i = 0; i < m; ++i) tmp[i] = y[i] + h * k3[i];
  rhs(t + h, tmp, k4);
  for (std::size_t i = 0; i < m; ++i) y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
}

}  // namespace

CharTrajectory integrate_characteristics(const CoefficientField& field, double x0,
                                         const std::vector<double>& xi0, double t0, double t1,
                                         double dt, const CharOptions& options) {
  const int n = options.n_dims;
  if (static_cast<int>(xi0.size()) != n) {
    throw std::invalid_argument("integrate_characteristics: xi0 must have n_dims entries");
  }
  if (!(dt != 0.0)) throw std::invalid_argument("integrate_characteristics: dt must be nonzero");
  const CharSystem sys{field, n, options.omega};
  std::vector<double> y(sys.size(), 0.0);
  y[0] = x0;
  for (int k = 0; k < n; ++k) y[1 + k] = xi0[k];
  const int d = 1 + n;
  for (int k = 0; k < d; ++k) y[n + 2 + k * d + k] = 1.0;
  std::vector<std::vector<double>> work(5, std::vector<double>(y.size()));

  CharTrajectory tr;
  tr.n_dims = n;
  auto record = [&](double t) {
    tr.times.push_back(t);
    tr.X.push_back(y[0]);
    tr.Sigma.emplace_back(y.begin() + 1, y.begin() + 1 + n);
    tr.damping_integral.push_back(y[n + 1]);
    tr.jacobian_det.push_back(
        determinant(std::vector<double>(y.begin() + n + 2, y.end()), d));
  };
  record(t0);
  const double sign = t1 >= t0 ? 1.0 : -1.0;
  const StepPlan plan = plan_steps(0.0, std::fabs(t1 - t0), std::fabs(dt));
  auto rhs = [&sys](double t, const std::vector<double>& yy, std::vector<double>& dy) {
    sys.rhs(t, yy, dy);
  };
  double t = t0;
  for (int s = 0; s < plan.n; ++s) {
    rk4_step(rhs, t, sign * plan.h, y, work);
    t = (s + 1 == plan.n) ? t1 : t0 + sign * plan.h * (s + 1);
    record(t);
  }
  return tr;
}

double jacobian_identity_check(const CharTrajectory& tr) {
  double r = 0.0;
  for (std::size_t k = 0; k < tr.times.size(); ++k) {
    const double expected = std::exp(-tr.n_dims * tr.damping_integral[k]);
    r = std::max(r, std::fabs(tr.jacobian_det[k] - expected) / expected);
  }
  return r;
}

SqueezeFit squeeze_rate(const CharTrajectory& tr, double skip_fraction) {
  const double t0 = tr.times.front();
  const double T = tr.times.back();
  const double start = t0 + skip_fraction * (T - t0);
  std::vector<double> ts, ls;
  for (std::size_t k = 0; k < tr.times.size(); ++k) {
    double norm = 0.0;
    for (double s : tr.Sigma[k]) norm += s * s;
    norm = std::sqrt(norm);
    if (!(norm > 1e-300)) break;
    if (tr.times[k] < start) continue;
    ts.push_back(tr.times[k]);
    ls.push_back(std::log(norm));
  }
  if (ts.size() < 2) throw std::runtime_error("squeeze_rate: fit window holds fewer than two samples");
  const LineFit f = fit_line(ts, ls);
  return {f.slope, f.r_squared};
}

namespace {

// Backward trace of (X, Sigma, I) only.
struct Foot {
  double x, xi, integral;
};

Foot trace_back(const CoefficientField& field, double x, double xi, double t, double dt) {
  double y[3] = {x, xi, 0.0};
  auto f = [&field](double tt, const double* s, double* out) {
    const CoefficientSample c = field.at(tt, s[0]);
    out[0] = c.u;
    out[1] = -(c.u_x + c.rho_phi) * s[1];
    out[2] = c.rho_phi;
  };
  const StepPlan plan = plan_steps(0.0, t, dt);
  const double h = -plan.h;
  double tt = t;
  double k1[3], k2[3], k3[3], k4[3], tmp[3];
  for (int s = 0; s < plan.n; ++s) {
    f(tt, y, k1);
    for (int i = 0; i < 3; ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
    f(tt + 0.5 * h, tmp, k2);
    for (int i = 0; i < 3; ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
    f(tt + 0.5 * h, tmp, k3);
    for (int i = 0; i < 3; ++i) tmp[i] = y[i] + h * k3[i];
    f(tt + h, tmp, k4);
    for (int i = 0; i < 3; ++i) y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    tt = (s + 1 == plan.n) ? 0.0 : t + h * (s + 1);
  }
  // y[2] = int_t^0 rho_phi = -int_0^t rho_phi
  return {y[0], y[1], -y[2]};
}

}  // namespace

Pushforward pushforward_reconstruct(const PhaseFunction& g0, double g0_xi_max,
                                    const CoefficientField& field, const PhaseGrid& grid,
                                    double t, double dt) {
  Pushforward out{Profile(grid, t), 0};
  std::vector<int> exits(grid.x.size(), 0);
  parallel_for(grid.x.size(), [&](int i) {
    for (int j = 0; j < grid.xi.size(); ++j) {
      const double x = grid.x.center(i);
      const double xi = grid.xi.center(j);
      if (t == 0.0) {
        out.g.at(i, j) = g0(x, xi);
        continue;
      }
      const Foot f = trace_back(field, x, xi, t, dt);
      if (std::fabs(f.xi) > g0_xi_max) {
        ++exits[i];
        out.g.at(i, j) = 0.0;
        continue;
      }
      out.g.at(i, j) = g0(f.x, f.xi) * std::exp(f.integral);
    }
  });
  for (int e : exits) out.exits += e;
  return out;
}

PhaseFunction interpolate_profile(const Profile& g) {
  return [g](double x, double xi) {
    const PhaseGrid& pg = g.grid;
    if (std::fabs(xi) > pg.xi.xi_max()) return 0.0;
    const double hx = pg.x.dx();
    double sx = (pg.x.wrap_coordinate(x) - 0.5 * hx) / hx;
    if (sx < 0.0) sx += pg.x.size();
    const double fx = std::floor(sx);
    const double wx = sx - fx;
    const int i0 = pg.x.wrap(static_cast<long>(fx));
    const int i1 = pg.x.wrap(i0 + 1);
    const double sj = std::clamp((xi - pg.xi.center(0)) / pg.xi.dxi(), 0.0,
                                 static_cast<double>(pg.xi.size() - 1));
    const int j0 = std::min(static_cast<int>(sj), pg.xi.size() - 2);
    const double wj = sj - j0;
    const double a = (1.0 - wj) * g.at(i0, j0) + wj * g.at(i0, j0 + 1);
    const double b = (1.0 - wj) * g.at(i1, j0) + wj * g.at(i1, j0 + 1);
    return (1.0 - wx) * a + wx * b;
  };
}

}  // namespace monokin
