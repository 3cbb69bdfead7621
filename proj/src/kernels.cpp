#include "monokin/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "monokin/numerics.hpp"

namespace monokin {

double KernelSpec::operator()(double r) const {
  if (kind == KernelKind::Constant) return 1.0;
  return std::pow(1.0 + r * r, -0.5 * beta);
}

TabulatedKernel tabulate(const KernelSpec& spec, const TorusGrid& grid) {
  const int n = grid.size();
  TabulatedKernel k{grid, std::vector<double>(n)};
  for (int i = 0; i < n; ++i) k.values[i] = spec(std::min(i, n - i) * grid.dx());
  if (spec.normalized) {
    const double mass = compensated_sum(k.values) * grid.dx();
    for (double& v : k.values) v /= mass;
  }
  return k;
}

double TabulatedKernel::at(double displacement) const {
  const double s = grid.wrap_coordinate(displacement) / grid.dx();
  const double fl = std::floor(s);
  const double w = s - fl;
  const long k0 = static_cast<long>(fl);
  return (1.0 - w) * values[grid.wrap(k0)] + w * values[grid.wrap(k0 + 1)];
}

Field convolve_periodic(std::span<const double> field, const TabulatedKernel& kernel) {
  const int n = kernel.grid.size();
  if (static_cast<int>(field.size()) != n || static_cast<int>(kernel.values.size()) != n) {
    throw GridMismatch("convolve_periodic: field and kernel grids differ");
  }
  const double dx = kernel.grid.dx();
  const double* kv = kernel.values.data();
  Field out(n);
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    // offsets i - j in [i - n + 1, i]; split to avoid a modulo in the loop
    for (int j = 0; j <= i; ++j) s += kv[i - j] * field[j];
    for (int j = i + 1; j < n; ++j) s += kv[i - j + n] * field[j];
    out[i] = s * dx;
  }
  return out;
}

namespace {

// One side of the lattice sum over k > K, by Euler-Maclaurin with the
// large-argument expansion of <y>^-s. a is the base displacement.
double lattice_tail(double a, long K, double L, double delta, double s, double c) {
  const double Y = (a + K * L) / delta;
  const double Yi2 = 1.0 / (Y * Y);
  const double Ys = std::pow(Y, -s);
  // int_Y^inf (1 + y^2)^(-s/2) dy
  const double integral = Y * Ys *
                          (1.0 / (s - 1.0) - 0.5 * s * Yi2 / (s + 1.0) +
                           0.125 * s * (s + 2.0) * Yi2 * Yi2 / (s + 3.0));
  const double f = std::pow(1.0 + Y * Y, -0.5 * s);
  const double df = -s * Y * std::pow(1.0 + Y * Y, -0.5 * s - 1.0);
  const double d3f = -s * (s + 1.0) * (s + 2.0) * Ys * Yi2 / Y;
  const double r = L / delta;  // dy/dm
  const double em = (delta / L) * integral - 0.5 * f - df * r / 12.0 + d3f * r * r * r / 720.0;
  return c / delta * em;
}

}  // namespace

Mollifier build_mollifier(double delta, double alpha, const TorusGrid& grid) {
  if (!(delta > 0.0) || !std::isfinite(delta)) {
    throw std::invalid_argument("build_mollifier: delta must be positive");
  }
  if (!(alpha > 0.0)) throw std::invalid_argument("build_mollifier: alpha must be positive");
  const double s = 1.0 + alpha;
  const double L = grid.length();
  const double line_mass =
      std::sqrt(std::numbers::pi) * std::tgamma(0.5 * alpha) / std::tgamma(0.5 * s);
  const double c = 1.0 / line_mass;
  const long K = static_cast<long>(std::ceil(1e3 * delta / L)) + 2;

  const int n = grid.size();
  Mollifier m;
  m.delta = delta;
  m.alpha = alpha;
  m.c_n = c;
  m.kernel.grid = grid;
  m.kernel.values.assign(n, 0.0);
  std::vector<double> terms;
  terms.reserve(2 * K + 3);
  for (int k = 0; k < n; ++k) {
    const double d = std::min(k, n - k) * grid.dx();
    terms.clear();
    for (long j = -K; j <= K; ++j) {
      const double y = (d + j * L) / delta;
      terms.push_back(c / delta * std::pow(1.0 + y * y, -0.5 * s));
    }
    terms.push_back(lattice_tail(d, K, L, delta, s, c));
    terms.push_back(lattice_tail(-d, K, L, delta, s, c));
    m.kernel.values[k] = compensated_sum(terms);
  }
  for (int k = 0; k + 1 < n; ++k) {
    const double a = m.kernel.values[k];
    const double b = m.kernel.values[k + 1];
    if (std::min(a, b) / std::max(a, b) < 1e-3) {
      throw UnderResolved("build_mollifier: delta = " + std::to_string(delta) +
                          " is not resolved by " + std::to_string(n) + " cells");
    }
  }
  const double mass = compensated_sum(m.kernel.values) * grid.dx();
  for (double& v : m.kernel.values) v /= mass;
  return m;
}

double Mollifier::min_value() const {
  return *std::min_element(kernel.values.begin(), kernel.values.end());
}

Field favre_filter(std::span<const double> u, std::span<const double> rho, const Mollifier& psi) {
  const TorusGrid& grid = psi.kernel.grid;
  if (u.size() != rho.size() || static_cast<int>(u.size()) != grid.size()) {
    throw GridMismatch("favre_filter: field sizes differ from mollifier grid");
  }
  if (!(quadrature_x(rho, grid) > 0.0)) {
    throw std::invalid_argument("favre_filter: total mass must be positive");
  }
  Field urho(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) urho[i] = u[i] * rho[i];
  const Field num = convolve_periodic(urho, psi.kernel);
  const Field den = convolve_periodic(rho, psi.kernel);
  Field ratio(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) ratio[i] = num[i] / den[i];
  return convolve_periodic(ratio, psi.kernel);
}

double weighted_inner(std::span<const double> a, std::span<const double> b,
                      std::span<const double> rho, const TorusGrid& grid) {
  Field t(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) t[i] = rho[i] * a[i] * b[i];
  return quadrature_x(t, grid);
}

double discrete_lipschitz(std::span<const double> u, const TorusGrid& grid) {
  double lip = 0.0;
  const int n = grid.size();
  for (int i = 0; i < n; ++i) {
    lip = std::max(lip, std::fabs(u[grid.wrap(i + 1)] - u[i]) / grid.dx());
  }
  return lip;
}

FavreReport favre_properties_check(std::span<const double> u, std::span<const double> rho,
                                   const Mollifier& psi, const std::vector<Field>& test_fields) {
  const TorusGrid& grid = psi.kernel.grid;
  FavreReport r;
  const Field ud = favre_filter(u, rho, psi);
  for (const Field& v : test_fields) {
    const Field vd = favre_filter(v, rho, psi);
    r.symmetry_residual = std::max(
        r.symmetry_residual,
        std::fabs(weighted_inner(ud, v, rho, grid) - weighted_inner(u, vd, rho, grid)));
  }
  r.psd_residual = weighted_inner(ud, u, rho, grid) - weighted_inner(ud, ud, rho, grid);
  Field err(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) err[i] = rho[i] * std::fabs(ud[i] - u[i]);
  r.approximation_error = quadrature_x(err, grid);
  r.lipschitz = discrete_lipschitz(u, grid);
  r.approximation_constant =
      r.lipschitz > 0.0 ? r.approximation_error / (psi.delta * r.lipschitz) : 0.0;
  return r;
}

FavreDeltaStudy favre_delta_study(std::span<const double> u, std::span<const double> rho,
                                  const TorusGrid& grid, double alpha,
                                  const std::vector<double>& deltas) {
  FavreDeltaStudy study;
  study.deltas = deltas;
  double energy = 0.0;
  {
    Field e(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) e[i] = 0.5 * rho[i] * u[i] * u[i];
    energy = quadrature_x(e, grid);
  }
  for (double delta : deltas) {
    const Mollifier psi = build_mollifier(delta, alpha, grid);
    const FavreReport r = favre_properties_check(u, rho, psi, {});
    study.errors.push_back(r.approximation_error);
    study.constants.push_back(r.approximation_constant);
    const Field ud = favre_filter(u, rho, psi);
    double dmax = 0.0;
    const int n = grid.size();
    for (int i = 0; i < n; ++i) {
      dmax = std::max(dmax, std::fabs(ud[grid.wrap(i + 1)] - ud[grid.wrap(i - 1)]) /
                                (2.0 * grid.dx()));
    }
    const double scale = std::pow(delta, -1.0 - alpha) * std::sqrt(energy);
    study.derivative_constants.push_back(scale > 0.0 ? dmax / scale : 0.0);
  }
  for (std::size_t k = 0; k + 1 < study.errors.size(); ++k) {
    study.ratios.push_back(study.errors[k + 1] / study.errors[k]);
  }
  return study;
}

}  // namespace monokin
