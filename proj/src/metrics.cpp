#include "monokin/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "monokin/numerics.hpp"

namespace monokin {

double Atoms::mass() const { return compensated_sum(weights); }

SignedMeasure1D SignedMeasure1D::from_density(std::span<const double> density,
                                              const TorusGrid& grid) {
  SignedMeasure1D m{grid, std::vector<double>(density.begin(), density.end())};
  for (double& w : m.weights) w *= grid.dx();
  return m;
}

double SignedMeasure1D::mass() const { return compensated_sum(weights); }

Atoms SignedMeasure1D::atoms() const { return Atoms{grid.centers(), weights}; }

namespace {

void check_mass(double a, double b, double tol) {
  if (std::fabs(a - b) > tol) {
    throw MassMismatch("mass mismatch: " + std::to_string(a) + " vs " + std::to_string(b));
  }
}

struct Event {
  double pos;
  double dw;
};

// Sorted events of mu - nu with positions mapped through `map`.
template <class Map>
std::vector<Event> difference_events(const Atoms& mu, const Atoms& nu, Map map) {
  std::vector<Event> ev;
  ev.reserve(mu.positions.size() + nu.positions.size());
  for (std::size_t i = 0; i < mu.positions.size(); ++i) {
    if (mu.weights[i] != 0.0) ev.push_back({map(mu.positions[i]), mu.weights[i]});
  }
  for (std::size_t i = 0; i < nu.positions.size(); ++i) {
    if (nu.weights[i] != 0.0) ev.push_back({map(nu.positions[i]), -nu.weights[i]});
  }
  std::sort(ev.begin(), ev.end(), [](const Event& a, const Event& b) { return a.pos < b.pos; });
  return ev;
}

double weighted_median_cost(std::vector<std::pair<double, double>> segs) {
  // segs: (value, length). Returns min_c sum length * |value - c|.
  if (segs.empty()) return 0.0;
  std::sort(segs.begin(), segs.end());
  double total = 0.0;
  for (auto& s : segs) total += s.second;
  double acc = 0.0;
  double c = segs.back().first;
  for (auto& s : segs) {
    acc += s.second;
    if (acc >= 0.5 * total) {
      c = s.first;
      break;
    }
  }
  double cost = 0.0;
  for (auto& s : segs) cost += s.second * std::fabs(s.first - c);
  return cost;
}

}  // namespace

double w1_circle(const Atoms& mu, const Atoms& nu, double length, double mass_tol) {
  check_mass(mu.mass(), nu.mass(), mass_tol);
  auto wrap = [length](double x) {
    double r = std::fmod(x, length);
    return r < 0.0 ? r + length : r;
  };
  const std::vector<Event> ev = difference_events(mu, nu, wrap);
  if (ev.empty()) return 0.0;
  std::vector<std::pair<double, double>> segs;
  segs.reserve(ev.size() + 1);
  double cdf = 0.0;
  // segment before the first event (wraps around from the last one) has value 0
  segs.emplace_back(0.0, ev.front().pos + (length - ev.back().pos));
  for (std::size_t k = 0; k < ev.size(); ++k) {
    cdf += ev[k].dw;
    if (k + 1 < ev.size()) segs.emplace_back(cdf, ev[k + 1].pos - ev[k].pos);
  }
  return weighted_median_cost(std::move(segs));
}

double w1_line(const Atoms& mu, const Atoms& nu, double mass_tol) {
  check_mass(mu.mass(), nu.mass(), mass_tol);
  const std::vector<Event> ev = difference_events(mu, nu, [](double x) { return x; });
  double cdf = 0.0;
  double cost = 0.0;
  for (std::size_t k = 0; k + 1 < ev.size(); ++k) {
    cdf += ev[k].dw;
    cost += std::fabs(cdf) * (ev[k + 1].pos - ev[k].pos);
  }
  return cost;
}

namespace {

// Quantile function of a nonnegative atomic measure on [0, L): sorted
// positions and cumulative masses.
struct Quantile {
  std::vector<double> pos;
  std::vector<double> cum;  // cum[k] = mass of atoms 0..k
  double mass = 0.0;
};

Quantile make_quantile(const Atoms& a, double length) {
  std::vector<std::pair<double, double>> pw;
  for (std::size_t i = 0; i < a.positions.size(); ++i) {
    if (a.weights[i] < 0.0) throw std::invalid_argument("w2: negative weight");
    if (a.weights[i] == 0.0) continue;
    double r = std::fmod(a.positions[i], length);
    if (r < 0.0) r += length;
    pw.emplace_back(r, a.weights[i]);
  }
  std::sort(pw.begin(), pw.end());
  Quantile q;
  double c = 0.0;
  for (auto& [p, w] : pw) {
    c += w;
    q.pos.push_back(p);
    q.cum.push_back(c);
  }
  q.mass = c;
  return q;
}

// int_0^M |Q_mu(s) - Q_nu(s + theta)|^2 ds, with Q_nu extended by
// Q(s + M) = Q(s) + L.
double shifted_quantile_cost(const Quantile& mu, const Quantile& nu, double theta, double length) {
  const double M = mu.mass;
  const std::size_t nn = nu.pos.size();
  // Locate the nu segment containing level theta.
  long period = static_cast<long>(std::floor(theta / M));
  double local = theta - period * M;
  std::size_t j = static_cast<std::size_t>(
      std::upper_bound(nu.cum.begin(), nu.cum.end(), local) - nu.cum.begin());
  if (j >= nn) {
    j = 0;
    ++period;
  }
  std::size_t k = 0;
  double s = 0.0;
  double cost = 0.0;
  while (k < mu.pos.size() && s < M) {
    const double mu_end = mu.cum[k];
    const double nu_end = nu.cum[j] + period * M - theta;
    const double end = std::min(mu_end, nu_end);
    const double d = mu.pos[k] - (nu.pos[j] + period * length);
    if (end > s) cost += (end - s) * d * d;
    s = std::max(s, end);
    if (mu_end <= end) ++k;
    if (nu_end <= end) {
      ++j;
      if (j == nn) {
        j = 0;
        ++period;
      }
    }
  }
  return cost;
}

}  // namespace

double w2_circle(const Atoms& mu, const Atoms& nu, double length, double mass_tol) {
  check_mass(mu.mass(), nu.mass(), mass_tol);
  const Quantile qa = make_quantile(mu, length);
  Quantile qb = make_quantile(nu, length);
  if (qa.pos.empty() || qb.pos.empty()) return 0.0;
  // Rescale nu's levels to mu's mass so both quantiles live on [0, M].
  const double scale = qa.mass / qb.mass;
  for (double& c : qb.cum) c *= scale;
  qb.cum.back() = qa.mass;
  qb.mass = qa.mass;
  const double M = qa.mass;

  // The cost is piecewise linear and convex in theta with breakpoints where a
  // level breakpoint of mu meets a shifted breakpoint of nu.
  std::vector<double> cand;
  cand.reserve(3 * (qa.cum.size() + 1) * (qb.cum.size() + 1));
  std::vector<double> la{0.0}, lb{0.0};
  la.insert(la.end(), qa.cum.begin(), qa.cum.end() - 1);
  lb.insert(lb.end(), qb.cum.begin(), qb.cum.end() - 1);
  for (double b : lb) {
    for (double a : la) {
      for (int q = -1; q <= 1; ++q) {
        const double th = b - a + q * M;
        if (th >= -M && th <= M) cand.push_back(th);
      }
    }
  }
  std::sort(cand.begin(), cand.end());
  cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
  auto cost = [&](std::size_t i) { return shifted_quantile_cost(qa, qb, cand[i], length); };
  // Binary search for the first non-negative forward difference.
  std::size_t lo = 0;
  std::size_t hi = cand.size() - 1;
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    if (cost(mid + 1) - cost(mid) >= 0.0) hi = mid;
    else lo = mid + 1;
  }
  double best = cost(lo);
  for (std::size_t d = 1; d <= 2; ++d) {
    if (lo >= d) best = std::min(best, cost(lo - d));
    if (lo + d < cand.size()) best = std::min(best, cost(lo + d));
  }
  return std::sqrt(std::max(best, 0.0));
}

double w1_periodic(const SignedMeasure1D& mu, const SignedMeasure1D& nu, double mass_tol) {
  if (!(mu.grid == nu.grid)) throw GridMismatch("w1_periodic: grids differ");
  check_mass(mu.mass(), nu.mass(), mass_tol);
  const int n = mu.grid.size();
  std::vector<std::pair<double, double>> segs(n);
  double cdf = 0.0;
  for (int i = 0; i < n; ++i) {
    cdf += mu.weights[i] - nu.weights[i];
    segs[i] = {cdf, mu.grid.dx()};
  }
  return weighted_median_cost(std::move(segs));
}

double w2_periodic(const SignedMeasure1D& mu, const SignedMeasure1D& nu, double mass_tol) {
  if (!(mu.grid == nu.grid)) throw GridMismatch("w2_periodic: grids differ");
  return w2_circle(mu.atoms(), nu.atoms(), mu.grid.length(), mass_tol);
}

double w1_phase(const Profile& g1, const Profile& g2, int n_slices) {
  const double m1 = quadrature_phase(g1);
  const double m2 = quadrature_phase(g2);
  check_mass(m1, m2, 1e-8);
  if (!(g1.grid.x == g2.grid.x)) throw GridMismatch("w1_phase: spatial grids differ");
  const double L = g1.grid.x.length();
  double total = 0.0;
  for (int k = 0; k < n_slices; ++k) {
    const double theta = k * std::numbers::pi / n_slices;
    if (k == 0) {
      const Field r1 = g1.marginal();
      const Field r2 = g2.marginal();
      total += w1_periodic(SignedMeasure1D::from_density(r1, g1.grid.x),
                           SignedMeasure1D::from_density(r2, g2.grid.x));
      continue;
    }
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    auto project = [&](const Profile& p) {
      Atoms a;
      a.positions.reserve(p.g.size());
      a.weights.reserve(p.g.size());
      const double w = p.grid.cell_measure();
      for (int i = 0; i < p.grid.x.size(); ++i) {
        for (int j = 0; j < p.grid.xi.size(); ++j) {
          const double v = p.at(i, j);
          if (v == 0.0) continue;
          a.positions.push_back(c * p.grid.x.center(i) + s * p.grid.xi.center(j));
          a.weights.push_back(v * w);
        }
      }
      return a;
    };
    total += w1_line(project(g1), project(g2), 1e-8);
  }
  (void)L;
  return total / n_slices;
}

double standard_gaussian(double xi) {
  return std::exp(-0.5 * xi * xi) / std::sqrt(2.0 * std::numbers::pi);
}

double modulated_energy(const Profile& g, double omega, std::span<const double> m,
                        std::span<const double> u_ref) {
  std::vector<double> terms;
  terms.reserve(g.g.size());
  for (int i = 0; i < g.grid.x.size(); ++i) {
    for (int j = 0; j < g.grid.xi.size(); ++j) {
      const double d = m[i] + omega * g.grid.xi.center(j) - u_ref[i];
      terms.push_back(0.5 * d * d * g.at(i, j));
    }
  }
  return compensated_sum(terms) * g.grid.cell_measure();
}

double boltzmann_entropy(const Profile& g) {
  std::vector<double> terms;
  terms.reserve(g.g.size());
  for (double v : g.g) {
    if (v >= 1e-14) terms.push_back(v * std::log(v));
  }
  return compensated_sum(terms) * g.grid.cell_measure();
}

double relative_entropy_maxwellian(const Profile& g, std::span<const double> rho_ref) {
  std::vector<double> terms;
  terms.reserve(g.g.size());
  for (int i = 0; i < g.grid.x.size(); ++i) {
    for (int j = 0; j < g.grid.xi.size(); ++j) {
      const double v = g.at(i, j);
      if (v < 1e-14) continue;
      if (!(rho_ref[i] > 0.0)) {
        throw std::invalid_argument("relative_entropy_maxwellian: reference density vanishes at cell " +
                                    std::to_string(i));
      }
      const double mu = rho_ref[i] * standard_gaussian(g.grid.xi.center(j));
      terms.push_back(v * std::log(v / mu));
    }
  }
  return compensated_sum(terms) * g.grid.cell_measure();
}

double fisher_information(const Profile& g) {
  const int nxi = g.grid.xi.size();
  const double dxi = g.grid.xi.dxi();
  std::vector<double> terms;
  terms.reserve(g.g.size());
  for (int i = 0; i < g.grid.x.size(); ++i) {
    for (int j = 0; j < nxi; ++j) {
      const double v = g.at(i, j);
      if (v < 1e-14) continue;
      double dg;
      if (j == 0) dg = (g.at(i, 1) - v) / dxi;
      else if (j == nxi - 1) dg = (v - g.at(i, j - 1)) / dxi;
      else dg = (g.at(i, j + 1) - g.at(i, j - 1)) / (2.0 * dxi);
      const double f = dg + g.grid.xi.center(j) * v;
      terms.push_back(f * f / v);
    }
  }
  return compensated_sum(terms) * g.grid.cell_measure();
}

double second_xi_moment(const Profile& g) { return quadrature_x(g.moment(2), g.grid.x); }

Field centered_derivative(std::span<const double> u, const TorusGrid& grid) {
  const int n = grid.size();
  Field d(n);
  for (int i = 0; i < n; ++i) {
    d[i] = (u[grid.wrap(i + 1)] - u[grid.wrap(i - 1)]) / (2.0 * grid.dx());
  }
  return d;
}

Field e_quantity(const MacroState& state, const TabulatedKernel& phi) {
  Field e = centered_derivative(state.u, state.grid);
  const Field rp = convolve_periodic(state.rho, phi);
  for (std::size_t i = 0; i < e.size(); ++i) e[i] += rp[i];
  return e;
}

}  // namespace monokin
