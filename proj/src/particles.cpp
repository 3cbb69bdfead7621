#include "monokin/particles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "monokin/metrics.hpp"
#include "monokin/numerics.hpp"
#include "monokin/parallel.hpp"

namespace monokin {

double Swarm::mass() const { return compensated_sum(m); }

double Swarm::momentum() const {
  std::vector<double> p(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) p[i] = m[i] * v[i];
  return compensated_sum(p);
}

double Swarm::velocity_diameter() const {
  if (v.empty()) return 0.0;
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return *hi - *lo;
}

namespace {

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t counter_hash(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
  return splitmix64(splitmix64(splitmix64(seed) ^ stream) ^ counter);
}

double to_unit(std::uint64_t h) { return ((h >> 11) + 0.5) * 0x1.0p-53; }

double wrap(double x, double L) {
  double r = std::fmod(x, L);
  return r < 0.0 ? r + L : r;
}

}  // namespace

double counter_uniform(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
  return to_unit(counter_hash(seed, stream, counter));
}

double counter_normal(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
  const std::uint64_t h = counter_hash(seed, stream, counter);
  const double u1 = to_unit(h);
  const double u2 = to_unit(splitmix64(h));
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

Swarm sample_swarm(const MacroState& state, int n, std::uint64_t seed) {
  const TorusGrid& g = state.grid;
  std::vector<double> cdf(g.size() + 1, 0.0);
  for (int i = 0; i < g.size(); ++i) cdf[i + 1] = cdf[i] + std::max(state.rho[i], 0.0) * g.dx();
  const double M = cdf.back();
  Swarm s;
  s.length = g.length();
  s.t = state.t;
  s.m.assign(n, M / n);
  s.x.resize(n);
  s.v.resize(n);
  for (int p = 0; p < n; ++p) {
    const double target = counter_uniform(seed, static_cast<std::uint64_t>(p), 0) * M;
    int c = static_cast<int>(std::upper_bound(cdf.begin(), cdf.end(), target) - cdf.begin()) - 1;
    c = std::clamp(c, 0, g.size() - 1);
    const double w = cdf[c + 1] > cdf[c] ? (target - cdf[c]) / (cdf[c + 1] - cdf[c]) : 0.5;
    s.x[p] = wrap((c + w) * g.dx(), g.length());
    s.v[p] = interpolate_linear(state.u, g, s.x[p]);
  }
  return s;
}

namespace {

void cs_rhs(const Swarm& s, const KernelSpec& phi, const std::vector<double>& x,
            const std::vector<double>& v, std::vector<double>& dx, std::vector<double>& dv) {
  const int n = s.size();
  const double L = s.length;
  const bool constant = phi.kind == KernelKind::Constant;
  parallel_for(n, [&](int i) {
    double a = 0.0;
    for (int j = 0; j < n; ++j) {
      double w = s.m[j];
      if (!constant) {
        double d = std::fabs(x[i] - x[j]);
        d = std::fmod(d, L);
        w *= phi(std::min(d, L - d));
      }
      a += w * (v[j] - v[i]);
    }
    dx[i] = v[i];
    dv[i] = a;
  });
}

}  // namespace

void step_cs(Swarm& s, const KernelSpec& phi, double dt) {
  const std::size_t n = s.x.size();
  std::vector<double> k1x(n), k1v(n), k2x(n), k2v(n), k3x(n), k3v(n), k4x(n), k4v(n), tx(n), tv(n);
  cs_rhs(s, phi, s.x, s.v, k1x, k1v);
  for (std::size_t i = 0; i < n; ++i) {
    tx[i] = s.x[i] + 0.5 * dt * k1x[i];
    tv[i] = s.v[i] + 0.5 * dt * k1v[i];
  }
  cs_rhs(s, phi, tx, tv, k2x, k2v);
  for (std::size_t i = 0; i < n; ++i) {
    tx[i] = s.x[i] + 0.5 * dt * k2x[i];
    tv[i] = s.v[i] + 0.5 * dt * k2v[i];
  }
  cs_rhs(s, phi, tx, tv, k3x, k3v);
  for (std::size_t i = 0; i < n; ++i) {
    tx[i] = s.x[i] + dt * k3x[i];
    tv[i] = s.v[i] + dt * k3v[i];
  }
  cs_rhs(s, phi, tx, tv, k4x, k4v);
  for (std::size_t i = 0; i < n; ++i) {
    s.x[i] = wrap(s.x[i] + dt / 6.0 * (k1x[i] + 2.0 * k2x[i] + 2.0 * k3x[i] + k4x[i]), s.length);
    s.v[i] += dt / 6.0 * (k1v[i] + 2.0 * k2v[i] + 2.0 * k3v[i] + k4v[i]);
  }
  s.t += dt;
}

ForceModel zero_force() {
  return [](const Swarm& s, ForceSample& f) {
    f.urho_phi.assign(s.size(), 0.0);
    f.rho_phi.assign(s.size(), 0.0);
    f.u_delta.assign(s.size(), 0.0);
  };
}

ForceModel grid_force(const TorusGrid& grid, Field urho_phi, Field rho_phi, Field u_delta) {
  return [grid, urho_phi = std::move(urho_phi), rho_phi = std::move(rho_phi),
          u_delta = std::move(u_delta)](const Swarm& s, ForceSample& f) {
    const int n = s.size();
    f.urho_phi.resize(n);
    f.rho_phi.resize(n);
    f.u_delta.resize(n);
    for (int i = 0; i < n; ++i) {
      f.urho_phi[i] = interpolate_linear(urho_phi, grid, s.x[i]);
      f.rho_phi[i] = interpolate_linear(rho_phi, grid, s.x[i]);
      f.u_delta[i] = interpolate_linear(u_delta, grid, s.x[i]);
    }
  };
}

ForceModel empirical_force(const KernelSpec& phi, const Mollifier* psi) {
  return [phi, psi](const Swarm& s, ForceSample& f) {
    const int n = s.size();
    const double L = s.length;
    f.urho_phi.assign(n, 0.0);
    f.rho_phi.assign(n, 0.0);
    f.u_delta.assign(n, 0.0);
    parallel_for(n, [&](int i) {
      double a = 0.0, b = 0.0;
      for (int j = 0; j < n; ++j) {
        double d = std::fmod(std::fabs(s.x[i] - s.x[j]), L);
        const double w = s.m[j] * phi(std::min(d, L - d));
        a += w * s.v[j];
        b += w;
      }
      f.urho_phi[i] = a;
      f.rho_phi[i] = b;
    });
    if (!psi) return;
    const TorusGrid& g = psi->kernel.grid;
    Field ratio(g.size());
    for (int k = 0; k < g.size(); ++k) {
      double num = 0.0, den = 0.0;
      for (int j = 0; j < n; ++j) {
        const double w = s.m[j] * psi->kernel.at(g.center(k) - s.x[j]);
        num += w * s.v[j];
        den += w;
      }
      ratio[k] = num / den;
    }
    for (int i = 0; i < n; ++i) {
      double acc = 0.0;
      for (int k = 0; k < g.size(); ++k) acc += psi->kernel.at(s.x[i] - g.center(k)) * ratio[k];
      f.u_delta[i] = acc * g.dx();
    }
  };
}

void step_langevin(Swarm& s, const ForceModel& force, const LangevinParams& p,
                   std::uint64_t step_index) {
  ForceSample f;
  force(s, f);
  const bool relax = std::isfinite(p.epsilon);
  const double inv_eps = relax ? 1.0 / p.epsilon : 0.0;
  const double noise = relax ? std::sqrt(2.0 * p.sigma * inv_eps * p.dt) : 0.0;
  const int n = s.size();
  for (int i = 0; i < n; ++i) {
    const double v = s.v[i];
    double dv = f.urho_phi[i] - f.rho_phi[i] * v + inv_eps * (f.u_delta[i] - v);
    double nv = v + p.dt * dv;
    if (noise > 0.0) nv += noise * counter_normal(p.seed, static_cast<std::uint64_t>(i), step_index);
    s.x[i] = wrap(s.x[i] + p.dt * v, s.length);
    s.v[i] = nv;
  }
  s.t += p.dt;
}

EmpiricalVsGrid empirical_vs_grid(const Swarm& s, const MacroState& gs) {
  Atoms px{s.x, s.m};
  const SignedMeasure1D rho = SignedMeasure1D::from_density(gs.rho, gs.grid);
  Atoms gx = rho.atoms();
  Atoms pv{s.v, s.m};
  Atoms gv{gs.u, rho.weights};
  const double tol = 1e-8 * std::max(1.0, s.mass());
  return {w1_circle(px, gx, s.length, tol), w1_line(pv, gv, tol)};
}

}  // namespace monokin
