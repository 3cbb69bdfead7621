/// @file state.hpp
/// @brief Field containers and snapshots shared by every solver.
#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "monokin/grid.hpp"

namespace monokin {

/// Density and velocity (plus optional modulated velocity) on the torus.
struct MacroState {
  TorusGrid grid;
  Field rho;
  Field u;
  std::optional<Field> m;
  double t = 0.0;

  double mass() const { return quadrature_x(rho, grid); }
  double momentum() const;
  /// Macroscopic energy 1/2 * int rho u^2.
  double energy() const;
};

/// Nonnegative distribution g(x, xi) on the phase grid.
struct Profile {
  PhaseGrid grid;
  std::vector<double> g;
  double t = 0.0;

  Profile() = default;
  explicit Profile(const PhaseGrid& pg, double time = 0.0)
      : grid(pg), g(pg.size(), 0.0), t(time) {}

  double& at(int i, int j) { return g[grid.index(i, j)]; }
  double at(int i, int j) const { return g[grid.index(i, j)]; }

  /// xi-marginal: int g dxi, a density on the torus.
  Field marginal() const;
  /// k-th xi-moment field int xi^k g dxi.
  Field moment(int k) const;
  double min_value() const;
};

/// Product midpoint rule sum(g) dx dxi.
double quadrature_phase(const Profile& profile);

struct ModulationParams {
  double epsilon = 0.1;
  double sigma = 0.0;
  double delta = 0.01;
  double alpha = 1.0;

  /// Throws std::invalid_argument naming the offending field.
  void validate(bool require_positive_sigma) const;
};

/// Named scalar time series sample. Every stored value is finite.
struct DiagnosticsRecord {
  double t = 0.0;
  std::map<std::string, double> values;

  void set(const std::string& name, double value);
  std::optional<double> get(const std::string& name) const;
};

}  // namespace monokin
