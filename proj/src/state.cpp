#include "monokin/state.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "monokin/numerics.hpp"

namespace monokin {

double MacroState::momentum() const {
  Field mom(rho.size());
  for (std::size_t i = 0; i < rho.size(); ++i) mom[i] = rho[i] * u[i];
  return quadrature_x(mom, grid);
}

double MacroState::energy() const {
  Field e(rho.size());
  for (std::size_t i = 0; i < rho.size(); ++i) e[i] = 0.5 * rho[i] * u[i] * u[i];
  return quadrature_x(e, grid);
}

Field Profile::marginal() const { return moment(0); }

Field Profile::moment(int k) const {
  const int nx = grid.x.size();
  const int nxi = grid.xi.size();
  const double dxi = grid.xi.dxi();
  Field out(nx, 0.0);
  std::vector<double> weight(nxi), terms(nxi);
  for (int j = 0; j < nxi; ++j) weight[j] = std::pow(grid.xi.center(j), k);
  for (int i = 0; i < nx; ++i) {
    for (int j = 0; j < nxi; ++j) terms[j] = at(i, j) * weight[j];
    out[i] = compensated_sum(terms) * dxi;
  }
  return out;
}

double Profile::min_value() const { return *std::min_element(g.begin(), g.end()); }

double quadrature_phase(const Profile& profile) {
  return compensated_sum(profile.g) * profile.grid.cell_measure();
}

void ModulationParams::validate(bool require_positive_sigma) const {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw std::invalid_argument("epsilon must be positive");
  }
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
    throw std::invalid_argument("sigma must be nonnegative");
  }
  if (require_positive_sigma && !(sigma > 0.0)) {
    throw std::invalid_argument("sigma must be positive for the Fokker-Planck scheme");
  }
  if (!(delta > 0.0) || !std::isfinite(delta)) {
    throw std::invalid_argument("delta must be positive");
  }
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw std::invalid_argument("alpha must lie in (0, 1]");
  }
}

void DiagnosticsRecord::set(const std::string& name, double value) {
  if (!std::isfinite(value)) {
    throw std::runtime_error("diagnostic '" + name + "' is not finite");
  }
  values[name] = value;
}

std::optional<double> DiagnosticsRecord::get(const std::string& name) const {
  auto it = values.find(name);
  if (it == values.end()) return std::nullopt;
  return it->second;
}

}  // namespace monokin
