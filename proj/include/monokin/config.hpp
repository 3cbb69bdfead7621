/// @file config.hpp
/// @brief Flat `key = value` run configuration and sweep plans.
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "monokin/grid.hpp"
#include "monokin/kernels.hpp"
#include "monokin/state.hpp"

namespace monokin {

/// Malformed input line.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& source, int line, const std::string& what);
  int line() const { return line_; }

 private:
  int line_;
};

/// Well-formed input with an invalid value. field() names the key.
class ValidationError : public std::invalid_argument {
 public:
  ValidationError(std::string field, const std::string& what);
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

enum class Scenario { Eas, Profile, Vlasov, Fp, Characteristics, Particles };

std::string to_string(Scenario s);

struct RunConfig {
  Scenario scenario = Scenario::Eas;
  int nx = 0;
  int nxi = 0;
  double xi_max = 0.0;
  double length = 1.0;
  double t_final = 1.0;
  std::optional<double> dt;
  double cfl = 0.45;
  ModulationParams params;
  KernelSpec kernel;
  std::string u0 = "sym";
  double sigma_g0 = 0.1;
  std::string out_dir = "out";
  std::uint64_t seed = 1;
  int n_particles = 1024;
  std::string dynamics = "cs";   ///< particles: cs | langevin
  int n_characteristics = 20;
  int sigma_dims = 1;
  bool perturbed_init = false;  ///< fp: start from a non-Maxwellian profile
  std::vector<double> snapshot_times;

  /// Raw key/value pairs as read (after defaults), for run metadata.
  std::map<std::string, std::string> raw;

  TorusGrid x_grid() const { return TorusGrid(nx, length); }
  PhaseGrid phase_grid() const { return PhaseGrid{x_grid(), XiGrid(nxi, xi_max)}; }
  /// Requested snapshot times, or four equally spaced times on [0, t_final].
  std::vector<double> sample_times() const;
};

enum class Coupling { None, Optimal };

struct SweepPlan {
  RunConfig base;
  std::string param;  ///< epsilon | sigma | delta
  std::vector<double> values;  ///< sorted decreasing
  Coupling coupling = Coupling::None;
};

/// Parses key/value text. `source` is used in error messages.
std::map<std::string, std::string> parse_key_values(const std::string& text,
                                                    const std::string& source);

RunConfig parse_config(const std::string& text, const std::string& source = "<string>");
RunConfig load_config(const std::string& path);
SweepPlan parse_plan(const std::string& text, const std::string& source = "<string>");
SweepPlan load_plan(const std::string& path);

/// Root of sigma log(1/sigma) = eps on (0, 1/e).
double sigma_from_eps(double eps);

/// Config for one sweep point with the coupling rules applied and validated.
RunConfig plan_member(const SweepPlan& plan, double value);

/// Throws ValidationError on the first invalid field.
void validate(const RunConfig& c);

}  // namespace monokin
