/// @file profile.hpp
/// @brief Limiting profile equation d_t g + d_x(u g) = d_xi((xi d_x u + xi rho_phi) g)
///        and the coupled limit run (EAS + profile).
#pragma once

#include <optional>
#include <vector>

#include "monokin/eas.hpp"
#include "monokin/kernels.hpp"
#include "monokin/state.hpp"

namespace monokin {

class ProfileSolver {
 public:
  explicit ProfileSolver(Profile g0, double leak_tolerance = 1e-8);

  const Profile& profile() const { return g_; }
  /// Cumulative mass lost through the xi-boundaries.
  double leaked() const { return leaked_; }

  /// Split upwind step with coefficients frozen at the current level.
  /// Throws CflViolation or LeakError.
  void step(std::span<const double> u, std::span<const double> rho_phi, double dt);

 private:
  Profile g_;
  double mass0_;
  double leak_tol_;
  double leaked_ = 0.0;
};

/// L1 distance between the xi-marginal of g and rho.
double marginal_consistency(const Profile& g, std::span<const double> rho);

/// First xi-moment int xi g dxi (= rho m).
Field profile_momentum(const Profile& g);

struct LimitSample {
  MacroState macro;
  Field rho_phi;
  std::optional<Profile> g;
};

/// EAS state (and profile, if given) at each requested time plus, when
/// record_history is set, u and rho_phi after every step.
struct LimitRun {
  std::vector<LimitSample> samples;
  std::vector<double> history_t;
  std::vector<Field> history_u;
  std::vector<Field> history_rho_phi;
};

/// Marches EAS (and the profile) with steps of size <= dt that land on every
/// requested time. times must be sorted and start at or after state.t.
LimitRun run_limit(const MacroState& initial, const KernelSpec& kernel,
                   const std::optional<Profile>& g0, const std::vector<double>& times, double dt,
                   bool record_history = false);

}  // namespace monokin
