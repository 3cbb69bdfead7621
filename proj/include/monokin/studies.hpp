/// @file studies.hpp
/// @brief epsilon-family runs compared against the limit run on a common
///        grid and time step, and log-log rate fits over a sweep.
#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "monokin/config.hpp"
#include "monokin/fit.hpp"
#include "monokin/profile.hpp"
#include "monokin/state.hpp"

namespace monokin {

MacroState initial_macro(const RunConfig& c);
/// rho0 times the Gaussian of variance sigma_g0 in xi.
Profile initial_profile(const RunConfig& c);

/// Time step shared by the limit run and the epsilon run: config dt when
/// given, else half the smaller of the two stable steps at t = 0.
double common_dt(const RunConfig& c);

/// Limit run (EAS, plus the profile for vlasov) at the config's sample times.
LimitRun limit_for(const RunConfig& c, bool with_profile, bool record_history = false);

/// One row per sample time. Fields that do not apply stay NaN.
struct ComparisonRow {
  double eps = 0.0;
  double sigma = 0.0;
  double delta = 0.0;
  double t = 0.0;
  double w1_rho = NAN;
  double w1_mom_u = NAN;
  double w1_mom_m = NAN;
  double w1_g = NAN;
  double mod_energy = NAN;
  double w2sq_rho = NAN;
  double w1sq_mom = NAN;
  double w1sq_mom_m = NAN;
  double rel_entropy = NAN;
  double fisher = NAN;
  double boltzmann = NAN;
  double xi_m2 = NAN;
  double mass = NAN;
  double momentum = NAN;
  double energy = NAN;
};

/// Called with the epsilon-run profile at each sample time.
using SampleHook = std::function<void(double t, const Profile& g)>;

/// Runs the modulated Vlasov scheme at c.params.epsilon with dt and compares
/// with `limit` (which must carry profiles) at each sample time.
std::vector<ComparisonRow> vlasov_comparison(const RunConfig& c, const LimitRun& limit, double dt,
                                             const SampleHook& hook = {});

/// Runs the modulated Fokker-Planck scheme at c.params and compares with
/// the EAS part of `limit`.
std::vector<ComparisonRow> fp_comparison(const RunConfig& c, const LimitRun& limit, double dt,
                                         const SampleHook& hook = {});

/// Signed circle W1 between two momentum densities; NaN when the totals
/// differ by more than 1e-8.
double momentum_w1(std::span<const double> a, std::span<const double> b, const TorusGrid& grid);

double row_value(const ComparisonRow& r, const std::string& metric);

struct RateFit {
  std::string metric;
  double t = 0.0;
  std::optional<LineFit> raw;
  std::optional<LineFit> corrected;  ///< after subtracting the floor values
  bool monotone = false;             ///< strictly decreasing as eps decreases
};

/// Fits metric vs the abscissa column (eps, sigma or delta) at time t, one
/// row per sweep point. floor_rows, if non-empty, hold the same metric from
/// a run further along the sweep and are subtracted before the corrected fit.
RateFit fit_rate(const std::vector<ComparisonRow>& rows, const std::string& metric, double t,
                 const std::vector<ComparisonRow>& floor_rows = {},
                 const std::string& abscissa = "eps");

}  // namespace monokin
