#pragma once

#include <optional>
#include <vector>

#include "lelab/exponents.hpp"
#include "lelab/geometry.hpp"
#include "lelab/heat.hpp"

namespace lelab {

enum class Outcome { GlobalBounded, FiniteTimeBlowup, InstantaneousComplete, Inconclusive };

const char *to_string(Outcome o);

/// Stepper controls for u_t - Δu = |u|^{p-2}u.
struct FlowControls {
  Scheme scheme = Scheme::ImplicitEuler;
  double dt_max = 1e-3;
  double dt_min = 1e-14;
  /// dt = min(dt_max, safety / sup|u|^{p-2})
  double safety = 0.1;
  /// Blow-up threshold on sup|u|.
  double u_max = 1e8;
  long max_steps = 20'000'000;
  /// Slices are stored exactly at these times (steps are shortened to land).
  std::vector<double> record_times;
  /// Additionally store every k-th step; 0 disables.
  int record_stride = 0;
  bool record_initial = true;
};

/// Per-step diagnostics. Index k holds the state at t[k]; dt_history[k] is
/// the step proposed at t[k], so t[k+1] = t[k] + dt_history[k] and the last
/// entry is the step that was refused or never taken.
struct Trajectory {
  SpaceTimeField spacetime;
  std::vector<double> t;
  std::vector<double> sup_norm;
  std::vector<double> l2_norm;
  std::vector<double> energy;
  std::vector<double> dt_history;
};

struct BlowupReport {
  Outcome outcome = Outcome::Inconclusive;
  std::optional<double> T_est;
  std::optional<double> rate_exponent;
  double final_sup = 0.0;
  double t_final = 0.0;
  long steps = 0;
};

struct FlowRun {
  Trajectory trajectory;
  BlowupReport report;
};

/// Semi-implicit flow: implicit diffusion, explicit reaction, adaptive dt.
///
/// Stops at the horizon (GlobalBounded, or Inconclusive when sup|u| ended in
/// [u_max/10, u_max]) or once sup|u| > u_max with a proposed dt below dt_min
/// (FiniteTimeBlowup; T_est from fit_blowup_rate, falling back to the last time).
FlowRun run_flow(const RadialField &u0, const FlowParams &params, double horizon,
                 const FlowControls &controls = {});

struct RateFit {
  std::optional<double> T_est;
  std::optional<double> rate_exponent;
  double prefactor = 0.0; ///< κ in sup ~ κ (T - t)^{-b}
  int samples = 0;
};

/// Least-squares fit of log sup|u| = log κ - b log(T - t) with T free, over
/// the samples with sup|u| > threshold (at least 10). Times are rebuilt from
/// dt_history relative to the first sample so that T - t stays resolved when
/// it drops below the spacing of doubles near t.
RateFit fit_blowup_rate(const Trajectory &traj, const FlowParams &params, double threshold);

struct BallCheck {
  double E0 = 0.0;
  double l2 = 0.0;
  double T_bound = 0.0;
  double T_num = 0.0;
  bool ok = false;
  /// min over the run of ‖u(t)‖₂ / lower-bound curve
  double l2_curve_ratio = 0.0;
  /// min over steps of Δ(‖u‖²/2)/Δt / (c_0 ‖u‖₂^p)
  double inequality_ratio = 0.0;
  BlowupReport report;
};

/// Runs negative-energy data to blow-up and checks it against the L² blow-up
/// bound. Rejects E(u0) >= 0.
BallCheck verify_ball(const RadialField &u0, const FlowParams &params,
                      const FlowControls &controls = {});

/// Runs u0 on its grid and w0 = rescale_field(u0, R, α) on the R-scaled grid,
/// then returns sup|w(R² t_check) - R^{-α}u(t_check)| / sup|R^{-α}u(t_check)|.
/// Both runs use the same controls. Throws if either run blows up first.
double scaling_test(const RadialField &u0, const FlowParams &params, double R, double t_check,
                    const FlowControls &controls = {});

} // namespace lelab
