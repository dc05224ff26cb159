#pragma once

#include <optional>
#include <vector>

#include "lelab/exponents.hpp"
#include "lelab/flow.hpp"
#include "lelab/geometry.hpp"
#include "lelab/heat.hpp"

namespace lelab {

/// ∫_0^t S_{t-s} g(s) ds on the time ladder of g, which must be uniform with
/// spacing stepper.dt(). Trapezoid in the source, both samples propagated:
///   w_{k+1} = S(w_k + dt/2 (g_k + g_{k+1})),  w_0 = 0,
/// so w solves w_t - Δw = g with w = 0 on r = R. Keeping every source sample
/// behind one step of S matters for singular data: an unsmoothed dt/2 g_{k+1}
/// term makes the Picard map expansive at the origin node. Throws on a ladder
/// mismatch.
SpaceTimeField duhamel(const SpaceTimeField &g, const LinearStepper &stepper);

/// S_t f on the uniform ladder t_k = k dt, k = 0..steps.
SpaceTimeField semigroup_ladder(const LinearStepper &stepper, const RadialField &f, int steps);

struct PicardOptions {
  int steps = 1000; ///< time steps on [0, T]
  Scheme scheme = Scheme::ImplicitEuler;
  /// Consecutive increment increases that count as divergence.
  int divergence_run = 3;
};

struct PicardDiagnostics {
  int iterates = 0;
  /// Parabolic L^{p,μ} norms of v_{k+1} - v_k.
  std::vector<double> increment_norms;
  /// increment_norms[k+1] / increment_norms[k]
  std::vector<double> contraction_ratios;
  /// Space-time L^p norms of the increments.
  std::vector<double> increment_lp_norms;
  bool converged = false;
  bool diverged = false;
  double final_pmu_norm = 0.0;
};

struct PicardResult {
  SpaceTimeField solution;
  PicardDiagnostics diagnostics;
};

/// v_0 = S_t u0, v_{k+1} = S_t u0 + duhamel(|v_k|^{p-2} v_k). Stops when the
/// increment falls below tol relative to ‖v_{k+1}‖ (parabolic L^{p,μ}), after
/// max_iter iterations, or on divergence (divergence_run increases in a row or
/// non-finite iterates).
PicardResult picard_solve(const RadialField &u0, const FlowParams &params, double T, int max_iter = 50,
                          double tol = 1e-8, const PicardOptions &opts = {});

/// max over ladder times t in [T/2, T] of sup|v(t) - u(t)| / sup|v(t)|, with v
/// the Picard fixed point and u the run_flow trajectory. Throws when Picard
/// does not converge.
double compare_mild_vs_stepper(const RadialField &u0, const FlowParams &params, double T,
                               const PicardOptions &opts = {}, const FlowControls &controls = {});

struct SmallDataBoundEntry {
  double amp = 0.0;
  std::optional<double> ratio; ///< empty when Picard did not converge
};

/// ‖u‖_{L^{p,μ}} / ‖amp·profile‖_{L^{2,λ}} per amplitude (amp = 0 is skipped).
std::vector<SmallDataBoundEntry> small_data_bound_check(const RadialField &profile, const std::vector<double> &amps,
                                         const FlowParams &params, double T,
                                         const PicardOptions &opts = {});

struct EpsilonScan {
  double threshold = 0.0; ///< critical amplitude (midpoint of the final bracket)
  double morrey = 0.0;    ///< threshold · ‖profile‖_{L^{2,λ}}
  double lo = 0.0, hi = 0.0;
  /// (amplitude, converged) in evaluation order.
  std::vector<std::pair<double, bool>> trace;
};

/// Bisection (`iterations` halvings) on the amplitude c of c·profile for Picard
/// convergence on [0, T]. Requires convergence at c_lo and failure at c_hi.
EpsilonScan epsilon0_scan(const RadialField &profile, const FlowParams &params, double T, double c_lo,
                          double c_hi, int iterations = 12, const PicardOptions &opts = {});

} // namespace lelab
