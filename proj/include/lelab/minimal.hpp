#pragma once

#include <optional>
#include <vector>

#include "lelab/exponents.hpp"
#include "lelab/flow.hpp"
#include "lelab/geometry.hpp"
#include "lelab/heat.hpp"

namespace lelab {

struct TruncationControls {
  double dt_max = 1e-3;
  /// Common step; 0 picks the largest step <= dt_max satisfying the order
  /// restriction dt (p-1) n^{p-2} <= 1, with horizon/dt a multiple of 4.
  double dt = 0.0;
  /// Probe radii as fractions of the domain radius.
  std::vector<double> probe_fractions{0.25, 0.5, 0.75};
  /// Keep every slice (needed by duhamel_consistency); otherwise only
  /// t = 0 and the quarter marks of the horizon.
  bool record_all = false;
};

struct ProbeSeries {
  double radius = 0.0;
  std::vector<double> values; ///< aligned with trajectory.t
};

struct TruncationRun {
  int level = 0;
  double dt = 0.0;
  RadialField data; ///< min(u0, n)
  Trajectory trajectory;
  std::vector<ProbeSeries> probes;
};

/// Largest admissible common step for the given maximal level.
double truncation_dt(const FlowParams &params, int max_level, double horizon, double dt_max);

/// Implicit Euler diffusion with explicit reaction min(u^{p-1}, n^{p-1}) from
/// min(u0, n), on the uniform ladder of step dt up to horizon. Rejects
/// sign-changing data and steps violating dt (p-1) n^{p-2} <= 1.
TruncationRun run_truncated(const RadialField &u0, int level, const FlowParams &params, double horizon,
                            const TruncationControls &controls = {});

struct MonotonicityReport {
  /// max over aligned times, nodes and consecutive levels of u_n - u_{n'} (n < n')
  double max_violation = 0.0;
  /// Per probe: value at the horizon for each level.
  std::vector<std::vector<double>> probe_limits;
  /// Per probe: |gap| between consecutive levels at the horizon.
  std::vector<std::vector<double>> probe_gaps;
};

struct MinimalResult {
  std::vector<TruncationRun> runs;
  MonotonicityReport report;
};

/// All levels on one grid with the step chosen for the largest level.
MinimalResult minimal_solution(const RadialField &u0, const std::vector<int> &levels,
                               const FlowParams &params, double horizon,
                               TruncationControls controls = {});

/// Relative sup residual of u_n(t) - S_t u_{0n} - ∫_0^t S_{t-s} f_n(u_n(s)) ds at
/// t = horizon/2 and t = horizon (max of the two). The run must keep every
/// slice and stepper must be implicit Euler with the run's dt.
double duhamel_consistency(const TruncationRun &run, const LinearStepper &stepper,
                           const FlowParams &params);

struct ClassifyOptions {
  double flow_horizon = 10.0;
  FlowControls flow;
  TruncationControls truncation;
  /// Required growth per quadrupling of the level for divergence.
  double divergence_factor = 10.0;
};

struct Classification {
  Outcome outcome = Outcome::Inconclusive;
  std::vector<int> levels;
  std::vector<double> probe_radii;
  /// probe_values[j][k]: probe j at t_small for level k.
  std::vector<std::vector<double>> probe_values;
  /// growth[j][k] = probe_values[j][k+1] / probe_values[j][k]
  std::vector<std::vector<double>> growth;
  bool diverges = false;
  bool cauchy = false;     ///< probe values Cauchy in n at cauchy_time
  double cauchy_time = 0.0;
  bool data_bounded = false; ///< sup u0 below the smallest level
  double max_violation = 0.0;
  BlowupReport flow;
  /// sup_x |x|^α u0(x) over the grid nodes, the amplitude singular-data
  /// comparisons are stated in.
  double singular_amplitude = 0.0;
};

/// Classifies nonnegative data as GlobalBounded, FiniteTimeBlowup,
/// InstantaneousComplete or Inconclusive from truncated runs up to t_small
/// and one run_flow to options.flow_horizon:
///  - InstantaneousComplete: every probe grows by divergence_factor per 4× in n
///    at t_small and the data exceed the smallest level;
///  - FiniteTimeBlowup: run_flow blows up at T' < horizon and the probe
///    values are Cauchy in n at min(t_small, T'/2);
///  - GlobalBounded: no divergence, Cauchy at t_small, run_flow bounded.
Classification classify(const RadialField &u0, const FlowParams &params, const std::vector<int> &levels,
                        double t_small, const ClassifyOptions &options = {});

/// sup_r r^α A(1 - r^2) for the bubble on B_1, in closed form:
/// max_r r^α (1 - r^2) = (α/(α+2))^{α/2} · 2/(α+2).
double bubble_singular_amplitude(const FlowParams &params, double A);

struct MarginEntry {
  double c = 0.0;
  Outcome outcome = Outcome::Inconclusive;
};

struct MarginScan {
  std::vector<MarginEntry> entries;
  /// Largest c not classified InstantaneousComplete and smallest c that is,
  /// when both exist.
  std::optional<double> window_lo, window_hi;
  bool monotone = true; ///< InstantaneousComplete set is an upper interval of c_grid
  double c_star_residual = 0.0;
  double c_star_verbatim = 0.0;
  double bubble_constant = 0.0; ///< singular amplitude of the A = 12 bubble
};

/// classify(c |x|^{-α}) across c_grid (increasing) on the given grid.
MarginScan singular_margin_scan(const FlowParams &params, GridPtr grid, const std::vector<double> &c_grid,
                                 const std::vector<int> &levels, double t_small,
                                 const ClassifyOptions &options = {});

} // namespace lelab
