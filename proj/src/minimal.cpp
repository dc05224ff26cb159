#include "lelab/minimal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "lelab/mild.hpp"
#include "lelab/norms.hpp"

namespace lelab {

namespace {

RadialField truncated_source(const RadialField &u, double p, double cap) {
  RadialField f(u.grid_ptr());
  for (std::size_t i = 0; i < u.size(); ++i)
    f[i] = std::min(std::pow(u[i], p - 1.0), cap);
  return f;
}

double growth_required(int n_lo, int n_hi, double factor) {
  return std::pow(factor, std::log(static_cast<double>(n_hi) / n_lo) / std::log(4.0));
}

bool cauchy_sequence(const std::vector<double> &v) {
  for (std::size_t k = 0; k + 2 < v.size(); ++k) {
    const double g0 = std::abs(v[k + 1] - v[k]);
    const double g1 = std::abs(v[k + 2] - v[k + 1]);
    const bool tiny = g1 <= 1e-12 * std::max(std::abs(v[k + 2]), 1e-300);
    if (!(g1 <= 0.5 * g0) && !tiny)
      return false;
  }
  return true;
}

} // namespace

double truncation_dt(const FlowParams &params, int max_level, double horizon, double dt_max) {
  if (!(horizon > 0.0) || !(dt_max > 0.0))
    throw InvalidArgument("truncation_dt: horizon and dt_max must be positive");
  const double limit = 1.0 / ((params.p - 1.0) * std::pow(static_cast<double>(max_level), params.p - 2.0));
  const double cap = std::min(dt_max, limit);
  const double quarters = std::ceil(horizon / (4.0 * cap) * (1.0 - 1e-12));
  return horizon / (4.0 * std::max(quarters, 1.0));
}

TruncationRun run_truncated(const RadialField &u0, int level, const FlowParams &params, double horizon,
                            const TruncationControls &c) {
  if (level < 1)
    throw InvalidArgument("run_truncated: level must be >= 1");
  if (!(horizon > 0.0))
    throw InvalidArgument("run_truncated: horizon must be positive");
  for (double v : u0.values())
    if (v < 0.0 || !std::isfinite(v))
      throw InvalidArgument("run_truncated: data must be finite and nonnegative");
  const double p = params.p;
  const double dt = c.dt > 0.0 ? c.dt : truncation_dt(params, level, horizon, c.dt_max);
  if (dt * (p - 1.0) * std::pow(static_cast<double>(level), p - 2.0) > 1.0 + 1e-12)
    throw InvalidArgument("run_truncated: dt violates dt (p-1) n^{p-2} <= 1");
  const long steps = std::lround(horizon / dt);
  if (std::abs(steps * dt - horizon) > 1e-9 * horizon)
    throw InvalidArgument("run_truncated: horizon must be a multiple of dt");

  TruncationRun run;
  run.level = level;
  run.dt = dt;
  run.data = RadialField(u0.grid_ptr());
  for (std::size_t i = 0; i < u0.size(); ++i)
    run.data[i] = std::min(u0[i], static_cast<double>(level));
  const double cap = std::pow(static_cast<double>(level), p - 1.0);
  const double R = u0.grid().radius();
  for (double f : c.probe_fractions)
    run.probes.push_back({f * R, {}});

  Trajectory &tr = run.trajectory;
  tr.spacetime = SpaceTimeField(u0.grid_ptr());
  const LinearStepper stepper(u0.grid_ptr(), Scheme::ImplicitEuler, dt);
  RadialField u = run.data;
  auto record = [&](long k) {
    const double t = k * dt;
    tr.t.push_back(t);
    tr.sup_norm.push_back(u.sup_abs());
    tr.l2_norm.push_back(lq_norm(u, 2.0));
    tr.energy.push_back(energy(u, p));
    tr.dt_history.push_back(dt);
    for (auto &pr : run.probes)
      pr.values.push_back(u.at_radius(pr.radius));
    const bool quarter = steps % 4 == 0 && k % (steps / 4) == 0;
    if (c.record_all || k == 0 || k == steps || quarter)
      tr.spacetime.push_back(t, u);
  };
  record(0);
  for (long k = 1; k <= steps; ++k) {
    u = stepper.step_with_source(u, truncated_source(u, p, cap), dt);
    record(k);
  }
  return run;
}

MinimalResult minimal_solution(const RadialField &u0, const std::vector<int> &levels,
                               const FlowParams &params, double horizon, TruncationControls c) {
  if (levels.empty())
    throw InvalidArgument("minimal_solution: no levels");
  for (std::size_t k = 1; k < levels.size(); ++k)
    if (levels[k] <= levels[k - 1])
      throw InvalidArgument("minimal_solution: levels must be increasing");
  if (!(c.dt > 0.0))
    c.dt = truncation_dt(params, levels.back(), horizon, c.dt_max);

  MinimalResult res;
  for (int n : levels)
    res.runs.push_back(run_truncated(u0, n, params, horizon, c));

  MonotonicityReport &rep = res.report;
  rep.max_violation = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k + 1 < res.runs.size(); ++k) {
    const SpaceTimeField &a = res.runs[k].trajectory.spacetime;
    const SpaceTimeField &b = res.runs[k + 1].trajectory.spacetime;
    for (std::size_t s = 0; s < a.size(); ++s)
      for (std::size_t i = 0; i < a.slice(s).size(); ++i)
        rep.max_violation = std::max(rep.max_violation, a.slice(s)[i] - b.slice(s)[i]);
  }
  if (res.runs.size() < 2)
    rep.max_violation = 0.0;
  rep.max_violation = std::max(rep.max_violation, 0.0);

  const std::size_t probes = c.probe_fractions.size();
  rep.probe_limits.assign(probes, {});
  rep.probe_gaps.assign(probes, {});
  for (std::size_t j = 0; j < probes; ++j) {
    for (const auto &run : res.runs)
      rep.probe_limits[j].push_back(run.probes[j].values.back());
    for (std::size_t k = 0; k + 1 < res.runs.size(); ++k)
      rep.probe_gaps[j].push_back(std::abs(rep.probe_limits[j][k + 1] - rep.probe_limits[j][k]));
  }
  return res;
}

double duhamel_consistency(const TruncationRun &run, const LinearStepper &stepper, const FlowParams &params) {
  if (stepper.scheme() != Scheme::ImplicitEuler || std::abs(stepper.dt() - run.dt) > 1e-12 * run.dt)
    throw InvalidArgument("duhamel_consistency: stepper must be implicit Euler with the run's dt");
  const SpaceTimeField &u = run.trajectory.spacetime;
  if (u.size() != run.trajectory.t.size())
    throw InvalidArgument("duhamel_consistency: run must keep every slice (record_all)");
  const double cap = std::pow(static_cast<double>(run.level), params.p - 1.0);

  SpaceTimeField source(u.grid_ptr());
  for (std::size_t k = 0; k < u.size(); ++k)
    source.push_back(u.time(k), truncated_source(u.slice(k), params.p, cap));
  const SpaceTimeField w = duhamel(source, stepper);
  const SpaceTimeField s = semigroup_ladder(stepper, run.data, static_cast<int>(u.size() - 1));

  const std::size_t last = u.size() - 1;
  double worst = 0.0;
  for (std::size_t k : {last / 2, last}) {
    const RadialField residual = u.slice(k) - s.slice(k) - w.slice(k);
    const double scale = u.slice(k).sup_abs();
    worst = std::max(worst, scale > 0.0 ? residual.sup_abs() / scale : residual.sup_abs());
  }
  return worst;
}

double bubble_singular_amplitude(const FlowParams &params, double A) {
  const double a = params.alpha;
  return A * std::pow(a / (a + 2.0), 0.5 * a) * 2.0 / (a + 2.0);
}

Classification classify(const RadialField &u0, const FlowParams &params, const std::vector<int> &levels,
                        double t_small, const ClassifyOptions &o) {
  if (levels.size() < 3)
    throw InvalidArgument("classify: need at least three levels");
  if (!(t_small > 0.0))
    throw InvalidArgument("classify: t_small must be positive");

  Classification cl;
  cl.levels = levels;
  cl.data_bounded = u0.sup_abs() < levels.front();
  for (std::size_t i = 1; i < u0.size(); ++i)
    cl.singular_amplitude =
        std::max(cl.singular_amplitude, std::pow(u0.grid().r(i), params.alpha) * std::abs(u0[i]));

  const MinimalResult mr = minimal_solution(u0, levels, params, t_small, o.truncation);
  cl.max_violation = mr.report.max_violation;
  const FlowRun flow = run_flow(u0, params, o.flow_horizon, o.flow);
  cl.flow = flow.report;

  const std::size_t probes = mr.runs.front().probes.size();
  cl.diverges = probes > 0;
  cl.probe_values.assign(probes, {});
  cl.growth.assign(probes, {});
  for (std::size_t j = 0; j < probes; ++j) {
    cl.probe_radii.push_back(mr.runs.front().probes[j].radius);
    cl.probe_values[j] = mr.report.probe_limits[j];
    for (std::size_t k = 0; k + 1 < levels.size(); ++k) {
      const double lo = cl.probe_values[j][k], hi = cl.probe_values[j][k + 1];
      const double g = lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
      cl.growth[j].push_back(g);
      if (!(g >= growth_required(levels[k], levels[k + 1], o.divergence_factor)))
        cl.diverges = false;
    }
  }

  const bool blew_up = cl.flow.outcome == Outcome::FiniteTimeBlowup;
  const double T_prime = cl.flow.T_est.value_or(cl.flow.t_final);
  cl.cauchy_time = blew_up ? std::min(t_small, 0.5 * T_prime) : t_small;
  const auto &times = mr.runs.front().trajectory.t;
  const auto at = std::upper_bound(times.begin(), times.end(), cl.cauchy_time * (1.0 + 1e-12));
  const std::size_t idx = at == times.begin() ? 0 : static_cast<std::size_t>(at - times.begin()) - 1;
  cl.cauchy_time = times[idx];
  cl.cauchy = true;
  for (std::size_t j = 0; j < probes; ++j) {
    std::vector<double> seq;
    for (const auto &run : mr.runs)
      seq.push_back(run.probes[j].values[idx]);
    if (!cauchy_sequence(seq))
      cl.cauchy = false;
  }

  if (cl.diverges && !cl.data_bounded)
    cl.outcome = Outcome::InstantaneousComplete;
  else if (blew_up && T_prime < o.flow_horizon && cl.cauchy)
    cl.outcome = Outcome::FiniteTimeBlowup;
  else if (!cl.diverges && cl.cauchy && cl.flow.outcome == Outcome::GlobalBounded)
    cl.outcome = Outcome::GlobalBounded;
  else
    cl.outcome = Outcome::Inconclusive;
  return cl;
}

MarginScan singular_margin_scan(const FlowParams &params, GridPtr grid, const std::vector<double> &c_grid,
                                 const std::vector<int> &levels, double t_small, const ClassifyOptions &o) {
  for (std::size_t k = 1; k < c_grid.size(); ++k)
    if (!(c_grid[k] > c_grid[k - 1]))
      throw InvalidArgument("singular_margin_scan: c_grid must be increasing");
  MarginScan scan;
  const auto coeff = singular_steady_coefficient(params);
  scan.c_star_residual = coeff.residual_free;
  scan.c_star_verbatim = coeff.verbatim_constant;
  scan.bubble_constant = bubble_singular_amplitude(params, 12.0);

  for (double c : c_grid) {
    const Classification cl = classify(power_profile(grid, c, params.alpha), params, levels, t_small, o);
    scan.entries.push_back({c, cl.outcome});
  }
  bool seen = false;
  for (const auto &e : scan.entries) {
    const bool ic = e.outcome == Outcome::InstantaneousComplete;
    if (ic && !seen) {
      seen = true;
      scan.window_hi = e.c;
    } else if (!ic && seen) {
      scan.monotone = false;
    }
    if (!ic && !seen)
      scan.window_lo = e.c;
  }
  return scan;
}

} // namespace lelab
