#include "lelab/mild.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "lelab/norms.hpp"

namespace lelab {

namespace {

RadialField odd_power(const RadialField &v, double p) {
  RadialField f(v.grid_ptr());
  for (std::size_t i = 0; i < v.size(); ++i)
    f[i] = std::pow(std::abs(v[i]), p - 2.0) * v[i];
  return f;
}

SpaceTimeField map_slices(const SpaceTimeField &u, double p) {
  SpaceTimeField out(u.grid_ptr());
  for (std::size_t k = 0; k < u.size(); ++k)
    out.push_back(u.time(k), odd_power(u.slice(k), p));
  return out;
}

SpaceTimeField sum(const SpaceTimeField &a, const SpaceTimeField &b) {
  SpaceTimeField out(a.grid_ptr());
  for (std::size_t k = 0; k < a.size(); ++k)
    out.push_back(a.time(k), a.slice(k) + b.slice(k));
  return out;
}

bool all_finite(const SpaceTimeField &u) {
  for (std::size_t k = 0; k < u.size(); ++k)
    if (!u.slice(k).all_finite())
      return false;
  return true;
}

} // namespace

SpaceTimeField duhamel(const SpaceTimeField &g, const LinearStepper &stepper) {
  if (g.size() < 2)
    throw InvalidArgument("duhamel: need at least two time slices");
  const double dt = stepper.dt();
  for (std::size_t k = 1; k < g.size(); ++k)
    if (std::abs(g.time(k) - g.time(k - 1) - dt) > 1e-9 * dt)
      throw InvalidArgument("duhamel: time ladder does not match the stepper dt");
  SpaceTimeField w(g.grid_ptr());
  RadialField cur(g.grid_ptr());
  w.push_back(g.time(0), cur);
  for (std::size_t k = 0; k + 1 < g.size(); ++k) {
    cur = stepper.step(cur + (0.5 * dt) * (g.slice(k) + g.slice(k + 1)));
    w.push_back(g.time(k + 1), cur);
  }
  return w;
}

SpaceTimeField semigroup_ladder(const LinearStepper &stepper, const RadialField &f, int steps) {
  SpaceTimeField out(f.grid_ptr());
  RadialField cur = f;
  out.push_back(0.0, cur);
  for (int k = 1; k <= steps; ++k) {
    cur = stepper.step(cur);
    out.push_back(k * stepper.dt(), cur);
  }
  return out;
}

PicardResult picard_solve(const RadialField &u0, const FlowParams &params, double T, int max_iter,
                          double tol, const PicardOptions &opts) {
  if (!(T > 0.0))
    throw InvalidArgument("picard_solve: T must be positive");
  if (opts.steps < 3)
    throw InvalidArgument("picard_solve: need at least 3 time steps");
  if (max_iter < 1)
    throw InvalidArgument("picard_solve: max_iter must be >= 1");
  const double p = params.p, mu = params.mu;
  const LinearStepper stepper(u0.grid_ptr(), opts.scheme, T / opts.steps);
  const SpaceTimeField w0 = semigroup_ladder(stepper, u0, opts.steps);

  PicardResult res;
  PicardDiagnostics &d = res.diagnostics;
  SpaceTimeField v = w0;
  int rising = 0;
  for (int it = 1; it <= max_iter; ++it) {
    SpaceTimeField next = sum(w0, duhamel(map_slices(v, p), stepper));
    d.iterates = it;
    if (!all_finite(next)) {
      d.diverged = true;
      break;
    }
    const SpaceTimeField inc = next - v;
    const double inc_norm = parabolic_morrey_norm(inc, p, mu);
    const double size = parabolic_morrey_norm(next, p, mu);
    if (!d.increment_norms.empty()) {
      const double prev = d.increment_norms.back();
      if (prev > 0.0)
        d.contraction_ratios.push_back(inc_norm / prev);
      rising = (inc_norm > prev) ? rising + 1 : 0;
    }
    d.increment_norms.push_back(inc_norm);
    d.increment_lp_norms.push_back(spacetime_lq_norm(inc, p));
    v = std::move(next);
    d.final_pmu_norm = size;
    if (!std::isfinite(inc_norm) || !std::isfinite(size) || rising >= opts.divergence_run) {
      d.diverged = true;
      break;
    }
    if (inc_norm <= tol * size) {
      d.converged = true;
      break;
    }
  }
  res.solution = std::move(v);
  return res;
}

double compare_mild_vs_stepper(const RadialField &u0, const FlowParams &params, double T,
                               const PicardOptions &opts, const FlowControls &controls) {
  const PicardResult pic = picard_solve(u0, params, T, 50, 1e-8, opts);
  if (!pic.diagnostics.converged)
    throw std::runtime_error("compare_mild_vs_stepper: Picard iteration did not converge");
  const SpaceTimeField &v = pic.solution;

  FlowControls c = controls;
  c.scheme = opts.scheme;
  c.record_initial = false;
  c.record_stride = 0;
  c.record_times.clear();
  std::vector<std::size_t> index;
  for (std::size_t k = 0; k < v.size(); ++k)
    if (v.time(k) >= 0.5 * T * (1.0 - 1e-12)) {
      c.record_times.push_back(v.time(k));
      index.push_back(k);
    }
  const FlowRun run = run_flow(u0, params, T, c);
  const SpaceTimeField &u = run.trajectory.spacetime;
  if (run.report.outcome == Outcome::FiniteTimeBlowup || u.size() != index.size())
    throw std::runtime_error("compare_mild_vs_stepper: the stepper did not reach T");

  double worst = 0.0;
  for (std::size_t j = 0; j < index.size(); ++j) {
    const RadialField &a = v.slice(index[j]);
    const RadialField &b = u.slice(j);
    const double scale = a.sup_abs();
    if (scale == 0.0) {
      worst = std::max(worst, b.sup_abs());
      continue;
    }
    worst = std::max(worst, (a - b).sup_abs() / scale);
  }
  return worst;
}

std::vector<SmallDataBoundEntry> small_data_bound_check(const RadialField &profile, const std::vector<double> &amps,
                                         const FlowParams &params, double T, const PicardOptions &opts) {
  std::vector<SmallDataBoundEntry> out;
  const double base = morrey_norm_radial(profile, 2.0, params.lambda).value;
  for (double amp : amps) {
    if (amp == 0.0)
      continue;
    SmallDataBoundEntry e{amp, std::nullopt};
    const PicardResult pic = picard_solve(amp * profile, params, T, 50, 1e-8, opts);
    if (pic.diagnostics.converged && base > 0.0)
      e.ratio = parabolic_morrey_norm(pic.solution, params.p, params.mu) / (std::abs(amp) * base);
    out.push_back(e);
  }
  return out;
}

EpsilonScan epsilon0_scan(const RadialField &profile, const FlowParams &params, double T, double c_lo,
                          double c_hi, int iterations, const PicardOptions &opts) {
  if (!(c_lo < c_hi))
    throw InvalidArgument("epsilon0_scan: need c_lo < c_hi");
  EpsilonScan scan;
  auto converges = [&](double c) {
    const bool ok = picard_solve(c * profile, params, T, 50, 1e-8, opts).diagnostics.converged;
    scan.trace.emplace_back(c, ok);
    return ok;
  };
  if (!converges(c_lo))
    throw InvalidArgument("epsilon0_scan: Picard does not converge at c_lo");
  if (converges(c_hi))
    throw InvalidArgument("epsilon0_scan: Picard converges at c_hi");
  double lo = c_lo, hi = c_hi;
  for (int k = 0; k < iterations; ++k) {
    const double mid = 0.5 * (lo + hi);
    (converges(mid) ? lo : hi) = mid;
  }
  scan.lo = lo;
  scan.hi = hi;
  scan.threshold = 0.5 * (lo + hi);
  scan.morrey = scan.threshold * morrey_norm_radial(profile, 2.0, params.lambda).value;
  return scan;
}

} // namespace lelab
