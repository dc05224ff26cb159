#include "lelab/flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <boost/math/tools/minima.hpp>

#include "lelab/norms.hpp"

namespace lelab {

const char *to_string(Outcome o) {
  switch (o) {
  case Outcome::GlobalBounded:
    return "GlobalBounded";
  case Outcome::FiniteTimeBlowup:
    return "FiniteTimeBlowup";
  case Outcome::InstantaneousComplete:
    return "InstantaneousComplete";
  case Outcome::Inconclusive:
    break;
  }
  return "Inconclusive";
}

namespace {

RadialField reaction(const RadialField &u, double p) {
  RadialField f(u.grid_ptr());
  for (std::size_t i = 0; i < u.size(); ++i)
    f[i] = std::pow(std::abs(u[i]), p - 2.0) * u[i];
  return f;
}

} // namespace

FlowRun run_flow(const RadialField &u0, const FlowParams &params, double horizon,
                 const FlowControls &c) {
  if (!(horizon > 0.0))
    throw InvalidArgument("run_flow: horizon must be positive");
  if (!u0.all_finite())
    throw InvalidArgument("run_flow: initial data must be finite");
  if (!(c.dt_max > 0.0) || !(c.safety > 0.0) || !(c.u_max > 0.0))
    throw InvalidArgument("run_flow: dt_max, safety and u_max must be positive");

  std::vector<double> marks;
  for (double t : c.record_times)
    if (t > 0.0 && t < horizon)
      marks.push_back(t);
  std::sort(marks.begin(), marks.end());
  marks.erase(std::unique(marks.begin(), marks.end()), marks.end());
  marks.push_back(horizon);

  FlowRun run;
  Trajectory &tr = run.trajectory;
  tr.spacetime = SpaceTimeField(u0.grid_ptr());
  BlowupReport &rep = run.report;
  const double p = params.p;

  RadialField u = u0;
  double t = 0.0, t_comp = 0.0; // Kahan-compensated clock
  std::size_t next_mark = 0;
  long steps = 0;
  if (c.record_initial)
    tr.spacetime.push_back(0.0, u);

  auto propose = [&](double sup) {
    const double scale = std::pow(sup, p - 2.0);
    return scale > 0.0 ? std::min(c.dt_max, c.safety / scale) : c.dt_max;
  };

  while (true) {
    const double sup = u.sup_abs();
    const bool finite = std::isfinite(sup) && u.all_finite();
    const double dt = finite ? propose(sup) : 0.0;
    tr.t.push_back(t);
    tr.sup_norm.push_back(sup);
    tr.l2_norm.push_back(finite ? lq_norm(u, 2.0) : sup);
    tr.energy.push_back(finite ? energy(u, p) : -std::numeric_limits<double>::infinity());
    tr.dt_history.push_back(dt);

    if (!finite || (sup > c.u_max && dt < c.dt_min)) {
      rep.outcome = Outcome::FiniteTimeBlowup;
      break;
    }
    if (next_mark == marks.size()) {
      rep.outcome = (sup >= 0.1 * c.u_max) ? Outcome::Inconclusive : Outcome::GlobalBounded;
      break;
    }
    if (steps >= c.max_steps) {
      rep.outcome = Outcome::Inconclusive;
      break;
    }

    double h = dt;
    bool lands = false;
    const double target = marks[next_mark];
    if (t + h >= target * (1.0 - 1e-14)) {
      h = target - t;
      lands = true;
    }
    const LinearStepper stepper(u.grid_ptr(), c.scheme, h);
    u = stepper.step_with_source(u, reaction(u, p), h);
    ++steps;

    if (lands) {
      t = target;
      t_comp = 0.0;
      ++next_mark;
      tr.dt_history.back() = h;
      if (next_mark < marks.size())
        tr.spacetime.push_back(t, u);
    } else {
      const double y = h - t_comp;
      const double sum = t + y;
      t_comp = (sum - t) - y;
      t = sum;
      if (c.record_stride > 0 && steps % c.record_stride == 0 && u.all_finite())
        tr.spacetime.push_back(t, u);
    }
  }

  rep.final_sup = tr.sup_norm.back();
  rep.t_final = t;
  rep.steps = steps;
  if (u.all_finite() && (tr.spacetime.empty() || tr.spacetime.times().back() < t))
    tr.spacetime.push_back(t, u);

  if (rep.outcome == Outcome::FiniteTimeBlowup) {
    const RateFit fit = fit_blowup_rate(tr, params, c.u_max / 100.0);
    rep.rate_exponent = fit.rate_exponent;
    rep.T_est = fit.T_est ? *fit.T_est : t;
  }
  return run;
}

RateFit fit_blowup_rate(const Trajectory &traj, const FlowParams &, double threshold) {
  RateFit out;
  std::vector<double> s, y;
  double elapsed = 0.0;
  std::size_t first = traj.t.size();
  for (std::size_t k = 0; k < traj.t.size(); ++k) {
    const double v = traj.sup_norm[k];
    if (first == traj.t.size() && v > threshold && std::isfinite(v))
      first = k;
    if (first != traj.t.size()) {
      if (k > first)
        elapsed += traj.dt_history[k - 1];
      if (std::isfinite(v) && v > threshold) {
        s.push_back(elapsed);
        y.push_back(std::log(v));
      }
    }
  }
  out.samples = static_cast<int>(s.size());
  if (s.size() < 10)
    return out;

  const double s_last = s.back();
  const double span = s_last - s.front();
  if (!(span > 0.0))
    return out;

  struct Line {
    double a = 0.0, b = 0.0, ss = std::numeric_limits<double>::infinity();
  };
  // For fixed T the model is linear in (log κ, b).
  auto fit_at = [&](double z) {
    const double T = s_last + std::exp(z);
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double m = static_cast<double>(s.size());
    std::vector<double> x(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
      x[i] = std::log(T - s[i]);
      sx += x[i];
      sy += y[i];
      sxx += x[i] * x[i];
      sxy += x[i] * y[i];
    }
    Line L;
    const double den = m * sxx - sx * sx;
    if (!(std::abs(den) > 0.0))
      return L;
    const double slope = (m * sxy - sx * sy) / den;
    L.a = (sy - slope * sx) / m;
    L.b = -slope;
    L.ss = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
      const double r = y[i] - (L.a + slope * x[i]);
      L.ss += r * r;
    }
    return L;
  };

  // Gap after the last sample, searched in log space between a tiny fraction
  // of the last step and many times the sampled span.
  const double last_step = std::max(traj.dt_history.back(), span * 1e-12);
  const double z_lo = std::log(last_step * 1e-6);
  const double z_hi = std::log(span * 1e3);
  constexpr int scan = 400;
  int best = 0;
  double best_ss = std::numeric_limits<double>::infinity();
  for (int k = 0; k <= scan; ++k) {
    const double z = z_lo + (z_hi - z_lo) * k / scan;
    const double ss = fit_at(z).ss;
    if (ss < best_ss) {
      best_ss = ss;
      best = k;
    }
  }
  if (best == 0 || best == scan)
    return out;
  const double h = (z_hi - z_lo) / scan;
  const auto [z_opt, ss_opt] = boost::math::tools::brent_find_minima(
      [&](double z) { return fit_at(z).ss; }, z_lo + (best - 1) * h, z_lo + (best + 1) * h, 40);
  (void)ss_opt;
  const Line L = fit_at(z_opt);
  if (!std::isfinite(L.b) || !(L.b > 1e-6))
    return out;

  std::size_t first_index = 0;
  while (!(traj.sup_norm[first_index] > threshold && std::isfinite(traj.sup_norm[first_index])))
    ++first_index;
  out.T_est = traj.t[first_index] + s_last + std::exp(z_opt);
  out.rate_exponent = L.b;
  out.prefactor = std::exp(L.a);
  return out;
}

BallCheck verify_ball(const RadialField &u0, const FlowParams &params, const FlowControls &c) {
  BallCheck out;
  out.E0 = energy(u0, params.p);
  if (!(out.E0 < 0.0))
    throw InvalidArgument("verify_ball: requires negative initial energy, got E = " +
                          std::to_string(out.E0));
  const double vol = ball_volume(u0.grid().dim(), u0.grid().radius());
  out.l2 = lq_norm(u0, 2.0);
  out.T_bound = ball_blowup_bound(params, vol, out.l2);
  const double c0 = ball_holder_constant(params, vol);

  const FlowRun run = run_flow(u0, params, 1.05 * out.T_bound, c);
  out.report = run.report;
  out.T_num = run.report.T_est.value_or(run.report.t_final);
  out.ok = run.report.outcome == Outcome::FiniteTimeBlowup && out.T_num <= 1.05 * out.T_bound;

  const Trajectory &tr = run.trajectory;
  out.l2_curve_ratio = std::numeric_limits<double>::infinity();
  out.inequality_ratio = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < tr.t.size(); ++k) {
    if (!(tr.sup_norm[k] <= c.u_max) || !std::isfinite(tr.l2_norm[k]))
      break;
    const double lower = ball_l2_lower_bound(params, vol, out.l2, tr.t[k]);
    if (std::isfinite(lower))
      out.l2_curve_ratio = std::min(out.l2_curve_ratio, tr.l2_norm[k] / lower);
    if (k + 1 < tr.t.size() && std::isfinite(tr.l2_norm[k + 1]) && tr.sup_norm[k + 1] <= c.u_max &&
        tr.t[k + 1] > tr.t[k]) {
      const double rate = 0.5 * (tr.l2_norm[k + 1] * tr.l2_norm[k + 1] - tr.l2_norm[k] * tr.l2_norm[k]) /
                          (tr.t[k + 1] - tr.t[k]);
      out.inequality_ratio =
          std::min(out.inequality_ratio, rate / (c0 * std::pow(tr.l2_norm[k], params.p)));
    }
  }
  return out;
}

double scaling_test(const RadialField &u0, const FlowParams &params, double R, double t_check,
                    const FlowControls &controls) {
  if (!(R > 0.0 && R <= 1.0))
    throw InvalidArgument("scaling_test: R must lie in (0, 1]");
  if (!(t_check > 0.0))
    throw InvalidArgument("scaling_test: t_check must be positive");
  const RadialField w0 = rescale_field(u0, R, params.alpha);

  FlowControls cu = controls;
  cu.record_times = {};
  cu.record_initial = false;
  const FlowRun ru = run_flow(u0, params, t_check, cu);
  const FlowRun rw = run_flow(w0, params, R * R * t_check, cu);
  if (ru.report.outcome == Outcome::FiniteTimeBlowup || rw.report.outcome == Outcome::FiniteTimeBlowup)
    throw std::runtime_error("scaling_test: the flow blows up before t_check");

  const RadialField &u = ru.trajectory.spacetime.back();
  const RadialField &w = rw.trajectory.spacetime.back();
  const double factor = std::pow(R, -params.alpha);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    num = std::max(num, std::abs(w[i] - factor * u[i]));
    den = std::max(den, std::abs(factor * u[i]));
  }
  return den > 0.0 ? num / den : num;
}

} // namespace lelab
