// Acceptance suite: one PASS/FAIL line per criterion, detail lines indented.
// Exit status is the number of failed criteria.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "lelab/exponents.hpp"
#include "lelab/flow.hpp"
#include "lelab/geometry.hpp"
#include "lelab/heat.hpp"
#include "lelab/mild.hpp"
#include "lelab/minimal.hpp"
#include "lelab/norms.hpp"
#include "lelab/random.hpp"

using namespace lelab;

namespace {

constexpr double pi = std::numbers::pi;
const double sigma4 = 8.0 * pi * pi / 3.0;
const FlowParams P = derive_params(4.0, 5);

void detail(const char *fmt, auto... args) {
  std::printf("    ");
  std::printf(fmt, args...);
  std::printf("\n");
  std::fflush(stdout);
}

struct Check {
  bool ok = true;
  void expect(bool cond, const std::string &what) {
    if (!cond) {
      ok = false;
      detail("violated: %s", what.c_str());
    }
  }
};

// 1 ---------------------------------------------------------------------------

bool morrey_exactness() {
  Check c;
  const GridPtr g = make_grid(5, 1.0, 2000, 2.0);
  const MorreyResult m = morrey_norm_radial(power_profile(g, 1.0, 1.0), 2.0, 2.0);
  const double oracle = std::sqrt(8.0 * pi * pi / 9.0);
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (const auto &[r, q] : m.profile)
    if (r >= 1e-3 && r <= 1.0) {
      lo = std::min(lo, q);
      hi = std::max(hi, q);
    }
  const double rel = std::abs(m.value / oracle - 1.0);
  detail("M=2000: value %.6f, oracle %.6f, rel err %.2e; profile max/min %.5f over r in [1e-3, 1]", m.value,
         oracle, rel, hi / lo);
  c.expect(rel <= 5e-3, "value within 0.5%");
  c.expect(hi / lo <= 1.02, "flat quotient profile");
  return c.ok;
}

// 2 ---------------------------------------------------------------------------

// Slices at t_k = k t_end / K (k >= 1) recorded by run_flow.
SpaceTimeField recorded_flow(const RadialField &u0, double t_end, int K, FlowControls fc) {
  fc.record_initial = false;
  fc.record_stride = 0;
  fc.record_times.clear();
  for (int k = 1; k <= K; ++k)
    fc.record_times.push_back(t_end * k / K);
  const FlowRun run = run_flow(u0, P, t_end, fc);
  if (run.report.outcome == Outcome::FiniteTimeBlowup)
    throw std::runtime_error("recorded_flow: blow-up before the window ends");
  return run.trajectory.spacetime;
}

bool scaling_invariance() {
  Check c;
  const GridPtr g = make_grid(5, 1.0, 1000, 2.0);
  const std::vector<double> scales{0.5, 0.25};

  // data in L^{2,λ}
  for (const RadialField &f : {power_profile(g, 1.0, 1.0), bubble_profile(g, 12.0), bubble_profile(g, 1.0)}) {
    const double base = morrey_norm_radial(f, 2.0, P.lambda).value;
    for (double R : scales) {
      const double m = morrey_norm_radial(rescale_field(f, R, P.alpha), 2.0, P.lambda).value;
      const double rel = std::abs(m / base - 1.0);
      detail("L^{2,lambda} data norm, R=%.2f: %.6f vs %.6f, rel %.1e", R, m, base, rel);
      c.expect(rel <= 1e-3, "data norm invariant within 1e-3");
    }
  }

  // trajectories in L^{p,μ}: the flow of the rescaled data against the original
  FlowControls cn;
  cn.scheme = Scheme::CrankNicolson;
  const RadialField u0 = bubble_profile(g, 1.0);
  const SpaceTimeField u = recorded_flow(u0, 0.1, 100, cn);
  const double base = parabolic_morrey_norm(u, P.p, P.mu);
  for (double R : scales) {
    FlowControls fc = cn;
    fc.dt_max = cn.dt_max * R * R;
    const SpaceTimeField w = recorded_flow(rescale_field(u0, R, P.alpha), 0.1 * R * R, 100, fc);
    const double m = parabolic_morrey_norm(w, P.p, P.mu);
    const double rel = std::abs(m / base - 1.0);
    detail("L^{p,mu} trajectory norm, R=%.2f: %.6f vs %.6f, rel %.1e", R, m, base, rel);
    c.expect(rel <= 5e-2, "trajectory norm invariant within 5%");
  }

  // scaling_test: negative-energy bubble before blow-up
  for (double R : scales) {
    const double d = scaling_test(bubble_profile(g, 12.0), P, R, 0.002);
    detail("scaling_test A=12 bubble, t=0.002, R=%.2f, M=1000: deviation %.2e", R, d);
    c.expect(d <= 2e-2, "A=12 deviation <= 2e-2");
  }
  // scaling_test under refinement: mixed step limits, so the deviation is discretization error
  for (double R : scales) {
    std::vector<double> devs;
    for (int ref : {1, 2, 4}) {
      FlowControls fc = cn;
      fc.dt_max = 1e-3 / ref;
      devs.push_back(scaling_test(bubble_profile(make_grid(5, 1.0, 500 * ref, 2.0), 1.0), P, R, 0.1, fc));
    }
    detail("scaling_test A=1 bubble, t=0.1, R=%.2f, M=500/1000/2000: %.2e %.2e %.2e", R, devs[0], devs[1],
           devs[2]);
    c.expect(devs[0] <= 2e-2, "A=1 deviation <= 2e-2");
    c.expect(devs[1] < devs[0] && devs[2] < devs[1], "deviation shrinks under refinement");
  }
  return c.ok;
}

// 3 ---------------------------------------------------------------------------

bool kernel_facts() {
  Check c;
  {
    const GridPtr g = make_grid(5, 1.0, 1000, 2.0);
    const LinearStepper ie(g, Scheme::ImplicitEuler, 1e-4);
    double worst_mass = 0.0, worst_neg = 0.0;
    for (std::size_t j : {std::size_t(1), std::size_t(100), std::size_t(300), std::size_t(600), std::size_t(900)})
      for (double t : {0.001, 0.01, 0.1}) {
        const RadialField col = green_column(ie, j, t);
        worst_mass = std::max(worst_mass, integrate(col));
        worst_neg = std::min(worst_neg, *std::min_element(col.values().begin(), col.values().end()));
      }
    detail("Green columns (IE, M=1000): max mass %.12f, min entry %.1e", worst_mass, worst_neg);
    c.expect(worst_mass <= 1.0 + 1e-8, "mass <= 1 + 1e-8");
    c.expect(worst_neg >= -1e-12, "positivity");
  }
  {
    const GridPtr g = make_grid(5, 1.0, 8000, 2.0);
    const LinearStepper cn(g, Scheme::CrankNicolson, 2.5e-6);
    for (double y : {0.3, 0.5, 0.7, 0.9}) {
      std::size_t j = 0;
      while (g->r(j) < y)
        ++j;
      for (double t : {0.01, 0.1}) {
        const RadialField col = green_column(cn, j, t);
        double excess = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < col.size(); ++i)
          excess = std::max(excess, col[i] - spherical_average_gaussian(g->r(i), g->r(j), t, 5));
        detail("domination (CN, M=8000, dt=2.5e-6) y=%.4f t=%.2f: max(Gamma - avg G) = %.2e, mass %.10f", g->r(j), t,
               excess, integrate(col));
        c.expect(excess <= 1e-6, "Gamma <= avg G + 1e-6");
        c.expect(integrate(col) <= 1.0 + 1e-8, "CN column mass");
      }
    }
  }
  {
    // Diagnostic only: a source close to the origin, excess shrinking with M.
    std::vector<double> ex;
    for (int M : {2000, 4000, 8000}) {
      const GridPtr g = make_grid(5, 1.0, M, 2.0);
      const LinearStepper cn(g, Scheme::CrankNicolson, 2.5e-6);
      std::size_t j = 0;
      while (g->r(j) < 0.1)
        ++j;
      const RadialField col = green_column(cn, j, 0.01);
      double excess = -std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < col.size(); ++i)
        excess = std::max(excess, col[i] - spherical_average_gaussian(g->r(i), g->r(j), 0.01, 5));
      ex.push_back(excess);
    }
    detail("diagnostic y=0.1, t=0.01, M=2000/4000/8000: excess %.2e %.2e %.2e", ex[0], ex[1], ex[2]);
  }
  {
    std::vector<double> ts;
    for (int k = 0; k <= 12; ++k)
      ts.push_back(1e-4 * std::pow(10.0, k / 4.0));
    const DecayProfile d = decay_check(power_profile(make_grid(5, 1.0, 1000, 2.0), 1.0, 1.0), P, ts);
    const auto [lo, hi] = std::minmax_element(d.scaled_sup.begin(), d.scaled_sup.end());
    detail("t^{lambda/4} sup|S_t |x|^-1| over [1e-4, 1e-1]: min %.4f, max %.4f, max/min %.3f", *lo, *hi, *hi / *lo);
    c.expect(*hi / *lo <= 10.0, "decay profile max/min <= 10");
  }
  return c.ok;
}

// 4 ---------------------------------------------------------------------------

bool picard_contraction() {
  Check c;
  const GridPtr g = make_grid(5, 1.0, 1000, 2.0);
  const RadialField u0 = power_profile(g, 0.05, 1.0);
  const PicardOptions opts; // 1000 steps on [0, T]
  const PicardResult r = picard_solve(u0, P, 0.1, 50, 1e-8, opts);
  const auto &ratios = r.diagnostics.contraction_ratios;
  std::string list;
  for (double q : ratios)
    list += " " + std::to_string(q);
  detail("c=0.05, T=0.1, M=1000: converged=%d after %d iterations, ratios:%s", r.diagnostics.converged,
         r.diagnostics.iterates, list.c_str());
  c.expect(r.diagnostics.converged, "Picard converges");
  // ratios[k] = increment k+2 / increment k+1, so iteration 3 onward is k >= 1
  for (std::size_t k = 1; k < ratios.size(); ++k)
    c.expect(ratios[k] <= 0.5, "contraction ratio <= 0.5 from iteration 3");

  const double dev = compare_mild_vs_stepper(u0, P, 0.1, opts);
  detail("mild fixed point vs stepper on [T/2, T]: relative sup deviation %.2e", dev);
  c.expect(dev <= 2e-2, "fixed point matches the stepper within 2%");

  const auto entries = small_data_bound_check(power_profile(g, 1.0, 1.0), {0.01, 0.02, 0.05}, P, 0.1, opts);
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (const auto &e : entries) {
    c.expect(e.ratio.has_value(), "Picard converges for each amplitude");
    if (e.ratio) {
      detail("amp %.2f: ||u||_{L^{p,mu}} / ||u0||_{L^{2,lambda}} = %.5f", e.amp, *e.ratio);
      lo = std::min(lo, *e.ratio);
      hi = std::max(hi, *e.ratio);
    }
  }
  detail("ratio spread %.4f", hi / lo);
  c.expect(hi / lo <= 3.0, "ratio spread <= 3");
  return c.ok;
}

// 5 ---------------------------------------------------------------------------

bool ball_blowup() {
  Check c;
  const GridPtr g = make_grid(5, 1.0, 1000, 2.0);
  const BallCheck b = verify_ball(bubble_profile(g, 12.0), P);
  // ½·576σ_4/7 − ¼·20736σ_4∫(1−r²)^4 r^4 dr
  const double quartic = 1.0 / 5 - 4.0 / 7 + 6.0 / 9 - 4.0 / 11 + 1.0 / 13;
  const double oracle = 0.5 * 576.0 * sigma4 / 7.0 - 0.25 * 20736.0 * sigma4 * quartic;
  detail("E0 %.4f (quadrature oracle %.4f), ||u0||_2 %.4f, T_bound %.5f, T_num %.6f", b.E0, oracle, b.l2,
         b.T_bound, b.T_num);
  c.expect(std::abs(b.E0 / oracle - 1.0) <= 2e-2, "E0 within 2% of the oracle");
  c.expect(std::abs(b.T_bound / 0.5365 - 1.0) <= 1e-3, "T_bound = 0.5365");
  c.expect(b.T_num <= 0.5365 * 1.05, "T_num <= 0.5365 * 1.05");
  c.expect(b.ok, "verify_ball ok");
  const double rate = b.report.rate_exponent.value_or(std::numeric_limits<double>::quiet_NaN());
  detail("rate exponent %.4f (expected 0.5); L2 curve ratio %.4f; energy inequality ratio %.3f", rate,
         b.l2_curve_ratio, b.inequality_ratio);
  c.expect(std::abs(rate - 0.5) <= 0.1, "rate exponent within 20% of 0.5");
  c.expect(b.l2_curve_ratio >= 0.9, "L2 lower-bound curve within 10%");
  return c.ok;
}

// 6 ---------------------------------------------------------------------------

bool truncation_monotonicity() {
  Check c;
  const std::vector<int> levels{16, 64, 256};
  const double horizon = 0.01;
  {
    const GridPtr g = make_grid(5, 1.0, 1000, 2.0);
    const MinimalResult mr = minimal_solution(power_profile(g, 5.0, 1.0), levels, P, horizon);
    detail("M=1000, levels 16/64/256, t <= %.2f: max(u_n - u_n') = %.2e", horizon, mr.report.max_violation);
    c.expect(mr.report.max_violation <= 1e-10, "monotonicity violations <= 1e-10");
  }
  const double dt0 = truncation_dt(P, levels.back(), horizon, 1e-3);
  for (int n : levels) {
    std::vector<double> res;
    for (int ref : {1, 2, 4}) {
      const GridPtr g = make_grid(5, 1.0, 500 * ref, 2.0);
      TruncationControls tc;
      tc.dt = dt0 / ref;
      tc.record_all = true;
      const TruncationRun run = run_truncated(power_profile(g, 5.0, 1.0), n, P, horizon, tc);
      res.push_back(duhamel_consistency(run, LinearStepper(g, Scheme::ImplicitEuler, tc.dt), P));
    }
    detail("Duhamel residual n=%d, (M, dt) = (500, %.3g)/2^k: %.2e %.2e %.2e", n, dt0, res[0], res[1], res[2]);
    c.expect(res[0] <= 2e-2, "residual <= 2e-2");
    for (std::size_t k = 1; k < res.size(); ++k)
      c.expect(res[k] <= 0.6 * res[k - 1], "residual halves under refinement");
  }
  return c.ok;
}

// 7 ---------------------------------------------------------------------------

bool dichotomy() {
  Check c;
  const GridPtr g = make_grid(5, 1.0, 1000, 2.0);
  const std::vector<int> levels{16, 64, 256};
  {
    const RadialField u0 = power_profile(g, 0.05, 1.0);
    const bool picard = picard_solve(u0, P, 0.1).diagnostics.converged;
    const Classification cl = classify(u0, P, levels, 0.01);
    detail("c=0.05: Picard converged=%d; %s, flow %s to t=%.1f, sup %.3e", picard, to_string(cl.outcome),
           to_string(cl.flow.outcome), cl.flow.t_final, cl.flow.final_sup);
    c.expect(picard, "Picard converges for c=0.05");
    c.expect(cl.outcome == Outcome::GlobalBounded, "c=0.05 GlobalBounded");
    c.expect(cl.flow.outcome == Outcome::GlobalBounded && cl.flow.t_final >= 10.0 - 1e-9, "flow bounded to 10");
  }
  {
    const auto start = std::chrono::steady_clock::now();
    const Classification cl = classify(power_profile(g, 5.0, 1.0), P, levels, 0.01);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::size_t j = 0;
    while (std::abs(cl.probe_radii[j] - 0.5) > 1e-12)
      ++j;
    const auto &v = cl.probe_values[j];
    detail("c=5: %s; probe r=0.5, t=0.01: %.4g -> %.4g -> %.4g (growth %.1f, %.1f); %.1f s", to_string(cl.outcome),
           v[0], v[1], v[2], cl.growth[j][0], cl.growth[j][1], secs);
    c.expect(cl.outcome == Outcome::InstantaneousComplete, "c=5 InstantaneousComplete");
    c.expect(cl.growth[j][0] >= 10.0 && cl.growth[j][1] >= 10.0, "growth >= 10 per level");
    c.expect(secs <= 300.0, "runtime <= 5 min");
  }
  return c.ok;
}

// 8 ---------------------------------------------------------------------------

bool singular_steady_state() {
  Check c;
  const GridPtr g = make_grid(5, 1.0, 2000, 2.0);
  const RadialLaplacian L(g);
  auto residual = [&](double coeff) {
    const RadialField u = power_profile(g, coeff, P.alpha);
    const RadialField Lu = L.apply(u);
    double worst = 0.0;
    for (std::size_t i = 0; i < g->size(); ++i) {
      const double r = g->r(i);
      if (r < 0.25 || r > 0.75)
        continue;
      const double src = std::pow(u[i], P.p - 1.0);
      worst = std::max(worst, std::abs(-Lu[i] - src) / src);
    }
    return worst;
  };
  const auto coeff = singular_steady_coefficient(P);
  const double good = residual(coeff.residual_free);
  const double verbatim = residual(coeff.verbatim_constant);
  detail("discrete relative residual on [0.25, 0.75], M=2000: c=%.6f -> %.2e; c=%.1f -> %.4f", coeff.residual_free,
         good, coeff.verbatim_constant, verbatim);
  c.expect(good <= 1e-4, "residual-free coefficient: residual <= 1e-4");
  c.expect(std::abs(verbatim - 0.5) <= 0.05, "coefficient alpha(n-2-alpha): residual 0.5 +- 0.05");
  return c.ok;
}

// 9 ---------------------------------------------------------------------------

bool constants() {
  Check c;
  const double j10 = joseph_lundgren(10), j11 = joseph_lundgren(11), j12 = joseph_lundgren(12);
  detail("p_JL(10) = %g, p_JL(11) = %.6f, p_JL(12) = %.6f", j10, j11, j12);
  c.expect(std::isinf(j10) && j10 > 0, "p_JL(10) = inf");
  c.expect(std::abs(j11 - 7.9220) <= 1e-3, "p_JL(11) = 7.9220");
  c.expect(std::abs(j12 - 4.9266) <= 1e-3, "p_JL(12) = 4.9266");
  Rng rng(stream_seed(2024, "acceptance.constants"));
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    const int n = 3 + static_cast<int>(rng.uniform() * 30);
    const double p = 2.0 * n / (n - 2.0) * (1.0 + 1e-6) + 30.0 * rng.uniform();
    const FlowParams Q = derive_params(p, n);
    worst = std::max({worst, std::abs(Q.mu - Q.lambda - 2.0), std::abs(Q.lambda * (Q.p - 2.0) - 4.0)});
  }
  detail("100 random (p, n): max identity error %.1e", worst);
  c.expect(worst <= 1e-14, "identities to 1e-14");
  return c.ok;
}

} // namespace

int main() {
  const std::vector<std::pair<const char *, std::function<bool()>>> criteria{
      {"Morrey norm exactness", morrey_exactness},
      {"scaling invariance", scaling_invariance},
      {"heat kernel facts", kernel_facts},
      {"Picard contraction", picard_contraction},
      {"L2 blow-up bound", ball_blowup},
      {"truncation monotonicity", truncation_monotonicity},
      {"small/large data dichotomy", dichotomy},
      {"singular steady state", singular_steady_state},
      {"constants", constants},
  };
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const auto start = std::chrono::steady_clock::now();
    bool ok = false;
    try {
      ok = criteria[k].second();
    } catch (const std::exception &e) {
      detail("exception: %s", e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s [%zu] %s (%.1f s)\n", ok ? "PASS" : "FAIL", k + 1, criteria[k].first, secs);
    std::fflush(stdout);
    failed += ok ? 0 : 1;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed;
}
