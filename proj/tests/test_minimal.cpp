#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "lelab/exponents.hpp"
#include "lelab/geometry.hpp"
#include "lelab/heat.hpp"
#include "lelab/minimal.hpp"

using namespace lelab;

namespace {

const FlowParams P = derive_params(4.0, 5);

} // namespace

TEST_CASE("truncated runs from zero data stay zero") {
  const GridPtr g = make_grid(5, 1.0, 100, 2.0);
  const TruncationRun run = run_truncated(RadialField(g), 16, P, 0.01);
  for (double s : run.trajectory.sup_norm)
    CHECK(s == 0.0);
  const MinimalResult mr = minimal_solution(RadialField(g), {4, 8, 16}, P, 0.01);
  CHECK(mr.report.max_violation == 0.0);
}

TEST_CASE("truncated runs reject bad input") {
  const GridPtr g = make_grid(5, 1.0, 100, 2.0);
  CHECK_THROWS_AS(run_truncated(sample(g, [](double r) { return r - 0.5; }), 4, P, 0.01), std::invalid_argument);
  TruncationControls c;
  c.dt = 0.1;
  CHECK_THROWS_AS(run_truncated(bubble_profile(g, 1.0), 16, P, 1.0, c), std::invalid_argument);
  CHECK_THROWS_AS(minimal_solution(bubble_profile(g, 1.0), {8, 4}, P, 0.01), std::invalid_argument);
}

TEST_CASE("truncation_dt honours the order restriction and lands on the quarter marks") {
  for (int n : {4, 16, 256, 1024}) {
    const double dt = truncation_dt(P, n, 0.01, 1e-3);
    CHECK(dt * (P.p - 1.0) * std::pow(n, P.p - 2.0) <= 1.0 + 1e-12);
    CHECK(dt <= 1e-3);
    const double q = 0.01 / dt;
    CHECK(std::abs(q - std::round(q)) <= 1e-9);
    CHECK(std::lround(q) % 4 == 0);
  }
}

TEST_CASE("solutions increase with the truncation level") {
  const GridPtr g = make_grid(5, 1.0, 300, 2.0);
  const RadialField u0 = power_profile(g, 5.0, 1.0);
  const MinimalResult mr = minimal_solution(u0, {4, 8}, P, 0.01);
  CHECK(mr.report.max_violation <= 1e-10);
  const auto &a = mr.runs[0].trajectory.spacetime, &b = mr.runs[1].trajectory.spacetime;
  for (std::size_t k = 0; k < a.size(); ++k)
    for (std::size_t i = 0; i < g->size(); ++i)
      CHECK(a.slice(k)[i] <= b.slice(k)[i] + 1e-10);
}

TEST_CASE("truncated solutions obey the bounded-source estimate") {
  const GridPtr g = make_grid(5, 1.0, 300, 2.0);
  const RadialField u0 = power_profile(g, 5.0, 1.0);
  for (int n : {4, 16, 64}) {
    const TruncationRun run = run_truncated(u0, n, P, 0.01);
    const double s0 = run.data.sup_abs();
    for (std::size_t k = 0; k < run.trajectory.t.size(); ++k)
      CHECK(run.trajectory.sup_norm[k] <= s0 + run.trajectory.t[k] * std::pow(n, P.p - 1.0) + 1e-12);
  }
}

TEST_CASE("a high level on small data matches the untruncated stepper") {
  const GridPtr g = make_grid(5, 1.0, 400, 2.0);
  const RadialField u0 = bubble_profile(g, 0.5);
  TruncationControls tc;
  tc.dt = 5e-5;
  const TruncationRun run = run_truncated(u0, 64, P, 0.1, tc);
  FlowControls fc;
  fc.dt_max = 5e-5;
  fc.record_times = {0.05, 0.1};
  fc.record_initial = false;
  const FlowRun flow = run_flow(u0, P, 0.1, fc);
  const RadialField &a = run.trajectory.spacetime.back();
  const RadialField &b = flow.trajectory.spacetime.back();
  CHECK((a - b).sup_abs() <= 1e-2 * b.sup_abs());
}

TEST_CASE("probe values on small singular data are Cauchy in the level") {
  const GridPtr g = make_grid(5, 1.0, 400, 2.0);
  const MinimalResult mr = minimal_solution(power_profile(g, 0.05, 1.0), {4, 8, 16, 32}, P, 0.01);
  for (const auto &gaps : mr.report.probe_gaps)
    for (std::size_t k = 0; k + 1 < gaps.size(); ++k)
      CHECK((gaps[k + 1] <= 0.5 * gaps[k] || gaps[k + 1] <= 1e-12));
}

TEST_CASE("probe values on large singular data diverge with the level") {
  const GridPtr g = make_grid(5, 1.0, 400, 2.0);
  const MinimalResult mr = minimal_solution(power_profile(g, 5.0, 1.0), {16, 64, 256}, P, 0.01);
  const auto &mid = mr.report.probe_limits[1];
  CHECK(mr.runs[0].probes[1].radius == doctest::Approx(0.5));
  for (std::size_t k = 0; k + 1 < mid.size(); ++k)
    CHECK(mid[k + 1] >= 10.0 * mid[k]);
}

TEST_CASE("Duhamel consistency of truncated runs") {
  const GridPtr g = make_grid(5, 1.0, 200, 2.0);
  TruncationControls tc;
  tc.record_all = true;
  tc.dt = 1e-4;
  SUBCASE("zero data") {
    const TruncationRun run = run_truncated(RadialField(g), 16, P, 0.01, tc);
    CHECK(duhamel_consistency(run, LinearStepper(g, Scheme::ImplicitEuler, tc.dt), P) == 0.0);
  }
  SUBCASE("near-linear regime") {
    const TruncationRun run = run_truncated(bubble_profile(g, 1e-4), 16, P, 0.01, tc);
    CHECK(duhamel_consistency(run, LinearStepper(g, Scheme::ImplicitEuler, tc.dt), P) <= 1e-10);
  }
  SUBCASE("small data, halving under refinement") {
    double prev = 0.0;
    for (int ref : {1, 2, 4}) {
      const GridPtr gr = make_grid(5, 1.0, 200 * ref, 2.0);
      TruncationControls c = tc;
      c.dt = 4e-4 / ref;
      const TruncationRun run = run_truncated(power_profile(gr, 0.05, 1.0), 16, P, 0.01, c);
      const double res = duhamel_consistency(run, LinearStepper(gr, Scheme::ImplicitEuler, c.dt), P);
      CHECK(res <= 2e-2);
      if (ref > 1)
        CHECK(res <= 0.6 * prev);
      prev = res;
    }
  }
  SUBCASE("the stepper must match the run") {
    const TruncationRun run = run_truncated(bubble_profile(g, 1.0), 16, P, 0.01, tc);
    CHECK_THROWS_AS(duhamel_consistency(run, LinearStepper(g, Scheme::CrankNicolson, tc.dt), P),
                    std::invalid_argument);
  }
}

TEST_CASE("bubble singular amplitude matches a direct maximisation") {
  for (double p : {4.0, 5.0, 7.0}) {
    const FlowParams Q = derive_params(p, 5);
    double best = 0.0;
    for (int k = 0; k <= 1000000; ++k) {
      const double r = 1e-6 * k;
      best = std::max(best, std::pow(r, Q.alpha) * 12.0 * (1.0 - r * r));
    }
    CHECK(bubble_singular_amplitude(Q, 12.0) == doctest::Approx(best).epsilon(1e-8));
  }
}

TEST_CASE("classification of the reference data") {
  const GridPtr g = make_grid(5, 1.0, 400, 2.0);
  const std::vector<int> levels{16, 64, 256};
  SUBCASE("small singular data are global") {
    CHECK(classify(power_profile(g, 0.05, 1.0), P, levels, 0.01).outcome == Outcome::GlobalBounded);
  }
  SUBCASE("the negative-energy bubble blows up at the flow's time") {
    const Classification cl = classify(bubble_profile(g, 12.0), P, levels, 0.01);
    CHECK(cl.outcome == Outcome::FiniteTimeBlowup);
    const FlowRun run = run_flow(bubble_profile(g, 12.0), P, 1.0);
    REQUIRE(cl.flow.T_est);
    CHECK(*cl.flow.T_est == doctest::Approx(*run.report.T_est).epsilon(0.1));
    CHECK(cl.cauchy);
  }
  SUBCASE("large singular data blow up instantly and completely") {
    const Classification cl = classify(power_profile(g, 5.0, 1.0), P, levels, 0.01);
    CHECK(cl.outcome == Outcome::InstantaneousComplete);
    CHECK(cl.diverges);
    CHECK_FALSE(cl.data_bounded);
    for (double r : cl.probe_radii)
      CHECK(r >= 0.25);
    CHECK(cl.max_violation <= 1e-10);
  }
}

TEST_CASE("amplitude scan of c|x|^-alpha") {
  const GridPtr g = make_grid(5, 1.0, 300, 2.0);
  const MarginScan s = singular_margin_scan(P, g, {0.05, 0.5, 2.0, 5.0}, {16, 64, 256}, 0.01);
  REQUIRE(s.entries.size() == 4);
  CHECK(s.entries.front().outcome == Outcome::GlobalBounded);
  CHECK(s.entries.back().outcome == Outcome::InstantaneousComplete);
  CHECK(s.monotone);
  REQUIRE(s.window_hi);
  CHECK(*s.window_hi == 5.0);
  CHECK(s.c_star_residual == doctest::Approx(std::sqrt(2.0)));
  CHECK(s.bubble_constant == doctest::Approx(bubble_singular_amplitude(P, 12.0)));
  CHECK_THROWS_AS(singular_margin_scan(P, g, {1.0, 0.5}, {16, 64, 256}, 0.01), std::invalid_argument);
}
