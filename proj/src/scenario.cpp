#include "lelab/scenario.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <memory>
#include <sstream>

#include <openssl/evp.h>

#include "lelab/exponents.hpp"
#include "lelab/flow.hpp"
#include "lelab/geometry.hpp"
#include "lelab/heat.hpp"
#include "lelab/mild.hpp"
#include "lelab/minimal.hpp"
#include "lelab/norms.hpp"
#include "lelab/random.hpp"

namespace lelab {

using nlohmann::json;
namespace fs = std::filesystem;

// Config serialization ------------------------------------------------------------

void to_json(json &j, const ExperimentConfig &c) {
  const ControlSpec &k = c.controls;
  j = json{{"name", c.name},
           {"params", {{"p", c.p}, {"n", c.n}}},
           {"grid", {{"R", c.R}, {"M", c.M}, {"grading", c.grading}}},
           {"profile", {{"kind", c.profile.kind}, {"amp", c.profile.amp}, {"path", c.profile.path}}},
           {"controls",
            {{"scheme", k.scheme},     {"dt_max", k.dt_max},   {"dt_min", k.dt_min},
             {"safety", k.safety},     {"u_max", k.u_max},     {"horizon", k.horizon},
             {"T", k.T},               {"steps", k.steps},     {"max_iter", k.max_iter},
             {"tol", k.tol},           {"amps", k.amps},       {"c_lo", k.c_lo},
             {"c_hi", k.c_hi},         {"bisection", k.bisection}, {"t_grid", k.t_grid},
             {"scales", k.scales},     {"t_check", k.t_check}, {"levels", k.levels},
             {"t_small", k.t_small},   {"c_grid", k.c_grid},   {"samples", k.samples},
             {"centers", k.centers}}},
           {"seed", c.seed}};
}

namespace {

void reject_unknown(const json &j, std::initializer_list<const char *> keys, const std::string &where) {
  if (!j.is_object())
    throw InvalidArgument("config: '" + where + "' must be an object");
  for (const auto &[key, value] : j.items()) {
    (void)value;
    if (std::none_of(keys.begin(), keys.end(), [&](const char *k) { return key == k; }))
      throw InvalidArgument("config: unknown key '" + key + "' in " + where);
  }
}

template <class T> void take(const json &j, const char *key, T &out) {
  if (j.contains(key))
    j.at(key).get_to(out);
}

} // namespace

void from_json(const json &j, ExperimentConfig &c) {
  reject_unknown(j, {"name", "params", "grid", "profile", "controls", "seed"}, "top level");
  take(j, "name", c.name);
  take(j, "seed", c.seed);
  if (j.contains("params")) {
    const json &p = j["params"];
    reject_unknown(p, {"p", "n"}, "params");
    take(p, "p", c.p);
    take(p, "n", c.n);
  }
  if (j.contains("grid")) {
    const json &g = j["grid"];
    reject_unknown(g, {"R", "M", "grading"}, "grid");
    take(g, "R", c.R);
    take(g, "M", c.M);
    take(g, "grading", c.grading);
  }
  if (j.contains("profile")) {
    const json &p = j["profile"];
    reject_unknown(p, {"kind", "amp", "path"}, "profile");
    take(p, "kind", c.profile.kind);
    take(p, "amp", c.profile.amp);
    take(p, "path", c.profile.path);
  }
  if (j.contains("controls")) {
    const json &s = j["controls"];
    ControlSpec &k = c.controls;
    reject_unknown(s,
                   {"scheme", "dt_max", "dt_min", "safety", "u_max", "horizon", "T", "steps", "max_iter",
                    "tol", "amps", "c_lo", "c_hi", "bisection", "t_grid", "scales", "t_check", "levels",
                    "t_small", "c_grid", "samples", "centers"},
                   "controls");
    take(s, "scheme", k.scheme);
    take(s, "dt_max", k.dt_max);
    take(s, "dt_min", k.dt_min);
    take(s, "safety", k.safety);
    take(s, "u_max", k.u_max);
    take(s, "horizon", k.horizon);
    take(s, "T", k.T);
    take(s, "steps", k.steps);
    take(s, "max_iter", k.max_iter);
    take(s, "tol", k.tol);
    take(s, "amps", k.amps);
    take(s, "c_lo", k.c_lo);
    take(s, "c_hi", k.c_hi);
    take(s, "bisection", k.bisection);
    take(s, "t_grid", k.t_grid);
    take(s, "scales", k.scales);
    take(s, "t_check", k.t_check);
    take(s, "levels", k.levels);
    take(s, "t_small", k.t_small);
    take(s, "c_grid", k.c_grid);
    take(s, "samples", k.samples);
    take(s, "centers", k.centers);
  }
}

// Catalog -------------------------------------------------------------------------

namespace {

struct CatalogEntry {
  const char *name;
  const char *description;
  const char *anchor;
};

constexpr std::array<CatalogEntry, 10> kCatalog{{
    {"constants", "derived exponents, Joseph-Lundgren exponent, singular steady coefficient",
     "Morrey exponents mu = 2p/(p-2), lambda = 4/(p-2); p_JL; u_* = c|x|^(-alpha)"},
    {"morrey", "centred and sampled L^{2,lambda} norms of the profile",
     "Morrey norm sup r^(lambda-n) int_{B_r(x0)} |f|^2"},
    {"decay", "t^(lambda/4) sup|S_t f| and the Morrey norm of S_t f over a time grid",
     "heat semigroup bounds |S_t f|^2 <= C t^(-lambda/2) |f|^2_{L^{2,lambda}}"},
    {"simulate", "nonlinear flow to a horizon or blow-up, with trajectory diagnostics",
     "u_t - Laplace u = |u|^(p-2) u, Dirichlet data on the ball"},
    {"picard", "Picard iteration for the Duhamel formulation with contraction ratios",
     "fixed point of v -> S_t u0 + int_0^t S_(t-s) |v|^(p-2) v ds in L^{p,mu}"},
    {"scan-eps", "bisection on the amplitude for Picard convergence",
     "small-data global existence threshold epsilon_0"},
    {"ball-blowup", "negative-energy data against the L^2 blow-up time bound",
     "Ball's criterion E(u0) < 0 => blow-up before c0^(-1)(p-2)^(-1)|u0|_2^((2-p)/2)"},
    {"scaling", "rescaled data and flows compared with the originals",
     "scaling law u_R(x,t) = R^(-alpha) u(x/R, t/R^2)"},
    {"minimal", "truncated problems at increasing levels and the classification of the data",
     "minimal solution as the monotone limit of min(u^(p-1), n^(p-1)) truncations"},
    {"scan-m", "classification of c|x|^(-alpha) across amplitudes",
     "complete instantaneous blow-up above M = sup |y|^alpha w0(y)"},
}};

} // namespace

const std::vector<std::string> &scenario_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto &e : kCatalog)
      v.emplace_back(e.name);
    return v;
  }();
  return names;
}

std::string list_scenarios() {
  std::ostringstream os;
  for (const auto &e : kCatalog) {
    char head[32];
    std::snprintf(head, sizeof head, "%-12s", e.name);
    os << head << e.description << "\n" << std::string(12, ' ') << "anchor: " << e.anchor << "\n";
  }
  return os.str();
}

ExperimentConfig default_config(const std::string &name) {
  ExperimentConfig c;
  c.name = name;
  if (name == "ball-blowup" || name == "simulate") {
    c.profile = {"bubble", 12.0, ""};
  } else if (name == "scaling") {
    c.profile = {"bubble", 1.0, ""};
    c.controls.scheme = "crank_nicolson";
  } else if (name == "picard") {
    c.profile.amp = 0.05;
  } else if (name == "minimal") {
    c.profile.amp = 5.0;
  }
  return c;
}

// Output helpers --------------------------------------------------------------------

namespace {

class Outputs {
public:
  explicit Outputs(fs::path dir) : dir_(std::move(dir)) { fs::create_directories(dir_); }

  void csv(const std::string &name, const std::string &header, const std::vector<std::vector<double>> &rows) {
    std::ofstream os(dir_ / name, std::ios::binary);
    os << header << "\n";
    char buf[32];
    for (const auto &row : rows) {
      for (std::size_t i = 0; i < row.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g", row[i]);
        os << (i ? "," : "") << buf;
      }
      os << "\n";
    }
    files_.push_back(name);
  }

  void text(const std::string &name, const std::string &body) {
    std::ofstream os(dir_ / name, std::ios::binary);
    os << body;
    files_.push_back(name);
  }

  void json_file(const std::string &name, const json &j) { text(name, j.dump(2) + "\n"); }

  void field(const std::string &name, const RadialField &f) {
    std::ofstream os(dir_ / name, std::ios::binary);
    write_field_csv(os, f);
    files_.push_back(name);
  }

  void manifest(const std::string &scenario) {
    std::vector<std::string> names = files_;
    std::sort(names.begin(), names.end());
    names.erase(std::unique(names.begin(), names.end()), names.end());
    json files = json::array();
    for (const auto &n : names)
      files.push_back({{"name", n}, {"sha256", sha256_file(dir_ / n)}});
    std::ofstream os(dir_ / "manifest.json", std::ios::binary);
    os << json{{"scenario", scenario}, {"files", files}}.dump(2) << "\n";
  }

private:
  fs::path dir_;
  std::vector<std::string> files_;
};

json optional_number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json optional_number(const std::optional<double> &v) { return v ? optional_number(*v) : json(nullptr); }

json report_json(const BlowupReport &r) {
  return {{"outcome", to_string(r.outcome)},
          {"T_est", optional_number(r.T_est)},
          {"rate_exponent", optional_number(r.rate_exponent)},
          {"final_sup", optional_number(r.final_sup)},
          {"t_final", r.t_final},
          {"steps", r.steps}};
}

FlowControls flow_controls(const ExperimentConfig &c) {
  FlowControls f;
  f.scheme = scheme_from_string(c.controls.scheme);
  f.dt_max = c.controls.dt_max;
  f.dt_min = c.controls.dt_min;
  f.safety = c.controls.safety;
  f.u_max = c.controls.u_max;
  return f;
}

RadialField make_profile(const ExperimentConfig &c, const FlowParams &P, const GridPtr &g) {
  if (c.profile.kind == "power")
    return power_profile(g, c.profile.amp, P.alpha);
  if (c.profile.kind == "bubble")
    return bubble_profile(g, c.profile.amp);
  if (c.profile.kind == "csv") {
    std::ifstream is(c.profile.path);
    if (!is)
      throw InvalidArgument("profile: cannot open '" + c.profile.path + "'");
    return c.profile.amp * read_field_csv(is, g);
  }
  throw InvalidArgument("profile: unknown kind '" + c.profile.kind + "' (power, bubble or csv)");
}

std::vector<double> default_t_grid() {
  std::vector<double> t;
  for (int k = 0; k <= 12; ++k)
    t.push_back(1e-4 * std::pow(10.0, k / 4.0));
  return t;
}

// Scenarios -----------------------------------------------------------------------------

void run_constants(const ExperimentConfig &c, const FlowParams &P, Outputs &out, std::ostream &log) {
  const auto coeff = singular_steady_coefficient(P);
  const json j{{"p", P.p},
               {"n", P.n},
               {"alpha", P.alpha},
               {"lambda", P.lambda},
               {"mu", P.mu},
               {"two_star", P.two_star},
               {"p_jl", optional_number(joseph_lundgren(c.n))},
               {"c_star_verbatim", coeff.verbatim_constant},
               {"c_star_residual", coeff.residual_free},
               {"c_star_verbatim_relative_residual", singular_steady_residual(P, coeff.verbatim_constant)}};
  out.json_file("constants.json", j);
  log << j.dump(2) << "\n";
}

void run_morrey(const ExperimentConfig &c, const FlowParams &P, const GridPtr &g, Outputs &out,
                std::ostream &log) {
  const RadialField f = make_profile(c, P, g);
  const MorreyResult centred = morrey_norm_radial(f, 2.0, P.lambda);
  SampledMorreyOptions so;
  so.centers = c.controls.centers;
  const MorreyResult sampled =
      morrey_norm_sampled(f, 2.0, P.lambda, c.controls.samples, stream_seed(c.seed, "morrey.sampled"), so);
  std::vector<std::vector<double>> rows;
  for (const auto &[r, q] : centred.profile)
    rows.push_back({r, q});
  out.csv("morrey_profile.csv", "radius,quotient", rows);
  rows.clear();
  for (const auto &[r, q] : sampled.profile)
    rows.push_back({r, q});
  out.csv("morrey_sampled_profile.csv", "radius,quotient", rows);
  const json j{{"centred", {{"value", centred.value}, {"argmax_radius", centred.argmax_radius}}},
               {"sampled",
                {{"value", sampled.value},
                 {"argmax_radius", sampled.argmax_radius},
                 {"argmax_center_offset", sampled.argmax_center_offset}}},
               {"l2", lq_norm(f, 2.0)},
               {"lp", lq_norm(f, P.p)},
               {"energy", optional_number(energy(f, P.p))}};
  out.json_file("morrey.json", j);
  log << "morrey: centred " << centred.value << ", sampled " << sampled.value << "\n";
}

void run_decay(const ExperimentConfig &c, const FlowParams &P, const GridPtr &g, Outputs &out,
               std::ostream &log) {
  const RadialField f = make_profile(c, P, g);
  const std::vector<double> ts = c.controls.t_grid.empty() ? default_t_grid() : c.controls.t_grid;
  DecayOptions o;
  o.scheme = scheme_from_string(c.controls.scheme);
  const DecayProfile d = decay_check(f, P, ts, o);
  std::vector<std::vector<double>> rows;
  for (std::size_t k = 0; k < d.t.size(); ++k)
    rows.push_back({d.t[k], d.scaled_sup[k], d.morrey[k]});
  out.csv("decay.csv", "t,scaled_sup,morrey", rows);
  const auto [lo, hi] = std::minmax_element(d.scaled_sup.begin(), d.scaled_sup.end());
  const double morrey_max = *std::max_element(d.morrey.begin(), d.morrey.end());
  const json j{{"morrey_initial", d.morrey_initial},
               {"scaled_sup_max_over_min", optional_number(*hi / *lo)},
               {"morrey_max_over_initial", optional_number(morrey_max / d.morrey_initial)}};
  out.json_file("decay.json", j);
  log << "decay: max/min of t^(lambda/4) sup|S_t f| = " << *hi / *lo << "\n";
}

void write_trajectory(Outputs &out, const std::string &name, const Trajectory &tr) {
  std::vector<std::vector<double>> rows;
  for (std::size_t k = 0; k < tr.t.size(); ++k)
    rows.push_back({tr.t[k], tr.sup_norm[k], tr.l2_norm[k], tr.energy[k], tr.dt_history[k]});
  out.csv(name, "t,sup,l2,energy,dt", rows);
}

void run_simulate(const ExperimentConfig &c, const FlowParams &P, const GridPtr &g, Outputs &out,
                  std::ostream &log) {
  const RadialField u0 = make_profile(c, P, g);
  const FlowRun run = run_flow(u0, P, c.controls.horizon, flow_controls(c));
  write_trajectory(out, "trajectory.csv", run.trajectory);
  out.field("final.csv", run.trajectory.spacetime.back());
  out.json_file("report.json", report_json(run.report));
  log << "simulate: " << to_string(run.report.outcome) << " after " << run.report.steps << " steps\n";
}

json picard_json(const PicardDiagnostics &d) {
  return {{"iterates", d.iterates},
          {"converged", d.converged},
          {"diverged", d.diverged},
          {"final_pmu_norm", optional_number(d.final_pmu_norm)},
          {"increment_norms", d.increment_norms},
          {"contraction_ratios", d.contraction_ratios}};
}

void run_picard(const ExperimentConfig &c, const FlowParams &P, const GridPtr &g, Outputs &out,
                std::ostream &log) {
  const RadialField u0 = make_profile(c, P, g);
  PicardOptions o;
  o.steps = c.controls.steps;
  o.scheme = scheme_from_string(c.controls.scheme);
  const PicardResult res = picard_solve(u0, P, c.controls.T, c.controls.max_iter, c.controls.tol, o);
  const PicardDiagnostics &d = res.diagnostics;
  std::vector<std::vector<double>> rows;
  for (std::size_t k = 0; k < d.increment_norms.size(); ++k) {
    const double ratio = k > 0 && d.increment_norms[k - 1] > 0.0 ? d.increment_norms[k] / d.increment_norms[k - 1]
                                                                 : std::numeric_limits<double>::quiet_NaN();
    rows.push_back({static_cast<double>(k + 1), d.increment_norms[k], d.increment_lp_norms[k], ratio});
  }
  out.csv("increments.csv", "iteration,increment_pmu,increment_lp,ratio", rows);
  if (d.converged)
    out.field("solution_T.csv", res.solution.back());
  out.json_file("picard.json", picard_json(d));
  log << "picard: " << (d.converged ? "converged" : "not converged") << " after " << d.iterates
      << " iterations\n";
}

void run_scan_eps(const ExperimentConfig &c, const FlowParams &P, const GridPtr &g, Outputs &out,
                  std::ostream &log) {
  const RadialField profile = make_profile(c, P, g);
  PicardOptions o;
  o.steps = c.controls.steps;
  o.scheme = scheme_from_string(c.controls.scheme);
  const EpsilonScan s =
      epsilon0_scan(profile, P, c.controls.T, c.controls.c_lo, c.controls.c_hi, c.controls.bisection, o);
  std::vector<std::vector<double>> rows;
  for (std::size_t k = 0; k < s.trace.size(); ++k)
    rows.push_back({static_cast<double>(k), s.trace[k].first, s.trace[k].second ? 1.0 : 0.0});
  out.csv("scan_eps.csv", "step,amplitude,converged", rows);
  out.json_file("scan_eps.json",
                {{"threshold", s.threshold}, {"lo", s.lo}, {"hi", s.hi}, {"threshold_morrey", s.morrey}});
  log << "scan-eps: threshold amplitude " << s.threshold << " (Morrey norm " << s.morrey << ")\n";
}

void run_ball(const ExperimentConfig &c, const FlowParams &P, const GridPtr &g, Outputs &out,
              std::ostream &log) {
  const RadialField u0 = make_profile(c, P, g);
  const BallCheck b = verify_ball(u0, P, flow_controls(c));
  out.json_file("ball.json", {{"E0", b.E0},
                              {"l2", b.l2},
                              {"T_bound", b.T_bound},
                              {"T_num", b.T_num},
                              {"ok", b.ok},
                              {"l2_curve_ratio", optional_number(b.l2_curve_ratio)},
                              {"inequality_ratio", optional_number(b.inequality_ratio)},
                              {"report", report_json(b.report)}});
  log << "ball-blowup: E0 " << b.E0 << ", T_bound " << b.T_bound << ", T_num " << b.T_num
      << (b.ok ? " (ok)" : " (bound violated)") << "\n";
}

void run_scaling(const ExperimentConfig &c, const FlowParams &P, const GridPtr &g, Outputs &out,
                 std::ostream &log) {
  const RadialField u0 = make_profile(c, P, g);
  const double base = morrey_norm_radial(u0, 2.0, P.lambda).value;
  std::vector<std::vector<double>> rows;
  for (double R : c.controls.scales) {
    const RadialField w0 = rescale_field(u0, R, P.alpha);
    const double m = morrey_norm_radial(w0, 2.0, P.lambda).value;
    const double dev = scaling_test(u0, P, R, c.controls.t_check, flow_controls(c));
    rows.push_back({R, base > 0.0 ? m / base : 1.0, dev});
    log << "scaling: R = " << R << ", flow deviation " << dev << "\n";
  }
  out.csv("scaling.csv", "R,morrey_ratio,flow_deviation", rows);
}

ClassifyOptions classify_options(const ExperimentConfig &c) {
  ClassifyOptions o;
  o.flow_horizon = c.controls.horizon;
  o.flow = flow_controls(c);
  o.flow.scheme = Scheme::ImplicitEuler;
  return o;
}

void run_minimal(const ExperimentConfig &c, const FlowParams &P, const GridPtr &g, Outputs &out,
                 std::ostream &log) {
  const RadialField u0 = make_profile(c, P, g);
  const auto &levels = c.controls.levels;
  const MinimalResult mr = minimal_solution(u0, levels, P, c.controls.t_small);
  for (const auto &run : mr.runs) {
    std::string header = "t,sup";
    for (const auto &pr : run.probes) {
      char buf[48];
      std::snprintf(buf, sizeof buf, ",probe_r%.4g", pr.radius);
      header += buf;
    }
    std::vector<std::vector<double>> rows;
    for (std::size_t k = 0; k < run.trajectory.t.size(); ++k) {
      std::vector<double> row{run.trajectory.t[k], run.trajectory.sup_norm[k]};
      for (const auto &pr : run.probes)
        row.push_back(pr.values[k]);
      rows.push_back(std::move(row));
    }
    out.csv("level_" + std::to_string(run.level) + ".csv", header, rows);
  }
  const Classification cl = classify(u0, P, levels, c.controls.t_small, classify_options(c));
  out.json_file("classification.json", {{"outcome", to_string(cl.outcome)},
                                        {"levels", cl.levels},
                                        {"probe_radii", cl.probe_radii},
                                        {"probe_values", cl.probe_values},
                                        {"growth", cl.growth},
                                        {"diverges", cl.diverges},
                                        {"cauchy", cl.cauchy},
                                        {"cauchy_time", cl.cauchy_time},
                                        {"data_bounded", cl.data_bounded},
                                        {"max_violation", cl.max_violation},
                                        {"singular_amplitude", cl.singular_amplitude},
                                        {"flow", report_json(cl.flow)}});
  log << "minimal: " << to_string(cl.outcome) << "\n";
}

void run_scan_m(const ExperimentConfig &c, const FlowParams &P, const GridPtr &g, Outputs &out,
                std::ostream &log) {
  const MarginScan s =
      singular_margin_scan(P, g, c.controls.c_grid, c.controls.levels, c.controls.t_small, classify_options(c));
  std::ostringstream os;
  os << "c,outcome\n";
  char buf[32];
  for (const auto &e : s.entries) {
    std::snprintf(buf, sizeof buf, "%.17g", e.c);
    os << buf << "," << to_string(e.outcome) << "\n";
  }
  out.text("scan_m.csv", os.str());
  out.json_file("scan_m.json", {{"window_lo", optional_number(s.window_lo)},
                                {"window_hi", optional_number(s.window_hi)},
                                {"monotone", s.monotone},
                                {"c_star_residual", s.c_star_residual},
                                {"c_star_verbatim", s.c_star_verbatim},
                                {"bubble_constant", s.bubble_constant}});
  log << "scan-m: transition in (" << (s.window_lo ? std::to_string(*s.window_lo) : "-") << ", "
      << (s.window_hi ? std::to_string(*s.window_hi) : "-") << "]\n";
}

} // namespace

int run_scenario(const ExperimentConfig &c, const fs::path &out_dir, std::ostream &log) {
  Outputs out(out_dir);
  try {
    out.json_file("config.json", json(c));
    const FlowParams P = derive_params(c.p, c.n);
    if (c.name == "constants") {
      run_constants(c, P, out, log);
    } else {
      const GridPtr g = make_grid(c.n, c.R, c.M, c.grading);
      if (c.name == "morrey")
        run_morrey(c, P, g, out, log);
      else if (c.name == "decay")
        run_decay(c, P, g, out, log);
      else if (c.name == "simulate")
        run_simulate(c, P, g, out, log);
      else if (c.name == "picard")
        run_picard(c, P, g, out, log);
      else if (c.name == "scan-eps")
        run_scan_eps(c, P, g, out, log);
      else if (c.name == "ball-blowup")
        run_ball(c, P, g, out, log);
      else if (c.name == "scaling")
        run_scaling(c, P, g, out, log);
      else if (c.name == "minimal")
        run_minimal(c, P, g, out, log);
      else if (c.name == "scan-m")
        run_scan_m(c, P, g, out, log);
      else
        throw InvalidArgument("unknown scenario '" + c.name + "'");
    }
    out.manifest(c.name);
    return 0;
  } catch (const std::exception &e) {
    const bool invalid = dynamic_cast<const std::invalid_argument *>(&e) != nullptr;
    const json err{{"error", e.what()}, {"kind", invalid ? "invalid_argument" : "runtime_error"}, {"scenario", c.name}};
    out.json_file("error.json", err);
    out.manifest(c.name);
    log << err.dump() << "\n";
    return 2;
  }
}

std::string sha256_file(const fs::path &path) {
  std::ifstream is(path, std::ios::binary);
  if (!is)
    throw std::runtime_error("sha256_file: cannot open " + path.string());
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("sha256_file: digest initialisation failed");
  std::array<char, 1 << 16> buf;
  while (is) {
    is.read(buf.data(), buf.size());
    if (is.gcount() > 0)
      EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(is.gcount()));
  }
  std::array<unsigned char, EVP_MAX_MD_SIZE> md;
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), md.data(), &len);
  static const char *hex = "0123456789abcdef";
  std::string s;
  for (unsigned int i = 0; i < len; ++i) {
    s += hex[md[i] >> 4];
    s += hex[md[i] & 15];
  }
  return s;
}

} // namespace lelab
