// Command-line front end: one subcommand per scenario plus `list`.
//
// Settings are merged as defaults < --config file < command-line flags.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "lelab/scenario.hpp"

using nlohmann::json;

namespace {

struct Flags {
  std::string config;
  std::string out = "out";
  std::optional<std::uint64_t> seed;
  std::optional<double> p, R, grading, amp, dt_max, dt_min, safety, u_max, horizon, T, tol, c_lo, c_hi,
      t_check, t_small;
  std::optional<int> n, M, steps, max_iter, bisection, samples, centers;
  std::optional<std::string> profile, profile_csv, scheme;
  std::vector<double> amps, t_grid, scales, c_grid;
  std::vector<int> levels;
};

void add_flags(CLI::App *sub, Flags &f) {
  sub->add_option("--config", f.config, "JSON config file")->check(CLI::ExistingFile);
  sub->add_option("--out", f.out, "output directory")->capture_default_str();
  sub->add_option("--seed", f.seed, "master seed");
  sub->add_option("--p", f.p, "exponent p");
  sub->add_option("--n", f.n, "space dimension");
  sub->add_option("--R", f.R, "ball radius");
  sub->add_option("--M", f.M, "number of radial cells");
  sub->add_option("--grading", f.grading, "grid grading exponent");
  sub->add_option("--profile", f.profile, "initial profile: power, bubble or csv");
  sub->add_option("--amp", f.amp, "profile amplitude");
  sub->add_option("--profile-csv", f.profile_csv, "radius,value file for --profile csv");
  sub->add_option("--scheme", f.scheme, "implicit_euler or crank_nicolson");
  sub->add_option("--dt-max", f.dt_max, "largest time step");
  sub->add_option("--dt-min", f.dt_min, "smallest time step before declaring blow-up");
  sub->add_option("--safety", f.safety, "reaction step factor");
  sub->add_option("--u-max", f.u_max, "blow-up threshold on sup|u|");
  sub->add_option("--horizon", f.horizon, "flow horizon");
  sub->add_option("--T", f.T, "Picard time window");
  sub->add_option("--steps", f.steps, "Picard time steps");
  sub->add_option("--max-iter", f.max_iter, "Picard iteration cap");
  sub->add_option("--tol", f.tol, "Picard relative tolerance");
  sub->add_option("--amps", f.amps, "amplitudes for the small-data bound");
  sub->add_option("--c-lo", f.c_lo, "lower amplitude for scan-eps");
  sub->add_option("--c-hi", f.c_hi, "upper amplitude for scan-eps");
  sub->add_option("--bisection", f.bisection, "bisection steps for scan-eps");
  sub->add_option("--t-grid", f.t_grid, "decay sample times");
  sub->add_option("--scales", f.scales, "scaling factors R");
  sub->add_option("--t-check", f.t_check, "comparison time for scaling");
  sub->add_option("--levels", f.levels, "truncation levels");
  sub->add_option("--t-small", f.t_small, "time of the divergence probe");
  sub->add_option("--c-grid", f.c_grid, "amplitudes for scan-m");
  sub->add_option("--samples", f.samples, "Monte-Carlo samples per centre and radius");
  sub->add_option("--centers", f.centers, "sampled centre offsets");
}

json flag_patch(const Flags &f) {
  json j = json::object();
  auto put = [&](const char *section, const char *key, const auto &v) {
    if (v)
      j[section][key] = *v;
  };
  auto put_list = [&](const char *key, const auto &v) {
    if (!v.empty())
      j["controls"][key] = v;
  };
  if (f.seed)
    j["seed"] = *f.seed;
  put("params", "p", f.p);
  put("params", "n", f.n);
  put("grid", "R", f.R);
  put("grid", "M", f.M);
  put("grid", "grading", f.grading);
  put("profile", "kind", f.profile);
  put("profile", "amp", f.amp);
  put("profile", "path", f.profile_csv);
  put("controls", "scheme", f.scheme);
  put("controls", "dt_max", f.dt_max);
  put("controls", "dt_min", f.dt_min);
  put("controls", "safety", f.safety);
  put("controls", "u_max", f.u_max);
  put("controls", "horizon", f.horizon);
  put("controls", "T", f.T);
  put("controls", "steps", f.steps);
  put("controls", "max_iter", f.max_iter);
  put("controls", "tol", f.tol);
  put("controls", "c_lo", f.c_lo);
  put("controls", "c_hi", f.c_hi);
  put("controls", "bisection", f.bisection);
  put("controls", "t_check", f.t_check);
  put("controls", "t_small", f.t_small);
  put("controls", "samples", f.samples);
  put("controls", "centers", f.centers);
  put_list("amps", f.amps);
  put_list("t_grid", f.t_grid);
  put_list("scales", f.scales);
  put_list("levels", f.levels);
  put_list("c_grid", f.c_grid);
  return j;
}

int run(const std::string &name, const Flags &f) {
  json merged = lelab::default_config(name);
  try {
    if (!f.config.empty()) {
      std::ifstream is(f.config);
      json file = json::parse(is);
      if (file.contains("name") && file["name"] != name) {
        std::cerr << "config names scenario " << file["name"] << " but '" << name << "' was requested\n";
        return 2;
      }
      merged.merge_patch(file);
    }
    merged.merge_patch(flag_patch(f));
    merged["name"] = name;
    const lelab::ExperimentConfig cfg = merged.get<lelab::ExperimentConfig>();
    return lelab::run_scenario(cfg, f.out, std::cout);
  } catch (const std::exception &e) {
    // Config problems are reported the same way as scenario failures.
    std::filesystem::create_directories(f.out);
    std::ofstream(std::filesystem::path(f.out) / "error.json")
        << json{{"error", e.what()}, {"kind", "invalid_config"}, {"scenario", name}}.dump(2) << "\n";
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Numerical laboratory for the supercritical heat flow u_t - Laplace u = |u|^(p-2) u"};
  app.require_subcommand(1);
  app.add_subcommand("list", "print the scenario catalog")->callback([] { std::cout << lelab::list_scenarios(); });

  std::map<std::string, Flags> flags;
  std::string chosen;
  for (const auto &name : lelab::scenario_names()) {
    CLI::App *sub = app.add_subcommand(name, "run the " + name + " scenario");
    add_flags(sub, flags[name]);
    sub->callback([&chosen, name] { chosen = name; });
  }
  CLI11_PARSE(app, argc, argv);
  if (chosen.empty())
    return 0;
  return run(chosen, flags[chosen]);
}
