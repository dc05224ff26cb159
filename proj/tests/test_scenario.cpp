#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "lelab/scenario.hpp"

using namespace lelab;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string &name) {
  const fs::path p = fs::temp_directory_path() / ("lelab_test_" + name);
  fs::remove_all(p);
  return p;
}

json read_json(const fs::path &p) {
  std::ifstream is(p);
  return json::parse(is);
}

std::string read_bytes(const fs::path &p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

} // namespace

TEST_CASE("config round-trips through JSON") {
  ExperimentConfig c = default_config("minimal");
  c.p = 5.5;
  c.M = 321;
  c.controls.levels = {8, 32};
  c.controls.t_grid = {0.1, 0.2};
  c.seed = 99;
  const json j = c;
  const ExperimentConfig back = j.get<ExperimentConfig>();
  CHECK(json(back) == j);
  CHECK(back.profile.amp == 5.0);
}

TEST_CASE("config parsing keeps defaults and rejects unknown keys") {
  const ExperimentConfig c = json::parse(R"({"params": {"n": 6}})").get<ExperimentConfig>();
  CHECK(c.n == 6);
  CHECK(c.p == 4.0);
  CHECK(c.controls.levels == std::vector<int>{16, 64, 256});
  CHECK_THROWS_AS(json::parse(R"({"grid": {"MM": 5}})").get<ExperimentConfig>(), std::invalid_argument);
  CHECK_THROWS_AS(json::parse(R"({"extra": 1})").get<ExperimentConfig>(), std::invalid_argument);
}

TEST_CASE("catalog lists every scenario with an anchor") {
  const std::string text = list_scenarios();
  CHECK(scenario_names().size() >= 9);
  for (const auto &name : scenario_names())
    CHECK(text.find(name) != std::string::npos);
  std::size_t anchors = 0;
  for (std::size_t pos = 0; (pos = text.find("anchor: ", pos)) != std::string::npos; ++pos)
    ++anchors;
  CHECK(anchors == scenario_names().size());
}

TEST_CASE("sha256 of known content") {
  const fs::path dir = scratch("sha");
  fs::create_directories(dir);
  std::ofstream(dir / "abc.txt", std::ios::binary) << "abc";
  CHECK(sha256_file(dir / "abc.txt") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("constants scenario reproduces the exponent values") {
  const fs::path dir = scratch("constants");
  std::ostringstream log;
  REQUIRE(run_scenario(default_config("constants"), dir, log) == 0);
  const json j = read_json(dir / "constants.json");
  CHECK(j["alpha"] == 1.0);
  CHECK(j["lambda"] == 2.0);
  CHECK(j["mu"] == 4.0);
  CHECK(j["two_star"].get<double>() == doctest::Approx(10.0 / 3.0));
  CHECK(j["p_jl"].is_null());
  CHECK(j["c_star_residual"].get<double>() == doctest::Approx(std::sqrt(2.0)));
  CHECK(j["c_star_verbatim"] == 2.0);

  const json m = read_json(dir / "manifest.json");
  CHECK(m["files"].size() == 2);
  for (const auto &f : m["files"])
    CHECK(f["sha256"] == sha256_file(dir / f["name"].get<std::string>()));

  ExperimentConfig c11 = default_config("constants");
  c11.n = 11;
  c11.p = 8.0;
  const fs::path dir11 = scratch("constants11");
  REQUIRE(run_scenario(c11, dir11, log) == 0);
  CHECK(read_json(dir11 / "constants.json")["p_jl"].get<double>() == doctest::Approx(7.9220).epsilon(1e-4));
}

TEST_CASE("invalid exponent exits with status 2 and names two_star") {
  ExperimentConfig c = default_config("constants");
  c.p = 3.0;
  const fs::path dir = scratch("invalid");
  std::ostringstream log;
  CHECK(run_scenario(c, dir, log) == 2);
  const json e = read_json(dir / "error.json");
  CHECK(e["error"].get<std::string>().find("two_star") != std::string::npos);
}

TEST_CASE("unknown scenario names are errors") {
  ExperimentConfig c;
  c.name = "nope";
  std::ostringstream log;
  CHECK(run_scenario(c, scratch("nope"), log) == 2);
}

TEST_CASE("identical config and seed give byte-identical outputs") {
  ExperimentConfig c = default_config("morrey");
  c.M = 200;
  c.controls.samples = 300;
  c.controls.centers = 4;
  std::ostringstream log;
  const fs::path a = scratch("det_a"), b = scratch("det_b");
  REQUIRE(run_scenario(c, a, log) == 0);
  REQUIRE(run_scenario(c, b, log) == 0);
  for (const char *f : {"morrey.json", "morrey_profile.csv", "morrey_sampled_profile.csv", "manifest.json"})
    CHECK(read_bytes(a / f) == read_bytes(b / f));
  CHECK(read_bytes(a / "morrey_profile.csv").rfind("radius,quotient\n", 0) == 0);
}

TEST_CASE("ball-blowup scenario reproduces the reference run") {
  const fs::path dir = scratch("ball");
  std::ostringstream log;
  REQUIRE(run_scenario(default_config("ball-blowup"), dir, log) == 0);
  const json j = read_json(dir / "ball.json");
  CHECK(j["E0"].get<double>() == doctest::Approx(-80.4).epsilon(2e-2));
  CHECK(j["T_bound"].get<double>() == doctest::Approx(0.5365).epsilon(1e-3));
  CHECK(j["T_num"].get<double>() <= 0.5365 * 1.05);
  CHECK(j["ok"] == true);
  CHECK(j["report"]["rate_exponent"].get<double>() == doctest::Approx(0.5).epsilon(0.2));
}

TEST_CASE("every scenario runs on a small configuration") {
  std::ostringstream log;
  for (const auto &name : scenario_names()) {
    ExperimentConfig c = default_config(name);
    c.M = 150;
    c.controls.steps = 50;
    c.controls.bisection = 3;
    c.controls.samples = 200;
    c.controls.centers = 4;
    c.controls.c_grid = {0.05, 5.0};
    c.controls.horizon = 1.0;
    if (name == "scaling")
      c.controls.t_check = 0.01;
    CAPTURE(name);
    const fs::path dir = scratch("all_" + name);
    CHECK(run_scenario(c, dir, log) == 0);
    CHECK(fs::exists(dir / "config.json"));
    CHECK(fs::exists(dir / "manifest.json"));
    CHECK_FALSE(fs::exists(dir / "error.json"));
  }
}
