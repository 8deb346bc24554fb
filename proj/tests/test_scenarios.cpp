#include <doctest.h>

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "nlwave/io.hpp"
#include "nlwave/scenarios.hpp"

using namespace nlwave;
using nlwave::scenarios::json;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag)
      : path(fs::temp_directory_path() /
             ("nlwave_test_" + tag + "_" + std::to_string(::getpid()))) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string sub(const std::string& name) const { return (path / name).string(); }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json parse_manifest(const fs::path& dir) {
  json m;
  std::ifstream in(dir / "manifest.json");
  REQUIRE(in);
  in >> m;
  return m;
}

json small_solitary_config(const std::string& out) {
  return json{
      {"kernel", {{"family", "sin"}, {"params", {{"eta", 1.0}}}}},
      {"grid", {{"L", 100.0}, {"N", 256}}},
      {"solver", {{"c", 1.08}, {"tol", 1e-8}}},
      {"output", {{"dir", out}}},
  };
}

}  // namespace

TEST_CASE("kernel flag parsing") {
  auto k = scenarios::parse_kernel_flag("sin:eta=1");
  CHECK(k.family == "sin_modulated");
  CHECK(k.params.at("eta") == 1.0);

  auto e = scenarios::parse_kernel_flag("exp");
  CHECK(e.family == "exponential");
  CHECK(e.params.empty());

  auto d = scenarios::parse_kernel_flag("dexp:eta1=1,eta2=1");
  CHECK(d.family == "double_exponential");
  CHECK(d.params.at("eta1") == 1.0);

  auto t = scenarios::parse_kernel_flag("tab:path=table.csv,r=2,c_bound=1.5");
  CHECK(t.family == "tabulated");
  CHECK(t.table_path == "table.csv");
  CHECK(t.r == 2.0);
  CHECK(t.c_bound == 1.5);

  CHECK_THROWS_AS(scenarios::parse_kernel_flag("warp:eta=1"), ConfigError);
  CHECK_THROWS_AS(scenarios::parse_kernel_flag("sin:eta"), ConfigError);
  CHECK_THROWS_AS(scenarios::parse_kernel_flag("sin:eta=abc"), ConfigError);
}

TEST_CASE("make_kernel validates family parameters") {
  scenarios::KernelConfig cfg;
  cfg.family = "sin_modulated";
  CHECK_THROWS_AS(scenarios::make_kernel(cfg), ConfigError);  // missing eta
  cfg.params["eta"] = 1.0;
  CHECK(scenarios::make_kernel(cfg).describe() == "sin_modulated(eta=1)");
  cfg.params["mu"] = 0.5;  // stray parameter
  CHECK_THROWS_AS(scenarios::make_kernel(cfg), ConfigError);
}

TEST_CASE("config resolution: defaults, overrides, strict keys") {
  // defaults land as documented
  auto cfg = scenarios::resolve_config(
      "solitary", json{{"kernel", {{"family", "exp"}}}}, json::object());
  CHECK(cfg.half_length == 100.0);
  CHECK(cfg.n_points == 1024);
  CHECK(cfg.c == 1.08);
  CHECK(cfg.gamma == 2.0);
  CHECK(cfg.tol == 1e-10);

  // flags win over the file
  json flags = {{"solver", {{"c", 1.2}}}, {"grid", {{"N", 256}}}};
  auto cfg2 = scenarios::resolve_config(
      "solitary", json{{"kernel", {{"family", "exp"}}},
                       {"solver", {{"c", 1.1}}}},
      flags);
  CHECK(cfg2.c == 1.2);
  CHECK(cfg2.n_points == 256);

  // scenario-specific defaults
  auto lim = scenarios::resolve_config("limit-ibq", json::object(), json::object());
  CHECK(lim.n_points == 64);
  CHECK(lim.etas == std::vector<Real>{10.0, 5.0, 1.0, 0.1});
  auto blw = scenarios::resolve_config("blowup", json::object(), json::object());
  CHECK(blw.half_length == 10.0);
  CHECK(blw.t_end == 3.0);
  CHECK(blw.etas == std::vector<Real>{1.0, 0.1, 0.01});

  // unknown keys are rejected wherever they appear
  CHECK_THROWS_WITH_AS(
      scenarios::resolve_config("solitary",
                                json{{"kernel", {{"family", "exp"}}},
                                     {"grid", {{"L", 10.0}, {"M", 4}}}},
                                json::object()),
      doctest::Contains("unknown key 'M'"), ConfigError);
  CHECK_THROWS_AS(scenarios::resolve_config(
                      "solitary",
                      json{{"kernel", {{"family", "exp"}}}, {"turbo", true}},
                      json::object()),
                  ConfigError);
  // scenario-foreign blocks are unknown keys too
  CHECK_THROWS_AS(scenarios::resolve_config(
                      "solitary",
                      json{{"kernel", {{"family", "exp"}}},
                           {"time", {{"dt", 0.01}}}},
                      json::object()),
                  ConfigError);

  // a kernel-consuming scenario without a kernel block names the key
  CHECK_THROWS_WITH_AS(
      scenarios::resolve_config("evolve", json::object(), json::object()),
      doctest::Contains("kernel"), ConfigError);

  // validation is total: a bad grid fails before anything runs
  CHECK_THROWS_AS(scenarios::resolve_config(
                      "solitary",
                      json{{"kernel", {{"family", "exp"}}},
                           {"grid", {{"L", 10.0}, {"N", 255}}}},
                      json::object()),
                  InvalidArgument);
}

TEST_CASE("solitary scenario emits profile, iterations, manifest") {
  TempDir tmp("solitary");
  auto cfg = scenarios::resolve_config("solitary",
                                       small_solitary_config(tmp.sub("out")),
                                       json::object());
  auto outcome = scenarios::run_scenario(cfg);
  CHECK(outcome.exit_code == 0);
  CHECK(outcome.status == "ok");

  json m = parse_manifest(tmp.sub("out"));
  CHECK(m["scenario"] == "solitary");
  CHECK(m["converged"] == true);
  // every emitted file is listed, and every listed file exists
  for (const auto& f : m["files"]) {
    CHECK(fs::exists(fs::path(tmp.sub("out")) / f.get<std::string>()));
  }
  CHECK(m["files"].size() == 2);

  // profile CSV parses back with the x,phi header
  auto [x, phi] = io::read_two_columns(fs::path(tmp.sub("out")) / "profile.csv");
  CHECK(x.size() == 256);
  CHECK(slurp(fs::path(tmp.sub("out")) / "profile.csv").substr(0, 6) == "x,phi\n");
}

TEST_CASE("scenario reruns are byte-identical, including from the manifest") {
  TempDir tmp("determinism");
  auto run = [&](const std::string& sub, const json& file_cfg) {
    json cfg_json = file_cfg;
    cfg_json["output"] = {{"dir", tmp.sub(sub)}};
    auto cfg = scenarios::resolve_config("gamma", cfg_json, json::object());
    REQUIRE(scenarios::run_scenario(cfg).exit_code == 0);
  };
  json base = {
      {"kernel", {{"family", "sin"}, {"params", {{"eta", 1.0}}}}},
      {"grid", {{"L", 100.0}, {"N", 256}}},
      {"solver", {{"c", 1.08}, {"tol", 1e-8}, {"max_iter", 200}}},
      {"sweep", {{"gammas", {1.5, 2.0}}}},
  };
  run("a", base);
  run("b", base);
  CHECK(slurp(fs::path(tmp.sub("a")) / "gamma.csv") ==
        slurp(fs::path(tmp.sub("b")) / "gamma.csv"));
  CHECK(slurp(fs::path(tmp.sub("a")) / "iterations_g0.csv") ==
        slurp(fs::path(tmp.sub("b")) / "iterations_g0.csv"));

  // replay from the manifest reproduces the same bytes in a fresh directory
  json manifest = parse_manifest(tmp.sub("a"));
  auto cfg = scenarios::resolve_config(
      "gamma", manifest, json{{"output", {{"dir", tmp.sub("c")}}}});
  REQUIRE(scenarios::run_scenario(cfg).exit_code == 0);
  CHECK(slurp(fs::path(tmp.sub("a")) / "gamma.csv") ==
        slurp(fs::path(tmp.sub("c")) / "gamma.csv"));
}

TEST_CASE("evolve scenario with reference initial data") {
  TempDir tmp("evolve");
  json cfg_json = {
      {"kernel", {{"family", "exp"}}},
      {"grid", {{"L", 100.0}, {"N", 256}}},
      {"time", {{"dt", 0.02}, {"T", 0.5}}},
      {"evolve",
       {{"sample_every", 10},
        {"initial", {{"type", "reference"}, {"family", "ibq"}}}}},
      {"output", {{"dir", tmp.sub("out")}}},
  };
  auto cfg = scenarios::resolve_config("evolve", cfg_json, json::object());
  auto outcome = scenarios::run_scenario(cfg);
  CHECK(outcome.exit_code == 0);

  json m = parse_manifest(tmp.sub("out"));
  CHECK(m["status"] == "ok");
  CHECK(fs::exists(fs::path(tmp.sub("out")) / "timeseries.csv"));
  // timeseries has the pinned header
  CHECK(slurp(fs::path(tmp.sub("out")) / "timeseries.csv")
            .starts_with("t,sup_norm,energy_total,energy_drift\n"));
  // 25 steps sampled every 10, plus t=0 and the final step
  int samples = 0;
  for (const auto& f : m["files"]) {
    if (f.get<std::string>().starts_with("samples/")) ++samples;
  }
  CHECK(samples == 4);
}

TEST_CASE("evolve scenario reports unexpected blow-up with exit code 2") {
  TempDir tmp("evolveblow");
  json cfg_json = {
      {"kernel", {{"family", "sin"}, {"params", {{"eta", 0.01}}}}},
      {"grid", {{"L", 10.0}, {"N", 256}}},
      {"time", {{"dt", 0.01}, {"T", 3.0}}},
      {"evolve",
       {{"sample_every", 50},
        {"blowup_threshold", 1e3},
        {"initial", {{"type", "csv"}, {"path", tmp.sub("init.csv")}}}}},
      {"output", {{"dir", tmp.sub("out")}}},
  };
  // write the blow-up data as the CSV initial condition
  Grid g(10.0, 256);
  PhysicalField bump = (-g.nodes().square() / 3.0).exp();
  PhysicalField phi = 4.0 * (2.0 * g.nodes().square() / 3.0 - 1.0) * bump;
  PhysicalField psi = (g.nodes().square() - 1.0) * bump;
  io::write_sample(tmp.sub("init.csv"), g.nodes(), phi, psi);

  auto cfg = scenarios::resolve_config("evolve", cfg_json, json::object());
  auto outcome = scenarios::run_scenario(cfg);
  CHECK(outcome.exit_code == 2);
  CHECK(outcome.status == "blowup");
  json m = parse_manifest(tmp.sub("out"));
  CHECK(m["status"] == "blowup");
  CHECK(m["crossing_time"].get<double>() > 1.0);
  CHECK(m["crossing_time"].get<double>() < 2.5);
}

TEST_CASE("blowup scenario emits hypothesis report and crossings") {
  TempDir tmp("blowup");
  json cfg_json = {
      {"grid", {{"N", 256}}},
      {"sweep", {{"etas", {0.1}}}},
      {"output", {{"dir", tmp.sub("out")}}},
  };
  auto cfg = scenarios::resolve_config("blowup", cfg_json, json::object());
  auto outcome = scenarios::run_scenario(cfg);
  CHECK(outcome.exit_code == 0);

  json hyp;
  {
    std::ifstream in(fs::path(tmp.sub("out")) / "hypothesis.json");
    REQUIRE(in);
    in >> hyp;
  }
  REQUIRE(hyp.size() == 1);
  CHECK(hyp[0]["eta"] == 0.1);
  CHECK(hyp[0]["energy_negative"] == true);
  CHECK(hyp[0]["pointwise_inequality_holds"] == true);
  CHECK(hyp[0]["crossing_time"].get<double>() > 1.0);
  CHECK(fs::exists(fs::path(tmp.sub("out")) / "blowup.csv"));
  CHECK(fs::exists(fs::path(tmp.sub("out")) / "timeseries_eta0.csv"));
}

TEST_CASE("blowup scenario small-data run: no crossing, nonnegative energy") {
  TempDir tmp("blowupsmall");
  json cfg_json = {
      {"grid", {{"N", 256}}},
      {"sweep", {{"etas", {0.1}}}},
      {"blowup", {{"phi_scale", 1e-3}, {"psi_scale", 0.0}}},
      {"output", {{"dir", tmp.sub("out")}}},
  };
  auto cfg = scenarios::resolve_config("blowup", cfg_json, json::object());
  REQUIRE(scenarios::run_scenario(cfg).exit_code == 0);
  json hyp;
  {
    std::ifstream in(fs::path(tmp.sub("out")) / "hypothesis.json");
    in >> hyp;
  }
  CHECK(hyp[0]["energy_negative"] == false);
  CHECK(hyp[0]["crossing_time"].is_null());
}

TEST_CASE("17-significant-digit CSV round-trips doubles exactly") {
  TempDir tmp("roundtrip");
  Grid g(1.0, 16);
  PhysicalField v(16);
  for (int i = 0; i < 16; ++i) v[i] = std::pow(1.0 / 3.0, i + 1) * 1e-7;
  io::write_field(tmp.sub("f.csv"), "x,u", g.nodes(), v);
  auto [x, u] = io::read_two_columns(tmp.sub("f.csv"));
  for (int i = 0; i < 16; ++i) {
    CHECK(x[i] == g.nodes()[i]);
    CHECK(u[i] == v[i]);
  }
}
