#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "curvflow/app.hpp"
#include "curvflow/constructions.hpp"
#include "curvflow/io.hpp"

using namespace curvflow;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("curvflow_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("format_double round-trips") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> d(-1e3, 1e3);
  for (int i = 0; i < 1000; ++i) {
    const double x = d(rng) * std::pow(10.0, static_cast<int>(rng() % 40) - 20);
    CHECK(std::stod(io::format_double(x)) == x);
  }
}

TEST_CASE("profile CSV round trip") {
  const auto dir = scratch("profile");
  for (const auto& p : {elliptic_torus(256).profile, round_sphere(2.0, 3, 33).profile}) {
    io::write_profile(dir / "p.csv", p);
    const auto q = io::read_profile(dir / "p.csv");
    CHECK(q.size() == p.size());
    CHECK(q.dim() == p.dim());
    CHECK(q.topology() == p.topology());
    CHECK(q.source() == DerivativeSource::FiniteDifference);
    for (std::size_t i = 0; i < p.size(); ++i) {
      CHECK(q.u()[i] == p.u()[i]);
      CHECK(q.r()[i] == p.r()[i]);
      CHECK(q.z()[i] == p.z()[i]);
    }
    if (p.topology() == Topology::Torus) CHECK(q.period() == p.period());
  }
  fs::remove(dir / "p.json");
  CHECK_THROWS_AS(io::read_profile(dir / "p.csv"), io::IoError);
  io::write_text(dir / "bad.csv", "x,y\n1,2\n");
  io::write_text(dir / "bad.json", "{\"n\":2,\"topology\":\"sphere\"}");
  CHECK_THROWS_AS(io::read_profile(dir / "bad.csv"), io::IoError);
}

TEST_CASE("perturbation CSV leaves missing crossings empty") {
  PerturbationReport rep;
  PerturbationRow row;
  row.s = 1e-3;
  row.min_H = 0.25;
  row.runs.push_back({FlowVariant::VolumePreserving, "completed", -0.1, Crossing{2e-6}});
  row.runs.push_back({FlowVariant::AreaPreserving, "completed", 0.1, std::nullopt});
  rep.rows.push_back(row);
  const auto dir = scratch("pert");
  io::write_perturbation(dir / "vp.csv", rep, FlowVariant::VolumePreserving);
  io::write_perturbation(dir / "ap.csv", rep, FlowVariant::AreaPreserving);
  CHECK(slurp(dir / "vp.csv") == "s,minH_after_preflow,first_crossing_t\n0.001,0.25,1.9999999999999999e-06\n");
  CHECK(slurp(dir / "ap.csv") == "s,minH_after_preflow,first_crossing_t\n0.001,0.25,\n");
  CHECK_FALSE(rep.passed());
}

TEST_CASE("config: unknown keys, sections and wrong types are rejected") {
  app::VerifyOptions v;
  CHECK_THROWS_AS(app::load_config_text("[verify]\nfoo = 1\n", v), app::ConfigError);
  CHECK_THROWS_AS(app::load_config_text("[verfy]\n", v), app::ConfigError);
  CHECK_THROWS_AS(app::load_config_text("[verify]\ntorus_samples = \"many\"\n", v), app::ConfigError);
  CHECK_THROWS_AS(app::load_config_text("[verify]\ntorus_samples = 1.5\n", v), app::ConfigError);
  CHECK_THROWS_AS(app::load_config_text("[verify\n", v), app::ConfigError);

  app::load_config_text("out = \"x\"\n[verify]\ntorus_samples = 512\na = 1\ntolerance = 1e-3\n[evolve]\nt_end = 0.1\n", v);
  CHECK(v.torus_samples == 512);
  CHECK(v.a == 1.0);
  CHECK(v.tolerance == 1e-3);
}

TEST_CASE("config: resolved TOML reloads to itself") {
  app::PerturbOptions p;
  app::load_config_text("[perturb]\ns = [0, 1e-4]\nvariants = [\"vp\"]\n", p);
  app::resolve(p);
  CHECK(p.scale == 0.03);
  CHECK(p.stencil_order == 8);
  const auto text = app::resolved_toml(p);
  app::PerturbOptions q;
  app::load_config_text(text, q);
  app::resolve(q);
  CHECK(app::resolved_toml(q) == text);

  app::EvolveOptions e;
  e.example = "sphere";
  app::resolve(e);
  app::EvolveOptions f;
  app::load_config_text(app::resolved_toml(e), f);
  CHECK(app::resolved_toml(f) == app::resolved_toml(e));

  app::EvolveOptions both;
  both.example = "sphere";
  both.profile = "x.csv";
  CHECK_THROWS_AS(app::resolve(both), app::ConfigError);
  app::ConstructOptions c;
  c.example = "klein_bottle";
  CHECK_THROWS_AS(app::resolve(c), app::ConfigError);
}

TEST_CASE("commands write byte-identical run directories") {
  const auto a = scratch("run_a"), b = scratch("run_b");
  app::ConstructOptions c;
  c.example = "sphere";
  c.radius = 2.0;
  const auto ra = app::cmd_construct(c, a);
  const auto rb = app::cmd_construct(c, b);
  CHECK(ra.passed);
  CHECK(ra.dir.filename() == rb.dir.filename());
  for (const char* f : {"config.resolved.toml", "profile.csv", "profile.json", "curvature.csv", "report.json", "checks.csv"}) {
    CAPTURE(f);
    REQUIRE(fs::exists(ra.dir / f));
    CHECK(slurp(ra.dir / f) == slurp(rb.dir / f));
  }

  app::EvolveOptions e;
  e.profile = (ra.dir / "profile.csv").string();
  e.t_end = 1e-3;
  const auto ea = app::cmd_evolve(e, a);
  const auto eb = app::cmd_evolve(e, b);
  CHECK(ea.passed);
  CHECK(slurp(ea.dir / "trajectory.csv") == slurp(eb.dir / "trajectory.csv"));
  CHECK(slurp(ea.dir / "report.json") == slurp(eb.dir / "report.json"));
}

TEST_CASE("verify command exit status follows the report") {
  const auto root = scratch("verify");
  CHECK(app::cmd_verify({}, root).passed);
  app::VerifyOptions tight;
  tight.tolerance = 1e-15;
  const auto r = app::cmd_verify(tight, root);
  CHECK_FALSE(r.passed);
  CHECK(fs::exists(r.dir / "checks.csv"));
}
