#include <cmath>
#include <string>

#include "doctest.h"
#include "nsclab/config.hpp"
#include "nsclab/errors.hpp"

using namespace nsclab;

TEST_CASE("empty config keeps defaults") {
  const auto cfg = parse_config("");
  CHECK(cfg.physical.tau == PhysicalParams::defaults().tau);
  CHECK(cfg.grid.N == 16);
  CHECK(cfg.time.times == "log:1e2:1e5:40");
}

TEST_CASE("sections and keys are read") {
  const auto cfg = parse_config(
      "[physical]\ntau = 0.5\nkappa=2\n"
      "[data]\nkind = gaussian\namplitudes = 1, 0.5, 0, 0\nseed = 7\n"
      "[grid]\nN = 32\n"
      "[requests]\ncomponents = n+psi\nk = 0,3\nell = 1.25\n");
  CHECK(cfg.physical.tau == 0.5);
  CHECK(cfg.physical.kappa == 2.0);
  CHECK(cfg.data.kind == "gaussian");
  CHECK(cfg.data.amplitudes[1] == 0.5);
  CHECK(cfg.data.seed == 7u);
  CHECK(cfg.grid.N == 32);
  const auto req = make_requests(cfg.requests);
  REQUIRE(req.size() == 3);
  CHECK(req[1].k == 3);
  CHECK(req[2].ell == 1.25);
}

TEST_CASE("unknown keys and bad values name the offending key") {
  try {
    parse_config("[physical]\ntua = 1\n");
    FAIL("no throw");
  } catch (const ConfigKeyError& e) {
    CHECK(e.section() == "physical");
    CHECK(e.key() == "tua");
    CHECK(std::string(e.what()).find("tua") != std::string::npos);
  }
  try {
    parse_config("[grid]\nN = sixteen\n");
    FAIL("no throw");
  } catch (const ConfigKeyError& e) {
    CHECK(e.key() == "N");
  }
  CHECK_THROWS_AS(parse_config("[nope]\nx = 1\n"), ConfigKeyError);
  CHECK_THROWS_AS(parse_config("[time]\ndt = 0.1x\n"), ConfigKeyError);
}

TEST_CASE("overrides use section.key=value") {
  ExperimentConfig cfg;
  apply_override(cfg, "physical.tau=0.25");
  apply_override(cfg, "time.times = lin:0:1:3");
  CHECK(cfg.physical.tau == 0.25);
  CHECK(cfg.time.times == "lin:0:1:3");
  CHECK_THROWS_AS(apply_override(cfg, "tau=1"), ConfigKeyError);
  CHECK_THROWS_AS(apply_override(cfg, "physical.tau"), ConfigKeyError);
  CHECK_THROWS_AS(apply_override(cfg, "grid.M=3"), ConfigKeyError);
}

TEST_CASE("json round trip through overrides") {
  ExperimentConfig cfg;
  apply_override(cfg, "grid.L=2.5");
  const auto j = to_json(cfg);
  CHECK(j["grid"]["L"].get<double>() == 2.5);
  CHECK(j["physical"]["tau"].get<double>() == cfg.physical.tau);
  CHECK(j.contains("requests"));
}

TEST_CASE("time grids") {
  const auto lg = parse_times("log:1:100:3");
  REQUIRE(lg.size() == 3);
  CHECK(lg[1] == doctest::Approx(10.0));
  const auto ln = parse_times("lin:0:1:5");
  CHECK(ln[2] == doctest::Approx(0.5));
  CHECK(parse_times("1, 2.5, 4").at(1) == 2.5);
  CHECK_THROWS(parse_times("log:0:10:4"));
  CHECK_THROWS(parse_times("lin:0:1"));
  CHECK_THROWS(parse_times(""));
}

TEST_CASE("nonlinear config mirrors the sections") {
  ExperimentConfig cfg;
  apply_override(cfg, "grid.N=8");
  apply_override(cfg, "time.cfl=0.3");
  apply_override(cfg, "data.amplitude=0.01");
  const auto nc = make_nonlinear_config(cfg);
  CHECK(nc.N == 8);
  CHECK(nc.cfl == 0.3);
  CHECK(nc.amplitude == 0.01);
  CHECK(nc.data.seed == cfg.data.seed);
}

TEST_CASE("radial data kinds") {
  DataSection d;
  d.kind = "zero";
  CHECK_NOTHROW(make_radial_data(d));
  d.kind = "bogus";
  CHECK_THROWS_AS(make_radial_data(d), ConfigKeyError);
}
