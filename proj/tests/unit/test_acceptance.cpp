#include <vector>

#include "doctest.h"
#include "nsclab/acceptance.hpp"
#include "nsclab/errors.hpp"

using namespace nsclab;

TEST_CASE("criteria selection") {
  CHECK(parse_criteria("all").size() == kCriteria);
  CHECK(parse_criteria("3, 1,10") == std::vector<int>{3, 1, 10});
  CHECK_THROWS_AS(parse_criteria("0"), ConfigKeyError);
  CHECK_THROWS_AS(parse_criteria("11"), ConfigKeyError);
  CHECK_THROWS_AS(parse_criteria("x"), ConfigKeyError);
}

TEST_CASE("summary line format") {
  CriterionResult r;
  r.id = 4;
  r.name = "upper decay rates";
  r.pass = true;
  r.seconds = 2.94;
  r.summary = "ok";
  CHECK(summary_line(r) == "[PASS]  4 upper decay rates (2.94 s): ok");
  r.pass = false;
  CHECK(summary_line(r).rfind("[FAIL]", 0) == 0);
}

TEST_CASE("fast criteria pass for a different relaxation time") {
  ExperimentConfig cfg;
  cfg.physical.tau = 0.5;
  const std::vector<int> ids{1, 2, 3, 10};
  const auto rep = run_acceptance_suite(cfg, ids);
  REQUIRE(rep.criteria.size() == 4);
  for (const auto& r : rep.criteria) {
    INFO(summary_line(r));
    CHECK(r.pass);
    CHECK(r.error.empty());
  }
  CHECK(rep.to_json()["config"]["physical"]["tau"].get<double>() == 0.5);
}

TEST_CASE("invalid parameters are rejected up front") {
  ExperimentConfig cfg;
  cfg.physical.kappa = -1.0;
  CHECK_THROWS_AS(run_criterion(1, cfg), InvalidParams);
  CHECK_THROWS_AS(run_acceptance_suite(cfg), InvalidParams);
}

TEST_CASE("unknown criterion id is recorded as a failure") {
  const auto r = run_criterion(12, ExperimentConfig{});
  CHECK_FALSE(r.pass);
  CHECK_FALSE(r.error.empty());
}
