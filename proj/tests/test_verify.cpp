#include "doctest.h"

#include "g2inst/verify.hpp"

#include <cmath>

using namespace g2inst;

TEST_CASE("suite registry") {
  const auto& names = verify::suite_names();
  CHECK(names.size() == 7);
  CHECK_THROWS_AS(verify::run_suite("nope"), std::invalid_argument);
  CHECK(verify::run_suite("calculus").suite == "calculus");
}

TEST_CASE("passing suites") {
  for (const char* name : {"calculus", "metrics", "closed-forms", "energy", "bubbling"}) {
    const auto r = verify::run_suite(name);
    CAPTURE(name);
    CHECK(r.pass());
    CHECK_FALSE(r.checks.empty());
  }
}

TEST_CASE("seeds suite: closed-form matches pass, one indicial table does not") {
  const auto r = verify::seeds_suite();
  REQUIRE(r.checks.size() == 7);
  for (std::size_t k = 0; k < 4; ++k) CHECK(r.checks[k].pass);
  CHECK(r.checks[4].pass);
  CHECK_FALSE(r.checks[5].pass);
  CHECK(r.checks[5].detail.find("{-8, -6, -2, 0}") != std::string::npos);
  CHECK(r.checks[6].pass);
}

TEST_CASE("sasaki suite flags only the d alpha sign") {
  const auto r = verify::sasaki_suite();
  std::size_t failed = 0;
  for (const auto& c : r.checks)
    if (!c.pass) {
      ++failed;
      CHECK(c.name == "d alpha = -2 omega_1");
    }
  CHECK(failed == 1);
}

TEST_CASE("q20 coefficient") { CHECK(std::abs(verify::q20_numeric() / 2592.0 - 1.0) < 1e-4); }

TEST_CASE("energy suite honours its options") {
  verify::Options o;
  o.x1 = 1e3;
  const auto r = verify::energy_suite(o);
  CHECK(r.checks[0].name.find("x1 = 1000") != std::string::npos);
  CHECK(r.checks[0].detail.find("E(100)") != std::string::npos);
}

TEST_CASE("report formats") {
  verify::SuiteReport r;
  r.suite = "demo";
  r.checks.push_back({"first", 0.5, 1.0, true, ""});
  r.checks.push_back({"second", 2.0, 1.0, false, "too big"});
  CHECK_FALSE(r.pass());
  const auto j = verify::to_json(r);
  CHECK(j["schema_version"] == 1);
  CHECK(j["pass"] == false);
  CHECK(j["checks"][1]["detail"] == "too big");
  const auto t = verify::format_table(r);
  CHECK(t.find("PASS  first") == 0);
  CHECK(t.find("FAIL  second") != std::string::npos);
  CHECK(t.find("demo: FAIL") != std::string::npos);
}
