#include <doctest.h>

#include "tancone/setmodels.hpp"
#include "tancone/verify_props.hpp"

using namespace tancone;

TEST_CASE("suite names and descriptions") {
  const std::vector<std::string> names = prop_suite_names();
  CHECK(names == std::vector<std::string>{"pr2", "pr3", "pr5a", "pr6", "pr8", "pr9", "pr10", "cor1"});
  for (const std::string& n : names) CHECK_FALSE(prop_suite_description(n).empty());
  CHECK(prop_suite_description("bogus").empty());
}

TEST_CASE("unknown suites are rejected") {
  CHECK_THROWS_AS(verify_props({"bogus"}, {benchmark_set("cusp")}), std::invalid_argument);
  CHECK_THROWS_AS(verify_props({"pr2", "pr99"}, {benchmark_set("cusp")}), std::invalid_argument);
}

TEST_CASE("coarse suites find no contradictions") {
  PropsConfig cfg;
  cfg.resolution = 8;
  cfg.maxCollections = 1;

  const PropsReport half = verify_props({"all"}, {benchmark_set("half-plane")}, cfg);
  CHECK(half.tallies.size() == prop_suite_names().size());
  CHECK(half.contradictions() == 0);
  for (const SuiteTally& t : half.tallies) {
    CAPTURE(t.suite);
    CHECK(t.set == "half-plane");
    CHECK(t.checks > 0);
    CHECK(t.checks == t.passed + t.contradictions + t.inconclusive + t.vacuous);
  }

  const PropsReport cusp = verify_props({"pr5a", "pr8"}, {benchmark_set("cusp")}, cfg);
  REQUIRE(cusp.tallies.size() == 2);
  CHECK(cusp.tallies[0].suite == "pr5a");
  CHECK(cusp.contradictions() == 0);
}

TEST_CASE("suite runs are deterministic") {
  PropsConfig cfg;
  cfg.resolution = 8;
  cfg.maxCollections = 1;
  const PropsReport a = verify_props({"cor1"}, {benchmark_set("parabola")}, cfg);
  const PropsReport b = verify_props({"cor1"}, {benchmark_set("parabola")}, cfg);
  REQUIRE(a.tallies.size() == 1);
  CHECK(a.tallies[0].checks == b.tallies[0].checks);
  CHECK(a.tallies[0].passed == b.tallies[0].passed);
  CHECK(a.tallies[0].inconclusive == b.tallies[0].inconclusive);
  CHECK(a.tallies[0].details == b.tallies[0].details);
}
