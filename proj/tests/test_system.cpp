#include <catch2/catch_amalgamated.hpp>
#include <cstdio>
#include <filesystem>
#include <random>

#include "presched/system.hpp"

using namespace presched;

namespace {

std::vector<Generator> table1_generators() {
  return {
      {"G2", "2", 15.0, 20.0, 10.0, 150.0, 150.0, 150.0},
      {"G1", "1", 5.0, 30.0, -20.0, 60.0, 60.0, 60.0},
  };
}

std::vector<Line> table1_lines() {
  return {{"L1", "1", "3", kInf}, {"L2", "2", "3", kInf}};
}

}  // namespace

TEST_CASE("canonical merit order sorts by cost") {
  auto sys = build_system(table1_generators(), table1_lines());
  REQUIRE(sys.generators.size() == 2);
  CHECK(sys.generators[0].id == "G1");
  CHECK(sys.generators[1].id == "G2");
  CHECK(total_capacity(sys) == Catch::Approx(210.0));
}

TEST_CASE("cost ties break by id") {
  std::vector<Generator> gens = {
      {"b", "n", 10.0, 20.0, 5.0, 50.0, 50.0, 50.0},
      {"a", "n", 10.0, 20.0, 5.0, 50.0, 50.0, 50.0},
  };
  auto sys = build_system(gens, {});
  CHECK(sys.generators[0].id == "a");
  CHECK(sys.generators[1].id == "b");
}

TEST_CASE("validation errors") {
  auto bad_cap = table1_generators();
  bad_cap[0].capacity = 0.0;
  CHECK_THROWS_MATCHES(build_system(bad_cap, {}), Error,
                       Catch::Matchers::MessageMatches(
                           Catch::Matchers::ContainsSubstring("NonPositiveCapacity")));

  auto bad_costs = table1_generators();
  bad_costs[0].up_cost = bad_costs[0].down_cost;
  CHECK_THROWS_MATCHES(build_system(bad_costs, {}), Error,
                       Catch::Matchers::MessageMatches(
                           Catch::Matchers::ContainsSubstring("UpCostNotAboveDownCost")));

  CHECK_THROWS_MATCHES(build_system({}, {}), Error,
                       Catch::Matchers::MessageMatches(
                           Catch::Matchers::ContainsSubstring("EmptySystem")));

  auto dup = table1_generators();
  dup[0].id = dup[1].id;
  CHECK_THROWS_AS(build_system(dup, {}), Error);

  CHECK_THROWS_AS(build_system(table1_generators(), {{"L", "3", "3", 10.0}}), Error);
}

TEST_CASE("build is idempotent") {
  auto sys = build_system(table1_generators(), table1_lines());
  auto again = build_system(sys.generators, sys.lines);
  REQUIRE(again.generators.size() == sys.generators.size());
  for (std::size_t g = 0; g < sys.generators.size(); ++g)
    CHECK(again.generators[g].id == sys.generators[g].id);
}

TEST_CASE("merit order holds on random systems") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> cost(1.0, 20.0);
  for (int t = 0; t < 50; ++t) {
    std::vector<Generator> gens;
    int n = 2 + static_cast<int>(rng() % 8);
    for (int g = 0; g < n; ++g) {
      double c = (rng() % 3 == 0) ? 10.0 : cost(rng);  // provoke ties
      gens.push_back({"g" + std::to_string(g), "n", c, c + 30.0, c - 5.0, 10.0, 10.0, 10.0});
    }
    auto sys = build_system(gens, {});
    for (std::size_t g = 1; g < sys.generators.size(); ++g) {
      const auto& a = sys.generators[g - 1];
      const auto& b = sys.generators[g];
      CHECK(a.marginal_cost <= b.marginal_cost);
      if (a.marginal_cost == b.marginal_cost) CHECK(a.id < b.id);
    }
  }
}

TEST_CASE("system csv round trip") {
  namespace fs = std::filesystem;
  auto dir = fs::temp_directory_path() / "presched_sys_test";
  fs::create_directories(dir);
  auto sys = build_system(table1_generators(), table1_lines());
  save_system(sys, dir.string());
  auto loaded = load_system(dir.string());
  REQUIRE(loaded.generators.size() == sys.generators.size());
  for (std::size_t g = 0; g < sys.generators.size(); ++g) {
    CHECK(loaded.generators[g].id == sys.generators[g].id);
    CHECK(loaded.generators[g].marginal_cost == sys.generators[g].marginal_cost);
    CHECK(loaded.generators[g].down_cost == sys.generators[g].down_cost);
  }
  REQUIRE(loaded.lines.size() == 2);
  CHECK(std::isinf(loaded.lines[0].capacity));  // empty Fmax = unbounded
  fs::remove_all(dir);
}
