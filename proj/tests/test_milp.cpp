#include <catch2/catch_amalgamated.hpp>
#include <random>

#include "presched/milp.hpp"

using namespace presched;
using namespace presched::lp;

TEST_CASE("milp without binaries degenerates to the LP") {
  MilpProblem mp;
  int x = mp.lp.add_var("x", 0.0, 10.0, -1.0);
  mp.lp.add_row({{x, 1.0}}, Sense::le, 4.0);
  auto sol = solve_milp(mp);
  REQUIRE(sol.status == Status::optimal);
  CHECK(sol.objective == Catch::Approx(-4.0));
}

TEST_CASE("tiny knapsack") {
  // max 3a + 2b s.t. a + b <= 1  ->  min -3a - 2b
  MilpProblem mp;
  int a = mp.lp.add_var("a", 0.0, 1.0, -3.0);
  int b = mp.lp.add_var("b", 0.0, 1.0, -2.0);
  mp.lp.add_row({{a, 1.0}, {b, 1.0}}, Sense::le, 1.0);
  mp.binaries = {a, b};
  auto sol = solve_milp(mp);
  REQUIRE(sol.status == Status::optimal);
  CHECK(sol.objective == Catch::Approx(-3.0));
  CHECK(sol.values[a] == Catch::Approx(1.0).margin(1e-6));
  CHECK(sol.values[b] == Catch::Approx(0.0).margin(1e-6));
}

namespace {

// exhaustive oracle: try every 0/1 assignment as a fixed LP
double brute_force(const MilpProblem& mp) {
  int nb = static_cast<int>(mp.binaries.size());
  double best = kInf;
  for (int mask = 0; mask < (1 << nb); ++mask) {
    LpProblem lp = mp.lp;
    bool chain_ok = true;
    for (int k = 0; k < nb; ++k) {
      double v = (mask >> k) & 1 ? 1.0 : 0.0;
      lp.vars[mp.binaries[k]].lb = lp.vars[mp.binaries[k]].ub = v;
    }
    for (const auto& chain : mp.chains)
      for (std::size_t i = 1; i < chain.size(); ++i) {
        double prev = lp.vars[chain[i - 1]].lb, cur = lp.vars[chain[i]].lb;
        if (cur > prev) chain_ok = false;
      }
    if (!chain_ok) continue;
    auto sol = solve_lp(lp);
    if (sol.status == Status::optimal) best = std::min(best, sol.objective);
  }
  return best;
}

MilpProblem random_milp(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> coef(-4.0, 4.0);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  MilpProblem mp;
  int nb = 3 + static_cast<int>(rng() % 6);
  int nc = 1 + static_cast<int>(rng() % 3);
  for (int j = 0; j < nb; ++j) mp.lp.add_var("u" + std::to_string(j), 0.0, 1.0, coef(rng));
  int y = mp.lp.add_var("y", 0.0, 5.0, coef(rng));
  for (int i = 0; i < nc; ++i) {
    std::vector<LpProblem::Entry> row;
    for (int j = 0; j < nb; ++j)
      if (u01(rng) < 0.6) row.push_back({j, coef(rng)});
    row.push_back({y, 1.0});
    // rhs chosen so that all-zero binaries with y interior stays feasible
    mp.lp.add_row(std::move(row), Sense::le, 2.0 + 3.0 * u01(rng));
  }
  for (int j = 0; j < nb; ++j) mp.binaries.push_back(j);
  if (u01(rng) < 0.5 && nb >= 3) mp.chains.push_back({0, 1, 2});
  return mp;
}

}  // namespace

TEST_CASE("branch and bound matches exhaustive enumeration") {
  std::mt19937_64 rng(99);
  for (int t = 0; t < 25; ++t) {
    MilpProblem mp = random_milp(rng);
    if (!mp.chains.empty()) {
      // chain rows must accompany the hint
      for (std::size_t i = 1; i < mp.chains[0].size(); ++i)
        mp.lp.add_row({{mp.chains[0][i], 1.0}, {mp.chains[0][i - 1], -1.0}}, Sense::le, 0.0);
    }
    double oracle = brute_force(mp);
    auto sol = solve_milp(mp, {.gap_tol = 1e-9});
    REQUIRE(sol.status == Status::optimal);
    CHECK(nearly_equal(sol.objective, oracle, 1e-6));
    CHECK(sol.objective >= sol.best_bound - 1e-6 * std::max(1.0, std::abs(sol.objective)));
    // integral solution
    for (int j : mp.binaries) {
      double v = sol.values[j];
      CHECK(std::abs(v - std::round(v)) <= 1e-6);
    }
  }
}

TEST_CASE("chain propagation prunes inconsistent fixings") {
  // u0 >= u1 >= u2 with profit on u2 only: optimum sets the whole chain to 1
  MilpProblem mp;
  int u0 = mp.lp.add_var("u0", 0.0, 1.0, 0.1);
  int u1 = mp.lp.add_var("u1", 0.0, 1.0, 0.1);
  int u2 = mp.lp.add_var("u2", 0.0, 1.0, -1.0);
  mp.lp.add_row({{u1, 1.0}, {u0, -1.0}}, Sense::le, 0.0);
  mp.lp.add_row({{u2, 1.0}, {u1, -1.0}}, Sense::le, 0.0);
  mp.binaries = {u0, u1, u2};
  mp.chains = {{u0, u1, u2}};
  auto sol = solve_milp(mp);
  REQUIRE(sol.status == Status::optimal);
  CHECK(sol.objective == Catch::Approx(-0.8));
  CHECK(sol.values[u0] == Catch::Approx(1.0).margin(1e-6));
}

TEST_CASE("invalid binary bounds are rejected") {
  MilpProblem mp;
  int x = mp.lp.add_var("x", 0.0, 2.0, 1.0);
  mp.binaries = {x};
  CHECK_THROWS_AS(solve_milp(mp), Error);
}

TEST_CASE("fixed feasible assignment upper-bounds the milp optimum") {
  std::mt19937_64 rng(1234);
  for (int t = 0; t < 10; ++t) {
    MilpProblem mp = random_milp(rng);
    mp.chains.clear();
    auto sol = solve_milp(mp, {.gap_tol = 1e-9});
    REQUIRE(sol.status == Status::optimal);
    // any fixed assignment: here all-zero, feasible by construction
    LpProblem fixed = mp.lp;
    for (int j : mp.binaries) fixed.vars[j].lb = fixed.vars[j].ub = 0.0;
    auto fsol = solve_lp(fixed);
    REQUIRE(fsol.status == Status::optimal);
    CHECK(sol.objective <= fsol.objective + 1e-7 * std::max(1.0, std::abs(fsol.objective)));
  }
}
