#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "helpers.hpp"
#include "pathsep/reductions.hpp"
#include "pathsep/sfp.hpp"

using namespace pathsep;

namespace {

StInstance diamond() {
  return StInstance{Digraph::make(4, {{0, 1}, {0, 2}, {1, 3}, {2, 3}}), 0, 3};
}

StInstance three_arc_path() {
  return StInstance{Digraph::make(4, {{0, 1}, {1, 2}, {2, 3}}), 0, 3};
}

}  // namespace

TEST_CASE("covering pair finds the lowest covered pair") {
  PairSet ps = PairSet::make({{0, 2}, {1, 3}});
  CHECK(covering_pair({0, 2}, ps) == std::pair<ArcId, ArcId>{0, 2});
  CHECK(covering_pair({0, 3}, ps) == std::nullopt);
  CHECK(covering_pair({1, 3}, ps) == std::pair<ArcId, ArcId>{1, 3});
}

TEST_CASE("separation check on the small bunch graph") {
  StInstance bunch = gen_bunch(2, 2);  // arcs 0,1 then 2,3
  PairSet cross = cross_bunch_pairs(2);
  REQUIRE(cross.pairs.size() == 4);
  CHECK(separation_check(bunch, cross).separates);

  PairSet missing = PairSet::make({{0, 2}, {0, 3}, {1, 2}});
  SeparationVerdict v = separation_check(bunch, missing);
  REQUIRE_FALSE(v.separates);
  CHECK(v.witness.value() == ArcPath{1, 3});  // first uncovered path

  // with the cross pairs every branch dies after one accepted extension, so
  // the budget needs an uncovered graph to trip
  CHECK_THROWS_AS(separation_check(bunch, PairSet{}, 1), BudgetExceeded);
}

TEST_CASE("separation check is vacuous without s-t paths") {
  Digraph g = Digraph::make(3, {{0, 1}});
  StInstance inst{std::move(g), 0, 2};
  CHECK(separation_check(inst, PairSet{}).separates);
}

TEST_CASE("pair solver on fixed instances") {
  SfpResult diamond_r = solve_min_pairs(diamond());
  CHECK(diamond_r.k == 2);
  CHECK(diamond_r.pairs == PairSet::make({{0, 2}, {1, 3}}));

  SfpResult path_r = solve_min_pairs(three_arc_path());
  CHECK(path_r.k == 1);

  SfpResult bunch_r = solve_min_pairs(gen_bunch(2, 2));
  CHECK(bunch_r.k == 4);
  CHECK(separation_check(gen_bunch(2, 2), bunch_r.pairs).separates);
}

TEST_CASE("pair solver rejects inseparable instances") {
  Digraph g = Digraph::make(3, {{0, 2}, {0, 1}, {1, 2}});
  StInstance inst{std::move(g), 0, 2};
  CHECK_THROWS_AS(solve_min_pairs(inst), Inseparable);
}

TEST_CASE("pair solver on a disconnected instance needs no pairs") {
  Digraph g = Digraph::make(3, {{0, 1}});
  StInstance inst{std::move(g), 0, 2};
  SfpResult r = solve_min_pairs(inst);
  CHECK(r.k == 0);
  CHECK(r.pairs.pairs.empty());
}

TEST_CASE("budget exhaustion is reported") {
  SfpBudget tiny;
  tiny.check_nodes = 1;
  CHECK_THROWS_AS(solve_min_pairs(gen_bunch(2, 2), tiny), BudgetExceeded);
}

TEST_CASE("all optimal pair sets are enumerated") {
  auto singles = enumerate_min_pairs(three_arc_path());
  REQUIRE(singles.size() == 3);
  CHECK(singles[0] == PairSet::make({{0, 1}}));
  CHECK(singles[1] == PairSet::make({{0, 2}}));
  CHECK(singles[2] == PairSet::make({{1, 2}}));

  auto diamonds = enumerate_min_pairs(diamond());
  REQUIRE(diamonds.size() == 1);
  CHECK(diamonds[0] == PairSet::make({{0, 2}, {1, 3}}));
}

TEST_CASE("brute force agrees with the hitting set solver on seeded dags") {
  std::mt19937 rng(23);
  for (int it = 0; it < 15; ++it) {
    StInstance inst = testgen::random_trimmed_dag(rng, 6, 8);
    auto brute = brute_force_min_pairs(inst, 8);
    REQUIRE(brute.has_value());
    SfpResult fast = solve_min_pairs(inst);
    INFO("draw " << it);
    CHECK(fast.k == brute->k);
    CHECK(separation_check(inst, fast.pairs).separates);
    auto all_fast = enumerate_min_pairs(inst);
    auto all_brute = brute_force_all_min_pairs(inst, 8);
    CHECK(all_fast == all_brute);
  }
}

TEST_CASE("brute force respects its size cap") {
  CHECK_FALSE(brute_force_min_pairs(gen_bunch(2, 2), 3).has_value());
  auto found = brute_force_min_pairs(gen_bunch(2, 2), 4);
  REQUIRE(found.has_value());
  CHECK(found->k == 4);
}
