#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "pathsep/lp.hpp"

using namespace pathsep;

namespace {

LpModel max_single_var() {
  LpModel m;
  m.maximize = true;
  m.var_count = 1;
  m.objective = {Rational(1)};
  m.rows = {{{0, Rational(1)}}};
  m.senses = {RowSense::Le};
  m.rhs = {Rational(3)};
  return m;
}

SimplexOptions direct_only() {
  SimplexOptions opt;
  opt.lazy_column_threshold = 1000000;
  opt.transpose_threshold = 1000000;
  return opt;
}

// min c.x over >= rows with nonnegative data; every row gets a positive entry
LpModel random_tall_min(std::mt19937& rng, std::uint32_t rows, std::uint32_t vars) {
  LpModel m;
  m.maximize = false;
  m.var_count = vars;
  for (std::uint32_t j = 0; j < vars; ++j) m.objective.push_back(Rational(1 + rng() % 4));
  for (std::uint32_t r = 0; r < rows; ++r) {
    std::vector<std::pair<std::uint32_t, Rational>> row;
    for (std::uint32_t j = 0; j < vars; ++j) {
      std::uint32_t c = rng() % 3;
      if (c) row.emplace_back(j, Rational(c));
    }
    if (row.empty()) row.emplace_back(rng() % vars, Rational(1));
    m.rows.push_back(std::move(row));
    m.senses.push_back(RowSense::Ge);
    m.rhs.push_back(Rational(1 + rng() % 5));
  }
  return m;
}

// max c.x over <= rows; every variable consumes some row budget, so the
// optimum is finite
LpModel random_wide_max(std::mt19937& rng, std::uint32_t rows, std::uint32_t vars) {
  LpModel m;
  m.maximize = true;
  m.var_count = vars;
  m.rows.assign(rows, {});
  for (std::uint32_t j = 0; j < vars; ++j) {
    m.objective.push_back(Rational(1 + rng() % 3));
    m.rows[rng() % rows].emplace_back(j, Rational(1 + rng() % 2));
  }
  for (std::uint32_t r = 0; r < rows; ++r) {
    m.senses.push_back(RowSense::Le);
    m.rhs.push_back(Rational(3 + rng() % 7));
  }
  return m;
}

}  // namespace

TEST_CASE("single variable bound") {
  LpSolution s = simplex_solve(max_single_var());
  CHECK(s.value == 3);
  CHECK(s.x == std::vector<Rational>{Rational(3)});
}

TEST_CASE("infeasible and unbounded models throw") {
  LpModel inf = max_single_var();
  inf.rhs = {Rational(-1)};
  CHECK_THROWS_AS(simplex_solve(inf), LpInfeasible);

  LpModel unb;
  unb.maximize = true;
  unb.var_count = 1;
  unb.objective = {Rational(1)};
  CHECK_THROWS_AS(simplex_solve(unb), LpUnbounded);

  LpModel unb2 = max_single_var();
  unb2.senses = {RowSense::Ge};
  unb2.rhs = {Rational(1)};
  CHECK_THROWS_AS(simplex_solve(unb2), LpUnbounded);
}

TEST_CASE("malformed models are rejected") {
  LpModel bad = max_single_var();
  bad.objective.clear();
  CHECK_THROWS_AS(simplex_solve(bad), Error);
}

TEST_CASE("minimization and equality rows") {
  LpModel m;
  m.maximize = false;
  m.var_count = 2;
  m.objective = {Rational(2), Rational(3)};
  m.rows = {{{0, Rational(1)}, {1, Rational(1)}}, {{1, Rational(1)}}};
  m.senses = {RowSense::Ge, RowSense::Ge};
  m.rhs = {Rational(4), Rational(1)};
  CHECK(simplex_solve(m).value == 9);  // x=3, y=1

  LpModel e;
  e.maximize = true;
  e.var_count = 2;
  e.objective = {Rational(1), Rational(1)};
  e.rows = {{{0, Rational(1)}, {1, Rational(1)}}, {{0, Rational(1)}}};
  e.senses = {RowSense::Eq, RowSense::Le};
  e.rhs = {Rational(5), Rational(2)};
  LpSolution s = simplex_solve(e);
  CHECK(s.value == 5);
  CHECK(s.x[0] + s.x[1] == 5);
}

TEST_CASE("fractional optimum is exact") {
  LpModel m;
  m.maximize = true;
  m.var_count = 2;
  m.objective = {Rational(1), Rational(1)};
  m.rows = {{{0, Rational(1)}, {1, Rational(2)}}, {{0, Rational(3)}, {1, Rational(1)}}};
  m.senses = {RowSense::Le, RowSense::Le};
  m.rhs = {Rational(4), Rational(6)};
  LpSolution s = simplex_solve(m);
  CHECK(s.value == Rational(14) / 5);
  CHECK(s.x[0] == Rational(8) / 5);
  CHECK(s.x[1] == Rational(6) / 5);
}

TEST_CASE("solution verifier rejects bad certificates") {
  LpModel m = max_single_var();
  CHECK(verify_lp_solution(m, {Rational(3), {Rational(3)}}));
  CHECK_FALSE(verify_lp_solution(m, {Rational(3), {}}));                // wrong arity
  CHECK_FALSE(verify_lp_solution(m, {Rational(-1), {Rational(-1)}}));  // negative var
  CHECK_FALSE(verify_lp_solution(m, {Rational(4), {Rational(4)}}));    // violated row
  CHECK_FALSE(verify_lp_solution(m, {Rational(2), {Rational(3)}}));    // value mismatch
}

TEST_CASE("transposed route matches the direct solve on tall models") {
  SimplexOptions routed;
  routed.transpose_threshold = 50;  // engage the transpose on test-sized models
  std::mt19937 rng(501);
  for (int it = 0; it < 3; ++it) {
    LpModel m = random_tall_min(rng, 100, 4);
    LpSolution via_transpose = simplex_solve(m, routed);
    LpSolution direct = simplex_solve(m, direct_only());
    INFO("draw " << it);
    CHECK(via_transpose.value == direct.value);
    CHECK(verify_lp_solution(m, via_transpose));
  }
}

TEST_CASE("lazy column route matches the direct solve on wide models") {
  SimplexOptions routed;
  routed.lazy_column_threshold = 20;
  std::mt19937 rng(502);
  for (int it = 0; it < 3; ++it) {
    LpModel m = random_wide_max(rng, 6, 100);
    LpSolution lazy = simplex_solve(m, routed);
    LpSolution direct = simplex_solve(m, direct_only());
    INFO("draw " << it);
    CHECK(lazy.value == direct.value);
    CHECK(verify_lp_solution(m, lazy));
  }
}
