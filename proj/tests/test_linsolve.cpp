#include <doctest.h>

#include "support.hpp"

using namespace udpn;

namespace {

LinearSystem two_vars() {
  LinearSystem s;
  s.add_var("x");
  s.add_var("y");
  return s;
}

} // namespace

TEST_CASE("minimize a small LP") {
  // min -x - y  s.t. x + 2y <= 4, 3x + y <= 6
  LinearSystem s = two_vars();
  s.add({{{0, 1}, {1, 2}}, Rel::Le, 4});
  s.add({{{0, 3}, {1, 1}}, Rel::Le, 6});
  LpStats st;
  LpResult r = minimize(s, {{0, -1}, {1, -1}}, &st);
  REQUIRE(r.status == LpStatus::Optimal);
  CHECK(r.value == fraction(-14, 5));
  CHECK(r.x[0] == fraction(8, 5));
  CHECK(r.x[1] == fraction(6, 5));
  CHECK(st.lps == 1);
}

TEST_CASE("infeasible and unbounded LPs") {
  LinearSystem s = two_vars();
  s.add({{{0, 1}, {1, 1}}, Rel::Le, 1});
  s.add({{{0, 1}}, Rel::Ge, 2});
  CHECK(minimize(s, {}).status == LpStatus::Infeasible);
  CHECK_FALSE(feasible(s));

  LinearSystem u = two_vars();
  u.add({{{0, 1}, {1, -1}}, Rel::Eq, 0});
  CHECK(minimize(u, {{0, -1}}).status == LpStatus::Unbounded);
}

TEST_CASE("degenerate equality system") {
  // x + y = 1, x - y = 0, 2x = 1: redundant rows
  LinearSystem s = two_vars();
  s.add({{{0, 1}, {1, 1}}, Rel::Eq, 1});
  s.add({{{0, 1}, {1, -1}}, Rel::Eq, 0});
  s.add({{{0, 2}}, Rel::Eq, 1});
  auto a = feasible(s);
  REQUIRE(a);
  CHECK((*a)[0] == fraction(1, 2));
  CHECK((*a)[1] == fraction(1, 2));
}

TEST_CASE("max support finds every possibly positive variable") {
  // x + y = 1, z = 0, w free
  LinearSystem s;
  for (auto n : {"x", "y", "z", "w"})
    s.add_var(n);
  s.add({{{0, 1}, {1, 1}}, Rel::Eq, 1});
  s.add({{{2, 1}}, Rel::Eq, 0});
  auto sup = max_support(s);
  REQUIRE(sup);
  CHECK(sup->positive == std::vector<bool>{true, true, false, true});
  CHECK(satisfies(s, sup->values));
}

TEST_CASE("max support agrees with the probe method") {
  Rng rng(5);
  int solvable = 0;
  for (int round = 0; round < 150; ++round) {
    ImplicationSystem sys = fixtures::random_system(rng, 8, 6, 0);
    auto a = max_support(sys.base);
    auto b = max_support_probes(sys.base);
    REQUIRE(a.has_value() == b.has_value());
    if (!a)
      continue;
    ++solvable;
    CHECK(a->positive == b->positive);
    CHECK(satisfies(sys.base, a->values));
  }
  CHECK(solvable > 20);
}

TEST_CASE("implication solver") {
  LinearSystem s = two_vars();
  s.add({{{0, 1}}, Rel::Eq, 1});
  s.add({{{1, 1}}, Rel::Eq, 0});
  CHECK_FALSE(solve_implications({s, {{0, 1}}}));

  LinearSystem t = two_vars();
  t.add({{{0, 1}, {1, 1}}, Rel::Ge, 1});
  SolveStats st;
  auto a = solve_implications({t, {{0, 1}}}, &st);
  REQUIRE(a);
  CHECK(satisfies(ImplicationSystem{t, {{0, 1}}}, *a));

  // x + y = 1, y > 0 => z > 0, z = 0 forces y = 0, x = 1
  LinearSystem u;
  for (auto n : {"x", "y", "z"})
    u.add_var(n);
  u.add({{{0, 1}, {1, 1}}, Rel::Eq, 1});
  u.add({{{2, 1}}, Rel::Eq, 0});
  auto b = solve_implications({u, {{1, 2}}}, &st);
  REQUIRE(b);
  CHECK((*b)[0] == 1);
  CHECK((*b)[1] == 0);
}

TEST_CASE("implication solver agrees with enumeration") {
  Rng rng(9);
  for (int round = 0; round < 100; ++round) {
    ImplicationSystem sys = fixtures::random_system(rng, 6, 5, 4);
    auto a = solve_implications(sys);
    CHECK(a.has_value() == brute_implication(sys));
    if (a)
      CHECK(satisfies(sys, *a));
  }
}

TEST_CASE("dump format") {
  LinearSystem s = two_vars();
  s.add({{{0, -1}, {1, fraction(1, 2)}}, Rel::Le, 3});
  s.add({{}, Rel::Eq, 0});
  CHECK(dump(s) == "- x + 1/2 y <= 3\n0 = 0\n");
  CHECK(dump(ImplicationSystem{s, {{0, 1}}}) == "- x + 1/2 y <= 3\n0 = 0\nx > 0 => y > 0\n");
}

TEST_CASE("constraints must name declared variables") {
  LinearSystem s;
  s.add_var("x");
  CHECK_THROWS_AS(s.add({{{1, 1}}, Rel::Eq, 0}), Error);
  CHECK_THROWS_AS(s.add_var("x"), Error);
}
