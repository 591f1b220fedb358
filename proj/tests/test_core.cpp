#include <doctest.h>

#include "support.hpp"

using namespace udpn;

TEST_CASE("matrix entries stay sparse") {
  RatMatrix m;
  m.add("p", "a", fraction(1, 2));
  m.add("p", "a", fraction(-1, 2));
  CHECK(m.is_zero());
  m.set("p", "a", 3);
  m.set("q", "b", 0);
  CHECK(m.nnz() == 1);
  CHECK(m.get("q", "b") == 0);
}

TEST_CASE("mismatched axes are rejected") {
  RatMatrix a(Axis::Place, Axis::Data), b(Axis::Var, Axis::Data);
  CHECK_THROWS_AS(a + b, Error);
  CHECK_THROWS_AS(multiply(a, b), Error);
}

TEST_CASE("row and column sums") {
  RatMatrix m(Axis::Var, Axis::Data);
  m.set("x", "a", fraction(1, 3));
  m.set("x", "b", fraction(2, 3));
  m.set("y", "a", 1);
  CHECK(m.row_sum("x") == 1);
  CHECK(m.col_sum("a") == fraction(4, 3));
  CHECK(m.nonzero_rows() == std::set<std::string>{"x", "y"});
}

TEST_CASE("N1 displacement") {
  Net n = fixtures::n1();
  RatMatrix d = delta(n, "t");
  CHECK(d.row_axis() == Axis::Place);
  CHECK(d.col_axis() == Axis::Var);
  CHECK(d.nnz() == 5);
  CHECK(d.get("p1", "y") == -1);
  CHECK(d.get("p2", "x") == -1);
  CHECK(d.get("p3", "y") == 2);
  CHECK(d.get("p4", "x") == 1);
  CHECK(d.get("p4", "z") == 1);
  CHECK(n.vars("t") == std::vector<std::string>{"x", "y", "z"});
  CHECK(n.max_vars() == 3);
}

TEST_CASE("step effect is c * delta * P") {
  Net n = fixtures::n1();
  Step s = fixtures::n1_step();
  s.coeff = fraction(3, 4);
  RatMatrix direct = step_effect(n, s);
  RatMatrix product = s.coeff * multiply(delta(n, "t"), mode_matrix(s.mode));
  CHECK(direct == product);
}

TEST_CASE("net construction errors") {
  Net n;
  n.add_place("p");
  n.add_variable("x");
  CHECK_THROWS_AS(n.add_place("p"), Error);
  CHECK_THROWS_AS(n.add_transition({"t", {{"q", {{"x", 1}}}}, {}}), Error);
  CHECK_THROWS_AS(n.add_transition({"t", {{"p", {{"y", 1}}}}, {}}), Error);
  n.add_transition({"t", {{"p", {{"x", 0}}}}, {}});
  CHECK(n.transition("t").in.empty());
  CHECK_THROWS_AS(n.transition("u"), Error);
}

TEST_CASE("check_step") {
  Net n = fixtures::n1();
  Step s = fixtures::n1_step();
  CHECK_NOTHROW(check_step(n, s));
  Step dup = s;
  dup.mode["z"] = "blue";
  CHECK_THROWS_WITH_AS(check_step(n, dup), doctest::Contains("injective"), Error);
  Step partial = s;
  partial.mode.erase("z");
  CHECK_THROWS_AS(check_step(n, partial), Error);
  Step neg = s;
  neg.coeff = -1;
  CHECK_THROWS_AS(check_step(n, neg), Error);
  Step unknown = s;
  unknown.transition = "u";
  CHECK_THROWS_AS(check_step(n, unknown), Error);
}

TEST_CASE("rational helpers") {
  CHECK(parse_rational("6/4") == fraction(3, 2));
  CHECK(parse_rational("-2") == Rational(-2));
  CHECK_FALSE(parse_rational("3/0"));
  CHECK_FALSE(parse_rational("1/"));
  CHECK_FALSE(parse_rational("a"));
  CHECK(to_string(fraction(10, 4)) == "5/2");
  CHECK(ceil(fraction(7, 2)) == 4);
  CHECK(ceil(fraction(-7, 2)) == -3);
  CHECK(ceil(Rational(5)) == 5);
}
