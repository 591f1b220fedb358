#include <doctest.h>

#include "support.hpp"
#include "udpn/transforms.hpp"

using namespace udpn;

namespace {

Net one_var_net() {
  Net n;
  n.add_place("p");
  n.add_place("q");
  n.add_variable("x");
  n.add_transition({"t", {{"p", {{"x", 1}}}}, {{"q", {{"x", 1}}}}});
  return n;
}

} // namespace

TEST_CASE("cyclic order on E") {
  std::set<DataValue> E{"a", "b", "c"};
  CHECK(next_in(E, "c") == "a");
  CHECK(prev_in(E, "a") == "c");
  CHECK_THROWS_AS(next_in(E, "d"), Error);
}

TEST_CASE("rotating |E| times is the identity") {
  Rng rng(3);
  GenConfig cfg;
  auto pool = data_pool(cfg);
  for (int round = 0; round < 100; ++round) {
    Net n = random_net(cfg, rng);
    auto s = fixtures::random_step(n, pool, rng);
    if (!s)
      continue;
    std::set<DataValue> E;
    for (auto &a : pool)
      if (fixtures::pick(rng, 0, 1))
        E.insert(a);
    if (E.empty())
      continue;
    CHECK(rotate(E, *s, E.size()) == *s);
    CHECK(rotate(E, rotate(E, *s), E.size() - 1) == *s);
  }
}

TEST_CASE("uniformize over two values") {
  Net n = one_var_net();
  Step s{1, "t", {{"x", "a"}}};
  Run r = uniformize({"a", "b"}, s);
  REQUIRE(r.size() == 2);
  CHECK(r[0] == Step{fraction(1, 2), "t", {{"x", "a"}}});
  CHECK(r[1] == Step{fraction(1, 2), "t", {{"x", "b"}}});
  CHECK(uniformize({"a"}, s) == Run{s});
}

TEST_CASE("replace swaps with the smallest unused value") {
  Net n = one_var_net();
  Step s{1, "t", {{"x", "alpha"}}};
  CHECK(replace(n, "alpha", {"beta", "gamma"}, s).mode.at("x") == "beta");
  Step other{1, "t", {{"x", "beta"}}};
  CHECK(replace(n, "alpha", {"beta", "gamma"}, other) == other);
  Net two = fixtures::n1();
  Step full{1, "t", {{"x", "alpha"}, {"y", "beta"}, {"z", "gamma"}}};
  CHECK_THROWS_WITH_AS(replace(two, "alpha", {"beta", "gamma"}, full),
                       doctest::Contains("inapplicable"), Error);
}

TEST_CASE("decrease removes alpha and keeps the endpoints") {
  Net n = one_var_net();
  Marking i = empty_marking(), f = empty_marking();
  i.set("p", "a", 1);
  f.set("q", "a", 1);
  // a detour through values b, c, d that cancel out
  Net g = fixtures::with_gen_kill(n);
  Run run{{1, "gen", {{"x", "b"}}}, {1, "t", {{"x", "a"}}}, {1, "kill", {{"x", "b"}}},
          {2, "gen", {{"x", "c"}}}, {2, "kill", {{"x", "c"}}}, {1, "gen", {{"x", "d"}}},
          {1, "kill", {{"x", "d"}}}};
  REQUIRE(validate_run(g, i, run, f, Domain::QPlus).ok);
  Run out = decrease(g, {"b", "c"}, "d", run);
  CHECK(out.size() == 2 * run.size());
  CHECK(validate_run(g, i, out, f, Domain::QPlus).ok);
  CHECK(dval(g, out) == std::set<DataValue>{"a", "b", "c"});
}

TEST_CASE("reduce_data bound for N1") {
  Net n = fixtures::n1();
  CHECK(data_bound_size(n, fixtures::n1_i(), fixtures::n1_i()) == 7);
  Run run{fixtures::n1_step()};
  CHECK(reduce_data(n, fixtures::n1_i(), fixtures::n1_f(), run, Domain::QPlus) == run);
  CHECK_THROWS_AS(reduce_data(n, fixtures::n1_i(), fixtures::n1_i(), run, Domain::QPlus), Error);
}

TEST_CASE("loop-less transformation shape") {
  Net n;
  n.add_place("p");
  n.add_place("q");
  n.add_variable("x");
  n.add_variable("y");
  n.add_transition({"t", {{"p", {{"x", 1}}}}, {{"p", {{"y", 1}}}, {"q", {{"x", 1}}}}});
  n.add_transition({"u", {{"q", {{"x", 1}}}}, {{"p", {{"x", 1}}}}});
  CHECK_FALSE(is_loopless(n));
  Marking i = empty_marking();
  i.set("p", "a", 1);
  LoopLess ll = to_loopless(n, i, i);
  CHECK(is_loopless(ll.net));
  CHECK(ll.net.places().size() == 4);
  CHECK(ll.net.transitions().size() == 4);
  CHECK(ll.mapping.modified == std::set<std::string>{"t"});
  CHECK(ll.net.transition("t").out.count("__shadow_p") == 1);
  CHECK(ll.net.transition("u").out.count("p") == 1);
  CHECK(ll.net.pre("__shadow_p", "__copy_p", "x") == 1);
  CHECK(ll.net.post("__copy_p", "p", "x") == 1);
  CHECK(ll.i == i);

  Step s{1, "t", {{"x", "a"}, {"y", "b"}}};
  Step c{1, "__copy_p", {{"x", "b"}}};
  Run projected = project_witness({s, c}, ll.mapping);
  CHECK(projected == Run{s});
  CHECK(validate_run(n, i, projected, fire_step(n, i, s), Domain::QPlus).ok);
  CHECK(project_witness({}, ll.mapping).empty());
}

TEST_CASE("loop-less transformation on random nets") {
  Rng rng(21);
  GenConfig cfg;
  for (int round = 0; round < 100; ++round) {
    Net n = random_net(cfg, rng);
    LoopLess ll = to_loopless(n, empty_marking(), empty_marking());
    CHECK(is_loopless(ll.net));
    CHECK(ll.net.places().size() == 2 * n.places().size());
    CHECK(ll.net.transitions().size() == n.transitions().size() + n.places().size());
  }
}

TEST_CASE("loop-less transformation applied twice") {
  Net n;
  n.add_place("p");
  n.add_variable("x");
  n.add_transition({"t", {{"p", {{"x", 1}}}}, {{"p", {{"x", 1}}}}});
  LoopLess once = to_loopless(n, empty_marking(), empty_marking());
  LoopLess twice = to_loopless(once.net, once.i, once.f);
  CHECK(is_loopless(twice.net));
  CHECK(twice.net.places().size() == 4);
  CHECK(twice.mapping.shadow.at("p") == "__shadow_p_1");
  CHECK(twice.mapping.shadow.at("__shadow_p") == "__shadow___shadow_p");
  CHECK(twice.mapping.copy.at("p") == "__copy_p_1");
  CHECK(twice.mapping.modified.empty());

  Step s{1, "t", {{"x", "a"}}};
  Step c{1, "__copy_p_1", {{"x", "a"}}};
  CHECK(project_witness({s, c}, twice.mapping) == Run{s});
}
