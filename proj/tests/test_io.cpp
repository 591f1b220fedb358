#include <doctest.h>

#include "support.hpp"
#include "udpn/io.hpp"

using namespace udpn;

namespace {

const char *kN1 = R"(# N1
net { places p1 p2 p3 p4; vars x y z;
      transition t { in p1: y; in p2: x; out p3: 2y; out p4: x, z; } }
)";

const char *kI = "marking { p1: red 1, green 1; p2: blue 1; p3: red 2; p4: red 1, blue 1; }";

template <class F> std::string parse_error(F &&f) {
  try {
    f();
  } catch (const ParseError &e) {
    return e.what();
  }
  return "no error";
}

} // namespace

TEST_CASE("N1 grammar sample") {
  Net n = parse_net(kN1);
  CHECK(n == fixtures::n1());
  CHECK(n.pre("p1", "t", "y") == 1);
  CHECK(n.post("t", "p3", "y") == 2);
  CHECK(parse_marking(kI, {}, &n) == fixtures::n1_i());
}

TEST_CASE("canonical output") {
  CHECK(serialize(fixtures::n1()) == "net {\n"
                                     "  places p1 p2 p3 p4;\n"
                                     "  vars x y z;\n"
                                     "  transition t {\n"
                                     "    in p1: y;\n"
                                     "    in p2: x;\n"
                                     "    out p3: 2y;\n"
                                     "    out p4: x, z;\n"
                                     "  }\n"
                                     "}\n");
  Marking m = empty_marking();
  m.set("p", "b", fraction(6, 4));
  m.set("p", "a", -1);
  CHECK(serialize_marking(m) == "marking {\n  p: a -1, b 3/2;\n}\n");
  CHECK(serialize(Run{fixtures::n1_step()}) ==
        "run {\n  step 1 t { x -> blue; y -> green; z -> black }\n}\n");
}

TEST_CASE("empty blocks") {
  CHECK(parse_marking("marking { }").is_zero());
  CHECK(parse_marking("marking { p: ; }").is_zero());
  CHECK(parse_run("run {}").empty());
  Net n = parse_net("net { places p; vars; }");
  CHECK(n.transitions().empty());
  CHECK(serialize(n) == "net {\n  places p;\n  vars;\n}\n");
}

TEST_CASE("round trips on random objects") {
  Rng rng(17);
  GenConfig cfg;
  for (int round = 0; round < 100; ++round) {
    Net n = random_net(cfg, rng);
    CHECK(parse_net(serialize(n)) == n);
    auto pool = data_pool(cfg);
    Marking m = random_marking(n, pool, cfg, rng, true);
    CHECK(parse_marking(serialize_marking(m), {}, &n) == m);
    RandomRun rr = random_run(n, random_marking(n, pool, cfg, rng), cfg, pool, rng);
    CHECK(parse_run(serialize(rr.run), {}, &n) == rr.run);
    Histogram h = fixtures::random_histogram(rng, 3, 4, 6);
    Histogram back = parse_histogram(serialize(h));
    CHECK(back.matrix == h.matrix);
    CHECK(back.order == h.order);
  }
}

TEST_CASE("parse errors carry positions") {
  CHECK(parse_error([] { parse_marking("marking {\n  p: a 3/0;\n}"); }) ==
        "2:8: malformed rational '3/0'");
  CHECK(parse_error([] { parse_marking("marking { p: a 1/; }"); }) == "1:16: malformed rational");
  CHECK(parse_error([] { parse_net("net { places p; vars x;\n transition t { in p: -2x; } }"); }) ==
        "2:23: negative flow constant");
  CHECK(parse_error([] { parse_net("net { places p; vars x; transition t { in q: x; } }"); }) ==
        "1:43: unknown place 'q'");
  CHECK(parse_error([] { parse_net("net { places p; vars x; transition t { in p: y; } }"); }) ==
        "1:46: unknown variable 'y'");
  CHECK(parse_error([] { parse_net("net { places p p; }"); }) == "1:16: duplicate place 'p'");
  CHECK(parse_error([] { parse_net("net { places in; }"); }) ==
        "1:14: keyword 'in' cannot be used as a place");
  CHECK(parse_error([] { parse_marking("marking { p: a 1, a 2; }"); }) ==
        "1:19: duplicate data value 'a'");
  CHECK(parse_error([] { parse_net("net { places p; } x"); }) == "1:19: trailing input 'x'");
  CHECK(parse_error([] { parse_run("run { step -1 t { } }"); }) ==
        "1:12: negative step coefficient");
  CHECK(parse_error([] { parse_marking("marking { p: a 1 }"); }) ==
        "1:18: expected ';', found '}'");
  CHECK(parse_error([] { parse_net("net { places p€; }"); }).find("unexpected character") !=
        std::string::npos);
}

TEST_CASE("runs are checked against the net") {
  Net n = fixtures::n1();
  CHECK(parse_error([&] { parse_run("run { step 1 u { } }", {}, &n); }) ==
        "1:14: unknown transition 'u'");
  CHECK(parse_error([&] {
          parse_run("run { step 1 t { x -> a; y -> a; z -> b } }", {}, &n);
        }).find("injective") != std::string::npos);
  CHECK(parse_error([&] { parse_marking("marking { q: a 1; }", {}, &n); }) ==
        "1:11: unknown place 'q'");
  CHECK_NOTHROW(parse_marking("marking { q: a 1; }"));
}

TEST_CASE("reserved prefixes") {
  CHECK(is_reserved_name("__copy_p"));
  CHECK(is_reserved_name("__shadow_p"));
  CHECK(is_reserved_name("_d0"));
  CHECK_FALSE(is_reserved_name("d0"));
  CHECK(parse_error([] { parse_marking("marking { p: _d0 1; }"); }) == "1:14: reserved name '_d0'");
  CHECK(parse_error([] { parse_net("net { places __shadow_p; }"); }) ==
        "1:14: reserved name '__shadow_p'");
  CHECK(parse_marking("marking { p: _d0 1; }", {true}).get("p", "_d0") == 1);
}

TEST_CASE("histogram files") {
  Histogram h = parse_histogram("histogram { x: a 1/2, b 1/2; y: c 1; }");
  CHECK(h.order == 1);
  CHECK(parse_error([] { parse_histogram("histogram { x: a 1; y: a 1; }"); }).find("1:1:") == 0);
  CHECK(parse_error([] { parse_histogram("histogram { x: a -1; }"); }) == "1:18: negative quantity");
}

TEST_CASE("linear system files") {
  ImplicationSystem s = parse_system("vars a b c\n- a + 1/2 b <= 3\n\n2 c = 1 # half\n0 = 0\na > 0 => b > 0\n");
  CHECK(s.base.names() == std::vector<std::string>{"a", "b", "c"});
  REQUIRE(s.base.constraints().size() == 3);
  CHECK(s.base.constraints()[0].rel == Rel::Le);
  CHECK(s.base.constraints()[1].coeffs == std::vector<std::pair<std::size_t, Rational>>{{2, 2}});
  CHECK(s.implications == std::vector<std::pair<std::size_t, std::size_t>>{{0, 1}});
  CHECK(dump(s) == "- a + 1/2 b <= 3\n2 c = 1\n0 = 0\na > 0 => b > 0\n");

  Rng rng(2);
  for (int round = 0; round < 50; ++round) {
    ImplicationSystem r = fixtures::random_system(rng, 6, 5, 3);
    CHECK(dump(parse_system(dump(r))) == dump(r));
  }
  CHECK(parse_error([] { parse_system("x + y\n"); }).find("1:6:") == 0);
  CHECK(parse_error([] { parse_system("x = 1\nx > 1 => y > 0"); }).find("2:5:") == 0);
}
