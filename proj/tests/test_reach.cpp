#include <doctest.h>

#include "support.hpp"
#include "udpn/reach.hpp"

using namespace udpn;

namespace {

// t moves p -> q, u moves q -> p and copies to r. Nothing fires from empty.
Net cycle_net() {
  Net n;
  for (auto p : {"p", "q", "r"})
    n.add_place(p);
  n.add_variable("x");
  n.add_transition({"t", {{"p", {{"x", 1}}}}, {{"q", {{"x", 1}}}}});
  n.add_transition({"u", {{"q", {{"x", 1}}}}, {{"p", {{"x", 1}}}, {"r", {{"x", 1}}}}});
  return n;
}

Net empty_net() {
  Net n;
  n.add_place("p");
  n.add_variable("x");
  return n;
}

} // namespace

TEST_CASE("data universe") {
  Net n = fixtures::n1();
  auto Y = data_bound(n, fixtures::n1_i(), fixtures::n1_f());
  CHECK(Y.size() == 8);
  CHECK(std::count(Y.begin(), Y.end(), "_d0") == 1);
  CHECK(std::is_sorted(Y.begin(), Y.end()));
  CHECK(data_bound(n, empty_marking(), empty_marking()).size() == 4);
  Net bare = empty_net();
  Marking i = empty_marking();
  i.set("p", "a", 1);
  CHECK(data_bound(bare, i, i).size() == 2);
}

TEST_CASE("N1 is Q-reachable") {
  Net n = fixtures::n1();
  ReachResult r = q_reach(n, fixtures::n1_i(), fixtures::n1_f());
  REQUIRE(r.reachable);
  REQUIRE(r.witness);
  CHECK(validate_run(n, fixtures::n1_i(), *r.witness, fixtures::n1_f(), Domain::Q).ok);
  CHECK(run_effect(n, *r.witness) == fixtures::n1_f() - fixtures::n1_i());
}

TEST_CASE("N1 is Q+-reachable") {
  Net n = fixtures::n1();
  for (Engine e : {Engine::Support, Engine::Encoded}) {
    ReachResult r = qplus_reach(n, fixtures::n1_i(), fixtures::n1_f(), e);
    REQUIRE(r.reachable);
    CHECK(validate_run(n, fixtures::n1_i(), *r.witness, fixtures::n1_f(), Domain::QPlus).ok);
  }
}

TEST_CASE("identical endpoints need no steps") {
  Net n = fixtures::n1();
  ReachResult q = q_reach(n, fixtures::n1_i(), fixtures::n1_i());
  REQUIRE(q.reachable);
  CHECK(q.witness->empty());
  ReachResult p = qplus_reach(n, fixtures::n1_i(), fixtures::n1_i());
  REQUIRE(p.reachable);
  CHECK(p.witness->empty());
}

TEST_CASE("transition-free nets only reach their start") {
  Net n = empty_net();
  Marking i = empty_marking(), f = empty_marking();
  i.set("p", "a", 1);
  f.set("p", "b", 1);
  CHECK_FALSE(q_reach(n, i, f).reachable);
  CHECK_FALSE(qplus_reach(n, i, f).reachable);
  CHECK_FALSE(qplus_reach(n, i, f, Engine::Encoded).reachable);
}

TEST_CASE("Q-reachable but not Q+-reachable") {
  Net n = cycle_net();
  Marking i = empty_marking(), f = empty_marking();
  f.set("r", "a", 1);
  CHECK(q_reach(n, i, f).reachable);
  CHECK_FALSE(qplus_reach(n, i, f).reachable);
  // one token on p is enough to run the cycle
  i.set("p", "a", fraction(1, 100));
  f.set("p", "a", fraction(1, 100));
  ReachResult r = qplus_reach(n, i, f);
  REQUIRE(r.reachable);
  CHECK(validate_run(n, i, *r.witness, f, Domain::QPlus).ok);
}

TEST_CASE("encoding size follows the closed form") {
  Net n = fixtures::n1();
  LoopLess ll = to_loopless(n, fixtures::n1_i(), fixtures::n1_f());
  auto Y = data_bound(ll.net, ll.i, ll.f);
  QplusEncoding enc = encode_qplus(ll.net, ll.i, ll.f, Y);
  const std::size_t P = ll.net.places().size(), T = ll.net.transitions().size(),
                    V = ll.net.variables().size(), NY = Y.size();
  const std::size_t B = P * NY;
  CHECK(enc.bound == B);
  CHECK(enc.system.base.num_vars() ==
        2 * P * NY * (B * T + 1) + (2 * B * T + T) * V * NY);
  Net loop;
  loop.add_place("p");
  loop.add_variable("x");
  loop.add_transition({"t", {{"p", {{"x", 1}}}}, {{"p", {{"x", 2}}}}});
  CHECK_THROWS_AS(encode_qplus(loop, empty_marking(), empty_marking(), {"a", "b"}), Error);
}

TEST_CASE("encoded system decodes to a valid witness") {
  Net n = fixtures::n1();
  LoopLess ll = to_loopless(n, fixtures::n1_i(), fixtures::n1_f());
  auto Y = data_bound(ll.net, ll.i, ll.f);
  QplusEncoding enc = encode_qplus(ll.net, ll.i, ll.f, Y, 1);
  auto a = solve_implications(enc.system);
  REQUIRE(a);
  QplusCertificate cert = decode(enc, ll.net, *a);
  Run w = extract_witness(ll.net, ll.i, ll.f, cert);
  CHECK(validate_run(ll.net, ll.i, w, ll.f, Domain::QPlus).ok);
  Run back = project_witness(w, ll.mapping);
  CHECK(validate_run(n, fixtures::n1_i(), back, fixtures::n1_f(), Domain::QPlus).ok);
}

TEST_CASE("engines agree on tiny instances") {
  Rng rng(4);
  GenConfig cfg;
  cfg.max_places = 2;
  cfg.max_transitions = 2;
  cfg.max_vars = 1;
  cfg.max_data = 2;
  cfg.max_steps = 3;
  for (int round = 0; round < 12; ++round) {
    Net n = random_net(cfg, rng);
    auto pool = data_pool(cfg);
    Marking i = random_marking(n, pool, cfg, rng);
    Marking f = round % 2 ? random_marking(n, pool, cfg, rng)
                          : random_run(n, i, cfg, pool, rng).reached;
    bool s = qplus_reach(n, i, f, Engine::Support).reachable;
    bool e = qplus_reach(n, i, f, Engine::Encoded).reachable;
    CHECK(s == e);
    if (round % 2 == 0)
      CHECK(s);
  }
}

TEST_CASE("Q+ witnesses scale") {
  Net n = fixtures::n1();
  ReachResult r = qplus_reach(n, fixtures::n1_i(), fixtures::n1_f());
  REQUIRE(r.reachable);
  Rational k = fraction(7, 3);
  CHECK(validate_run(n, k * fixtures::n1_i(), scale(*r.witness, k), k * fixtures::n1_f(),
                     Domain::QPlus)
            .ok);
}

TEST_CASE("negative markings are rejected by the Q+ check") {
  Net n = fixtures::n1();
  Marking i = fixtures::n1_i();
  i.set("p1", "red", -1);
  CHECK_THROWS_AS(qplus_reach(n, i, i), Error);
}
