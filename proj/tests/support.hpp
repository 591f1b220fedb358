#pragma once

#include "udpn/histograms.hpp"
#include "udpn/linsolve.hpp"
#include "udpn/oracle.hpp"
#include "udpn/semantics.hpp"

#include <algorithm>
#include <string>
#include <vector>

namespace fixtures {

using namespace udpn;

inline Net n1() {
  Net n;
  for (auto p : {"p1", "p2", "p3", "p4"})
    n.add_place(p);
  for (auto x : {"x", "y", "z"})
    n.add_variable(x);
  n.add_transition({"t",
                    {{"p1", {{"y", 1}}}, {"p2", {{"x", 1}}}},
                    {{"p3", {{"y", 2}}}, {"p4", {{"x", 1}, {"z", 1}}}}});
  return n;
}

inline Marking n1_i() {
  Marking m = empty_marking();
  m.set("p1", "red", 1);
  m.set("p1", "green", 1);
  m.set("p2", "blue", 1);
  m.set("p3", "red", 2);
  m.set("p4", "red", 1);
  m.set("p4", "blue", 1);
  return m;
}

inline Marking n1_f() {
  Marking m = empty_marking();
  m.set("p1", "red", 1);
  m.set("p3", "red", 2);
  m.set("p3", "green", 2);
  m.set("p4", "red", 1);
  m.set("p4", "blue", 2);
  m.set("p4", "black", 1);
  return m;
}

inline Step n1_step() { return Step{1, "t", {{"x", "blue"}, {"y", "green"}, {"z", "black"}}}; }

inline std::size_t pick(Rng &rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

inline Rational small_rational(Rng &rng, long max_num, unsigned long max_den) {
  long n = static_cast<long>(pick(rng, 0, 2 * max_num)) - max_num;
  return fraction(n, static_cast<unsigned long>(pick(rng, 1, max_den)));
}

/// A step of a random transition of `net` with an injective mode over `pool`.
inline std::optional<Step> random_step(const Net &net, const std::vector<DataValue> &pool,
                                       Rng &rng) {
  if (net.transitions().empty())
    return std::nullopt;
  const auto &t = net.transitions()[pick(rng, 0, net.transitions().size() - 1)];
  auto vs = net.vars(t.name);
  if (vs.size() > pool.size())
    return std::nullopt;
  auto shuffled = pool;
  std::shuffle(shuffled.begin(), shuffled.end(), rng);
  Step s{fraction(static_cast<unsigned long>(pick(rng, 1, 12)),
                  static_cast<unsigned long>(pick(rng, 1, 6))),
         t.name,
         {}};
  for (std::size_t k = 0; k < vs.size(); ++k)
    s.mode[vs[k]] = shuffled[k];
  return s;
}

/// Sum of weighted random injective patterns, so a histogram by construction.
inline Histogram random_histogram(Rng &rng, std::size_t max_rows, std::size_t max_cols,
                                  unsigned long max_den) {
  const auto rows = pick(rng, 1, max_rows);
  const auto cols = pick(rng, rows, std::max(rows, max_cols));
  const auto den = pick(rng, 1, max_den);
  Histogram h;
  for (std::size_t k = pick(rng, 1, 4); k > 0; --k) {
    std::vector<std::size_t> perm(cols);
    for (std::size_t c = 0; c < cols; ++c)
      perm[c] = c;
    std::shuffle(perm.begin(), perm.end(), rng);
    Rational a = fraction(static_cast<unsigned long>(pick(rng, 1, 2 * den)), den);
    for (std::size_t r = 0; r < rows; ++r)
      h.matrix.add("x" + std::to_string(r), "d" + std::to_string(perm[r]), a);
    h.order += a;
  }
  return h;
}

inline ImplicationSystem random_system(Rng &rng, std::size_t max_vars, std::size_t max_cons,
                                       std::size_t max_impl) {
  ImplicationSystem s;
  const auto n = pick(rng, 1, max_vars);
  for (std::size_t j = 0; j < n; ++j)
    s.base.add_var("v" + std::to_string(j));
  for (std::size_t k = pick(rng, 0, max_cons); k > 0; --k) {
    Constraint c;
    for (std::size_t j = 0; j < n; ++j)
      if (pick(rng, 0, 2) == 0) {
        Rational a = small_rational(rng, 3, 2);
        if (!is_zero(a))
          c.coeffs.emplace_back(j, a);
      }
    c.rel = static_cast<Rel>(pick(rng, 0, 2));
    c.rhs = small_rational(rng, 3, 2);
    s.base.add(std::move(c));
  }
  for (std::size_t k = pick(rng, 0, max_impl); k > 0; --k)
    s.implications.emplace_back(pick(rng, 0, n - 1), pick(rng, 0, n - 1));
  return s;
}

/// Adds transitions "gen" (out p: x) and "kill" (in p: x) so that the pair
/// (c, gen, x -> d), (c, kill, x -> d) is a no-op usable with a fresh d.
inline Net with_gen_kill(const Net &net) {
  Net out = net;
  const auto &p = net.places().front();
  const auto &x = net.variables().front();
  out.add_transition({"gen", {}, {{p, {{x, 1}}}}});
  out.add_transition({"kill", {{p, {{x, 1}}}}, {}});
  return out;
}

/// Inserts no-op gen/kill pairs on fresh values f0, f1, ... at random positions.
inline Run pad_run(const Net &net, const Run &run, std::size_t fresh, Rng &rng) {
  Run out = run;
  const auto &x = net.variables().front();
  for (std::size_t k = 0; k < fresh; ++k) {
    DataValue d = "f" + std::to_string(k);
    Rational c = fraction(static_cast<unsigned long>(pick(rng, 1, 6)),
                          static_cast<unsigned long>(pick(rng, 1, 4)));
    auto a = pick(rng, 0, out.size());
    out.insert(out.begin() + static_cast<long>(a), Step{c, "gen", {{x, d}}});
    auto b = pick(rng, a + 1, out.size());
    out.insert(out.begin() + static_cast<long>(b), Step{c, "kill", {{x, d}}});
  }
  return out;
}

/// Markings before each step and after the last.
inline std::vector<Marking> prefix_markings(const Net &net, const Marking &i, const Run &run) {
  std::vector<Marking> out{i};
  for (auto &s : run)
    out.push_back(fire_step(net, out.back(), s));
  return out;
}

inline Marking column_sum(const Marking &m, const std::set<DataValue> &cols,
                          const DataValue &as) {
  Marking out = empty_marking();
  for (auto &[k, v] : m.entries())
    if (cols.count(k.second))
      out.add(k.first, as, v);
  return out;
}

inline Marking column(const Marking &m, const DataValue &a) { return column_sum(m, {a}, a); }

} // namespace fixtures
