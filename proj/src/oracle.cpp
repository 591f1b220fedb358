#include "udpn/oracle.hpp"

#include <algorithm>

namespace udpn {

void check_config(const GenConfig &c) {
  if (!c.max_places || !c.max_transitions || !c.max_vars || !c.max_data || !c.max_steps ||
      !c.max_den || !c.max_weight)
    throw Error("generator bounds must be at least 1");
}

namespace {

std::size_t pick(Rng &rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

Rational grid(Rng &rng, std::uint64_t max_num, std::uint64_t max_den) {
  auto d = pick(rng, 1, max_den);
  auto n = pick(rng, 1, max_num * d);
  return fraction(static_cast<unsigned long>(n), static_cast<unsigned long>(d));
}

} // namespace

std::vector<DataValue> data_pool(const GenConfig &cfg) {
  std::vector<DataValue> out;
  for (std::size_t k = 0; k < cfg.max_data; ++k)
    out.push_back("v" + std::to_string(k));
  return out;
}

Net random_net(const GenConfig &cfg, Rng &rng) {
  check_config(cfg);
  Net net;
  const auto np = pick(rng, 1, cfg.max_places);
  const auto nv = pick(rng, 1, cfg.max_vars);
  const auto nt = pick(rng, 0, cfg.max_transitions);
  for (std::size_t p = 0; p < np; ++p)
    net.add_place("p" + std::to_string(p));
  for (std::size_t x = 0; x < nv; ++x)
    net.add_variable("x" + std::to_string(x));
  std::bernoulli_distribution arc(0.35);
  for (std::size_t t = 0; t < nt; ++t) {
    Transition tr{"t" + std::to_string(t), {}, {}};
    for (auto &p : net.places())
      for (auto &x : net.variables()) {
        if (arc(rng))
          tr.in[p][x] = pick(rng, 1, cfg.max_weight);
        if (arc(rng))
          tr.out[p][x] = pick(rng, 1, cfg.max_weight);
      }
    if (tr.in.empty() && tr.out.empty())
      tr.out[net.places()[pick(rng, 0, np - 1)]][net.variables()[pick(rng, 0, nv - 1)]] = 1;
    net.add_transition(std::move(tr));
  }
  return net;
}

Marking random_marking(const Net &net, const std::vector<DataValue> &pool,
                       const GenConfig &cfg, Rng &rng, bool allow_negative) {
  Marking m = empty_marking();
  std::bernoulli_distribution filled(0.5), negative(0.3);
  for (auto &p : net.places())
    for (auto &a : pool)
      if (filled(rng)) {
        Rational v = grid(rng, 3, cfg.max_den);
        m.set(p, a, allow_negative && negative(rng) ? Rational(-v) : v);
      }
  return m;
}

RandomRun random_run(const Net &net, const Marking &i, const GenConfig &cfg,
                     std::vector<DataValue> pool) {
  check_config(cfg);
  if (pool.empty()) {
    auto d = dval(i);
    for (auto &v : data_pool(cfg))
      if (d.size() < cfg.max_data)
        d.insert(v);
    pool.assign(d.begin(), d.end());
  }
  Rng rng(cfg.seed);
  return random_run(net, i, cfg, pool, rng);
}

RandomRun random_run(const Net &net, const Marking &i, const GenConfig &cfg,
                     const std::vector<DataValue> &pool, Rng &rng) {
  check_config(cfg);
  if (i.row_axis() != Axis::Place || !i.nonnegative())
    throw Error("random_run needs a Q+ marking");
  RandomRun out{{}, i};
  const auto &ts = net.transitions();
  if (ts.empty())
    return out;
  const auto steps = pick(rng, 1, cfg.max_steps);
  constexpr int kAttempts = 64;
  for (std::size_t s = 0; s < steps; ++s) {
    std::optional<Step> found;
    for (int k = 0; k < kAttempts && !found; ++k) {
      const auto &t = ts[pick(rng, 0, ts.size() - 1)];
      auto vs = net.vars(t.name);
      if (vs.size() > pool.size())
        continue;
      std::vector<DataValue> shuffled = pool;
      std::shuffle(shuffled.begin(), shuffled.end(), rng);
      Mode mode;
      for (std::size_t x = 0; x < vs.size(); ++x)
        mode[vs[x]] = shuffled[x];
      std::optional<Rational> cap;
      for (auto &[p, row] : t.in)
        for (auto &[x, w] : row) {
          Rational c = out.reached.get(p, mode.at(x)) / Rational(static_cast<unsigned long>(w));
          if (!cap || c < *cap)
            cap = c;
        }
      if (!cap)
        cap = 1;
      if (sgn(*cap) <= 0)
        continue;
      auto d = pick(rng, 1, cfg.max_den);
      Integer top = Integer(*cap * static_cast<unsigned long>(d));
      Rational c = top > 0 ? fraction(static_cast<unsigned long>(pick(rng, 1, top.get_ui())), static_cast<unsigned long>(d)) : *cap;
      found = Step{c, t.name, mode};
    }
    if (!found)
      break;
    out.reached = fire_step(net, out.reached, *found);
    out.run.push_back(std::move(*found));
  }
  return out;
}

bool brute_implication(const ImplicationSystem &isys, LpStats *stats) {
  const std::size_t n = isys.base.num_vars();
  if (n > 12)
    throw Error("brute_implication supports at most 12 variables");
  std::vector<unsigned> order(std::size_t(1) << n);
  for (unsigned z = 0; z < order.size(); ++z)
    order[z] = z;
  std::stable_sort(order.begin(), order.end(), [](unsigned a, unsigned b) {
    return __builtin_popcount(a) < __builtin_popcount(b);
  });
  for (unsigned z : order) {
    // Zero set must be closed backwards under the implications.
    bool closed = true;
    for (auto &[a, c] : isys.implications)
      if (!(z >> a & 1) && (z >> c & 1))
        closed = false;
    if (!closed)
      continue;
    LinearSystem sys = isys.base;
    for (std::size_t x = 0; x < n; ++x)
      if (z >> x & 1)
        sys.add(Constraint{{{x, Rational(1)}}, Rel::Eq, 0});
    LpResult base = minimize(sys, {}, stats);
    if (base.status == LpStatus::Infeasible)
      continue;
    bool all = true;
    for (std::size_t x = 0; x < n && all; ++x) {
      if (z >> x & 1)
        continue;
      LpResult r = minimize(sys, {{x, Rational(-1)}}, stats);
      all = r.status == LpStatus::Unbounded || sgn(r.value) < 0;
    }
    if (all)
      return true;
  }
  return false;
}

bool naive_q_reach(const Net &net, const Marking &i, const Marking &f) {
  std::set<DataValue> ys;
  for (auto *m : {&i, &f})
    for (auto &[k, v] : m->entries())
      ys.insert(k.second);
  std::size_t widest = 0;
  for (auto &t : net.transitions()) {
    std::set<std::string> used;
    for (auto *arcs : {&t.in, &t.out})
      for (auto &[p, row] : *arcs)
        for (auto &[x, w] : row)
          used.insert(x);
    widest = std::max(widest, used.size());
  }
  const std::size_t size = ys.size() + 1 + widest;
  for (std::size_t k = 0; ys.size() < size; ++k)
    ys.insert("_d" + std::to_string(k));

  LinearSystem sys;
  std::map<std::tuple<std::string, std::string, std::string>, std::size_t> h;
  std::map<std::pair<std::string, DataValue>, Constraint> eq;
  for (auto &p : net.places())
    for (auto &a : ys)
      eq[{p, a}] = Constraint{{}, Rel::Eq, f.get(p, a) - i.get(p, a)};
  for (auto &t : net.transitions()) {
    std::size_t q = sys.add_var("order " + t.name);
    std::set<std::string> used;
    for (auto *arcs : {&t.in, &t.out})
      for (auto &[p, row] : *arcs)
        for (auto &[x, w] : row)
          used.insert(x);
    for (auto &x : net.variables())
      for (auto &a : ys)
        h[{t.name, x, a}] = sys.add_var(t.name + " " + x + " " + a);
    for (auto &x : net.variables()) {
      Constraint row{{}, Rel::Eq, 0};
      for (auto &a : ys)
        row.coeffs.emplace_back(h[{t.name, x, a}], 1);
      if (used.count(x))
        row.coeffs.emplace_back(q, -1);
      sys.add(std::move(row));
    }
    for (auto &a : ys) {
      Constraint col{{{q, Rational(-1)}}, Rel::Le, 0};
      for (auto &x : net.variables())
        col.coeffs.emplace_back(h[{t.name, x, a}], 1);
      sys.add(std::move(col));
    }
    for (auto &[p, row] : t.out)
      for (auto &[x, w] : row)
        for (auto &a : ys)
          eq[{p, a}].coeffs.emplace_back(h[{t.name, x, a}], static_cast<unsigned long>(w));
    for (auto &[p, row] : t.in)
      for (auto &[x, w] : row)
        for (auto &a : ys)
          eq[{p, a}].coeffs.emplace_back(h[{t.name, x, a}], -Rational(static_cast<unsigned long>(w)));
  }
  for (auto &[k, c] : eq)
    sys.add(std::move(c));
  for (auto *m : {&i, &f})
    for (auto &[k, v] : m->entries())
      if (!net.has_place(k.first))
        throw Error("marking uses unknown place '" + k.first + "'");
  return feasible(sys).has_value();
}

} // namespace udpn
