#include "udpn/reach.hpp"

#include "lp.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <tuple>

namespace udpn {

std::vector<DataValue> data_bound(const Net &net, const Marking &i, const Marking &f) {
  auto d = dval(i);
  auto df = dval(f);
  d.insert(df.begin(), df.end());
  const std::size_t target = d.size() + 1 + net.max_vars();
  for (std::size_t k = 0; d.size() < target; ++k)
    d.insert(kFreshPrefix + std::to_string(k));
  return {d.begin(), d.end()};
}

namespace {

constexpr std::size_t npos = SIZE_MAX;

struct Arc {
  std::size_t place, var; // var is a position in vars(t)
  unsigned long w;
};

struct TInfo {
  std::string name;
  std::vector<std::string> vars;
  std::vector<Arc> in, out;
};

// Dense indexing of a net over a fixed data universe.
struct Index {
  const Net &net;
  std::vector<DataValue> Y;
  std::map<DataValue, std::size_t> y;
  std::size_t P = 0, NY = 0;
  std::vector<TInfo> ts;

  Index(const Net &n, std::vector<DataValue> universe) : net(n), Y(std::move(universe)) {
    for (std::size_t a = 0; a < Y.size(); ++a)
      y[Y[a]] = a;
    P = net.places().size();
    NY = Y.size();
    for (auto &t : net.transitions()) {
      TInfo ti;
      ti.name = t.name;
      ti.vars = net.vars(t.name);
      auto pos = [&](const std::string &x) {
        return static_cast<std::size_t>(std::find(ti.vars.begin(), ti.vars.end(), x) -
                                        ti.vars.begin());
      };
      for (auto &[p, row] : t.in)
        for (auto &[x, w] : row)
          ti.in.push_back({net.place_index(p), pos(x), static_cast<unsigned long>(w)});
      for (auto &[p, row] : t.out)
        for (auto &[x, w] : row)
          ti.out.push_back({net.place_index(p), pos(x), static_cast<unsigned long>(w)});
      ts.push_back(std::move(ti));
    }
  }

  std::size_t pair(std::size_t p, std::size_t a) const { return p * NY + a; }

  std::vector<Rational> dense(const Marking &m) const {
    std::vector<Rational> out(P * NY, 0);
    for (auto &[k, v] : m.entries()) {
      auto it = y.find(k.second);
      if (it == y.end())
        throw InternalError("marking uses a value outside the data universe");
      out[pair(net.place_index(k.first), it->second)] = v;
    }
    return out;
  }

  Marking sparse(const std::vector<Rational> &v) const {
    Marking m = empty_marking();
    for (std::size_t p = 0; p < P; ++p)
      for (std::size_t a = 0; a < NY; ++a)
        m.set(net.places()[p], Y[a], v[pair(p, a)]);
    return m;
  }

  // delta(t)(p, x) accumulated over arcs, as (place, var position, value).
  std::vector<std::tuple<std::size_t, std::size_t, Rational>> delta(std::size_t t) const {
    std::map<std::pair<std::size_t, std::size_t>, Rational> acc;
    for (auto &a : ts[t].out)
      acc[{a.place, a.var}] += a.w;
    for (auto &a : ts[t].in)
      acc[{a.place, a.var}] -= a.w;
    std::vector<std::tuple<std::size_t, std::size_t, Rational>> out;
    for (auto &[k, v] : acc)
      if (!is_zero(v))
        out.emplace_back(k.first, k.second, v);
    return out;
  }

  Histogram histogram(std::size_t t, const std::vector<Rational> &entries) const {
    Histogram h;
    for (std::size_t x = 0; x < ts[t].vars.size(); ++x)
      for (std::size_t a = 0; a < NY; ++a)
        h.matrix.set(ts[t].vars[x], Y[a], entries[x * NY + a]);
    if (!ts[t].vars.empty())
      h.order = h.matrix.row_sum(ts[t].vars.front());
    return h;
  }
};

void check_marking(const Net &net, const Marking &m, bool nonneg, const char *what) {
  if (m.row_axis() != Axis::Place || m.col_axis() != Axis::Data)
    throw Error(std::string(what) + " is not a place x data matrix");
  for (auto &[k, v] : m.entries()) {
    if (!net.has_place(k.first))
      throw Error(std::string(what) + " uses unknown place '" + k.first + "'");
    if (nonneg && sgn(v) < 0)
      throw Error(std::string(what) + " has a negative entry at (" + k.first + ", " + k.second +
                  ")");
  }
}


} // namespace

ReachResult q_reach(const Net &net, const Marking &i, const Marking &f) {
  check_marking(net, i, false, "initial marking");
  check_marking(net, f, false, "final marking");
  ReachResult res;
  res.stats.universe = data_bound(net, i, f);
  Index ix(net, res.stats.universe);
  const std::size_t NY = ix.NY;

  LinearSystem sys;
  std::vector<std::vector<std::size_t>> h(ix.ts.size());
  std::vector<std::size_t> q(ix.ts.size(), npos);
  for (std::size_t t = 0; t < ix.ts.size(); ++t) {
    auto &ti = ix.ts[t];
    if (ti.vars.empty())
      continue;
    for (std::size_t x = 0; x < ti.vars.size(); ++x)
      for (std::size_t a = 0; a < NY; ++a)
        h[t].push_back(sys.add_var("H[" + ti.name + "][" + ti.vars[x] + "," + ix.Y[a] + "]"));
    q[t] = sys.add_var("q[" + ti.name + "]");
    for (std::size_t x = 0; x < ti.vars.size(); ++x) {
      Constraint c{{{q[t], Rational(-1)}}, Rel::Eq, 0};
      for (std::size_t a = 0; a < NY; ++a)
        c.coeffs.emplace_back(h[t][x * NY + a], 1);
      sys.add(std::move(c));
    }
    for (std::size_t a = 0; a < NY; ++a) {
      Constraint c{{{q[t], Rational(-1)}}, Rel::Le, 0};
      for (std::size_t x = 0; x < ti.vars.size(); ++x)
        c.coeffs.emplace_back(h[t][x * NY + a], 1);
      sys.add(std::move(c));
    }
  }
  auto di = ix.dense(i), df = ix.dense(f);
  std::vector<Constraint> state(ix.P * NY);
  for (std::size_t k = 0; k < state.size(); ++k)
    state[k].rhs = df[k] - di[k];
  for (std::size_t t = 0; t < ix.ts.size(); ++t)
    for (auto &[p, x, d] : ix.delta(t))
      for (std::size_t a = 0; a < NY; ++a)
        state[ix.pair(p, a)].coeffs.emplace_back(h[t][x * NY + a], d);
  for (auto &c : state)
    sys.add(std::move(c));

  res.stats.variables = sys.num_vars();
  res.stats.constraints = sys.constraints().size();
  LpStats lp;
  auto sol = feasible(sys, &lp);
  res.stats.lps = lp.lps;
  res.stats.pivots = lp.pivots;
  res.stats.iterations = 1;
  if (!sol)
    return res;
  Run w;
  for (std::size_t t = 0; t < ix.ts.size(); ++t) {
    if (h[t].empty())
      continue;
    std::vector<Rational> e;
    for (auto id : h[t])
      e.push_back((*sol)[id]);
    Run part = expand_to_steps(net, ix.ts[t].name, ix.histogram(t, e));
    w.insert(w.end(), part.begin(), part.end());
  }
  if (!validate_run(net, i, w, f, Domain::Q).ok)
    throw InternalError("q_reach witness does not validate");
  res.reachable = true;
  res.witness = std::move(w);
  return res;
}

// Emits variables and constraints that make `ids` a histogram for t.
static std::vector<std::size_t> histogram_block(LinearSystem &sys, const Index &ix, std::size_t t,
                                                const std::string &tag) {
  const std::size_t NY = ix.NY;
  const auto &vars = ix.net.variables();
  const auto &tv = ix.ts[t].vars;
  std::vector<std::size_t> ids;
  for (auto &x : vars)
    for (auto &a : ix.Y)
      ids.push_back(sys.add_var(tag + "[" + x + "," + a + "]"));
  std::vector<std::size_t> pos; // positions in `vars` of vars(t)
  for (auto &x : tv)
    pos.push_back(ix.net.variable_index(x));
  for (std::size_t x = 0; x < vars.size(); ++x) {
    if (std::find(pos.begin(), pos.end(), x) != pos.end())
      continue;
    Constraint c{{}, Rel::Eq, 0};
    for (std::size_t a = 0; a < NY; ++a)
      c.coeffs.emplace_back(ids[x * NY + a], 1);
    sys.add(std::move(c));
  }
  if (pos.empty())
    return ids;
  const std::size_t ref = pos.front();
  for (std::size_t k = 1; k < pos.size(); ++k) {
    Constraint c{{}, Rel::Eq, 0};
    for (std::size_t a = 0; a < NY; ++a) {
      c.coeffs.emplace_back(ids[pos[k] * NY + a], 1);
      c.coeffs.emplace_back(ids[ref * NY + a], -1);
    }
    sys.add(std::move(c));
  }
  for (std::size_t a = 0; a < NY; ++a) {
    Constraint c{{}, Rel::Le, 0};
    for (auto x : pos)
      c.coeffs.emplace_back(ids[x * NY + a], 1);
    for (std::size_t b = 0; b < NY; ++b)
      c.coeffs.emplace_back(ids[ref * NY + b], -1);
    sys.add(std::move(c));
  }
  return ids;
}

QplusEncoding encode_qplus(const Net &net, const Marking &i, const Marking &f,
                           const std::vector<DataValue> &universe,
                           std::optional<std::size_t> steps) {
  if (!is_loopless(net))
    throw Error("encode_qplus needs a loop-less net");
  check_marking(net, i, true, "initial marking");
  check_marking(net, f, true, "final marking");
  QplusEncoding enc;
  enc.universe = universe;
  Index ix(net, universe);
  const std::size_t NY = ix.NY, T = ix.ts.size(), PY = ix.P * NY;
  const std::size_t nv = net.variables().size();
  enc.bound = steps ? *steps : ix.P * NY;
  enc.blocks = enc.bound * T;
  LinearSystem &sys = enc.system.base;

  auto marking_block = [&](const std::string &tag) {
    std::vector<std::size_t> ids;
    for (auto &p : net.places())
      for (auto &a : ix.Y)
        ids.push_back(sys.add_var(tag + "[" + p + "," + a + "]"));
    return ids;
  };
  for (std::size_t k = 0; k <= enc.blocks; ++k)
    enc.pre_marking.push_back(marking_block("i" + std::to_string(k)));
  for (std::size_t k = 0; k <= enc.blocks; ++k)
    enc.suf_marking.push_back(marking_block("f" + std::to_string(k)));
  for (std::size_t t = 0; t < T; ++t)
    enc.mid_hist.push_back(histogram_block(sys, ix, t, "h[" + ix.ts[t].name + "]"));
  for (std::size_t k = 0; k < enc.blocks; ++k)
    enc.pre_hist.push_back(histogram_block(sys, ix, k % T, "hp" + std::to_string(k)));
  for (std::size_t k = 0; k < enc.blocks; ++k)
    enc.suf_hist.push_back(histogram_block(sys, ix, k % T, "hs" + std::to_string(k)));

  std::vector<std::vector<std::tuple<std::size_t, std::size_t, Rational>>> deltas;
  for (std::size_t t = 0; t < T; ++t) {
    deltas.push_back({});
    for (auto &[p, x, d] : ix.delta(t))
      deltas.back().emplace_back(p, net.variable_index(ix.ts[t].vars[x]), d);
  }
  // to - from - sum delta(t) * h = 0, per (p, a)
  auto link = [&](const std::vector<std::size_t> &from, const std::vector<std::size_t> &to,
                  const std::vector<std::pair<std::size_t, const std::vector<std::size_t> *>> &hs) {
    std::vector<Constraint> rows(PY);
    for (std::size_t k = 0; k < PY; ++k) {
      rows[k].coeffs = {{to[k], Rational(1)}, {from[k], Rational(-1)}};
      rows[k].rel = Rel::Eq;
      rows[k].rhs = 0;
    }
    for (auto &[t, ids] : hs)
      for (auto &[p, x, d] : deltas[t])
        for (std::size_t a = 0; a < NY; ++a)
          rows[ix.pair(p, a)].coeffs.emplace_back((*ids)[x * NY + a], -d);
    for (auto &c : rows)
      sys.add(std::move(c));
  };

  auto di = ix.dense(i), df = ix.dense(f);
  for (std::size_t k = 0; k < PY; ++k) {
    sys.add(Constraint{{{enc.pre_marking[0][k], Rational(1)}}, Rel::Eq, di[k]});
    sys.add(Constraint{{{enc.suf_marking[enc.blocks][k], Rational(1)}}, Rel::Eq, df[k]});
  }
  for (std::size_t k = 0; k < enc.blocks; ++k) {
    link(enc.pre_marking[k], enc.pre_marking[k + 1], {{k % T, &enc.pre_hist[k]}});
    link(enc.suf_marking[k], enc.suf_marking[k + 1], {{k % T, &enc.suf_hist[k]}});
  }
  std::vector<std::pair<std::size_t, const std::vector<std::size_t> *>> mid;
  for (std::size_t t = 0; t < T; ++t)
    mid.emplace_back(t, &enc.mid_hist[t]);
  link(enc.pre_marking[enc.blocks], enc.suf_marking[0], mid);

  const auto &i_mid = enc.pre_marking[enc.blocks];
  const auto &f_mid = enc.suf_marking[0];
  for (std::size_t t = 0; t < T; ++t) {
    for (auto &arc : ix.ts[t].in) {
      std::size_t x = net.variable_index(ix.ts[t].vars[arc.var]);
      for (std::size_t a = 0; a < NY; ++a)
        enc.system.implications.emplace_back(enc.mid_hist[t][x * NY + a],
                                             i_mid[ix.pair(arc.place, a)]);
    }
    for (auto &arc : ix.ts[t].out) {
      std::size_t x = net.variable_index(ix.ts[t].vars[arc.var]);
      for (std::size_t a = 0; a < NY; ++a)
        enc.system.implications.emplace_back(enc.mid_hist[t][x * NY + a],
                                             f_mid[ix.pair(arc.place, a)]);
    }
  }
  (void)nv;
  return enc;
}

QplusCertificate decode(const QplusEncoding &enc, const Net &net, const Assignment &a) {
  Index ix(net, enc.universe);
  const std::size_t T = ix.ts.size();
  auto values = [&](const std::vector<std::size_t> &ids) {
    std::vector<Rational> v;
    for (auto id : ids)
      v.push_back(a[id]);
    return v;
  };
  // Rows of a decoded block are in net-variable order; Index::histogram wants
  // vars(t) order.
  auto hist = [&](std::size_t t, const std::vector<std::size_t> &ids) {
    std::vector<Rational> e;
    for (auto &x : ix.ts[t].vars) {
      std::size_t xi = net.variable_index(x);
      for (std::size_t b = 0; b < ix.NY; ++b)
        e.push_back(a[ids[xi * ix.NY + b]]);
    }
    return ix.histogram(t, e);
  };
  QplusCertificate c;
  for (std::size_t k = 0; k < enc.blocks; ++k) {
    Histogram h = hist(k % T, enc.pre_hist[k]);
    if (!h.matrix.is_zero())
      c.prefix.emplace_back(ix.ts[k % T].name, std::move(h));
  }
  c.i_mid = ix.sparse(values(enc.pre_marking[enc.blocks]));
  for (std::size_t t = 0; t < T; ++t)
    c.middle[ix.ts[t].name] = hist(t, enc.mid_hist[t]);
  c.f_mid = ix.sparse(values(enc.suf_marking[0]));
  for (std::size_t k = 0; k < enc.blocks; ++k) {
    Histogram h = hist(k % T, enc.suf_hist[k]);
    if (!h.matrix.is_zero())
      c.suffix.emplace_back(ix.ts[k % T].name, std::move(h));
  }
  return c;
}

Run extract_witness(const Net &net, const Marking &i, const Marking &f,
                    const QplusCertificate &cert) {
  Run out;
  auto append = [&](const Run &r) { out.insert(out.end(), r.begin(), r.end()); };
  for (auto &[t, h] : cert.prefix)
    append(expand_to_steps(net, t, h));
  Run sigma;
  for (auto &t : net.transitions()) {
    auto it = cert.middle.find(t.name);
    if (it == cert.middle.end() || it->second.matrix.is_zero())
      continue;
    Run part = expand_to_steps(net, t.name, it->second);
    sigma.insert(sigma.end(), part.begin(), part.end());
  }
  if (!sigma.empty()) {
    // Copy k of sigma / n starts from ((n - k) i + k f) / n. With P the effect
    // of a prefix of sigma, every consumed pair needs (n - k) i + k f + P >= 0,
    // which is linear in k, so k = 0 and k = n - 1 are the binding cases.
    using Key = std::pair<std::string, DataValue>;
    std::map<Key, Rational> partial;
    // n needed for the pair to reach v, or nullopt when no n suffices.
    auto need_for = [&](const Key &key, const Rational &v) -> std::optional<Rational> {
      if (sgn(v) >= 0)
        return Rational(0);
      const Rational a = cert.i_mid.get(key.first, key.second);
      const Rational b = cert.f_mid.get(key.first, key.second);
      if (sgn(a) <= 0)
        return std::nullopt;
      Rational n = -v / a;
      if (sgn(-v - a) > 0) {
        if (sgn(b) <= 0)
          return std::nullopt;
        n = std::max(n, Rational(1 + (-v - a) / b));
      }
      return n;
    };
    auto step_need = [&](const Step &s) -> std::optional<Rational> {
      Rational n = 0;
      for (auto &[p, row] : net.transition(s.transition).in) {
        std::map<DataValue, Rational> use;
        for (auto &[x, w] : row)
          use[s.mode.at(x)] += s.coeff * static_cast<unsigned long>(w);
        for (auto &[d, c] : use) {
          Key key{p, d};
          auto it = partial.find(key);
          auto k = need_for(key, (it == partial.end() ? Rational(0) : it->second) - c);
          if (!k)
            return std::nullopt;
          n = std::max(n, *k);
        }
      }
      return n;
    };
    auto fire = [&](const Step &s) {
      const Transition &t = net.transition(s.transition);
      for (auto &[p, row] : t.out)
        for (auto &[x, w] : row)
          partial[{p, s.mode.at(x)}] += s.coeff * static_cast<unsigned long>(w);
      for (auto &[p, row] : t.in)
        for (auto &[x, w] : row)
          partial[{p, s.mode.at(x)}] -= s.coeff * static_cast<unsigned long>(w);
    };
    // Greedy order: always fire the remaining step that needs the fewest copies.
    Rational need = 2;
    Run ordered;
    std::vector<bool> done(sigma.size(), false);
    for (std::size_t left = sigma.size(); left > 0; --left) {
      std::optional<std::size_t> best;
      Rational best_need;
      for (std::size_t k = 0; k < sigma.size(); ++k) {
        if (done[k])
          continue;
        auto n = step_need(sigma[k]);
        if (n && (!best || *n < best_need)) {
          best = k;
          best_need = *n;
          if (best_need <= need)
            break;
        }
      }
      if (!best)
        throw InternalError("middle run cannot be split into fireable copies");
      done[*best] = true;
      need = std::max(need, best_need);
      fire(sigma[*best]);
      ordered.push_back(sigma[*best]);
    }
    sigma = std::move(ordered);
    const Integer n = ceil(need);
    Run piece = scale(sigma, Rational(1) / Rational(n));
    for (Integer k = 0; k < n; ++k)
      append(piece);
  }
  for (auto &[t, h] : cert.suffix)
    append(expand_to_steps(net, t, h));
  Verdict v = validate_run(net, i, out, f, Domain::QPlus);
  if (!v.ok)
    throw InternalError("extracted witness is not a Q+ run: " + v.failure->reason);
  return out;
}

namespace {

// Middle histograms of the support engine, indexed [t][x * |Y| + a] with x a
// position in vars(t).
struct Profile {
  std::vector<std::vector<Rational>> h;
  std::vector<Rational> q;
  std::vector<std::vector<Rational>> slack; // [t][a]
};

using ModeIx = std::vector<std::size_t>; // data position per var position

struct Fixpoint {
  std::vector<std::vector<bool>> fired;
  std::vector<std::vector<std::pair<std::size_t, ModeIx>>> rounds;
};

// Grows a support set from `start`. An edge (x, a) of t is usable once every
// token it needs (inputs when forward, outputs when backward) is in the set
// and it lies in a mode that stays inside the edge set and covers the full
// columns. Each round fires one mode per newly usable edge.
Fixpoint grow(const Index &ix, const std::vector<std::vector<bool>> &edges,
              const std::vector<std::set<std::string>> &full, std::vector<bool> support,
              bool forward) {
  const std::size_t NY = ix.NY;
  Fixpoint fx;
  for (auto &e : edges)
    fx.fired.emplace_back(e.size(), false);
  for (;;) {
    std::vector<std::pair<std::size_t, ModeIx>> round;
    for (std::size_t t = 0; t < ix.ts.size(); ++t) {
      auto &ti = ix.ts[t];
      const std::size_t nv = ti.vars.size();
      if (nv == 0)
        continue;
      const auto &need = forward ? ti.in : ti.out;
      std::vector<bool> enabled(nv * NY, false);
      for (std::size_t x = 0; x < nv; ++x)
        for (std::size_t a = 0; a < NY; ++a) {
          if (!edges[t][x * NY + a])
            continue;
          bool ok = true;
          for (auto &arc : need)
            if (arc.var == x && !support[ix.pair(arc.place, a)])
              ok = false;
          enabled[x * NY + a] = ok;
        }
      for (std::size_t x = 0; x < nv; ++x)
        for (std::size_t a = 0; a < NY; ++a) {
          if (!enabled[x * NY + a] || fx.fired[t][x * NY + a])
            continue;
          Adjacency adj;
          std::vector<std::string> rows;
          for (std::size_t y = 0; y < nv; ++y) {
            if (y == x)
              continue;
            rows.push_back(ti.vars[y]);
            auto &cand = adj[ti.vars[y]];
            for (std::size_t b = 0; b < NY; ++b)
              if (b != a && enabled[y * NY + b])
                cand.push_back(ix.Y[b]);
          }
          std::set<std::string> cols = full[t];
          cols.erase(ix.Y[a]);
          auto m = saturating_matching(rows, cols, adj);
          if (!m)
            continue;
          ModeIx mode(nv);
          mode[x] = a;
          for (std::size_t y = 0; y < nv; ++y)
            if (y != x)
              mode[y] = ix.y.at(m->at(ti.vars[y]));
          for (std::size_t y = 0; y < nv; ++y)
            fx.fired[t][y * NY + mode[y]] = true;
          round.emplace_back(t, std::move(mode));
        }
    }
    if (round.empty())
      break;
    for (auto &[t, mode] : round)
      for (auto &arc : forward ? ix.ts[t].out : ix.ts[t].in)
        support[ix.pair(arc.place, mode[arc.var])] = true;
    fx.rounds.push_back(std::move(round));
  }
  return fx;
}

// Linear expression over mode weights.
struct Lin {
  Rational c;
  std::map<std::size_t, Rational> terms;

  void add(std::size_t v, const Rational &k) {
    auto &e = terms[v];
    e += k;
    if (is_zero(e))
      terms.erase(v);
  }
};

using Rounds = std::vector<std::vector<std::pair<std::size_t, ModeIx>>>;

// Chooses weights for the prefix and suffix modes. Every round fits within
// the tokens it finds, the middle histogram H minus all modes stays a
// histogram, and the least token left on a reached pair is maximal.
QplusCertificate schedule(const Index &ix, const Profile &prof,
                          const std::vector<std::set<std::string>> &full, const Rounds &fwd,
                          const Rounds &bwd, const std::vector<Rational> &di,
                          const std::vector<Rational> &df, LpStats *stats) {
  const std::size_t NY = ix.NY, T = ix.ts.size(), PY = ix.P * NY;
  struct ModeRef {
    std::size_t t;
    const ModeIx *mode;
  };
  std::vector<ModeRef> modes;
  for (const Rounds *rs : {&fwd, &bwd})
    for (auto &round : *rs)
      for (auto &[t, mode] : round)
        modes.push_back({t, &mode});
  const std::size_t mu = modes.size();
  detail::LpModel lp;
  lp.n = mu + 1;
  lp.cost.assign(lp.n, 0);
  lp.cost[mu] = -1;
  lp.upper.assign(lp.n, std::nullopt);
  lp.upper[mu] = Rational(1);

  auto at_least = [&](const Lin &e, bool with_mu) {
    Constraint c{{}, Rel::Ge, -e.c};
    for (auto &[v, k] : e.terms)
      c.coeffs.emplace_back(v, k);
    if (with_mu)
      c.coeffs.emplace_back(mu, -1);
    lp.rows.push_back(std::move(c));
  };

  // consume: the arcs a round draws from; effect sign +1 forward, -1 backward.
  auto chain = [&](const Rounds &rs, std::size_t first, const std::vector<Rational> &start,
                   bool forward) {
    std::vector<Lin> m(PY);
    std::vector<bool> reached(PY);
    for (std::size_t k = 0; k < PY; ++k) {
      m[k].c = start[k];
      reached[k] = sgn(start[k]) > 0;
    }
    std::size_t id = first;
    for (auto &round : rs) {
      std::map<std::size_t, Lin> draw;
      std::size_t rid = id;
      for (auto &[t, mode] : round) {
        for (auto &arc : forward ? ix.ts[t].in : ix.ts[t].out)
          draw[ix.pair(arc.place, mode[arc.var])].add(rid, -Rational(arc.w));
        ++rid;
      }
      for (auto &[k, d] : draw) {
        Lin e = m[k];
        for (auto &[v, c] : d.terms)
          e.add(v, c);
        at_least(e, false);
      }
      for (auto &[t, mode] : round) {
        for (auto &arc : ix.ts[t].in) {
          auto k = ix.pair(arc.place, mode[arc.var]);
          m[k].add(id, forward ? -Rational(arc.w) : Rational(arc.w));
          reached[k] = reached[k] || !forward;
        }
        for (auto &arc : ix.ts[t].out) {
          auto k = ix.pair(arc.place, mode[arc.var]);
          m[k].add(id, forward ? Rational(arc.w) : -Rational(arc.w));
          reached[k] = reached[k] || forward;
        }
        ++id;
      }
    }
    for (std::size_t k = 0; k < PY; ++k)
      if (reached[k])
        at_least(m[k], true);
    return id;
  };
  std::size_t split = chain(fwd, 0, di, true);
  chain(bwd, split, df, false);

  // H minus the modes stays a histogram: entries and non-full slacks.
  std::vector<std::map<std::size_t, Lin>> entry(T), slack(T);
  for (std::size_t k = 0; k < modes.size(); ++k) {
    const std::size_t t = modes[k].t;
    const ModeIx &mode = *modes[k].mode;
    std::vector<bool> used(NY, false);
    for (std::size_t x = 0; x < mode.size(); ++x) {
      entry[t][x * NY + mode[x]].add(k, -1);
      used[mode[x]] = true;
    }
    for (std::size_t a = 0; a < NY; ++a)
      if (!used[a])
        slack[t][a].add(k, -1);
  }
  for (std::size_t t = 0; t < T; ++t) {
    for (auto &[e, lin] : entry[t]) {
      Lin c = lin;
      c.c = prof.h[t][e];
      at_least(c, false);
    }
    for (auto &[a, lin] : slack[t]) {
      if (full[t].count(ix.Y[a]))
        continue;
      Lin c = lin;
      c.c = prof.slack[t][a];
      at_least(c, false);
    }
  }

  LpResult r = detail::solve(lp, stats);
  if (r.status != LpStatus::Optimal || sgn(r.x[mu]) <= 0)
    throw InternalError("no positive schedule for the support certificate");

  std::vector<std::vector<Rational>> taken(T);
  for (std::size_t t = 0; t < T; ++t)
    taken[t].assign(prof.h[t].size(), 0);
  std::size_t id = 0;
  auto blocks = [&](const Rounds &rs) {
    std::vector<std::vector<std::pair<std::string, Histogram>>> out;
    for (auto &round : rs) {
      std::map<std::size_t, std::vector<Rational>> acc;
      for (auto &[t, mode] : round) {
        const Rational &w = r.x[id++];
        if (is_zero(w))
          continue;
        auto &e = acc[t];
        e.resize(prof.h[t].size(), 0);
        for (std::size_t x = 0; x < mode.size(); ++x) {
          e[x * NY + mode[x]] += w;
          taken[t][x * NY + mode[x]] += w;
        }
      }
      out.emplace_back();
      for (auto &[t, e] : acc)
        out.back().emplace_back(ix.ts[t].name, ix.histogram(t, e));
    }
    return out;
  };
  QplusCertificate cert;
  for (auto &b : blocks(fwd))
    cert.prefix.insert(cert.prefix.end(), b.begin(), b.end());
  auto back = blocks(bwd);
  for (auto it = back.rbegin(); it != back.rend(); ++it)
    cert.suffix.insert(cert.suffix.end(), it->begin(), it->end());

  // Markings at the ends of the prefix and the start of the suffix.
  auto apply = [&](std::vector<Rational> &mk, const std::pair<std::string, Histogram> &blk,
                   int sign) {
    std::size_t t = ix.net.transition_index(blk.first);
    for (auto &[p, x, d] : ix.delta(t)) {
      const std::string &var = ix.ts[t].vars[x];
      for (std::size_t a = 0; a < NY; ++a) {
        Rational h = blk.second.matrix.get(var, ix.Y[a]);
        if (!is_zero(h))
          mk[ix.pair(p, a)] += sign * d * h;
      }
    }
  };
  std::vector<Rational> m = di;
  for (auto &blk : cert.prefix)
    apply(m, blk, 1);
  cert.i_mid = ix.sparse(m);
  m = df;
  for (auto &blk : cert.suffix)
    apply(m, blk, -1);
  cert.f_mid = ix.sparse(m);
  for (std::size_t t = 0; t < T; ++t) {
    std::vector<Rational> e = prof.h[t];
    for (std::size_t k = 0; k < e.size(); ++k)
      e[k] -= taken[t][k];
    cert.middle[ix.ts[t].name] = ix.histogram(t, e);
  }
  return cert;
}

struct SupportOutcome {
  std::optional<QplusCertificate> cert;
  std::size_t variables = 0, constraints = 0, iterations = 0;
  LpStats lp;
};

SupportOutcome support_engine(const Net &net, const Marking &i, const Marking &f,
                              const std::vector<DataValue> &universe) {
  Index ix(net, universe);
  const std::size_t NY = ix.NY, T = ix.ts.size();
  auto di = ix.dense(i), df = ix.dense(f);
  SupportOutcome out;

  std::vector<std::vector<bool>> allowed(T);
  for (std::size_t t = 0; t < T; ++t)
    allowed[t].assign(ix.ts[t].vars.size() * NY, true);

  for (;;) {
    ++out.iterations;
    LinearSystem sys;
    std::vector<std::vector<std::size_t>> hid(T);
    std::vector<std::size_t> qid(T, npos);
    std::vector<std::vector<std::size_t>> sid(T);
    std::vector<Constraint> state(ix.P * NY);
    for (std::size_t k = 0; k < state.size(); ++k)
      state[k].rhs = df[k] - di[k];
    for (std::size_t t = 0; t < T; ++t) {
      auto &ti = ix.ts[t];
      const std::size_t nv = ti.vars.size();
      if (nv == 0)
        continue;
      hid[t].assign(nv * NY, npos);
      for (std::size_t e = 0; e < nv * NY; ++e)
        if (allowed[t][e])
          hid[t][e] = sys.add_var("h" + std::to_string(t) + "_" + std::to_string(e));
      qid[t] = sys.add_var("q" + std::to_string(t));
      for (std::size_t x = 0; x < nv; ++x) {
        Constraint c{{{qid[t], Rational(-1)}}, Rel::Eq, 0};
        for (std::size_t a = 0; a < NY; ++a)
          if (hid[t][x * NY + a] != npos)
            c.coeffs.emplace_back(hid[t][x * NY + a], 1);
        sys.add(std::move(c));
      }
      for (std::size_t a = 0; a < NY; ++a) {
        sid[t].push_back(sys.add_var("s" + std::to_string(t) + "_" + std::to_string(a)));
        Constraint c{{{qid[t], Rational(-1)}, {sid[t].back(), Rational(1)}}, Rel::Eq, 0};
        for (std::size_t x = 0; x < nv; ++x)
          if (hid[t][x * NY + a] != npos)
            c.coeffs.emplace_back(hid[t][x * NY + a], 1);
        sys.add(std::move(c));
      }
      for (auto &[p, x, d] : ix.delta(t))
        for (std::size_t a = 0; a < NY; ++a)
          if (hid[t][x * NY + a] != npos)
            state[ix.pair(p, a)].coeffs.emplace_back(hid[t][x * NY + a], d);
    }
    for (auto &c : state)
      sys.add(std::move(c));
    out.variables = std::max(out.variables, sys.num_vars());
    out.constraints = std::max(out.constraints, sys.constraints().size());

    auto sup = max_support(sys, &out.lp);
    if (!sup)
      return out;

    Profile prof;
    prof.h.resize(T);
    prof.q.assign(T, 0);
    prof.slack.resize(T);
    std::vector<std::vector<bool>> edges(T);
    std::vector<std::set<std::string>> full(T);
    for (std::size_t t = 0; t < T; ++t) {
      const std::size_t nv = ix.ts[t].vars.size();
      prof.h[t].assign(nv * NY, 0);
      edges[t].assign(nv * NY, false);
      if (nv == 0)
        continue;
      for (std::size_t e = 0; e < nv * NY; ++e)
        if (hid[t][e] != npos) {
          prof.h[t][e] = sup->values[hid[t][e]];
          edges[t][e] = sgn(prof.h[t][e]) > 0;
        }
      prof.q[t] = sup->values[qid[t]];
      for (std::size_t a = 0; a < NY; ++a) {
        prof.slack[t].push_back(sup->values[sid[t][a]]);
        if (sgn(prof.q[t]) > 0 && is_zero(prof.slack[t][a]))
          full[t].insert(ix.Y[a]);
      }
    }

    std::vector<bool> si(ix.P * NY), sf(ix.P * NY);
    for (std::size_t k = 0; k < si.size(); ++k) {
      si[k] = sgn(di[k]) > 0;
      sf[k] = sgn(df[k]) > 0;
    }
    Fixpoint fwd = grow(ix, edges, full, si, true);
    Fixpoint bwd = grow(ix, edges, full, sf, false);

    bool stable = true;
    for (std::size_t t = 0; t < T; ++t)
      for (std::size_t e = 0; e < edges[t].size(); ++e) {
        bool keep = edges[t][e] && fwd.fired[t][e] && bwd.fired[t][e];
        if (edges[t][e] && !keep)
          stable = false;
        allowed[t][e] = keep;
      }
    if (!stable)
      continue;

    out.cert = schedule(ix, prof, full, fwd.rounds, bwd.rounds, di, df, &out.lp);
    return out;
  }
}

} // namespace

ReachResult qplus_reach(const Net &net, const Marking &i, const Marking &f, Engine engine) {
  check_marking(net, i, true, "initial marking");
  check_marking(net, f, true, "final marking");
  LoopLess ll = to_loopless(net, i, f);
  ReachResult res;
  res.stats.universe = data_bound(ll.net, ll.i, ll.f);
  std::optional<QplusCertificate> cert;
  if (engine == Engine::Support) {
    SupportOutcome o = support_engine(ll.net, ll.i, ll.f, res.stats.universe);
    res.stats.variables = o.variables;
    res.stats.constraints = o.constraints;
    res.stats.iterations = o.iterations;
    res.stats.lps = o.lp.lps;
    res.stats.pivots = o.lp.pivots;
    cert = std::move(o.cert);
  } else {
    // Any chain length is sound; only the full bound is complete.
    const std::size_t full = ll.net.places().size() * res.stats.universe.size();
    for (std::size_t B = std::min<std::size_t>(1, full);; B = std::min(2 * B, full)) {
      QplusEncoding enc = encode_qplus(ll.net, ll.i, ll.f, res.stats.universe, B);
      res.stats.variables = enc.system.base.num_vars();
      res.stats.constraints = enc.system.base.constraints().size();
      SolveStats st;
      auto sol = solve_implications(enc.system, &st);
      res.stats.iterations += st.iterations;
      res.stats.lps += st.lp.lps;
      res.stats.pivots += st.lp.pivots;
      if (sol) {
        cert = decode(enc, ll.net, *sol);
        break;
      }
      if (B == full)
        break;
    }
  }
  if (!cert)
    return res;
  Run w = project_witness(extract_witness(ll.net, ll.i, ll.f, *cert), ll.mapping);
  if (!validate_run(net, i, w, f, Domain::QPlus).ok)
    throw InternalError("projected witness does not validate in the original net");
  res.reachable = true;
  res.witness = std::move(w);
  return res;
}

} // namespace udpn
