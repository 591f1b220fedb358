#include "udpn/histograms.hpp"

#include <deque>

namespace udpn {

std::optional<Rational> check_histogram(const RatMatrix &m) {
  std::optional<Rational> q;
  for (auto &[k, v] : m.entries())
    if (sgn(v) < 0)
      return std::nullopt;
  for (auto &r : m.nonzero_rows()) {
    Rational s = m.row_sum(r);
    if (q && *q != s)
      return std::nullopt;
    q = s;
  }
  if (!q)
    return Rational(0);
  for (auto &c : m.nonzero_cols())
    if (m.col_sum(c) > *q)
      return std::nullopt;
  return q;
}

Histogram make_histogram(const RatMatrix &m) {
  auto q = check_histogram(m);
  if (!q)
    throw Error("matrix is not a histogram");
  return Histogram{m, *q};
}

Histogram add(const Histogram &a, const Histogram &b) {
  if (!a.matrix.is_zero() && !b.matrix.is_zero() &&
      a.matrix.nonzero_rows() != b.matrix.nonzero_rows())
    throw Error("histograms have different row sets");
  return Histogram{a.matrix + b.matrix, a.order + b.order};
}

HistProfile hist_of_run(const Net &net, const Run &run) {
  HistProfile out;
  for (auto &t : net.transitions())
    out[t.name] = Histogram{};
  for (auto &s : run) {
    check_step(net, s);
    Histogram &h = out[s.transition];
    for (auto &x : net.vars(s.transition))
      h.matrix.add(x, s.mode.at(x), s.coeff);
    h.order += s.coeff;
  }
  // A transition without variables has an all-zero histogram whatever it fired.
  for (auto &[t, h] : out)
    if (h.matrix.is_zero())
      h.order = 0;
  return out;
}

namespace {

using Vertex = std::pair<bool, std::string>; // (is column, name)

bool kuhn(const std::string &u, const Adjacency &adj, std::set<std::string> &seen,
          std::map<std::string, std::string> &owner, std::map<std::string, std::string> &match) {
  auto it = adj.find(u);
  if (it == adj.end())
    return false;
  for (auto &v : it->second) {
    if (!seen.insert(v).second)
      continue;
    auto o = owner.find(v);
    if (o == owner.end() || kuhn(o->second, adj, seen, owner, match)) {
      owner[v] = u;
      match[u] = v;
      return true;
    }
  }
  return false;
}

// Matching saturating `left`, or nothing.
std::optional<std::map<std::string, std::string>> saturate(const std::vector<std::string> &left,
                                                            const Adjacency &adj) {
  std::map<std::string, std::string> owner, match;
  for (auto &u : left) {
    std::set<std::string> seen;
    if (!kuhn(u, adj, seen, owner, match))
      return std::nullopt;
  }
  return match;
}

} // namespace

std::optional<Matching> saturating_matching(const std::vector<std::string> &rows,
                                            const std::set<std::string> &cols,
                                            const Adjacency &adj) {
  auto m1 = saturate(rows, adj);
  if (!m1)
    return std::nullopt;
  Adjacency rev;
  for (auto &[r, cs] : adj)
    for (auto &c : cs)
      rev[c].push_back(r);
  auto m2c = saturate({cols.begin(), cols.end()}, rev);
  if (!m2c)
    return std::nullopt;

  std::map<std::string, std::string> m1c, m2r;
  for (auto &[r, c] : *m1)
    m1c[c] = r;
  for (auto &[c, r] : *m2c)
    m2r[r] = c;
  std::set<std::string> need_rows(rows.begin(), rows.end());

  auto neighbours = [&](const Vertex &v) {
    std::vector<Vertex> out;
    auto &[is_col, name] = v;
    auto &a = is_col ? m1c : *m1;
    auto &b = is_col ? *m2c : m2r;
    if (auto it = a.find(name); it != a.end())
      out.push_back({!is_col, it->second});
    if (auto it = b.find(name); it != b.end())
      out.push_back({!is_col, it->second});
    return out;
  };

  Matching result;
  std::set<Vertex> visited;
  std::vector<Vertex> starts;
  for (auto &[r, c] : *m1)
    starts.push_back({false, r});
  for (auto &[c, r] : *m2c)
    starts.push_back({true, c});
  for (auto &start : starts) {
    if (visited.count(start))
      continue;
    std::vector<Vertex> comp;
    std::deque<Vertex> queue{start};
    visited.insert(start);
    while (!queue.empty()) {
      Vertex v = queue.front();
      queue.pop_front();
      comp.push_back(v);
      for (auto &w : neighbours(v))
        if (visited.insert(w).second)
          queue.push_back(w);
    }
    auto covered = [&](bool use_m2) {
      for (auto &[is_col, name] : comp) {
        bool required = is_col ? cols.count(name) != 0 : need_rows.count(name) != 0;
        if (!required)
          continue;
        bool has = is_col ? (use_m2 ? m2c->count(name) : m1c.count(name))
                          : (use_m2 ? m2r.count(name) : m1->count(name));
        if (!has)
          return false;
      }
      return true;
    };
    bool use_m2 = covered(true);
    if (!use_m2 && !covered(false))
      throw InternalError("matching components cannot be combined");
    for (auto &[is_col, name] : comp) {
      if (is_col)
        continue;
      if (use_m2) {
        if (auto it = m2r.find(name); it != m2r.end())
          result[name] = it->second;
      } else if (auto it = m1->find(name); it != m1->end()) {
        result[name] = it->second;
      }
    }
  }
  return result;
}

std::vector<Part> decompose(const Histogram &h) {
  if (!check_histogram(h.matrix) || *check_histogram(h.matrix) != h.order)
    throw Error("decompose: not a histogram of the stated order");
  std::vector<Part> parts;
  RatMatrix m = h.matrix;
  Rational q = h.order;
  while (!m.is_zero()) {
    auto rows_set = m.nonzero_rows();
    std::vector<std::string> rows(rows_set.begin(), rows_set.end());
    std::set<std::string> full;
    std::map<std::string, Rational> colsum;
    for (auto &[k, v] : m.entries())
      colsum[k.second] += v;
    for (auto &[c, s] : colsum)
      if (s == q)
        full.insert(c);
    Adjacency adj;
    for (auto &[k, v] : m.entries())
      adj[k.first].push_back(k.second);
    auto match = saturating_matching(rows, full, adj);
    if (!match)
      throw InternalError("histogram violates the matching condition");
    Rational a = q;
    std::set<std::string> used;
    for (auto &[r, c] : *match) {
      a = std::min(a, m.get(r, c));
      used.insert(c);
    }
    // An uncovered column keeps its sum while the order drops by a.
    for (auto &[c, s] : colsum)
      if (!used.count(c))
        a = std::min(a, Rational(q - s));
    if (sgn(a) <= 0)
      throw InternalError("decomposition made no progress");
    for (auto &[r, c] : *match)
      m.add(r, c, -a);
    q -= a;
    parts.push_back(Part{a, Mode(match->begin(), match->end())});
  }
  return parts;
}

Run expand_to_steps(const Net &net, const std::string &t, const Histogram &h) {
  auto vs = net.vars(t);
  std::set<std::string> vset(vs.begin(), vs.end());
  auto rows = h.matrix.nonzero_rows();
  for (auto &r : rows)
    if (!vset.count(r))
      throw Error("histogram row '" + r + "' is not a variable of '" + t + "'");
  if (!rows.empty() && rows.size() != vset.size())
    throw Error("histogram for '" + t + "' leaves a variable unassigned");
  Run out;
  for (auto &p : decompose(h))
    out.push_back(Step{p.weight, t, p.pattern});
  return out;
}

} // namespace udpn
