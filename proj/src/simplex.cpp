// Linear programming in exact arithmetic. A dense floating-point bounded
// simplex proposes a basis, a sparse rational LU verifies it, and an exact
// tableau simplex handles what the check rejects.
#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "lp.hpp"
#include "udpn/core.hpp"

namespace udpn {
namespace detail {
namespace {

using Entry = std::pair<std::size_t, Rational>;
using SparseRow = std::vector<Entry>; // sorted by column

constexpr std::size_t npos = SIZE_MAX;

const Rational *find_coef(const SparseRow &row, std::size_t c) {
  auto it = std::lower_bound(row.begin(), row.end(), c,
                             [](const Entry &e, std::size_t k) { return e.first < k; });
  return it != row.end() && it->first == c ? &it->second : nullptr;
}

// row -= k * piv; `added` and `removed` receive columns that appear or vanish.
void axpy(SparseRow &row, const Rational &k, const SparseRow &piv,
          std::vector<std::size_t> *added = nullptr, std::vector<std::size_t> *removed = nullptr) {
  SparseRow out;
  out.reserve(row.size() + piv.size());
  auto a = row.begin();
  auto b = piv.begin();
  while (a != row.end() || b != piv.end()) {
    if (b == piv.end() || (a != row.end() && a->first < b->first)) {
      out.push_back(std::move(*a++));
    } else if (a == row.end() || b->first < a->first) {
      out.emplace_back(b->first, -k * b->second);
      if (added)
        added->push_back(b->first);
      ++b;
    } else {
      Rational v = a->second - k * b->second;
      if (!is_zero(v))
        out.emplace_back(a->first, std::move(v));
      else if (removed)
        removed->push_back(a->first);
      ++a, ++b;
    }
  }
  row = std::move(out);
}

// Rows normalized to rhs >= 0, then one slack or surplus per inequality and
// one artificial per row without a +1 slack.
struct Standard {
  std::size_t n = 0, N = 0, art_start = 0;
  std::vector<SparseRow> rows;
  std::vector<Rational> b;
  std::vector<std::optional<Rational>> upper;
  std::vector<Rational> cost;
  std::vector<std::size_t> start_basis;
  std::vector<SparseRow> cols; // (row, value) per column
  bool infeasible = false;
};

Standard standardize(const LpModel &m) {
  Standard s;
  s.n = m.n;
  struct Row {
    SparseRow a;
    Rel rel;
    Rational rhs;
  };
  std::vector<Row> rows;
  for (auto &c : m.rows) {
    std::map<std::size_t, Rational> acc;
    for (auto &[j, v] : c.coeffs)
      acc[j] += v;
    Row r{{}, c.rel, c.rhs};
    for (auto &[j, v] : acc)
      if (!is_zero(v))
        r.a.emplace_back(j, v);
    if (sgn(r.rhs) < 0) {
      for (auto &[j, v] : r.a)
        v = -v;
      r.rhs = -r.rhs;
      if (r.rel != Rel::Eq)
        r.rel = r.rel == Rel::Le ? Rel::Ge : Rel::Le;
    }
    if (r.a.empty()) {
      if (!(r.rel == Rel::Le || is_zero(r.rhs)))
        s.infeasible = true;
      continue;
    }
    rows.push_back(std::move(r));
  }
  std::size_t col = m.n;
  std::vector<std::size_t> slack(rows.size(), npos);
  for (std::size_t i = 0; i < rows.size(); ++i)
    if (rows[i].rel != Rel::Eq)
      slack[i] = col++;
  s.art_start = col;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    auto &r = rows[i];
    if (r.rel == Rel::Le) {
      r.a.emplace_back(slack[i], 1);
      s.start_basis.push_back(slack[i]);
    } else {
      if (r.rel == Rel::Ge)
        r.a.emplace_back(slack[i], -1);
      r.a.emplace_back(col, 1);
      s.start_basis.push_back(col++);
    }
    s.rows.push_back(std::move(r.a));
    s.b.push_back(std::move(r.rhs));
  }
  s.N = col;
  s.upper.assign(s.N, std::nullopt);
  s.cost.assign(s.N, 0);
  for (std::size_t j = 0; j < m.n; ++j) {
    if (!m.upper.empty())
      s.upper[j] = m.upper[j];
    if (!m.cost.empty())
      s.cost[j] = m.cost[j];
  }
  s.cols.resize(s.N);
  for (std::size_t i = 0; i < s.rows.size(); ++i)
    for (auto &[j, v] : s.rows[i])
      s.cols[j].emplace_back(i, v);
  return s;
}

// ---------------------------------------------------------------------------
// Floating-point bounded primal simplex on a dense tableau. Lower bounds of
// structural and slack columns are pushed slightly below zero to break the
// heavy degeneracy of homogeneous systems. Every row gets its own artificial
// whose sign makes the starting basis feasible; on inequality rows it is
// parallel to the slack, which replaces it when the basis is handed back.

enum class FStatus { Optimal, Infeasible, Unbounded, Failed };

struct FloatResult {
  FStatus status = FStatus::Failed;
  std::vector<std::size_t> basis; // standard-form columns
  std::vector<char> at_upper;     // standard-form columns
};

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kCostTol = 1e-9;
constexpr double kPivTol = 1e-9;
constexpr double kFeasTol = 1e-9;

constexpr double kDenseLimit = 5e7; // tableau entries

struct FloatSimplex {
  std::size_t m = 0, N = 0; // N counts the standard columns plus m artificials
  std::vector<double> T, beta, lo, up, d;
  std::vector<std::size_t> basis, pos;
  std::vector<char> at_upper;
  std::size_t iterations = 0, limit = 0;

  double &at(std::size_t i, std::size_t j) { return T[i * N + j]; }
  double value(std::size_t j) const { return at_upper[j] ? up[j] : lo[j]; }

  FloatSimplex(const Standard &s, std::size_t ncore) : m(s.rows.size()), N(ncore + m) {
    T.assign(m * N, 0.0);
    for (std::size_t i = 0; i < m; ++i)
      for (auto &[j, v] : s.rows[i])
        if (j < ncore)
          at(i, j) = v.get_d();
    lo.assign(N, 0.0);
    up.assign(N, kInf);
    std::uint64_t seed = 0x9e3779b97f4a7c15ull;
    for (std::size_t j = 0; j < ncore; ++j) {
      seed = seed * 6364136223846793005ull + 1442695040888963407ull;
      lo[j] = -1e-7 * (1.0 + double(seed >> 11) / double(1ull << 53));
      if (s.upper[j])
        up[j] = s.upper[j]->get_d();
    }
    beta.resize(m);
    basis.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
      double r = s.b[i].get_d();
      for (std::size_t j = 0; j < ncore; ++j)
        r -= at(i, j) * lo[j];
      // Start from a slack when it is feasible; the row's artificial stays at 0.
      std::size_t slack = npos;
      for (auto &[j, v] : s.rows[i])
        if (j >= s.n && j < ncore && s.cols[j].size() == 1 && r / at(i, j) >= 0)
          slack = j;
      if (slack != npos) {
        const double a = at(i, slack);
        for (std::size_t j = 0; j < ncore; ++j)
          at(i, j) /= a;
        at(i, ncore + i) = 1.0 / a;
        up[ncore + i] = 0.0;
        beta[i] = r / a + lo[slack];
        basis[i] = slack;
        continue;
      }
      if (r < 0)
        for (std::size_t j = 0; j < ncore; ++j)
          at(i, j) = -at(i, j);
      const std::size_t a = ncore + i;
      at(i, a) = 1.0;
      beta[i] = std::abs(r);
      basis[i] = a;
    }
    pos.assign(N, npos);
    for (std::size_t i = 0; i < m; ++i)
      pos[basis[i]] = i;
    at_upper.assign(N, 0);
    limit = 50 * (m + N) + 1000;
  }

  void price(const std::vector<double> &c) {
    d = c;
    for (std::size_t i = 0; i < m; ++i) {
      double cb = c[basis[i]];
      if (cb == 0.0)
        continue;
      const double *row = &T[i * N];
      for (std::size_t j = 0; j < N; ++j)
        d[j] -= cb * row[j];
    }
    for (std::size_t i = 0; i < m; ++i)
      d[basis[i]] = 0.0;
  }

  void pivot(std::size_t r, std::size_t j) {
    double *pr = &T[r * N];
    const double p = pr[j];
    std::vector<std::size_t> nz;
    for (std::size_t k = 0; k < N; ++k)
      if (pr[k] != 0.0) {
        pr[k] /= p;
        nz.push_back(k);
      }
    pr[j] = 1.0;
    for (std::size_t i = 0; i < m; ++i) {
      if (i == r)
        continue;
      double *row = &T[i * N];
      const double f = row[j];
      if (f == 0.0)
        continue;
      for (auto k : nz)
        row[k] -= f * pr[k];
      row[j] = 0.0;
    }
    const double f = d[j];
    if (f != 0.0) {
      for (auto k : nz)
        d[k] -= f * pr[k];
      d[j] = 0.0;
    }
  }

  FStatus run() {
    for (;;) {
      if (++iterations > limit)
        return FStatus::Failed;
      std::size_t enter = npos;
      double best = 0.0;
      for (std::size_t j = 0; j < N; ++j) {
        if (pos[j] != npos || up[j] == lo[j])
          continue;
        double score = at_upper[j] ? d[j] : -d[j];
        if (score > kCostTol && score > best) {
          best = score;
          enter = j;
        }
      }
      if (enter == npos)
        return FStatus::Optimal;
      const double dir = at_upper[enter] ? -1.0 : 1.0;
      double theta = up[enter] - lo[enter];
      std::size_t leave = npos;
      bool to_upper = false;
      double leave_piv = 0.0;
      for (std::size_t i = 0; i < m; ++i) {
        const double a = dir * at(i, enter);
        if (std::abs(a) <= kPivTol)
          continue;
        const std::size_t b = basis[i];
        double t;
        bool up_side;
        if (a > 0) {
          t = std::max(beta[i] - lo[b], 0.0) / a;
          up_side = false;
        } else {
          if (up[b] == kInf)
            continue;
          t = std::max(up[b] - beta[i], 0.0) / -a;
          up_side = true;
        }
        bool better = leave == npos ? t < theta
                                    : t < theta - 1e-12 ||
                                          (t <= theta + 1e-12 && std::abs(a) > leave_piv);
        if (better) {
          theta = t;
          leave = i;
          to_upper = up_side;
          leave_piv = std::abs(a);
        }
      }
      if (leave == npos && theta == kInf)
        return FStatus::Unbounded;
      for (std::size_t i = 0; i < m; ++i)
        beta[i] -= dir * theta * at(i, enter);
      if (leave == npos) {
        at_upper[enter] = !at_upper[enter];
        continue;
      }
      const double entering = value(enter) + dir * theta;
      const std::size_t out = basis[leave];
      at_upper[out] = to_upper;
      pos[out] = npos;
      basis[leave] = enter;
      pos[enter] = leave;
      at_upper[enter] = 0;
      pivot(leave, enter);
      beta[leave] = entering;
    }
  }
};

FloatResult float_solve(const Standard &s) {
  // Standard-form artificials are replaced by the per-row ones.
  const std::size_t ncore = s.art_start;
  FloatSimplex fs(s, ncore);
  const std::size_t m = fs.m;
  FloatResult res;
  std::vector<double> c1(fs.N, 0.0);
  for (std::size_t i = 0; i < m; ++i)
    c1[ncore + i] = 1.0;
  fs.price(c1);
  if (fs.run() != FStatus::Optimal)
    return res;
  double infeas = 0.0, scale = 1.0;
  for (std::size_t i = 0; i < m; ++i) {
    if (fs.basis[i] >= ncore)
      infeas += std::max(fs.beta[i], 0.0);
    scale = std::max(scale, std::abs(s.b[i].get_d()));
  }
  // Row i's artificial maps to the row's slack or to its standard artificial.
  std::vector<std::size_t> alias(m, npos);
  for (std::size_t j = 0; j < s.N; ++j)
    if (s.cols[j].size() == 1 && (j >= s.art_start || j >= s.n))
      if (alias[s.cols[j][0].first] == npos || j >= s.art_start)
        alias[s.cols[j][0].first] = j;
  auto hand_back = [&](FStatus st) {
    res.status = st;
    res.basis.resize(m);
    res.at_upper.assign(s.N, 0);
    for (std::size_t i = 0; i < m; ++i) {
      std::size_t b = fs.basis[i];
      res.basis[i] = b < ncore ? b : alias[b - ncore];
    }
    for (std::size_t j = 0; j < ncore; ++j)
      res.at_upper[j] = fs.pos[j] == npos && fs.at_upper[j];
    return res;
  };
  if (infeas > kFeasTol * scale)
    return hand_back(FStatus::Infeasible);
  for (std::size_t i = 0; i < m; ++i) {
    fs.up[ncore + i] = 0.0;
    fs.at_upper[ncore + i] = 0;
    if (fs.pos[ncore + i] != npos)
      fs.beta[fs.pos[ncore + i]] = 0.0;
  }
  std::vector<double> c2(fs.N, 0.0);
  for (std::size_t j = 0; j < s.n; ++j)
    c2[j] = s.cost[j].get_d();
  fs.price(c2);
  return hand_back(fs.run());
}

// ---------------------------------------------------------------------------
// Exact check of a proposed basis.

struct Verified {
  std::vector<Rational> x; // all N columns
  Rational value;
};

// phase1: artificial columns cost 1 and are unbounded; otherwise they are
// fixed at zero and the model cost applies.
std::optional<Verified> verify(const Standard &s, const std::vector<std::size_t> &basis,
                               const std::vector<char> &at_upper, bool phase1) {
  const std::size_t m = s.rows.size();
  auto upper = [&](std::size_t j) -> std::optional<Rational> {
    if (j >= s.art_start)
      return phase1 ? std::nullopt : std::optional<Rational>(Rational(0));
    return s.upper[j];
  };
  auto cost = [&](std::size_t j) -> Rational {
    if (phase1)
      return j >= s.art_start ? Rational(1) : Rational(0);
    return s.cost[j];
  };
  std::vector<std::size_t> pos(s.N, npos);
  for (std::size_t k = 0; k < m; ++k) {
    if (pos[basis[k]] != npos)
      return std::nullopt;
    pos[basis[k]] = k;
  }
  std::vector<Rational> x(s.N, 0);
  for (std::size_t j = 0; j < s.N; ++j)
    if (pos[j] == npos && at_upper[j]) {
      auto u = upper(j);
      if (!u)
        return std::nullopt;
      x[j] = *u;
    }
  std::vector<Rational> r = s.b;
  for (std::size_t j = 0; j < s.N; ++j)
    if (pos[j] == npos && !is_zero(x[j]))
      for (auto &[i, v] : s.cols[j])
        r[i] -= v * x[j];
  std::vector<SparseRow> B(m);
  for (std::size_t k = 0; k < m; ++k)
    for (auto &[i, v] : s.cols[basis[k]])
      B[i].emplace_back(k, v);
  auto xb = solve_square(std::move(B), std::move(r));
  if (!xb)
    return std::nullopt;
  for (std::size_t k = 0; k < m; ++k) {
    const Rational &v = (*xb)[k];
    if (sgn(v) < 0)
      return std::nullopt;
    if (auto u = upper(basis[k]); u && v > *u)
      return std::nullopt;
    x[basis[k]] = v;
  }
  std::vector<SparseRow> BT(m);
  std::vector<Rational> cb(m);
  for (std::size_t k = 0; k < m; ++k) {
    BT[k] = s.cols[basis[k]];
    cb[k] = cost(basis[k]);
  }
  auto y = solve_square(std::move(BT), std::move(cb));
  if (!y)
    return std::nullopt;
  for (std::size_t j = 0; j < s.N; ++j) {
    if (pos[j] != npos)
      continue;
    auto u = upper(j);
    if (u && is_zero(*u))
      continue;
    Rational dj = cost(j);
    for (auto &[i, v] : s.cols[j])
      dj -= (*y)[i] * v;
    if (at_upper[j] ? sgn(dj) > 0 : sgn(dj) < 0)
      return std::nullopt;
  }
  Verified out{std::move(x), 0};
  for (std::size_t j = 0; j < s.N; ++j)
    if (!is_zero(out.x[j]))
      out.value += cost(j) * out.x[j];
  return out;
}

// ---------------------------------------------------------------------------
// Exact two-phase tableau simplex, upper bounds given as rows.

constexpr std::size_t kDegenerateLimit = 50;

struct Tableau {
  std::vector<SparseRow> rows;
  std::vector<Rational> rhs;
  std::vector<std::size_t> basis;
  std::vector<Rational> cost; // reduced costs
  Rational obj;
  std::size_t ncols = 0;
  std::size_t banned_from = SIZE_MAX; // columns >= this never enter
  LpStats *stats = nullptr;

  void pivot(std::size_t r, std::size_t c) {
    Rational p = *find_coef(rows[r], c);
    if (p != 1) {
      Rational inv = 1 / p;
      for (auto &[j, v] : rows[r])
        v *= inv;
      rhs[r] *= inv;
    }
    const SparseRow &piv = rows[r];
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i == r)
        continue;
      const Rational *a = find_coef(rows[i], c);
      if (!a)
        continue;
      Rational k = *a;
      axpy(rows[i], k, piv);
      rhs[i] -= k * rhs[r];
    }
    Rational dc = cost[c];
    if (!is_zero(dc)) {
      for (auto &[j, v] : piv)
        cost[j] -= dc * v;
      obj += dc * rhs[r];
    }
    basis[r] = c;
    if (stats)
      ++stats->pivots;
  }

  // false when unbounded
  bool optimize() {
    std::size_t streak = 0;
    for (;;) {
      std::size_t enter = SIZE_MAX;
      std::size_t limit = std::min(ncols, banned_from);
      if (streak < kDegenerateLimit) {
        const Rational *best = nullptr;
        for (std::size_t j = 0; j < limit; ++j)
          if (sgn(cost[j]) < 0 && (!best || cost[j] < *best)) {
            best = &cost[j];
            enter = j;
          }
      } else {
        for (std::size_t j = 0; j < limit && enter == SIZE_MAX; ++j)
          if (sgn(cost[j]) < 0)
            enter = j;
      }
      if (enter == SIZE_MAX)
        return true;
      std::size_t leave = SIZE_MAX;
      Rational best_ratio;
      for (std::size_t i = 0; i < rows.size(); ++i) {
        const Rational *a = find_coef(rows[i], enter);
        if (!a || sgn(*a) <= 0)
          continue;
        Rational ratio = rhs[i] / *a;
        if (leave == SIZE_MAX || ratio < best_ratio ||
            (ratio == best_ratio && basis[i] < basis[leave])) {
          leave = i;
          best_ratio = ratio;
        }
      }
      if (leave == SIZE_MAX)
        return false;
      streak = is_zero(rhs[leave]) ? streak + 1 : 0;
      pivot(leave, enter);
    }
  }

  void remove_row(std::size_t r) {
    rows.erase(rows.begin() + r);
    rhs.erase(rhs.begin() + r);
    basis.erase(basis.begin() + r);
  }
};

LpResult exact_tableau(const LpModel &model, LpStats *stats) {
  LpModel m = model;
  if (!m.upper.empty())
    for (std::size_t j = 0; j < m.n; ++j)
      if (m.upper[j])
        m.rows.push_back(Constraint{{{j, Rational(1)}}, Rel::Le, *m.upper[j]});
  m.upper.clear();
  Standard s = standardize(m);
  if (s.infeasible)
    return LpResult{LpStatus::Infeasible, {}, 0};
  Tableau t;
  t.stats = stats;
  t.rows = s.rows;
  t.rhs = s.b;
  t.basis = s.start_basis;
  t.ncols = s.N;
  const std::size_t art_start = s.art_start;

  t.cost.assign(t.ncols, 0);
  t.obj = 0;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    if (t.basis[i] < art_start)
      continue;
    for (auto &[j, v] : t.rows[i])
      if (j < art_start)
        t.cost[j] -= v;
    t.obj += t.rhs[i];
  }
  if (art_start != t.ncols) {
    t.optimize();
    if (sgn(t.obj) > 0)
      return LpResult{LpStatus::Infeasible, {}, 0};
    for (std::size_t i = t.rows.size(); i-- > 0;) {
      if (t.basis[i] < art_start)
        continue;
      std::size_t enter = SIZE_MAX;
      for (auto &[j, v] : t.rows[i])
        if (j < art_start) {
          enter = j;
          break;
        }
      if (enter == SIZE_MAX)
        t.remove_row(i); // redundant equality
      else
        t.pivot(i, enter);
    }
    for (auto &row : t.rows)
      std::erase_if(row, [&](const Entry &e) { return e.first >= art_start; });
  }
  t.ncols = art_start;
  t.banned_from = art_start;

  std::vector<Rational> c(t.ncols, 0);
  for (std::size_t j = 0; j < s.n; ++j)
    c[j] = s.cost[j];
  t.cost = c;
  t.obj = 0;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const Rational &cb = c[t.basis[i]];
    if (is_zero(cb))
      continue;
    for (auto &[j, v] : t.rows[i])
      t.cost[j] -= cb * v;
    t.obj += cb * t.rhs[i];
  }
  if (!t.optimize())
    return LpResult{LpStatus::Unbounded, {}, 0};

  LpResult res{LpStatus::Optimal, Assignment(s.n, 0), t.obj};
  for (std::size_t i = 0; i < t.rows.size(); ++i)
    if (t.basis[i] < s.n)
      res.x[t.basis[i]] = t.rhs[i];
  return res;
}

} // namespace

std::optional<std::vector<Rational>>
solve_square(std::vector<std::vector<std::pair<std::size_t, Rational>>> rows,
             std::vector<Rational> rhs) {
  const std::size_t m = rows.size();
  for (auto &r : rows)
    std::sort(r.begin(), r.end(),
              [](const Entry &a, const Entry &b) { return a.first < b.first; });
  std::vector<std::vector<std::size_t>> col_rows(m);
  std::vector<std::size_t> col_count(m, 0);
  for (std::size_t i = 0; i < m; ++i)
    for (auto &[c, v] : rows[i]) {
      if (c >= m)
        return std::nullopt;
      col_rows[c].push_back(i);
      ++col_count[c];
    }
  std::vector<char> done(m, 0);
  std::vector<std::pair<std::size_t, std::size_t>> order;
  std::vector<std::size_t> added, removed;
  for (std::size_t step = 0; step < m; ++step) {
    std::size_t pr = npos, pc = npos, best = SIZE_MAX;
    for (std::size_t i = 0; i < m && best != 0; ++i) {
      if (done[i])
        continue;
      if (rows[i].empty())
        return std::nullopt;
      for (auto &[c, v] : rows[i]) {
        std::size_t score = (rows[i].size() - 1) * (col_count[c] - 1);
        if (score < best) {
          best = score;
          pr = i;
          pc = c;
          if (best == 0)
            break;
        }
      }
    }
    done[pr] = 1;
    order.emplace_back(pr, pc);
    for (auto &[c, v] : rows[pr])
      --col_count[c];
    const Rational piv = *find_coef(rows[pr], pc);
    for (std::size_t i : col_rows[pc]) {
      if (done[i])
        continue;
      const Rational *a = find_coef(rows[i], pc);
      if (!a)
        continue;
      Rational k = *a / piv;
      added.clear();
      removed.clear();
      axpy(rows[i], k, rows[pr], &added, &removed);
      for (auto c : added) {
        ++col_count[c];
        col_rows[c].push_back(i);
      }
      for (auto c : removed)
        --col_count[c];
      rhs[i] -= k * rhs[pr];
    }
    col_rows[pc].clear();
  }
  std::vector<Rational> x(m, 0);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    auto [r, c] = *it;
    Rational acc = rhs[r];
    Rational p;
    for (auto &[j, v] : rows[r]) {
      if (j == c)
        p = v;
      else
        acc -= v * x[j];
    }
    x[c] = acc / p;
  }
  return x;
}

LpResult solve(const LpModel &model, LpStats *stats) {
  if (stats)
    ++stats->lps;
  Standard s = standardize(model);
  if (s.infeasible)
    return LpResult{LpStatus::Infeasible, {}, 0};
  if (double(s.rows.size()) * double(s.N) > kDenseLimit)
    throw Error("linear program with " + std::to_string(s.rows.size()) + " rows and " +
                std::to_string(s.N) + " columns is too large for the dense simplex");
  FloatResult fr = float_solve(s);
  if (fr.status == FStatus::Optimal) {
    if (auto v = verify(s, fr.basis, fr.at_upper, false)) {
      return LpResult{LpStatus::Optimal, Assignment(v->x.begin(), v->x.begin() + s.n), v->value};
    }
  } else if (fr.status == FStatus::Infeasible) {
    if (auto v = verify(s, fr.basis, fr.at_upper, true); v && sgn(v->value) > 0)
      return LpResult{LpStatus::Infeasible, {}, 0};
  }
  if (stats)
    ++stats->fallbacks;
  return exact_tableau(model, stats);
}

} // namespace detail

LpResult minimize(const LinearSystem &sys,
                  const std::vector<std::pair<std::size_t, Rational>> &objective,
                  LpStats *stats) {
  detail::LpModel m;
  m.n = sys.num_vars();
  m.rows = sys.constraints();
  m.cost.assign(m.n, 0);
  for (auto &[j, v] : objective)
    m.cost[j] += v;
  return detail::solve(m, stats);
}

} // namespace udpn
