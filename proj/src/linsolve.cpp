#include "udpn/linsolve.hpp"

#include "lp.hpp"

#include "udpn/core.hpp"

#include <sstream>

namespace udpn {

std::size_t LinearSystem::add_var(std::string name) {
  if (index_.count(name))
    throw Error("duplicate variable '" + name + "'");
  index_[name] = names_.size();
  names_.push_back(std::move(name));
  return names_.size() - 1;
}

void LinearSystem::add(Constraint c) {
  for (auto &[j, v] : c.coeffs)
    if (j >= names_.size())
      throw Error("constraint references undeclared variable #" + std::to_string(j));
  cons_.push_back(std::move(c));
}

std::optional<std::size_t> LinearSystem::find(const std::string &name) const {
  auto it = index_.find(name);
  if (it == index_.end())
    return std::nullopt;
  return it->second;
}

bool satisfies(const LinearSystem &sys, const Assignment &a) {
  if (a.size() != sys.num_vars())
    return false;
  for (auto &v : a)
    if (sgn(v) < 0)
      return false;
  for (auto &c : sys.constraints()) {
    Rational lhs = 0;
    for (auto &[j, v] : c.coeffs)
      lhs += v * a[j];
    bool ok = c.rel == Rel::Eq ? lhs == c.rhs : c.rel == Rel::Le ? lhs <= c.rhs : lhs >= c.rhs;
    if (!ok)
      return false;
  }
  return true;
}

std::optional<Assignment> feasible(const LinearSystem &sys, LpStats *stats) {
  if (sys.num_vars() == 0 && sys.constraints().empty())
    return Assignment{};
  LpResult r = minimize(sys, {}, stats);
  if (r.status != LpStatus::Optimal)
    return std::nullopt;
  if (!satisfies(sys, r.x))
    throw InternalError("simplex returned a point violating the constraints");
  return r.x;
}

static Support make_support(Assignment values) {
  Support s;
  s.positive.reserve(values.size());
  for (auto &v : values)
    s.positive.push_back(sgn(v) > 0);
  s.values = std::move(values);
  return s;
}

// Homogenize with a scale variable tau: a.x rel b becomes a.x - b.tau rel 0.
// Every variable v (tau included) is split as v = s_v + w_v with s_v <= 1,
// and the LP maximizes the sum of the s_v. On a cone any support can be
// scaled up, so an optimum reaches s_v = 1 on the whole support at once.
std::optional<Support> max_support(const LinearSystem &sys, LpStats *stats) {
  const std::size_t n = sys.num_vars();
  if (n == 0)
    return feasible(sys, stats) ? std::optional<Support>(Support{}) : std::nullopt;
  const std::size_t tau = n;
  auto s_of = [](std::size_t v) { return 2 * v; };
  auto w_of = [](std::size_t v) { return 2 * v + 1; };
  detail::LpModel m;
  m.n = 2 * (n + 1);
  m.upper.assign(m.n, std::nullopt);
  m.cost.assign(m.n, 0);
  for (std::size_t v = 0; v <= n; ++v) {
    m.upper[s_of(v)] = Rational(1);
    m.cost[s_of(v)] = -1;
  }
  for (auto &c : sys.constraints()) {
    Constraint hc;
    hc.rel = c.rel;
    hc.rhs = 0;
    for (auto &[j, v] : c.coeffs) {
      hc.coeffs.emplace_back(s_of(j), v);
      hc.coeffs.emplace_back(w_of(j), v);
    }
    if (!is_zero(c.rhs)) {
      hc.coeffs.emplace_back(s_of(tau), -c.rhs);
      hc.coeffs.emplace_back(w_of(tau), -c.rhs);
    }
    m.rows.push_back(std::move(hc));
  }
  LpResult r = detail::solve(m, stats);
  if (r.status != LpStatus::Optimal)
    throw InternalError("support LP is bounded and feasible by construction");
  Rational t = r.x[s_of(tau)] + r.x[w_of(tau)];
  if (sgn(t) == 0)
    return std::nullopt;
  Assignment a(n);
  for (std::size_t v = 0; v < n; ++v)
    a[v] = (r.x[s_of(v)] + r.x[w_of(v)]) / t;
  if (!satisfies(sys, a))
    throw InternalError("max-support point violates the constraints");
  return make_support(std::move(a));
}

std::optional<Support> max_support_probes(const LinearSystem &sys, LpStats *stats) {
  const std::size_t n = sys.num_vars();
  auto base = feasible(sys, stats);
  if (!base)
    return std::nullopt;
  Assignment sum = *base;
  std::size_t count = 1;
  for (std::size_t v = 0; v < n; ++v) {
    // maximize s subject to s <= x_v, s <= 1
    LinearSystem p = sys;
    std::size_t s = p.add_var("__probe");
    p.add(Constraint{{{s, Rational(1)}, {v, Rational(-1)}}, Rel::Le, 0});
    p.add(Constraint{{{s, Rational(1)}}, Rel::Le, 1});
    LpResult r = minimize(p, {{s, Rational(-1)}}, stats);
    if (r.status != LpStatus::Optimal)
      throw InternalError("probe LP is bounded and feasible by construction");
    r.x.pop_back();
    for (std::size_t j = 0; j < n; ++j)
      sum[j] += r.x[j];
    ++count;
  }
  for (auto &v : sum)
    v /= count;
  if (!satisfies(sys, sum))
    throw InternalError("averaged probe point violates the constraints");
  return make_support(std::move(sum));
}

bool satisfies(const ImplicationSystem &isys, const Assignment &a) {
  if (!satisfies(isys.base, a))
    return false;
  for (auto &[x, y] : isys.implications)
    if (sgn(a[x]) > 0 && sgn(a[y]) <= 0)
      return false;
  return true;
}

std::optional<Assignment> solve_implications(const ImplicationSystem &isys, SolveStats *stats) {
  for (auto &[x, y] : isys.implications)
    if (x >= isys.base.num_vars() || y >= isys.base.num_vars())
      throw Error("implication references an undeclared variable");
  LinearSystem sys = isys.base;
  std::vector<bool> zeroed(sys.num_vars(), false);
  for (;;) {
    if (stats)
      ++stats->iterations;
    auto sup = max_support(sys, stats ? &stats->lp : nullptr);
    if (!sup)
      return std::nullopt;
    bool changed = false;
    for (auto &[x, y] : isys.implications)
      if (sup->positive[x] && !sup->positive[y] && !zeroed[x]) {
        zeroed[x] = true;
        sys.add(Constraint{{{x, Rational(1)}}, Rel::Eq, 0});
        changed = true;
      }
    if (!changed) {
      if (!satisfies(isys, sup->values))
        throw InternalError("saturation result violates the implication system");
      return sup->values;
    }
  }
}

static void write_constraint(std::ostream &os, const LinearSystem &sys, const Constraint &c) {
  bool first = true;
  for (auto &[j, v] : c.coeffs) {
    Rational a = v;
    if (first) {
      if (sgn(a) < 0) {
        os << "- ";
        a = -a;
      }
    } else {
      os << (sgn(a) < 0 ? " - " : " + ");
      if (sgn(a) < 0)
        a = -a;
    }
    if (a != 1)
      os << to_string(a) << ' ';
    os << sys.names()[j];
    first = false;
  }
  if (first)
    os << '0';
  os << (c.rel == Rel::Eq ? " = " : c.rel == Rel::Le ? " <= " : " >= ") << to_string(c.rhs);
}

std::string dump(const LinearSystem &sys) {
  std::ostringstream os;
  for (auto &c : sys.constraints()) {
    write_constraint(os, sys, c);
    os << '\n';
  }
  return os.str();
}

std::string dump(const ImplicationSystem &isys) {
  std::ostringstream os;
  os << dump(isys.base);
  for (auto &[x, y] : isys.implications)
    os << isys.base.names()[x] << " > 0 => " << isys.base.names()[y] << " > 0\n";
  return os.str();
}

} // namespace udpn
