#include "udpn/transforms.hpp"

#include <algorithm>
#include <set>
#include <string>

namespace udpn {

DataValue next_in(const std::set<DataValue> &E, const DataValue &a) {
  auto it = E.find(a);
  if (it == E.end())
    throw Error("'" + a + "' is not in the rotation set");
  ++it;
  return it == E.end() ? *E.begin() : *it;
}

DataValue prev_in(const std::set<DataValue> &E, const DataValue &a) {
  auto it = E.find(a);
  if (it == E.end())
    throw Error("'" + a + "' is not in the rotation set");
  return it == E.begin() ? *E.rbegin() : *std::prev(it);
}

Step rotate(const std::set<DataValue> &E, const Step &s, std::size_t times) {
  if (E.empty())
    throw Error("rotate needs a non-empty set");
  Step out = s;
  times %= E.size();
  for (std::size_t k = 0; k < times; ++k)
    for (auto &[x, a] : out.mode)
      if (E.count(a))
        a = prev_in(E, a);
  return out;
}

Run uniformize(const std::set<DataValue> &E, const Step &s) {
  if (E.empty())
    throw Error("uniformize needs a non-empty set");
  Step part = s;
  part.coeff /= static_cast<unsigned long>(E.size());
  Run out;
  for (std::size_t k = 0; k < E.size(); ++k)
    out.push_back(rotate(E, part, k));
  return out;
}

// Column a of delta(t) * P is zero.
static bool zero_column(const Net &net, const Step &s, const DataValue &a) {
  Step unit = s;
  unit.coeff = 1;
  RatMatrix eff = step_effect(net, unit);
  for (auto &[k, v] : eff.entries())
    if (k.second == a)
      return false;
  return true;
}

Step replace(const Net &net, const DataValue &alpha, const std::set<DataValue> &E, const Step &s) {
  if (E.count(alpha))
    throw Error("replace: the removed value belongs to E");
  check_step(net, s);
  if (zero_column(net, s, alpha))
    return s;
  for (auto &beta : E) {
    if (!zero_column(net, s, beta))
      continue;
    Step out = s;
    for (auto &[x, a] : out.mode) {
      if (a == alpha)
        a = beta;
      else if (a == beta)
        a = alpha;
    }
    return out;
  }
  throw Error("replace inapplicable: every value of E is used by the step");
}

Run decrease(const Net &net, const std::set<DataValue> &E, const DataValue &alpha,
             const Run &run) {
  Run out;
  for (auto &s : run) {
    Run part = uniformize(E, replace(net, alpha, E, s));
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

std::size_t data_bound_size(const Net &net, const Marking &i, const Marking &f) {
  auto d = dval(i);
  auto df = dval(f);
  d.insert(df.begin(), df.end());
  return d.size() + 1 + net.max_vars();
}

Run reduce_data(const Net &net, const Marking &i, const Marking &f, const Run &run, Domain d) {
  if (!validate_run(net, i, run, f, d).ok)
    throw Error("reduce_data: the input run does not connect the markings");
  auto fixed = dval(i);
  auto df = dval(f);
  fixed.insert(df.begin(), df.end());
  const std::size_t bound = fixed.size() + 1 + net.max_vars();
  Run cur = run;
  for (auto used = dval(net, cur); used.size() > bound; used = dval(net, cur)) {
    std::set<DataValue> removable;
    std::set_difference(used.begin(), used.end(), fixed.begin(), fixed.end(),
                        std::inserter(removable, removable.end()));
    DataValue alpha = *removable.rbegin();
    removable.erase(alpha);
    cur = decrease(net, removable, alpha, cur);
  }
  if (!validate_run(net, i, cur, f, d).ok)
    throw InternalError("reduce_data produced a run that does not validate");
  return cur;
}

bool is_loopless(const Net &net) {
  for (auto &t : net.transitions()) {
    auto pre = net.pre_places(t.name);
    for (auto &[p, row] : t.out)
      if (pre.count(p))
        return false;
  }
  return true;
}

// base, or base_1, base_2, ... when taken.
static std::string fresh_name(const std::string &base, const std::set<std::string> &taken) {
  std::string name = base;
  for (std::size_t k = 1; taken.count(name); ++k)
    name = base + "_" + std::to_string(k);
  return name;
}

LoopLess to_loopless(const Net &net, const Marking &i, const Marking &f) {
  LoopLess out;
  Net &n = out.net;
  std::set<std::string> places(net.places().begin(), net.places().end()), transitions;
  for (auto &t : net.transitions())
    transitions.insert(t.name);
  for (auto &p : net.places())
    n.add_place(p);
  for (auto &p : net.places()) {
    std::string s = fresh_name(kShadowPrefix + p, places);
    places.insert(s);
    out.mapping.shadow[p] = s;
    n.add_place(s);
  }
  for (auto &x : net.variables())
    n.add_variable(x);
  for (auto &t : net.transitions()) {
    Transition nt = t;
    auto pre = net.pre_places(t.name);
    bool changed = false;
    for (auto &[p, row] : t.out)
      if (pre.count(p)) {
        nt.out.erase(p);
        nt.out[out.mapping.shadow.at(p)] = row;
        changed = true;
      }
    if (changed)
      out.mapping.modified.insert(t.name);
    out.mapping.original[t.name] = t.name;
    n.add_transition(std::move(nt));
  }
  for (auto &p : net.places()) {
    Transition c;
    c.name = fresh_name(kCopyPrefix + p, transitions);
    transitions.insert(c.name);
    if (!net.variables().empty()) {
      const std::string &x = net.variables().front();
      c.in[out.mapping.shadow.at(p)][x] = 1;
      c.out[p][x] = 1;
    }
    out.mapping.copy[p] = c.name;
    n.add_transition(std::move(c));
  }
  out.i = i;
  out.f = f;
  return out;
}

Run project_witness(const Run &run, const LoopMapping &mapping) {
  Run out;
  for (auto &s : run) {
    auto it = mapping.original.find(s.transition);
    if (it == mapping.original.end())
      continue; // copy transition
    Step o = s;
    o.transition = it->second;
    out.push_back(std::move(o));
  }
  return out;
}

} // namespace udpn
