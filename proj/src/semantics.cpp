#include "udpn/semantics.hpp"

#include <tuple>
#include <vector>

namespace udpn {

std::set<DataValue> dval(const Marking &m) { return m.nonzero_cols(); }

std::set<DataValue> dval(const Net &net, const Run &run) {
  std::set<DataValue> out;
  for (auto &s : run)
    for (auto &x : net.vars(s.transition)) {
      auto it = s.mode.find(x);
      if (it != s.mode.end())
        out.insert(it->second);
    }
  return out;
}

std::set<std::string> vars(const Net &net, const std::string &t) {
  auto v = net.vars(t);
  return {v.begin(), v.end()};
}

// Amounts consumed by a step, as (place, datum, quantity).
static std::vector<std::tuple<std::string, DataValue, Rational>> consumption(const Net &net,
                                                                            const Step &s) {
  std::map<std::pair<std::string, DataValue>, Rational> acc;
  for (auto &[p, row] : net.transition(s.transition).in)
    for (auto &[x, w] : row)
      acc[{p, s.mode.at(x)}] += s.coeff * static_cast<unsigned long>(w);
  std::vector<std::tuple<std::string, DataValue, Rational>> out;
  for (auto &[k, v] : acc)
    out.emplace_back(k.first, k.second, v);
  return out;
}

bool step_fireable(const Net &net, const Marking &m, const Step &s, Domain d) {
  check_step(net, s);
  if (d == Domain::Q)
    return true;
  for (auto &[p, a, q] : consumption(net, s))
    if (m.get(p, a) < q)
      return false;
  return true;
}

Marking fire_step(const Net &net, const Marking &m, const Step &s) {
  check_step(net, s);
  Marking out = m;
  out += step_effect(net, s);
  return out;
}

RatMatrix run_effect(const Net &net, const Run &run) {
  RatMatrix out(Axis::Place, Axis::Data);
  for (auto &s : run) {
    check_step(net, s);
    out += step_effect(net, s);
  }
  return out;
}

Verdict validate_run(const Net &net, const Marking &i, const Run &run, const Marking &f,
                     Domain d) {
  Verdict v;
  auto fail = [&](std::size_t k, const std::string &p, const DataValue &a, Rational q,
                  std::string why) {
    v.ok = false;
    v.failure = Failure{k, p, a, std::move(q), std::move(why)};
    return v;
  };
  if (d == Domain::QPlus) {
    for (auto &[k, q] : i.entries())
      if (sgn(q) < 0)
        return fail(0, k.first, k.second, -q, "initial marking is negative");
    for (auto &[k, q] : f.entries())
      if (sgn(q) < 0)
        return fail(run.size(), k.first, k.second, -q, "final marking is negative");
  }
  Marking m = i;
  for (std::size_t k = 0; k < run.size(); ++k) {
    const Step &s = run[k];
    try {
      check_step(net, s);
    } catch (const Error &e) {
      return fail(k, "", "", 0, e.what());
    }
    const Transition &t = net.transition(s.transition);
    std::vector<std::tuple<const std::string *, const DataValue *, Rational>> take;
    for (auto &[p, row] : t.in)
      for (auto &[x, w] : row) {
        const DataValue &a = s.mode.at(x);
        Rational q = s.coeff * static_cast<unsigned long>(w);
        if (d == Domain::QPlus) {
          Rational have = m.get(p, a);
          if (have < q)
            return fail(k, p, a, q - have, "step not fireable");
        }
        take.emplace_back(&p, &a, std::move(q));
      }
    for (auto &[p, a, q] : take)
      m.add(*p, *a, -q);
    for (auto &[p, row] : t.out)
      for (auto &[x, w] : row)
        m.add(p, s.mode.at(x), s.coeff * static_cast<unsigned long>(w));
  }
  RatMatrix diff = f - m;
  if (!diff.is_zero()) {
    auto &[k, q] = *diff.entries().begin();
    return fail(run.size(), k.first, k.second, q, "run does not end in the target marking");
  }
  return v;
}

static TokenSet touched(const Net &net, const Run &run, bool consumed) {
  TokenSet out;
  for (auto &s : run) {
    const Transition &t = net.transition(s.transition);
    for (auto &[p, row] : consumed ? t.in : t.out)
      for (auto &[x, w] : row)
        out.emplace(p, s.mode.at(x));
  }
  return out;
}

TokenSet pre_set(const Net &net, const Run &run) { return touched(net, run, true); }
TokenSet post_set(const Net &net, const Run &run) { return touched(net, run, false); }

Run scale(const Run &run, const Rational &k) {
  Run out = run;
  for (auto &s : out)
    s.coeff *= k;
  return out;
}

} // namespace udpn
