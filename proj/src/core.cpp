#include "udpn/core.hpp"

namespace udpn {

const char *axis_name(Axis a) {
  switch (a) {
  case Axis::Place:
    return "place";
  case Axis::Var:
    return "variable";
  case Axis::Data:
    return "data";
  }
  return "?";
}

Rational RatMatrix::get(const std::string &r, const std::string &c) const {
  auto it = e_.find({r, c});
  return it == e_.end() ? Rational(0) : it->second;
}

void RatMatrix::set(const std::string &r, const std::string &c, const Rational &v) {
  if (udpn::is_zero(v))
    e_.erase({r, c});
  else
    e_[{r, c}] = v;
}

void RatMatrix::add(const std::string &r, const std::string &c, const Rational &v) {
  if (udpn::is_zero(v))
    return;
  auto [it, fresh] = e_.try_emplace({r, c}, v);
  if (!fresh) {
    it->second += v;
    if (udpn::is_zero(it->second))
      e_.erase(it);
  }
}

std::set<std::string> RatMatrix::nonzero_rows() const {
  std::set<std::string> out;
  for (auto &[k, v] : e_)
    out.insert(k.first);
  return out;
}

std::set<std::string> RatMatrix::nonzero_cols() const {
  std::set<std::string> out;
  for (auto &[k, v] : e_)
    out.insert(k.second);
  return out;
}

Rational RatMatrix::row_sum(const std::string &r) const {
  Rational s = 0;
  for (auto it = e_.lower_bound({r, std::string()}); it != e_.end() && it->first.first == r; ++it)
    s += it->second;
  return s;
}

Rational RatMatrix::col_sum(const std::string &c) const {
  Rational s = 0;
  for (auto &[k, v] : e_)
    if (k.second == c)
      s += v;
  return s;
}

bool RatMatrix::nonnegative() const {
  for (auto &[k, v] : e_)
    if (sgn(v) < 0)
      return false;
  return true;
}

void RatMatrix::same_shape(const RatMatrix &o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_)
    throw Error(std::string("matrix shape mismatch: ") + axis_name(rows_) + "x" +
                axis_name(cols_) + " vs " + axis_name(o.rows_) + "x" + axis_name(o.cols_));
}

RatMatrix &RatMatrix::operator+=(const RatMatrix &o) {
  same_shape(o);
  for (auto &[k, v] : o.e_)
    add(k.first, k.second, v);
  return *this;
}

RatMatrix &RatMatrix::operator-=(const RatMatrix &o) {
  same_shape(o);
  for (auto &[k, v] : o.e_)
    add(k.first, k.second, -v);
  return *this;
}

RatMatrix &RatMatrix::operator*=(const Rational &k) {
  if (udpn::is_zero(k)) {
    e_.clear();
    return *this;
  }
  for (auto &[key, v] : e_)
    v *= k;
  return *this;
}

RatMatrix operator+(RatMatrix a, const RatMatrix &b) { return a += b; }
RatMatrix operator-(RatMatrix a, const RatMatrix &b) { return a -= b; }
RatMatrix operator-(RatMatrix a) { return a *= Rational(-1); }
RatMatrix operator*(const Rational &k, RatMatrix a) { return a *= k; }

RatMatrix multiply(const RatMatrix &a, const RatMatrix &b) {
  if (a.col_axis() != b.row_axis())
    throw Error(std::string("cannot multiply: columns range over ") + axis_name(a.col_axis()) +
                ", rows over " + axis_name(b.row_axis()));
  std::map<std::string, std::vector<std::pair<std::string, Rational>>> by_row;
  for (auto &[k, v] : b.entries())
    by_row[k.first].emplace_back(k.second, v);
  RatMatrix out(a.row_axis(), b.col_axis());
  for (auto &[k, v] : a.entries()) {
    auto it = by_row.find(k.second);
    if (it == by_row.end())
      continue;
    for (auto &[c, w] : it->second)
      out.add(k.first, c, v * w);
  }
  return out;
}

bool leq(const RatMatrix &a, const RatMatrix &b) { return (b - a).nonnegative(); }

void Net::add_place(const std::string &p) {
  if (has_place(p))
    throw Error("duplicate place '" + p + "'");
  place_ix_[p] = places_.size();
  places_.push_back(p);
}

void Net::add_variable(const std::string &x) {
  if (has_variable(x))
    throw Error("duplicate variable '" + x + "'");
  var_ix_[x] = vars_.size();
  vars_.push_back(x);
}

void Net::add_transition(Transition t) {
  if (has_transition(t.name))
    throw Error("duplicate transition '" + t.name + "'");
  for (Arcs *arcs : {&t.in, &t.out}) {
    for (auto pit = arcs->begin(); pit != arcs->end();) {
      if (!has_place(pit->first))
        throw Error("transition '" + t.name + "' uses undeclared place '" + pit->first + "'");
      auto &row = pit->second;
      for (auto vit = row.begin(); vit != row.end();) {
        if (!has_variable(vit->first))
          throw Error("transition '" + t.name + "' uses undeclared variable '" + vit->first +
                      "'");
        vit = vit->second == 0 ? row.erase(vit) : std::next(vit);
      }
      pit = row.empty() ? arcs->erase(pit) : std::next(pit);
    }
  }
  trans_ix_[t.name] = trans_.size();
  trans_.push_back(std::move(t));
}

std::size_t Net::place_index(const std::string &p) const {
  auto it = place_ix_.find(p);
  if (it == place_ix_.end())
    throw Error("unknown place '" + p + "'");
  return it->second;
}

std::size_t Net::variable_index(const std::string &x) const {
  auto it = var_ix_.find(x);
  if (it == var_ix_.end())
    throw Error("unknown variable '" + x + "'");
  return it->second;
}

std::size_t Net::transition_index(const std::string &t) const {
  auto it = trans_ix_.find(t);
  if (it == trans_ix_.end())
    throw Error("unknown transition '" + t + "'");
  return it->second;
}

const Transition &Net::transition(const std::string &t) const {
  return trans_[transition_index(t)];
}

static std::uint64_t lookup(const Arcs &arcs, const std::string &p, const std::string &x) {
  auto pit = arcs.find(p);
  if (pit == arcs.end())
    return 0;
  auto vit = pit->second.find(x);
  return vit == pit->second.end() ? 0 : vit->second;
}

std::uint64_t Net::pre(const std::string &p, const std::string &t, const std::string &x) const {
  return lookup(transition(t).in, p, x);
}

std::uint64_t Net::post(const std::string &t, const std::string &p, const std::string &x) const {
  return lookup(transition(t).out, p, x);
}

std::vector<std::string> Net::vars(const std::string &t) const {
  const Transition &tr = transition(t);
  std::set<std::string> used;
  for (const Arcs *arcs : {&tr.in, &tr.out})
    for (auto &[p, row] : *arcs)
      for (auto &[x, w] : row)
        used.insert(x);
  std::vector<std::string> out;
  for (auto &x : vars_)
    if (used.count(x))
      out.push_back(x);
  return out;
}

std::size_t Net::max_vars() const {
  std::size_t m = 0;
  for (auto &t : trans_)
    m = std::max(m, vars(t.name).size());
  return m;
}

std::set<std::string> Net::pre_places(const std::string &t) const {
  std::set<std::string> out;
  for (auto &[p, row] : transition(t).in)
    out.insert(p);
  return out;
}

std::set<std::string> Net::post_places(const std::string &t) const {
  std::set<std::string> out;
  for (auto &[p, row] : transition(t).out)
    out.insert(p);
  return out;
}

RatMatrix delta(const Net &net, const std::string &t) {
  const Transition &tr = net.transition(t);
  RatMatrix d(Axis::Place, Axis::Var);
  for (auto &[p, row] : tr.out)
    for (auto &[x, w] : row)
      d.add(p, x, Rational(static_cast<unsigned long>(w)));
  for (auto &[p, row] : tr.in)
    for (auto &[x, w] : row)
      d.add(p, x, -Rational(static_cast<unsigned long>(w)));
  return d;
}

RatMatrix mode_matrix(const Mode &m) {
  RatMatrix out(Axis::Var, Axis::Data);
  for (auto &[x, a] : m)
    out.set(x, a, 1);
  return out;
}

void check_step(const Net &net, const Step &s) {
  if (!net.has_transition(s.transition))
    throw Error("unknown transition '" + s.transition + "'");
  if (sgn(s.coeff) < 0)
    throw Error("negative coefficient on step of '" + s.transition + "'");
  for (auto &[x, a] : s.mode)
    if (!net.has_variable(x))
      throw Error("mode of '" + s.transition + "' binds undeclared variable '" + x + "'");
  std::set<DataValue> image;
  for (auto &x : net.vars(s.transition)) {
    auto it = s.mode.find(x);
    if (it == s.mode.end())
      throw Error("mode of '" + s.transition + "' does not bind variable '" + x + "'");
    if (!image.insert(it->second).second)
      throw Error("mode of '" + s.transition + "' is not injective on '" + it->second + "'");
  }
}

RatMatrix step_effect(const Net &net, const Step &s) {
  const Transition &tr = net.transition(s.transition);
  RatMatrix out(Axis::Place, Axis::Data);
  if (is_zero(s.coeff))
    return out;
  auto image = [&](const std::string &x) -> const DataValue & {
    auto it = s.mode.find(x);
    if (it == s.mode.end())
      throw Error("mode of '" + s.transition + "' does not bind variable '" + x + "'");
    return it->second;
  };
  for (auto &[p, row] : tr.out)
    for (auto &[x, w] : row)
      out.add(p, image(x), s.coeff * static_cast<unsigned long>(w));
  for (auto &[p, row] : tr.in)
    for (auto &[x, w] : row)
      out.add(p, image(x), -s.coeff * static_cast<unsigned long>(w));
  return out;
}

} // namespace udpn
