#pragma once

#include "udpn/rational.hpp"

#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace udpn {

/// Bad input: unknown names, malformed objects, violated preconditions.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A broken internal invariant. Never caused by user input.
struct InternalError : std::logic_error {
  using std::logic_error::logic_error;
};

using DataValue = std::string;

enum class Axis { Place, Var, Data };
const char *axis_name(Axis a);

/// Sparse rational matrix over named rows and columns. Only nonzero entries
/// are stored; the axes record which index sets the rows and columns range
/// over so that sums and products can reject mismatched operands.
class RatMatrix {
public:
  using Key = std::pair<std::string, std::string>;
  using Entries = std::map<Key, Rational>;

  explicit RatMatrix(Axis rows = Axis::Place, Axis cols = Axis::Data)
      : rows_(rows), cols_(cols) {}

  Axis row_axis() const { return rows_; }
  Axis col_axis() const { return cols_; }

  Rational get(const std::string &r, const std::string &c) const;
  void set(const std::string &r, const std::string &c, const Rational &v);
  void add(const std::string &r, const std::string &c, const Rational &v);

  const Entries &entries() const { return e_; }
  bool is_zero() const { return e_.empty(); }
  std::size_t nnz() const { return e_.size(); }
  std::set<std::string> nonzero_rows() const;
  std::set<std::string> nonzero_cols() const;
  Rational row_sum(const std::string &r) const;
  Rational col_sum(const std::string &c) const;
  bool nonnegative() const;

  RatMatrix &operator+=(const RatMatrix &o);
  RatMatrix &operator-=(const RatMatrix &o);
  RatMatrix &operator*=(const Rational &k);

  friend bool operator==(const RatMatrix &a, const RatMatrix &b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.e_ == b.e_;
  }

private:
  void same_shape(const RatMatrix &o) const;

  Axis rows_, cols_;
  Entries e_;
};

RatMatrix operator+(RatMatrix a, const RatMatrix &b);
RatMatrix operator-(RatMatrix a, const RatMatrix &b);
RatMatrix operator-(RatMatrix a);
RatMatrix operator*(const Rational &k, RatMatrix a);
RatMatrix multiply(const RatMatrix &a, const RatMatrix &b);
/// Entrywise a <= b over the union of nonzero indices.
bool leq(const RatMatrix &a, const RatMatrix &b);

/// A P x D matrix of token quantities.
using Marking = RatMatrix;
inline Marking empty_marking() { return Marking(Axis::Place, Axis::Data); }

/// place -> variable -> weight; zero weights are never stored.
using Arcs = std::map<std::string, std::map<std::string, std::uint64_t>>;

struct Transition {
  std::string name;
  Arcs in;  // F(p, t)
  Arcs out; // F(t, p)

  friend bool operator==(const Transition &, const Transition &) = default;
};

class Net {
public:
  void add_place(const std::string &p);
  void add_variable(const std::string &x);
  void add_transition(Transition t);

  const std::vector<std::string> &places() const { return places_; }
  const std::vector<std::string> &variables() const { return vars_; }
  const std::vector<Transition> &transitions() const { return trans_; }

  bool has_place(const std::string &p) const { return place_ix_.count(p) != 0; }
  bool has_variable(const std::string &x) const { return var_ix_.count(x) != 0; }
  bool has_transition(const std::string &t) const { return trans_ix_.count(t) != 0; }

  std::size_t place_index(const std::string &p) const;
  std::size_t variable_index(const std::string &x) const;
  std::size_t transition_index(const std::string &t) const;
  const Transition &transition(const std::string &t) const;

  std::uint64_t pre(const std::string &p, const std::string &t, const std::string &x) const;
  std::uint64_t post(const std::string &t, const std::string &p, const std::string &x) const;

  /// Variables with a nonzero arc on t, in declaration order.
  std::vector<std::string> vars(const std::string &t) const;
  std::size_t max_vars() const;

  std::set<std::string> pre_places(const std::string &t) const;
  std::set<std::string> post_places(const std::string &t) const;

  friend bool operator==(const Net &, const Net &) = default;

private:
  std::vector<std::string> places_, vars_;
  std::vector<Transition> trans_;
  std::unordered_map<std::string, std::size_t> place_ix_, var_ix_, trans_ix_;
};

/// F(t, .) - F(., t) as a P x Var matrix.
RatMatrix delta(const Net &net, const std::string &t);

/// Variable -> data value. Injective on vars(t) of the step it belongs to.
using Mode = std::map<std::string, DataValue>;

RatMatrix mode_matrix(const Mode &m);

struct Step {
  Rational coeff;
  std::string transition;
  Mode mode;

  friend bool operator==(const Step &, const Step &) = default;
};

using Run = std::vector<Step>;

/// Throws Error unless the step names a transition of the net, has a
/// nonnegative coefficient and a mode that is total and injective on vars(t).
void check_step(const Net &net, const Step &s);

/// c * delta(t) * P for one step.
RatMatrix step_effect(const Net &net, const Step &s);

} // namespace udpn
