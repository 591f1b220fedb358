#pragma once

#include "udpn/rational.hpp"

#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace udpn {

enum class Rel { Eq, Le, Ge };

struct Constraint {
  std::vector<std::pair<std::size_t, Rational>> coeffs;
  Rel rel = Rel::Eq;
  Rational rhs;
};

/// Linear constraints over nonnegative rational variables.
class LinearSystem {
public:
  std::size_t add_var(std::string name);
  void add(Constraint c);

  std::size_t num_vars() const { return names_.size(); }
  const std::vector<std::string> &names() const { return names_; }
  const std::vector<Constraint> &constraints() const { return cons_; }
  std::optional<std::size_t> find(const std::string &name) const;

private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<Constraint> cons_;
};

/// Value per variable, indexed like LinearSystem::names().
using Assignment = std::vector<Rational>;

struct LpStats {
  std::size_t lps = 0;
  std::size_t pivots = 0;    // exact pivots
  std::size_t fallbacks = 0; // LPs where the floating-point basis did not verify
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  Assignment x;
  Rational value;
};

/// Exact minimum of objective . x subject to sys. A floating-point simplex
/// proposes a basis that is checked in rational arithmetic; an exact
/// two-phase tableau simplex takes over when the check fails.
LpResult minimize(const LinearSystem &sys,
                  const std::vector<std::pair<std::size_t, Rational>> &objective,
                  LpStats *stats = nullptr);

bool satisfies(const LinearSystem &sys, const Assignment &a);
std::optional<Assignment> feasible(const LinearSystem &sys, LpStats *stats = nullptr);

struct Support {
  std::vector<bool> positive;
  Assignment values; // positive exactly on `positive`
};

/// Solution positive on every variable that is positive in some solution.
std::optional<Support> max_support(const LinearSystem &sys, LpStats *stats = nullptr);
/// Same result computed with one bounded probe per variable, averaged.
std::optional<Support> max_support_probes(const LinearSystem &sys, LpStats *stats = nullptr);

/// Base constraints plus implications a > 0 => c > 0 (pairs of variable ids).
struct ImplicationSystem {
  LinearSystem base;
  std::vector<std::pair<std::size_t, std::size_t>> implications;
};

struct SolveStats {
  std::size_t iterations = 0;
  LpStats lp;
};

bool satisfies(const ImplicationSystem &isys, const Assignment &a);
std::optional<Assignment> solve_implications(const ImplicationSystem &isys,
                                             SolveStats *stats = nullptr);

/// One constraint per line, e.g. "x + 2 y - 1/2 z <= 3"; implications as
/// "x > 0 => y > 0".
std::string dump(const LinearSystem &sys);
std::string dump(const ImplicationSystem &isys);

} // namespace udpn
