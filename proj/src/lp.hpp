#pragma once

#include <optional>

#include "udpn/linsolve.hpp"

namespace udpn::detail {

/// minimize cost . x subject to rows, 0 <= x_j <= upper[j].
struct LpModel {
  std::size_t n = 0;
  std::vector<Constraint> rows;
  std::vector<std::optional<Rational>> upper; // empty or size n
  std::vector<Rational> cost;                 // empty or size n
};

LpResult solve(const LpModel &model, LpStats *stats);

/// Solves the square system whose row i holds (column, value) pairs.
std::optional<std::vector<Rational>>
solve_square(std::vector<std::vector<std::pair<std::size_t, Rational>>> rows,
             std::vector<Rational> rhs);

} // namespace udpn::detail
