#pragma once

#include "udpn/core.hpp"

#include <map>
#include <optional>
#include <set>

namespace udpn {

/// Nonnegative Var x D matrix whose nonzero rows all sum to `order` and whose
/// columns sum to at most `order`.
struct Histogram {
  RatMatrix matrix{Axis::Var, Axis::Data};
  Rational order;
};

/// Returns the order when m is a histogram.
std::optional<Rational> check_histogram(const RatMatrix &m);
Histogram make_histogram(const RatMatrix &m); // throws Error when m is not one

Histogram add(const Histogram &a, const Histogram &b);

/// transition -> histogram; every transition of the net has an entry.
using HistProfile = std::map<std::string, Histogram>;
HistProfile hist_of_run(const Net &net, const Run &run);

struct Part {
  Rational weight;
  Mode pattern; // the 0/1 matrix as an injective map
};

std::vector<Part> decompose(const Histogram &h);

/// One step (a_k, t, B_k) per part of decompose(h).
Run expand_to_steps(const Net &net, const std::string &t, const Histogram &h);

/// Bipartite adjacency: row -> candidate columns, in preference order.
using Adjacency = std::map<std::string, std::vector<std::string>>;
using Matching = std::map<std::string, std::string>; // row -> column

/// A matching covering every row in `rows` and every column in `cols`, using
/// only edges of `adj`. Built from a row-saturating and a column-saturating
/// matching joined component by component.
std::optional<Matching> saturating_matching(const std::vector<std::string> &rows,
                                            const std::set<std::string> &cols,
                                            const Adjacency &adj);

} // namespace udpn
