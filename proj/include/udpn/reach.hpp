#pragma once

#include "udpn/histograms.hpp"
#include "udpn/linsolve.hpp"
#include "udpn/semantics.hpp"
#include "udpn/transforms.hpp"

#include <optional>

namespace udpn {

struct ReachStats {
  std::vector<DataValue> universe;
  std::size_t variables = 0;
  std::size_t constraints = 0;
  std::size_t iterations = 0;
  std::size_t lps = 0;
  std::size_t pivots = 0;
};

struct ReachResult {
  bool reachable = false;
  std::optional<Run> witness;
  ReachStats stats;
};

inline const std::string kFreshPrefix = "_d";

/// dval(i) u dval(f) padded with _d0, _d1, ... to |dval(i) u dval(f)| + 1 +
/// max_t |vars(t)| values, sorted.
std::vector<DataValue> data_bound(const Net &net, const Marking &i, const Marking &f);

ReachResult q_reach(const Net &net, const Marking &i, const Marking &f);

/// Intermediate markings and histograms of a Q+ run in prefix / middle /
/// suffix shape over a loop-less net.
struct QplusCertificate {
  std::vector<std::pair<std::string, Histogram>> prefix; // firing order
  Marking i_mid = empty_marking();
  HistProfile middle;
  Marking f_mid = empty_marking();
  std::vector<std::pair<std::string, Histogram>> suffix; // firing order
};

struct QplusEncoding {
  ImplicationSystem system;
  std::vector<DataValue> universe;
  std::size_t bound = 0;  // B, steps per chain divided by |T|
  std::size_t blocks = 0; // B * |T|
  // Variable ids. Markings are indexed [k][p * |Y| + a], histograms
  // [k][x * |Y| + a] with x a position in the net's variable list.
  std::vector<std::vector<std::size_t>> pre_marking, suf_marking;
  std::vector<std::vector<std::size_t>> pre_hist, suf_hist, mid_hist;
};

/// The implication system for Q+ reachability on a loop-less net. `steps`
/// overrides B = |P| * |Y|.
QplusEncoding encode_qplus(const Net &net, const Marking &i, const Marking &f,
                           const std::vector<DataValue> &universe,
                           std::optional<std::size_t> steps = std::nullopt);
QplusCertificate decode(const QplusEncoding &enc, const Net &net, const Assignment &a);

/// Prefix blocks, then n copies of the middle run scaled by 1/n, then the
/// suffix blocks. Validated in Q+ before it is returned.
Run extract_witness(const Net &net, const Marking &i, const Marking &f,
                    const QplusCertificate &cert);

enum class Engine {
  Support, // support refinement on the middle histograms
  Encoded, // full implication system; chains of 1, 2, 4, ... blocks up to B
};

ReachResult qplus_reach(const Net &net, const Marking &i, const Marking &f,
                        Engine engine = Engine::Support);

} // namespace udpn
