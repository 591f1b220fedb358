#pragma once

#include "udpn/core.hpp"

#include <optional>
#include <set>

namespace udpn {

/// Q allows negative markings; QPlus requires every prefix marking >= 0.
enum class Domain { Q, QPlus };

struct Failure {
  std::size_t step; // index of the offending step, or run length for an endpoint mismatch
  std::string place;
  DataValue datum;
  Rational shortfall;
  std::string reason;
};

struct Verdict {
  bool ok = true;
  std::optional<Failure> failure;
};

std::set<DataValue> dval(const Marking &m);
std::set<DataValue> dval(const Net &net, const Run &run);
std::set<std::string> vars(const Net &net, const std::string &t);

bool step_fireable(const Net &net, const Marking &m, const Step &s, Domain d);
Marking fire_step(const Net &net, const Marking &m, const Step &s);
RatMatrix run_effect(const Net &net, const Run &run);
Verdict validate_run(const Net &net, const Marking &i, const Run &run, const Marking &f,
                     Domain d);

/// (place, datum) pairs.
using TokenSet = std::set<std::pair<std::string, DataValue>>;
TokenSet pre_set(const Net &net, const Run &run);
TokenSet post_set(const Net &net, const Run &run);

Run scale(const Run &run, const Rational &k);

} // namespace udpn
