#pragma once

#include "udpn/semantics.hpp"

#include <map>
#include <set>

namespace udpn {

/// Cyclic successor and predecessor of a in E under the byte order of names.
DataValue next_in(const std::set<DataValue> &E, const DataValue &a);
DataValue prev_in(const std::set<DataValue> &E, const DataValue &a);

/// Column a of E takes the old column next_E(a); `times` repeats it.
Step rotate(const std::set<DataValue> &E, const Step &s, std::size_t times = 1);
Run uniformize(const std::set<DataValue> &E, const Step &s);
Step replace(const Net &net, const DataValue &alpha, const std::set<DataValue> &E, const Step &s);
Run decrease(const Net &net, const std::set<DataValue> &E, const DataValue &alpha, const Run &run);

std::size_t data_bound_size(const Net &net, const Marking &i, const Marking &f);

/// Applies decrease until the run uses at most data_bound_size values.
Run reduce_data(const Net &net, const Marking &i, const Marking &f, const Run &run, Domain d);

inline const std::string kShadowPrefix = "__shadow_";
inline const std::string kCopyPrefix = "__copy_";

struct LoopMapping {
  std::map<std::string, std::string> shadow; // p -> f(p)
  std::map<std::string, std::string> copy;   // p -> copy transition name
  std::map<std::string, std::string> original; // transition of N' -> transition of N
  std::set<std::string> modified;              // transitions whose outputs were redirected
};

struct LoopLess {
  Net net;
  Marking i, f;
  LoopMapping mapping;
};

bool is_loopless(const Net &net);
LoopLess to_loopless(const Net &net, const Marking &i, const Marking &f);
Run project_witness(const Run &run, const LoopMapping &mapping);

} // namespace udpn
