#pragma once

#include <cstdint>
#include <random>

#include "udpn/linsolve.hpp"
#include "udpn/semantics.hpp"

namespace udpn {

struct GenConfig {
  std::uint64_t seed = 1;
  std::size_t max_places = 4;
  std::size_t max_transitions = 3;
  std::size_t max_vars = 3;
  std::size_t max_data = 4;
  std::size_t max_steps = 5;
  std::uint64_t max_den = 4;
  std::uint64_t max_weight = 2;
};

/// Throws Error when a bound is zero.
void check_config(const GenConfig &cfg);

using Rng = std::mt19937_64;

/// Places p0.., variables x0.., transitions t0.. within the configured bounds.
Net random_net(const GenConfig &cfg, Rng &rng);
/// Nonnegative marking over `pool` with denominators up to cfg.max_den.
Marking random_marking(const Net &net, const std::vector<DataValue> &pool,
                       const GenConfig &cfg, Rng &rng, bool allow_negative = false);
/// v0, v1, ... up to cfg.max_data values.
std::vector<DataValue> data_pool(const GenConfig &cfg);

struct RandomRun {
  Run run;
  Marking reached = empty_marking();
};

/// A Q+ run from i of at most cfg.max_steps steps, modes over `pool`
/// (defaults to dval(i) padded by data_pool(cfg)).
RandomRun random_run(const Net &net, const Marking &i, const GenConfig &cfg,
                     std::vector<DataValue> pool = {});
RandomRun random_run(const Net &net, const Marking &i, const GenConfig &cfg,
                     const std::vector<DataValue> &pool, Rng &rng);

/// Exhaustive check over zero sets; at most 12 variables.
bool brute_implication(const ImplicationSystem &isys, LpStats *stats = nullptr);

/// Q-reachability through a separately written equation emitter.
bool naive_q_reach(const Net &net, const Marking &i, const Marking &f);

} // namespace udpn
