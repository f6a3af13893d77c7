#pragma once

#include <map>
#include <string>

#include "cbounds/hyperarc.hpp"
#include "cbounds/response_oracle.hpp"
#include "support.hpp"

namespace testing {

/// Failure counts per invariant for one instance.
struct InvariantTally {
  int dichotomy = 0;
  int partition = 0;
  int ordering = 0;
  int reduction = 0;

  int total() const { return dichotomy + partition + ordering + reduction; }
  InvariantTally& operator+=(const InvariantTally& o) {
    dichotomy += o.dichotomy;
    partition += o.partition;
    ordering += o.ordering;
    reduction += o.reduction;
    return *this;
  }
};

/// Observation on the last B-node unless the query intervenes on it.
inline cbounds::Observation instance_observation(const Instance& inst) {
  const auto& g = inst.graph;
  const int last = g.size() - 1;
  if (inst.query.intervention.contains(last)) return {};
  const cbounds::Mask b = cbounds::bit(last);
  return {cbounds::Assignment(b, inst.seed & 1 ? b : 0)};
}

inline InvariantTally check_invariants(const Instance& inst) {
  using namespace cbounds;
  InvariantTally t;
  const auto& g = inst.graph;
  ResponseSpace space(g);
  if (!partition_check(space)) ++t.partition;

  const Observation w = instance_observation(inst);
  const Query reduced = reduce_query(g, inst.query);
  // R_h is either inside R_W or disjoint from it, and the hyperarc rule says which.
  struct Seen { bool all_w = true, any_w = false; };
  std::map<std::uint64_t, Seen> seen;
  ResponseIndex r(space.b_count(), 0);
  do {
    const auto full = membership(space, inst.query, &w, r);
    const auto red = membership(space, reduced, &w, r);
    if (full.in_rq != red.in_rq) ++t.reduction;
    auto& s = seen[full.hyperarc];
    s.all_w = s.all_w && full.in_rw;
    s.any_w = s.any_w || full.in_rw;
  } while (space.next(r));

  const Mask cw = critical_for_observation(g, w);
  for (const auto& [code, s] : seen) {
    if (s.any_w && !s.all_w) ++t.dichotomy;
    const Hyperarc h(g.a_count(), g.b_count(), code);
    ObservationMembership m;
    try {
      m = obs_membership(h, g, reduced, w, cw);
    } catch (const Error&) {
      ++t.dichotomy;
      continue;
    }
    if (m.in_rw != (s.all_w ? 1 : 0) || m.disjoint_rw != (s.any_w ? 0 : 1)) ++t.dichotomy;
  }

  const auto problem = build_pruned(g, inst.query, &w);
  if (problem.size() != seen.size()) ++t.partition;
  for (std::size_t k = 0; k < problem.size(); ++k) {
    if (problem.cL(k) > problem.cU(k)) ++t.ordering;
    if (problem.dL(k) > problem.dU(k)) ++t.ordering;
  }
  return t;
}

/// The 200 graphs behind the standalone suite.
inline std::vector<Instance> invariant_instances() { return small_random_instances(200, 5000, 20000); }

}  // namespace testing
