#pragma once

#include <vector>

#include "cbounds/datagen.hpp"
#include "cbounds/graph.hpp"
#include "cbounds/response_oracle.hpp"

namespace testing {

struct Instance {
  cbounds::CausalGraph graph;
  cbounds::Query query;
  std::uint64_t seed;
};

/// Valid random graphs with small response spaces, reproducible by seed.
inline std::vector<Instance> small_random_instances(int count, std::uint64_t first_seed,
                                                    std::uint64_t r_cap = 100000) {
  std::vector<Instance> out;
  for (std::uint64_t seed = first_seed; static_cast<int>(out.size()) < count; ++seed) {
    cbounds::RandomGraphSpec spec;
    spec.a_count = 1 + static_cast<int>(seed % 2);
    spec.b_count = 2 + static_cast<int>((seed / 2) % 3);
    spec.edge_probability = 0.55;
    spec.max_parents = 3;
    auto g = cbounds::random_graph(spec, seed);
    if (!cbounds::validate_graph(g).ok()) continue;
    if (!cbounds::count_R(g).within(r_cap)) continue;
    out.push_back({g, cbounds::random_query(g, seed * 31 + 7), seed});
  }
  return out;
}

}  // namespace testing
