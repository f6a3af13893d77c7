#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "invariants.hpp"

TEST_CASE("structural invariants on random small graphs") {
  const auto instances = testing::invariant_instances();
  REQUIRE(instances.size() == 200);
  testing::InvariantTally sum;
  for (const auto& inst : instances) {
    const auto t = testing::check_invariants(inst);
    INFO("seed " << inst.seed);
    CHECK(t.dichotomy == 0);
    CHECK(t.partition == 0);
    CHECK(t.ordering == 0);
    CHECK(t.reduction == 0);
    sum += t;
  }
  MESSAGE("failures: dichotomy " << sum.dichotomy << ", partition " << sum.partition
                                 << ", ordering " << sum.ordering << ", reduction "
                                 << sum.reduction);
}

TEST_CASE("reduction drops only unreachable intervention targets") {
  for (const auto& inst : testing::invariant_instances()) {
    const auto q = cbounds::reduce_query(inst.graph, inst.query);
    CHECK((q.intervention.scope() & ~inst.query.intervention.scope()) == 0);
    const auto again = cbounds::reduce_query(inst.graph, q);
    CHECK(again.intervention.scope() == q.intervention.scope());
  }
}
