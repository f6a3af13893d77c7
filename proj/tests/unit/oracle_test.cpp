#include "cbounds/datagen.hpp"
#include "cbounds/hyperarc.hpp"
#include "cbounds/response_oracle.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace cbounds;

namespace {

std::uint64_t count_in_rq(const ResponseSpace& s, const Query& q) {
  std::uint64_t n = 0;
  ResponseIndex r(s.b_count(), 0);
  do {
    if (membership(s, q, nullptr, r).in_rq) ++n;
  } while (s.next(r));
  return n;
}

void check_same(const PrunedProblem& a, const PrunedProblem& b) {
  REQUIRE(a.codes == b.codes);
  CHECK(a.flags == b.flags);
}

}  // namespace

TEST_CASE("instrument response space") {
  const auto ex = builtin_example("IV");
  ResponseSpace s(ex.graph);
  CHECK(s.count().value() == doctest::Approx(16));
  CHECK(count_in_rq(s, ex.query) == 8);
  CHECK(partition_check(s));
  const auto sizes = class_sizes(s);
  CHECK(sizes.size() == 12);
}

TEST_CASE("encode and decode are inverse") {
  const auto ex = builtin_example("A");
  ResponseSpace s(ex.graph);
  ResponseIndex r(s.b_count(), 0);
  for (int i = 0; i < 5000; ++i) {
    CHECK(s.decode(s.encode(r)) == r);
    for (int k = 0; k < 997; ++k) s.next(r);
  }
}

TEST_CASE("hyperarc classes partition R on random graphs") {
  for (const auto& inst : testing::small_random_instances(25, 1)) {
    INFO("seed " << inst.seed);
    CHECK(partition_check(ResponseSpace(inst.graph)));
  }
}

TEST_CASE("enumeration over R reproduces the direct construction") {
  for (const auto& inst : testing::small_random_instances(25, 100)) {
    INFO("seed " << inst.seed);
    ResponseSpace s(inst.graph);
    const ProbabilityTable p(inst.graph.a_count(), inst.graph.b_count());
    const auto run = algorithm3_benchmark(s, inst.query, p);
    REQUIRE(run.completed);
    check_same(run.problem, build_pruned(inst.graph, inst.query, nullptr));
  }
}

TEST_CASE("enumeration over R reproduces the direct construction with an observation") {
  int checked = 0;
  for (const auto& inst : testing::small_random_instances(40, 200)) {
    Observation w{make_assignment(inst.graph, {{inst.graph.name(inst.graph.size() - 1), 1}})};
    try {
      validate_observation(inst.graph, inst.query, w);
    } catch (const Error&) {
      continue;
    }
    INFO("seed " << inst.seed);
    ResponseSpace s(inst.graph);
    const ProbabilityTable p(inst.graph.a_count(), inst.graph.b_count());
    const auto run = algorithm4_benchmark(s, inst.query, w, p);
    REQUIRE(run.completed);
    check_same(run.problem, build_pruned(inst.graph, inst.query, &w));
    ++checked;
  }
  CHECK(checked >= 10);
}

TEST_CASE("benchmark respects its budget") {
  const auto ex = builtin_example("B");
  ResponseSpace s(ex.graph);
  const ProbabilityTable p(ex.graph.a_count(), ex.graph.b_count());
  const auto run = algorithm3_benchmark(s, ex.query, p, 0.05);
  CHECK_FALSE(run.completed);
  CHECK(run.seconds < 1.0);
  CHECK(run.visited > 0);
}
