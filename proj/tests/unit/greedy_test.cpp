#include "cbounds/bounds.hpp"
#include "cbounds/datagen.hpp"
#include "cbounds/greedy.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace cbounds;

namespace {

ProbabilityTable sem_table(const CausalGraph& g, std::uint64_t seed) {
  return random_instance(random_model(g, seed), seed, RandomMode::kSemRandom);
}

}  // namespace

TEST_CASE("starting duals are feasible") {
  const auto ex = builtin_example("IV");
  const auto problem = build_pruned(ex.graph, ex.query, nullptr);
  const int cells = 1 << ex.graph.size();
  CHECK(feasibility_check(Eigen::VectorXi::Constant(cells, -1), problem, lp::Sense::kMinimize)
            .feasible);
  CHECK(feasibility_check(Eigen::VectorXi::Constant(cells, 1), problem, lp::Sense::kMaximize)
            .feasible);
  const auto bad = feasibility_check(Eigen::VectorXi::Constant(cells, 1), problem,
                                     lp::Sense::kMinimize);
  CHECK_FALSE(bad.feasible);
  CHECK(bad.first_violation == 0);
}

TEST_CASE("greedy bounds sandwich the LP bounds") {
  for (const auto& inst : testing::small_random_instances(40, 3000)) {
    INFO("seed " << inst.seed);
    const auto p = sem_table(inst.graph, inst.seed);
    const auto problem = build_pruned(inst.graph, inst.query, nullptr);
    const auto lp = bounds_pruned(problem, p);
    const CellIndex index(problem);
    const auto lo = greedy_lower(problem, index, p);
    const auto hi = greedy_upper(problem, index, p);
    CHECK(lo.bound <= lp.lower + 1e-9);
    CHECK(hi.bound >= lp.upper - 1e-9);
    CHECK(feasibility_check(lo.lambda, problem, lp::Sense::kMinimize).feasible);
    CHECK(feasibility_check(hi.lambda, problem, lp::Sense::kMaximize).feasible);
  }
}

TEST_CASE("greedy duals are locally maximal") {
  for (const auto& inst : testing::small_random_instances(15, 3100)) {
    INFO("seed " << inst.seed);
    const auto p = sem_table(inst.graph, inst.seed);
    const auto problem = build_pruned(inst.graph, inst.query, nullptr);
    const CellIndex index(problem);
    const auto lo = greedy_lower(problem, index, p);
    const auto hi = greedy_upper(problem, index, p);
    for (int c = 0; c < index.cells(); ++c) {
      if (!index.covered(c)) {
        CHECK(lo.lambda[c] == 0);
        continue;
      }
      Eigen::VectorXi up = lo.lambda;
      up[c] += 1;
      CHECK_FALSE(feasibility_check(up, problem, lp::Sense::kMinimize).feasible);
      Eigen::VectorXi down = hi.lambda;
      down[c] -= 1;
      CHECK_FALSE(feasibility_check(down, problem, lp::Sense::kMaximize).feasible);
    }
  }
}

TEST_CASE("a second pass never changes the single-pass result") {
  for (const auto& inst : testing::small_random_instances(10, 3200)) {
    const auto p = sem_table(inst.graph, inst.seed);
    const auto problem = build_pruned(inst.graph, inst.query, nullptr);
    GreedyOptions multi;
    multi.multi_pass = true;
    const auto once = greedy_lower(problem, p);
    const auto many = greedy_lower(problem, p, multi);
    CHECK(once.lambda == many.lambda);
    CHECK(many.passes == 2);
  }
}

TEST_CASE("greedy is deterministic and its value moves the right way") {
  const auto ex = builtin_example("A");
  const auto p = table_from_model(ex.model);
  const auto problem = build_pruned(ex.graph, ex.query, nullptr);
  const auto first = greedy_lower(problem, p);
  const auto second = greedy_lower(problem, p);
  CHECK(first.lambda == second.lambda);
  CHECK(first.bound == second.bound);
  // Starting value is -2^|A| since every row of p sums to one.
  CHECK(first.bound >= -4.0);
  std::uint64_t total = 0;
  for (auto n : first.histogram) total += n;
  CHECK(total == static_cast<std::uint64_t>(1 << ex.graph.size()));
}

TEST_CASE("duals of a point-mass instrument table are integral") {
  const auto ex = builtin_example("IV");
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(2, 4);
  m(0, 0b10) = 1;
  m(1, 0b11) = 1;
  const ProbabilityTable p(1, 2, m);
  const auto probe = dual_integrality_probe(build_pruned(ex.graph, ex.query, nullptr), p);
  CHECK(probe.lower_integral);
  CHECK(probe.upper_integral);
  CHECK(probe.max_deviation <= 1e-6);
}
