#include "cbounds/datagen.hpp"
#include "cbounds/graph.hpp"
#include "doctest.h"

using namespace cbounds;

TEST_CASE("instrument graph validates") {
  const auto ex = builtin_example("IV");
  CHECK(validate_graph(ex.graph).ok());
  CHECK(ex.graph.a_count() == 1);
  CHECK(ex.graph.b_count() == 2);
}

TEST_CASE("single node with empty context validates") {
  CausalGraph g({"Y"}, 0, {0});
  CHECK(validate_graph(g).ok());
}

TEST_CASE("validation itemizes every violated condition") {
  // Y -> X with index(Y) > index(X)
  CausalGraph g({"Z", "X", "Y"}, bit(0), {0, bit(2), bit(1)});
  CHECK(validate_graph(g).has(ErrorCode::kNotTopological));

  CausalGraph parented({"Z", "W", "X"}, bit(0) | bit(1), {0, bit(0), bit(0)});
  auto rep = validate_graph(parented);
  CHECK(rep.has(ErrorCode::kANodeHasParent));
  CHECK(rep.has(ErrorCode::kAChildless));

  CausalGraph conf({"Z", "X", "Y"}, bit(0), {0, bit(0), bit(1)}, {bit(0) | bit(2)});
  CHECK(validate_graph(conf).has(ErrorCode::kConfounderSpansPartition));

  CausalGraph order({"X", "Z", "Y"}, bit(1), {0, 0, bit(0) | bit(1)});
  CHECK(validate_graph(order).has(ErrorCode::kNotTopological));

  CausalGraph empty_b({"Z"}, bit(0), {0});
  CHECK(validate_graph(empty_b).has(ErrorCode::kNotPartitioned));

  CHECK_THROWS_AS(require_valid(order), Error);
}

TEST_CASE("assignments with different scopes do not compare") {
  Assignment a(bit(0), 1);
  Assignment b(bit(1), 0);
  CHECK_THROWS_AS((void)(a == b), Error);
  CHECK(Assignment(bit(0) | bit(1), 3) == Assignment(bit(0) | bit(1), 7));
}

TEST_CASE("mutilation removes incoming edges only") {
  const auto ex = builtin_example("IV");
  const auto& g = ex.graph;
  const int x = g.require_index("X");
  const int y = g.require_index("Y");
  const auto m = mutilate(g, bit(x));
  CHECK(m.parents(x) == 0);
  CHECK(m.parents(y) == bit(x));
  CHECK(mutilate(g, 0) == g);
  CHECK_THROWS_AS(mutilate(g, bit(g.require_index("Z"))), Error);
}

TEST_CASE("mutilating the first treatment figure graph") {
  const auto ex = builtin_example("F");
  const auto& g = ex.graph;
  const int t3 = g.require_index("T3");
  const auto m = mutilate(g, bit(t3));
  CHECK(m.parents(t3) == 0);
  CHECK((m.parents(g.require_index("Y")) & bit(t3)) != 0);
}

TEST_CASE("critical variables of the instrument graphs") {
  auto iv = builtin_example("IV");
  const auto& g = iv.graph;
  CHECK(critical_for_query(g, iv.query) ==
        (bit(g.require_index("X")) | bit(g.require_index("Y"))));

  auto direct = builtin_example("IV-direct");
  const auto& g3 = direct.graph;
  CHECK(critical_for_query(g3, direct.query) == g3.all_nodes());

  Query obs_only{{}, iv.query.outcome, iv.query.context};
  CHECK(critical_for_query(g, obs_only) == g.all_nodes());
}

TEST_CASE("critical variables for observations") {
  auto iv = builtin_example("IV");
  CHECK(critical_for_observation(iv.graph, {make_assignment(iv.graph, {{"X", 0}})}) == bit(0));
  CHECK(critical_for_observation(iv.graph, {}) == 0);
  auto a = builtin_example("A");
  CHECK(critical_for_observation(a.graph, {make_assignment(a.graph, {{"Y", 1}})}) ==
        a.graph.a_set());
}

TEST_CASE("query reduction drops non-reaching treatments and is idempotent") {
  CausalGraph g({"Z", "X", "W", "Y"}, bit(0), {0, bit(0), bit(0), bit(1)});
  REQUIRE(validate_graph(g).ok());
  Query q{make_assignment(g, {{"X", 1}, {"W", 1}}), make_assignment(g, {{"Y", 1}}),
          make_assignment(g, {{"Z", 1}})};
  const Query r = reduce_query(g, q);
  CHECK(r.intervention.scope() == bit(1));
  const Query rr = reduce_query(g, r);
  CHECK(rr.intervention.scope() == r.intervention.scope());
}

TEST_CASE("query and observation validation") {
  auto iv = builtin_example("IV");
  const auto& g = iv.graph;
  Query bad = iv.query;
  bad.outcome = make_assignment(g, {{"X", 1}});
  CHECK_THROWS_AS(validate_query(g, bad), Error);
  Query no_out = iv.query;
  no_out.outcome = {};
  CHECK_THROWS_AS(validate_query(g, no_out), Error);
  CHECK_THROWS_AS(validate_observation(g, iv.query, {make_assignment(g, {{"X", 1}})}), Error);
  CHECK_NOTHROW(validate_observation(g, iv.query, {make_assignment(g, {{"Y", 1}})}));
}

TEST_CASE("adding an edge never shrinks the critical set") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    RandomGraphSpec spec{2, 4, 0.4, 4};
    auto g = random_graph(spec, seed);
    if (!validate_graph(g).ok()) continue;
    auto q = random_query(g, seed);
    const Mask before = critical_for_query(g, q);
    std::vector<Mask> parents;
    for (int j = 0; j < g.size(); ++j) parents.push_back(g.parents(j));
    parents.back() |= bit(g.a_count());
    CausalGraph bigger(g.names(), g.a_set(), parents);
    CHECK((critical_for_query(bigger, q) & before) == before);
  }
}
