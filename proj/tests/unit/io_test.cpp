#include <sstream>

#include "cbounds/datagen.hpp"
#include "cbounds/io.hpp"
#include "cbounds/pipeline.hpp"
#include "doctest.h"

using namespace cbounds;

namespace {

const char* kIvProblem = R"({
  "nodes": ["Z", "X", "Y"],
  "a_set": ["Z"],
  "parents": {"X": ["Z"], "Y": ["X"]},
  "query": {"intervene": {"X": 1}, "outcome": {"Y": 1}, "context": {"Z": 1}}
})";

}  // namespace

TEST_CASE("problem JSON parses and round-trips") {
  const auto spec = parse_problem(kIvProblem);
  const auto ex = builtin_example("IV");
  CHECK(spec.graph == ex.graph);
  CHECK(spec.query.intervention == ex.query.intervention);
  CHECK(spec.query.outcome == ex.query.outcome);
  CHECK(spec.query.context == ex.query.context);
  CHECK_FALSE(spec.observation.has_value());

  const auto text = problem_json(ex.graph, ex.query, &ex.observation);
  const auto back = parse_problem(text);
  CHECK(back.graph == ex.graph);
  REQUIRE(back.observation.has_value());
  CHECK(back.observation->observed == ex.observation.observed);
  CHECK(problem_json(back.graph, back.query, back.observation_ptr()) == text);
}

TEST_CASE("malformed problems are parse errors") {
  auto code_of = [](const std::string& text) {
    try {
      parse_problem(text);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::kInternal;
  };
  CHECK(code_of("{") == ErrorCode::kParse);
  CHECK(code_of(R"({"nodes": ["Z"], "a_set": ["Q"], "parents": {}, "query": {}})") ==
        ErrorCode::kParse);
  CHECK(code_of(R"({"nodes": ["Z","X"], "a_set": ["Z"], "parents": {"X": ["Z"]},
                    "query": {"outcome": {"X": 2}, "context": {"Z": 1}}})") ==
        ErrorCode::kInvalidQuery);
}

TEST_CASE("table CSV round-trips exactly") {
  const auto ex = builtin_example("A");
  const auto p = table_from_model(ex.model);
  std::ostringstream out;
  write_table(out, ex.graph, p);
  std::istringstream in(out.str());
  const auto back = parse_table(ex.graph, in);
  CHECK(back.matrix() == p.matrix());
  CHECK(out.str().rfind("v_A,v_B,p\n00,00000,", 0) == 0);
}

TEST_CASE("table CSV errors") {
  const auto g = builtin_example("IV").graph;
  auto parse = [&](const std::string& text) {
    std::istringstream in(text);
    return parse_table(g, in);
  };
  CHECK_THROWS_AS(parse("a,b,c\n"), Error);
  CHECK_THROWS_AS(parse("v_A,v_B,p\n0,000,1\n"), Error);
  CHECK_THROWS_AS(parse("v_A,v_B,p\n0,00,1\n0,00,0\n"), Error);
  CHECK_THROWS_AS(parse("v_A,v_B,p\n0,00,0.5\n1,11,1\n"), Error);
  const auto p = parse("v_A,v_B,p\n0,10,1\n1,11,1\n");
  CHECK(p(0, 0b01) == 1.0);
}

TEST_CASE("auto method selection") {
  auto spec_of = [](const std::string& id, bool observe) {
    const auto ex = builtin_example(id);
    ProblemSpec s{ex.graph, ex.query, std::nullopt};
    if (observe) s.observation = ex.observation;
    return s;
  };
  BoundRequest req;
  CHECK(resolve_method(spec_of("IV", false), req, 12) == Method::kPrunedLp);
  CHECK(resolve_method(spec_of("F-direct", false), req, 65536) == Method::kClosedForm);
  CHECK(resolve_method(spec_of("F", false), req, 57600) == Method::kPrunedLp);
  CHECK(resolve_method(spec_of("D", false), req, 9437184) == Method::kGreedy);
  CHECK(resolve_method(spec_of("F-direct", true), req, 65536) == Method::kPrunedLp);
  CHECK_THROWS_AS(resolve_method(spec_of("D", true), req, 9437184), Error);
  req.delta = 0.01;
  CHECK(resolve_method(spec_of("F-direct", false), req, 65536) == Method::kFiniteData);

  const auto ex = builtin_example("IV");
  const auto p = table_from_model(ex.model);
  const auto b = compute_bounds(spec_of("IV", false), p);
  CHECK(b.method == Method::kPrunedLp);
  BoundRequest naive;
  naive.method = MethodChoice::kNaive;
  const auto n = compute_bounds(spec_of("IV", false), p, naive);
  CHECK(n.lower == doctest::Approx(b.lower).epsilon(1e-9));
  CHECK(n.upper == doctest::Approx(b.upper).epsilon(1e-9));
  BoundRequest cf;
  cf.method = MethodChoice::kClosedForm;
  CHECK_THROWS_AS(compute_bounds(spec_of("IV", false), p, cf), Error);
}

TEST_CASE("bounds JSON fields") {
  Bounds b;
  b.lower = 0.25;
  b.upper = 0.75;
  b.h_size = 12;
  const auto text = bounds_json(b);
  CHECK(text.find("\"lower\": 0.25") != std::string::npos);
  CHECK(text.find("\"method\": \"pruned-lp\"") != std::string::npos);
  CHECK(text.find("\"H_size\": 12") != std::string::npos);
}
