#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "cbounds/bounds.hpp"
#include "cbounds/graph.hpp"
#include "cbounds/probability_table.hpp"

namespace cbounds {

/// Graph, query and optional observation as read from one problem document:
///   {"nodes": [...], "a_set": [...], "parents": {"X": ["Z"]},
///    "query": {"intervene": {...}, "outcome": {...}, "context": {...}},
///    "observe": {...}, "confounders": [["X", "Y"]]}
/// "observe" and "confounders" are optional. The graph is not validated here.
struct ProblemSpec {
  CausalGraph graph;
  Query query;
  std::optional<Observation> observation;

  const Observation* observation_ptr() const { return observation ? &*observation : nullptr; }
};

ProblemSpec parse_problem(const std::string& text);
ProblemSpec read_problem(const std::string& path);
std::string problem_json(const CausalGraph& g, const Query& q, const Observation* w);

/// CSV with header "v_A,v_B,p"; bit strings list node values in node order.
/// Cells not listed are zero.
ProbabilityTable parse_table(const CausalGraph& g, std::istream& in);
ProbabilityTable read_table(const CausalGraph& g, const std::string& path);
void write_table(std::ostream& out, const CausalGraph& g, const ProbabilityTable& p);

/// {"lower", "upper", "method", "H_size", "solve_ms", "status"}.
std::string bounds_json(const Bounds& b);

/// Shortest decimal text that reads back to the same double.
std::string format_double(double x);

}  // namespace cbounds
