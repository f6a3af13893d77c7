#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cbounds/bits.hpp"
#include "cbounds/error.hpp"

namespace cbounds {

/// Largest node count representable by a single assignment bitmask.
inline constexpr int kMaxNodes = 62;

/// Partitioned DAG over binary variables. Node indices follow the supplied
/// topological order; index i occupies bit i of every assignment mask.
///
/// Construction records the structure without checking it. Run
/// `validate_graph` (or `require_valid`) before handing a graph to any
/// computation; all algorithms assume a validated graph.
class CausalGraph {
 public:
  CausalGraph() = default;
  CausalGraph(std::vector<std::string> node_names, Mask a_set,
              std::vector<Mask> parents, std::vector<Mask> declared_confounders = {});

  int size() const { return static_cast<int>(names_.size()); }
  Mask all_nodes() const { return low_bits(size()); }
  Mask a_set() const { return a_set_; }
  Mask b_set() const { return all_nodes() & ~a_set_; }
  int a_count() const { return popcount(a_set_); }
  int b_count() const { return size() - a_count(); }

  Mask parents(int j) const { return parents_[j]; }
  std::span<const int> parent_list(int j) const { return parent_lists_[j]; }
  Mask children(int j) const { return children_[j]; }
  const std::vector<Mask>& declared_confounders() const { return confounders_; }

  const std::string& name(int j) const { return names_[j]; }
  const std::vector<std::string>& names() const { return names_; }
  std::optional<int> index_of(std::string_view name) const;
  /// Like index_of, but throws kParse for unknown names.
  int require_index(std::string_view name) const;

  /// Total number of directed edges.
  int edge_count() const;

  bool operator==(const CausalGraph&) const = default;

 private:
  std::vector<std::string> names_;
  Mask a_set_ = 0;
  std::vector<Mask> parents_;
  std::vector<std::vector<int>> parent_lists_;
  std::vector<Mask> children_;
  std::vector<Mask> confounders_;
};

struct Violation {
  ErrorCode code;
  std::string detail;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  bool has(ErrorCode code) const;
  std::string summary() const;
};

/// Checks the partition assumptions: A and B partition the nodes, A-nodes are
/// parentless and each feeds some B-node, confounders stay inside B, edges
/// respect the index order, and every A-node precedes every B-node.
ValidationReport validate_graph(const CausalGraph& g);

/// Throws an Error carrying the first violation and the full itemized summary.
void require_valid(const CausalGraph& g);

/// Values for the variables of `scope`; bits outside the scope are always 0.
class Assignment {
 public:
  Assignment() = default;
  Assignment(Mask scope, Mask values) : scope_(scope), values_(values & scope) {}

  Mask scope() const { return scope_; }
  Mask values() const { return values_; }
  bool empty() const { return scope_ == 0; }
  bool contains(int i) const { return (scope_ >> i) & 1U; }
  int value(int i) const { return static_cast<int>((values_ >> i) & 1U); }

  /// True when the full assignment `v` agrees with this one on its scope.
  bool matched_by(Mask v) const { return ((v ^ values_) & scope_) == 0; }

  Assignment restricted_to(Mask sub) const { return {scope_ & sub, values_}; }

  /// Comparing assignments over different scopes is a logic error and throws.
  bool operator==(const Assignment& other) const;

 private:
  Mask scope_ = 0;
  Mask values_ = 0;
};

/// P(V_O(V_I = q_I) = q_O | V_A = q_A).
struct Query {
  Assignment intervention;
  Assignment outcome;
  Assignment context;
};

/// Additional observed values V_W = q_W, W a subset of B.
struct Observation {
  Assignment observed;

  bool empty() const { return observed.empty(); }
};

void validate_query(const CausalGraph& g, const Query& q);
void validate_observation(const CausalGraph& g, const Query& q, const Observation& w);

/// Graph with every incoming edge of `intervened` removed.
CausalGraph mutilate(const CausalGraph& g, Mask intervened);

/// Nodes with a directed path (length >= 0) to an outcome node in the graph
/// mutilated by the query's intervention.
Mask critical_for_query(const CausalGraph& g, const Query& q);

/// A-nodes with a directed path to some observed node in the original graph.
Mask critical_for_observation(const CausalGraph& g, const Observation& w);

/// Drops intervention targets that cannot reach the outcome. Idempotent.
Query reduce_query(const CausalGraph& g, const Query& q);

/// Nodes with a directed path (length >= 0) into `targets`, ignoring edges
/// that enter `cut`.
Mask ancestors_of(const CausalGraph& g, Mask targets, Mask cut = 0);

/// Builds an assignment from (name, value) pairs; throws kParse on unknown
/// names and kInvalidQuery on values other than 0/1.
Assignment make_assignment(const CausalGraph& g,
                           const std::vector<std::pair<std::string, int>>& values);

/// Stable 64-bit fingerprint of the graph structure and names.
std::uint64_t fingerprint(const CausalGraph& g);

}  // namespace cbounds
