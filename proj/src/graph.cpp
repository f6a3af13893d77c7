#include "cbounds/graph.hpp"

#include <algorithm>
#include <sstream>

namespace cbounds {

namespace {

std::string join_names(const CausalGraph& g, Mask m) {
  std::string out;
  for (int i : indices_of(m)) {
    if (!out.empty()) out += ",";
    out += i < g.size() ? g.name(i) : "#" + std::to_string(i);
  }
  return "{" + out + "}";
}

std::uint64_t fnv1a(std::uint64_t h, std::string_view bytes) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

CausalGraph::CausalGraph(std::vector<std::string> node_names, Mask a_set,
                         std::vector<Mask> parents, std::vector<Mask> declared_confounders)
    : names_(std::move(node_names)),
      a_set_(a_set),
      parents_(std::move(parents)),
      confounders_(std::move(declared_confounders)) {
  if (names_.empty() || static_cast<int>(names_.size()) > kMaxNodes) {
    throw Error(ErrorCode::kCapacityExceeded,
                "graph must have between 1 and " + std::to_string(kMaxNodes) + " nodes");
  }
  if (parents_.size() != names_.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "one parent set per node is required");
  }
  const int n = size();
  children_.assign(n, 0);
  parent_lists_.resize(n);
  for (int j = 0; j < n; ++j) {
    if (parents_[j] & ~all_nodes()) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "parent of " + names_[j] + " references a missing node");
    }
    parent_lists_[j] = indices_of(parents_[j]);
    for (int p : parent_lists_[j]) children_[p] |= bit(j);
  }
}

std::optional<int> CausalGraph::index_of(std::string_view name) const {
  auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) return std::nullopt;
  return static_cast<int>(it - names_.begin());
}

int CausalGraph::require_index(std::string_view name) const {
  if (auto i = index_of(name)) return *i;
  throw Error(ErrorCode::kParse, "unknown node name '" + std::string(name) + "'");
}

int CausalGraph::edge_count() const {
  int edges = 0;
  for (Mask p : parents_) edges += popcount(p);
  return edges;
}

bool ValidationReport::has(ErrorCode code) const {
  return std::any_of(violations.begin(), violations.end(),
                     [code](const Violation& v) { return v.code == code; });
}

std::string ValidationReport::summary() const {
  std::ostringstream os;
  for (const auto& v : violations) os << to_string(v.code) << ": " << v.detail << "\n";
  return os.str();
}

ValidationReport validate_graph(const CausalGraph& g) {
  ValidationReport report;
  auto add = [&](ErrorCode code, std::string detail) {
    report.violations.push_back({code, std::move(detail)});
  };
  const int n = g.size();
  const Mask a = g.a_set();
  const Mask b = g.b_set();

  if (a & ~g.all_nodes()) add(ErrorCode::kNotPartitioned, "A references missing nodes");
  if (b == 0) add(ErrorCode::kNotPartitioned, "B is empty");
  for (std::size_t i = 0; i < g.names().size(); ++i) {
    for (std::size_t k = i + 1; k < g.names().size(); ++k) {
      if (g.names()[i] == g.names()[k]) {
        add(ErrorCode::kNotPartitioned, "duplicate node name '" + g.names()[i] + "'");
      }
    }
  }

  for (int j = 0; j < n; ++j) {
    const Mask late = g.parents(j) & ~low_bits(j);
    if (late) {
      add(ErrorCode::kNotTopological,
          "parents " + join_names(g, late) + " of " + g.name(j) + " do not precede it");
    }
  }
  if (a && b) {
    const int max_a = 63 - std::countl_zero(a);
    const int min_b = std::countr_zero(b);
    if (min_b < max_a) {
      add(ErrorCode::kNotTopological, "B-node " + g.name(min_b) + " precedes A-node " +
                                          g.name(max_a));
    }
  }

  for (int i : indices_of(a)) {
    if (g.parents(i)) {
      add(ErrorCode::kANodeHasParent,
          g.name(i) + " has parents " + join_names(g, g.parents(i)));
    }
    if ((g.children(i) & b) == 0) {
      add(ErrorCode::kAChildless, g.name(i) + " is not a parent of any B-node");
    }
  }

  for (Mask scope : g.declared_confounders()) {
    if (scope & ~b) {
      add(ErrorCode::kConfounderSpansPartition,
          "confounder scope " + join_names(g, scope) + " leaves B");
    }
  }
  return report;
}

void require_valid(const CausalGraph& g) {
  auto report = validate_graph(g);
  if (!report.ok()) throw Error(report.violations.front().code, report.summary());
}

bool Assignment::operator==(const Assignment& other) const {
  if (scope_ != other.scope_) {
    throw Error(ErrorCode::kDimensionMismatch, "comparing assignments with different scopes");
  }
  return values_ == other.values_;
}

void validate_query(const CausalGraph& g, const Query& q) {
  const Mask b = g.b_set();
  const Mask in = q.intervention.scope();
  const Mask out = q.outcome.scope();
  std::string problem;
  if (out == 0) problem = "outcome scope is empty";
  else if (in & ~b) problem = "intervention targets outside B";
  else if (out & ~b) problem = "outcome targets outside B";
  else if (in & out) problem = "a variable is both intervened on and an outcome";
  else if (q.context.scope() != g.a_set()) problem = "context must assign every A-node";
  if (!problem.empty()) throw Error(ErrorCode::kInvalidQuery, problem);
}

void validate_observation(const CausalGraph& g, const Query& q, const Observation& w) {
  const Mask scope = w.observed.scope();
  if (scope & ~g.b_set()) {
    throw Error(ErrorCode::kInvalidObservation, "observed variables must lie in B");
  }
  if (scope & q.intervention.scope()) {
    throw Error(ErrorCode::kInvalidObservation,
                "cannot observe an intervened variable " +
                    join_names(g, scope & q.intervention.scope()));
  }
}

CausalGraph mutilate(const CausalGraph& g, Mask intervened) {
  if (intervened & ~g.b_set()) {
    throw Error(ErrorCode::kScopeOutsideB, "intervention targets must lie in B");
  }
  std::vector<Mask> parents(g.size());
  for (int j = 0; j < g.size(); ++j) parents[j] = (intervened >> j) & 1U ? 0 : g.parents(j);
  return CausalGraph(g.names(), g.a_set(), std::move(parents), g.declared_confounders());
}

Mask ancestors_of(const CausalGraph& g, Mask targets, Mask cut) {
  // Children always carry larger indices, so one descending sweep suffices.
  Mask reach = targets;
  for (int j = g.size() - 1; j >= 0; --j) {
    if (g.children(j) & reach & ~cut) reach |= bit(j);
  }
  return reach;
}

Mask critical_for_query(const CausalGraph& g, const Query& q) {
  return ancestors_of(g, q.outcome.scope(), q.intervention.scope());
}

Mask critical_for_observation(const CausalGraph& g, const Observation& w) {
  if (w.empty()) return 0;
  return ancestors_of(g, w.observed.scope()) & g.a_set();
}

Query reduce_query(const CausalGraph& g, const Query& q) {
  const Mask critical = critical_for_query(g, q);
  Query out = q;
  out.intervention = q.intervention.restricted_to(critical);
  return out;
}

Assignment make_assignment(const CausalGraph& g,
                           const std::vector<std::pair<std::string, int>>& values) {
  Mask scope = 0;
  Mask bits = 0;
  for (const auto& [name, value] : values) {
    const int i = g.require_index(name);
    if (value != 0 && value != 1) {
      throw Error(ErrorCode::kInvalidQuery, "value of " + name + " must be 0 or 1");
    }
    if (scope & bit(i)) throw Error(ErrorCode::kInvalidQuery, name + " is assigned twice");
    scope |= bit(i);
    if (value) bits |= bit(i);
  }
  return {scope, bits};
}

std::uint64_t fingerprint(const CausalGraph& g) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (int j = 0; j < g.size(); ++j) {
    h = fnv1a(h, g.name(j));
    h = fnv1a(h, (g.a_set() >> j) & 1U ? "|A|" : "|B|");
    h = fnv1a(h, std::to_string(g.parents(j)));
  }
  return h;
}

}  // namespace cbounds
