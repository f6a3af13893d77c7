#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "cbounds/graph.hpp"
#include "cbounds/probability_table.hpp"

namespace cbounds {

/// Linear-logistic SEM over the B-nodes:
///   v_j ~ Bernoulli(logistic(intercept_j + sum_i weight_j[i] v_i + u_weight_j U_B)),
/// U_B ~ N(0, 1). Tables are conditional on V_A, so the A-node equations
/// (driven by U_A alone) never enter.
struct StructuralModel {
  CausalGraph graph;
  /// weights[j][i] for i in pa(j); zero for parents the equation omits.
  std::vector<std::vector<double>> weights;
  std::vector<double> u_weight;
  std::vector<double> intercept;
};

/// Every edge and every U_B loading gets coefficient `w`.
StructuralModel uniform_model(const CausalGraph& g, double w = 1.0);

struct Example {
  std::string id;
  CausalGraph graph;
  Query query;
  Observation observation;
  StructuralModel model;
};

/// "A".."G" (the standard benchmark graphs), plus "IV" (instrument), "IV-direct"
/// (instrument with a direct Z->Y edge), "F-direct" (F with C1->Y) and
/// "treatments" (five confounded treatments, every context variable critical).
Example builtin_example(const std::string& id);
std::vector<std::string> builtin_ids();

enum class TableMode { kQuadrature, kMonteCarlo };

struct TableOptions {
  TableMode mode = TableMode::kQuadrature;
  int quadrature_nodes = 64;
  std::uint64_t samples = 100000;
  std::uint64_t seed = 0;
};

/// Nodes and weights of the Gauss-Hermite rule for a standard normal density.
std::pair<std::vector<double>, std::vector<double>> gauss_hermite(int n);

ProbabilityTable table_from_model(const StructuralModel& m, const TableOptions& options = {});

enum class RandomMode {
  /// Each row drawn from a flat Dirichlet; not necessarily compatible with
  /// the graph.
  kDirichlet,
  /// Listed SEM coefficients (and U_B loadings) shifted by N(0, 1) draws,
  /// then integrated by quadrature.
  kSemRandom,
  /// One U_B draw per instance; the table is the SEM conditional on it.
  kSemSampled,
};

ProbabilityTable random_instance(const StructuralModel& m, std::uint64_t seed, RandomMode mode);

/// SEM with N(0, 1) coefficients on every edge and loading.
StructuralModel random_model(const CausalGraph& g, std::uint64_t seed);

struct RandomGraphSpec {
  int a_count = 1;
  int b_count = 3;
  double edge_probability = 0.5;
  /// Parent-count limit per B-node (keeps the response oracle usable).
  int max_parents = 3;
};

/// A graph satisfying the partition assumptions: nodes A0.. then B0..,
/// every A-node feeds at least one B-node.
CausalGraph random_graph(const RandomGraphSpec& spec, std::uint64_t seed);

/// Random valid query on g: nonempty outcome, disjoint intervention, random
/// context values.
Query random_query(const CausalGraph& g, std::uint64_t seed);

}  // namespace cbounds
