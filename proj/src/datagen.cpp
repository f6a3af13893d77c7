#include "cbounds/datagen.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <random>

namespace cbounds {

namespace {

struct NodeSpec {
  std::string name;
  std::vector<std::string> parents;
};

CausalGraph make_graph(const std::vector<std::string>& a_names, const std::vector<NodeSpec>& b) {
  std::vector<std::string> names = a_names;
  for (const auto& n : b) names.push_back(n.name);
  std::vector<Mask> parents(names.size(), 0);
  auto index = [&](const std::string& s) {
    return static_cast<int>(std::find(names.begin(), names.end(), s) - names.begin());
  };
  for (const auto& n : b) {
    for (const auto& p : n.parents) parents[index(n.name)] |= bit(index(p));
  }
  return CausalGraph(names, low_bits(static_cast<int>(a_names.size())), parents);
}

using Values = std::vector<std::pair<std::string, int>>;

Example make_example(std::string id, CausalGraph g, const Values& intervene, const Values& outcome,
                     const Values& context, const Values& observe) {
  Example ex;
  ex.id = std::move(id);
  ex.query = {make_assignment(g, intervene), make_assignment(g, outcome),
              make_assignment(g, context)};
  ex.observation = {make_assignment(g, observe)};
  ex.model = uniform_model(g);
  ex.graph = std::move(g);
  return ex;
}

double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

/// P(V_B = v_B | V_A = v_A, U_B = u) for all cells at one u, accumulated
/// into `out` with weight w.
void accumulate(const StructuralModel& m, double u, double w, Eigen::MatrixXd& out) {
  const CausalGraph& g = m.graph;
  const int a = g.a_count();
  const int b = g.b_count();
  for (Eigen::Index va = 0; va < out.rows(); ++va) {
    for (Eigen::Index vb = 0; vb < out.cols(); ++vb) {
      const Mask v = static_cast<Mask>(va) | (static_cast<Mask>(vb) << a);
      double prob = w;
      for (int t = 0; t < b; ++t) {
        const int j = a + t;
        double eta = m.intercept[j] + m.u_weight[j] * u;
        for (int i : g.parent_list(j)) eta += m.weights[j][i] * static_cast<double>((v >> i) & 1U);
        const double p1 = logistic(eta);
        prob *= (v >> j) & 1U ? p1 : 1.0 - p1;
      }
      out(va, vb) += prob;
    }
  }
}

ProbabilityTable normalized(const CausalGraph& g, Eigen::MatrixXd values) {
  for (Eigen::Index r = 0; r < values.rows(); ++r) values.row(r) /= values.row(r).sum();
  return ProbabilityTable(g.a_count(), g.b_count(), std::move(values));
}

}  // namespace

StructuralModel uniform_model(const CausalGraph& g, double w) {
  StructuralModel m;
  m.graph = g;
  const int n = g.size();
  m.weights.assign(n, std::vector<double>(n, 0.0));
  m.u_weight.assign(n, 0.0);
  m.intercept.assign(n, 0.0);
  for (int j : indices_of(g.b_set())) {
    for (int i : g.parent_list(j)) m.weights[j][i] = w;
    m.u_weight[j] = w;
  }
  return m;
}

std::vector<std::string> builtin_ids() {
  return {"A", "B", "C", "D", "E", "F", "G", "IV", "IV-direct", "F-direct", "treatments"};
}

Example builtin_example(const std::string& id) {
  if (id == "A") {
    auto g = make_graph({"Z1", "Z2"}, {{"S1", {}},
                                       {"X1", {"S1"}},
                                       {"S2", {"S1", "X1", "Z2"}},
                                       {"X2", {"S2", "Z1", "Z2"}},
                                       {"Y", {"S2", "X2", "Z2"}}});
    return make_example(id, g, {{"X2", 1}}, {{"Y", 1}}, {{"Z1", 1}, {"Z2", 1}}, {{"Y", 1}});
  }
  if (id == "B") {
    auto g = make_graph({"C", "F"}, {{"A", {"C", "F"}},
                                     {"B", {"C", "F"}},
                                     {"D", {"A"}},
                                     {"E", {"A", "B"}},
                                     {"Y", {"D", "C", "E"}}});
    return make_example(id, g, {{"A", 1}, {"B", 1}}, {{"Y", 1}}, {{"C", 1}, {"F", 1}},
                        {{"Y", 1}});
  }
  if (id == "C") {
    auto g = make_graph({"W1", "W3"}, {{"T", {"W1", "W3"}},
                                       {"M1", {"T", "W3"}},
                                       {"M2", {"M1", "W1"}},
                                       {"Y", {"M2"}},
                                       {"X3", {"Y", "M1", "T"}}});
    return make_example(id, g, {{"M1", 1}}, {{"Y", 1}}, {{"W1", 1}, {"W3", 1}}, {{"Y", 1}});
  }
  if (id == "D") {
    auto g = make_graph({"E", "F"}, {{"A", {"F", "E"}},
                                     {"B", {"E", "F", "A"}},
                                     {"C", {"B", "E", "F", "A"}},
                                     {"D", {"B", "E", "F", "A", "C"}},
                                     {"Y", {"E", "D"}},
                                     {"G", {"A", "B", "C", "D", "Y", "E", "F"}}});
    return make_example(id, g, {{"D", 1}}, {{"Y", 1}}, {{"E", 1}, {"F", 1}}, {{"Y", 1}});
  }
  if (id == "E") {
    auto g = make_graph({"A", "B"}, {{"C", {"A", "B"}},
                                     {"D", {"A", "C", "B"}},
                                     {"E", {"A", "B"}},
                                     {"G", {"A", "B", "C", "D"}},
                                     {"F", {"A", "C", "B", "D", "E", "G"}},
                                     {"Y", {"A", "E", "B", "F"}}});
    return make_example(id, g, {{"C", 1}, {"F", 1}}, {{"Y", 1}}, {{"A", 1}, {"B", 1}},
                        {{"Y", 1}});
  }
  if (id == "F" || id == "F-direct") {
    std::vector<std::string> y_parents = {"T1", "T2", "T3", "C2"};
    if (id == "F-direct") y_parents.push_back("C1");
    auto g = make_graph({"C1", "C2"}, {{"T1", {"C1", "C2"}},
                                       {"T2", {"C1", "C2", "T1"}},
                                       {"T3", {"C1", "C2", "T1", "T2"}},
                                       {"Y", y_parents}});
    auto ex = make_example(id, g, {{"T1", 1}, {"T2", 1}, {"T3", 1}}, {{"Y", 1}},
                           {{"C1", 1}, {"C2", 1}}, {{"Y", 1}});
    // The structural equations omit the treatment-to-treatment edges.
    const int t1 = g.require_index("T1");
    const int t2 = g.require_index("T2");
    const int t3 = g.require_index("T3");
    ex.model.weights[t2][t1] = 0;
    ex.model.weights[t3][t1] = 0;
    ex.model.weights[t3][t2] = 0;
    return ex;
  }
  if (id == "G") {
    auto g = make_graph({"W1", "W2"}, {{"D", {"W1"}},
                                       {"A", {"W1", "D"}},
                                       {"C", {"A", "D", "W1"}},
                                       {"B", {"D", "C", "A", "W1", "W2"}},
                                       {"Y", {"D", "C", "A", "B", "W1"}}});
    return make_example(id, g, {{"B", 1}}, {{"Y", 1}}, {{"W1", 1}, {"W2", 1}}, {{"Y", 1}});
  }
  if (id == "IV") {
    auto g = make_graph({"Z"}, {{"X", {"Z"}}, {"Y", {"X"}}});
    return make_example(id, g, {{"X", 1}}, {{"Y", 1}}, {{"Z", 1}}, {{"Y", 0}});
  }
  if (id == "IV-direct") {
    auto g = make_graph({"Z"}, {{"X", {"Z"}}, {"Y", {"Z", "X"}}});
    return make_example(id, g, {{"X", 1}}, {{"Y", 1}}, {{"Z", 1}}, {{"Y", 0}});
  }
  if (id == "treatments") {
    auto g = make_graph({"C1", "C2"}, {{"T1", {"C1", "C2"}},
                                       {"T2", {"C1", "C2"}},
                                       {"T3", {"C1", "C2", "T1", "T2"}},
                                       {"T4", {"C1", "C2", "T3"}},
                                       {"T5", {"C1", "C2", "T1", "T3"}},
                                       {"Y", {"T1", "T2", "T3", "T4", "T5", "C1", "C2"}}});
    return make_example(id, g,
                        {{"T1", 1}, {"T2", 1}, {"T3", 1}, {"T4", 1}, {"T5", 1}}, {{"Y", 1}},
                        {{"C1", 1}, {"C2", 1}}, {{"Y", 1}});
  }
  throw Error(ErrorCode::kParse, "unknown example '" + id + "'");
}

std::pair<std::vector<double>, std::vector<double>> gauss_hermite(int n) {
  if (n < 1) throw Error(ErrorCode::kInvalidTable, "quadrature needs at least one node");
  // Golub-Welsch on the Jacobi matrix of the probabilists' Hermite polynomials.
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) jacobi(k, k - 1) = jacobi(k - 1, k) = std::sqrt(double(k));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jacobi);
  std::vector<double> nodes(n);
  std::vector<double> weights(n);
  for (int k = 0; k < n; ++k) {
    nodes[k] = es.eigenvalues()[k];
    weights[k] = es.eigenvectors()(0, k) * es.eigenvectors()(0, k);
  }
  return {nodes, weights};
}

ProbabilityTable table_from_model(const StructuralModel& m, const TableOptions& options) {
  const CausalGraph& g = m.graph;
  Eigen::MatrixXd values =
      Eigen::MatrixXd::Zero(Eigen::Index{1} << g.a_count(), Eigen::Index{1} << g.b_count());
  if (options.mode == TableMode::kQuadrature) {
    const auto [nodes, weights] = gauss_hermite(options.quadrature_nodes);
    for (std::size_t k = 0; k < nodes.size(); ++k) accumulate(m, nodes[k], weights[k], values);
  } else {
    if (options.samples == 0) throw Error(ErrorCode::kInvalidTable, "need at least one sample");
    std::mt19937_64 rng(options.seed);
    std::normal_distribution<double> normal;
    const double w = 1.0 / static_cast<double>(options.samples);
    for (std::uint64_t s = 0; s < options.samples; ++s) accumulate(m, normal(rng), w, values);
  }
  return normalized(g, std::move(values));
}

ProbabilityTable random_instance(const StructuralModel& m, std::uint64_t seed, RandomMode mode) {
  const CausalGraph& g = m.graph;
  std::mt19937_64 rng(seed);
  switch (mode) {
    case RandomMode::kDirichlet: {
      std::exponential_distribution<double> expo(1.0);
      Eigen::MatrixXd values(Eigen::Index{1} << g.a_count(), Eigen::Index{1} << g.b_count());
      for (Eigen::Index r = 0; r < values.rows(); ++r) {
        for (Eigen::Index c = 0; c < values.cols(); ++c) values(r, c) = expo(rng);
      }
      return normalized(g, std::move(values));
    }
    case RandomMode::kSemRandom: {
      std::normal_distribution<double> normal;
      StructuralModel perturbed = m;
      for (int j : indices_of(g.b_set())) {
        for (int i : g.parent_list(j)) {
          if (perturbed.weights[j][i] != 0) perturbed.weights[j][i] += normal(rng);
        }
        if (perturbed.u_weight[j] != 0) perturbed.u_weight[j] += normal(rng);
      }
      return table_from_model(perturbed);
    }
    case RandomMode::kSemSampled: {
      TableOptions opt;
      opt.mode = TableMode::kMonteCarlo;
      opt.samples = 1;
      opt.seed = seed;
      return table_from_model(m, opt);
    }
  }
  throw Error(ErrorCode::kInternal, "unknown random mode");
}

StructuralModel random_model(const CausalGraph& g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  StructuralModel m = uniform_model(g);
  for (int j : indices_of(g.b_set())) {
    for (int i : g.parent_list(j)) m.weights[j][i] = normal(rng);
    m.u_weight[j] = 1.0 + 2.0 * std::abs(normal(rng));
    m.intercept[j] = normal(rng);
  }
  return m;
}

CausalGraph random_graph(const RandomGraphSpec& spec, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0, 1);
  const int a = spec.a_count;
  const int n = a + spec.b_count;
  std::vector<std::string> names;
  for (int i = 0; i < a; ++i) names.push_back("A" + std::to_string(i));
  for (int t = 0; t < spec.b_count; ++t) names.push_back("B" + std::to_string(t));
  std::vector<Mask> parents(n, 0);
  for (int j = a; j < n; ++j) {
    for (int i = 0; i < j; ++i) {
      if (popcount(parents[j]) < spec.max_parents && unit(rng) < spec.edge_probability) {
        parents[j] |= bit(i);
      }
    }
  }
  // Every A-node must feed some B-node.
  for (int i = 0; i < a; ++i) {
    bool fed = false;
    for (int j = a; j < n; ++j) fed = fed || (parents[j] & bit(i));
    if (fed) continue;
    std::uniform_int_distribution<int> pick(a, n - 1);
    int j = pick(rng);
    if (popcount(parents[j]) >= spec.max_parents) {
      parents[j] &= ~bit(63 - std::countl_zero(parents[j]));
    }
    parents[j] |= bit(i);
  }
  return CausalGraph(names, low_bits(a), parents);
}

Query random_query(const CausalGraph& g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> coin(0, 1);
  const int a = g.a_count();
  const int n = g.size();
  Query q;
  // Outcome: the last node, sometimes with one more.
  Mask out = bit(n - 1);
  if (g.b_count() > 2 && coin(rng)) out |= bit(a + coin(rng));
  Mask in = 0;
  for (int j = a; j < n; ++j) {
    if (!(out & bit(j)) && coin(rng)) in |= bit(j);
  }
  Mask values = 0;
  for (int j = 0; j < n; ++j) if (coin(rng)) values |= bit(j);
  q.intervention = {in, values};
  q.outcome = {out, values >> 1 | values};
  q.context = {g.a_set(), values};
  return q;
}

}  // namespace cbounds
