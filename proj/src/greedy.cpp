#include "cbounds/greedy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "cbounds/bounds.hpp"

namespace cbounds {

namespace {

template <typename F>
void for_cells(const PrunedProblem& problem, std::size_t k, F&& f) {
  const int a = problem.graph.a_count();
  const int b = problem.graph.b_count();
  const std::uint64_t code = problem.codes[k];
  for (std::uint32_t v = 0; v < (std::uint32_t{1} << a); ++v) {
    f(static_cast<int>((v << b) | Hyperarc::entry(code, a, b, v)));
  }
}

int coefficient(const PrunedProblem& problem, std::size_t k, lp::Sense sense) {
  return sense == lp::Sense::kMinimize ? problem.cL(k) : problem.cU(k);
}

double cell_value(const ProbabilityTable& p, int cell) {
  return p(static_cast<std::uint32_t>(cell) >> p.b_count(),
           static_cast<std::uint32_t>(cell) & (p.b_states() - 1));
}

// In the lower sense slack_h = c_h - sum_h and a cell may rise by the least
// slack among its hyperarcs; the upper sense uses sum_h - c_h and lowers the
// cell. Both keep every slack >= 0.
GreedyResult run(const PrunedProblem& problem, const CellIndex& index, const ProbabilityTable& p,
                 const GreedyOptions& options, lp::Sense sense) {
  if (p.a_count() != problem.graph.a_count() || p.b_count() != problem.graph.b_count()) {
    throw Error(ErrorCode::kDimensionMismatch, "probability table does not match the graph");
  }
  const bool lower = sense == lp::Sense::kMinimize;
  const int dir = lower ? 1 : -1;
  const int cells = index.cells();
  const int rows = static_cast<int>(p.a_states());

  GreedyResult out;
  out.sense = sense;
  out.lambda = Eigen::VectorXi::Constant(cells, -dir);
  std::vector<std::int32_t> slack(problem.size());
  for (std::size_t k = 0; k < problem.size(); ++k) {
    const int c = coefficient(problem, k, sense);
    slack[k] = lower ? c + rows : rows - c;
  }

  std::vector<int> order(cells);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int x, int y) { return cell_value(p, x) > cell_value(p, y); });

  for (int c : order) {
    if (index.covered(c)) continue;
    out.lambda[c] = 0;
    if (cell_value(p, c) > 1e-9) {
      out.warnings.push_back("cell " + std::to_string(c) +
                             " has positive probability but no valid hyperarc");
    }
  }

  bool changed = true;
  while (changed) {
    changed = false;
    ++out.passes;
    for (int c : order) {
      if (!index.covered(c)) continue;
      std::int32_t room = std::numeric_limits<std::int32_t>::max();
      for (auto it = index.begin(c); it != index.end(c) && room > 0; ++it) {
        room = std::min(room, slack[*it]);
      }
      if (room <= 0) continue;
      for (auto it = index.begin(c); it != index.end(c); ++it) slack[*it] -= room;
      out.lambda[c] += dir * room;
      out.steps += static_cast<std::uint64_t>(room);
      changed = true;
    }
    if (!options.multi_pass) break;
  }

  double value = 0;
  for (int c = 0; c < cells; ++c) {
    value += cell_value(p, c) * out.lambda[c];
    const int l = out.lambda[c];
    ++out.histogram[l == -1 ? 0 : l == 0 ? 1 : l == 1 ? 2 : 3];
  }
  out.bound = value;

  if (!feasibility_check(out.lambda, problem, sense).feasible) {
    throw Error(ErrorCode::kInternal, "greedy produced an infeasible dual");
  }
  return out;
}

}  // namespace

CellIndex::CellIndex(const PrunedProblem& problem) {
  const int cells = 1 << (problem.graph.a_count() + problem.graph.b_count());
  if (problem.size() > std::numeric_limits<std::uint32_t>::max()) {
    throw Error(ErrorCode::kCapacityExceeded, "too many hyperarcs for the cell index");
  }
  start_.assign(static_cast<std::size_t>(cells) + 1, 0);
  for (std::size_t k = 0; k < problem.size(); ++k) {
    for_cells(problem, k, [&](int c) { ++start_[c + 1]; });
  }
  std::partial_sum(start_.begin(), start_.end(), start_.begin());
  members_.resize(start_.back());
  std::vector<std::uint64_t> fill(start_.begin(), start_.end() - 1);
  for (std::size_t k = 0; k < problem.size(); ++k) {
    for_cells(problem, k, [&](int c) { members_[fill[c]++] = static_cast<std::uint32_t>(k); });
  }
}

GreedyResult greedy_lower(const PrunedProblem& problem, const CellIndex& index,
                          const ProbabilityTable& p, const GreedyOptions& options) {
  return run(problem, index, p, options, lp::Sense::kMinimize);
}

GreedyResult greedy_upper(const PrunedProblem& problem, const CellIndex& index,
                          const ProbabilityTable& p, const GreedyOptions& options) {
  return run(problem, index, p, options, lp::Sense::kMaximize);
}

GreedyResult greedy_lower(const PrunedProblem& problem, const ProbabilityTable& p,
                          const GreedyOptions& options) {
  return greedy_lower(problem, CellIndex(problem), p, options);
}

GreedyResult greedy_upper(const PrunedProblem& problem, const ProbabilityTable& p,
                          const GreedyOptions& options) {
  return greedy_upper(problem, CellIndex(problem), p, options);
}

FeasibilityReport feasibility_check(const Eigen::VectorXi& lambda, const PrunedProblem& problem,
                                    lp::Sense sense) {
  const int cells = 1 << (problem.graph.a_count() + problem.graph.b_count());
  if (lambda.size() != cells) {
    throw Error(ErrorCode::kDimensionMismatch, "dual vector does not match the cell count");
  }
  FeasibilityReport r;
  for (std::size_t k = 0; k < problem.size(); ++k) {
    long sum = 0;
    for_cells(problem, k, [&](int c) { sum += lambda[c]; });
    const int coeff = coefficient(problem, k, sense);
    const bool ok = sense == lp::Sense::kMinimize ? sum <= coeff : sum >= coeff;
    if (!ok) {
      r.feasible = false;
      r.first_violation = static_cast<long>(k);
      break;
    }
  }
  return r;
}

DualProbe dual_integrality_probe(const PrunedProblem& problem, const ProbabilityTable& p) {
  const Bounds b = bounds_pruned(problem, p);
  auto deviation = [](const Eigen::VectorXd& y) {
    double worst = 0;
    for (Eigen::Index i = 0; i < y.size(); ++i) {
      const double d = std::min({std::abs(y[i] + 1), std::abs(y[i]), std::abs(y[i] - 1)});
      worst = std::max(worst, d);
    }
    return worst;
  };
  DualProbe probe;
  const double lo = deviation(b.lower_duals);
  const double hi = deviation(b.upper_duals);
  probe.lower_integral = lo <= 1e-6;
  probe.upper_integral = hi <= 1e-6;
  probe.max_deviation = std::max(lo, hi);
  return probe;
}

}  // namespace cbounds
