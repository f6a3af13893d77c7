#pragma once

#include <Eigen/Core>
#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "cbounds/hyperarc.hpp"
#include "cbounds/lp/linear_program.hpp"
#include "cbounds/probability_table.hpp"

namespace cbounds {

/// Which hyperarcs see each cell (v_A, v_B), stored CSR-style; cell index
/// v_A * 2^|B| + v_B as in the LP rows.
class CellIndex {
 public:
  explicit CellIndex(const PrunedProblem& problem);

  int cells() const { return static_cast<int>(start_.size()) - 1; }
  const std::uint32_t* begin(int cell) const { return members_.data() + start_[cell]; }
  const std::uint32_t* end(int cell) const { return members_.data() + start_[cell + 1]; }
  bool covered(int cell) const { return start_[cell] != start_[cell + 1]; }

 private:
  std::vector<std::uint64_t> start_;
  std::vector<std::uint32_t> members_;
};

struct GreedyOptions {
  /// Revisit all cells until a full pass changes nothing.
  bool multi_pass = false;
};

struct GreedyResult {
  double bound = 0;
  lp::Sense sense = lp::Sense::kMinimize;
  /// Integer dual per cell.
  Eigen::VectorXi lambda;
  /// Unit moves applied (a jump by k counts k).
  std::uint64_t steps = 0;
  int passes = 0;
  /// Final lambda counts for -1, 0, 1 and anything else.
  std::array<std::uint64_t, 4> histogram{};
  std::vector<std::string> warnings;
};

/// Dual ascent from lambda = -1: cells in descending p (ties by ascending
/// cell) are raised as far as every constraint sum <= c^L allows. The result
/// is a dual-feasible lambda, so the bound is at most the LP lower bound.
GreedyResult greedy_lower(const PrunedProblem& problem, const ProbabilityTable& p,
                          const GreedyOptions& options = {});
/// Mirror image from lambda = +1 against sum >= c^U.
GreedyResult greedy_upper(const PrunedProblem& problem, const ProbabilityTable& p,
                          const GreedyOptions& options = {});

/// As above, reusing a prebuilt index.
GreedyResult greedy_lower(const PrunedProblem& problem, const CellIndex& index,
                          const ProbabilityTable& p, const GreedyOptions& options = {});
GreedyResult greedy_upper(const PrunedProblem& problem, const CellIndex& index,
                          const ProbabilityTable& p, const GreedyOptions& options = {});

struct FeasibilityReport {
  bool feasible = true;
  /// Index into the problem of the first violated hyperarc, or -1.
  long first_violation = -1;
};

/// Recomputes every constraint sum from scratch.
FeasibilityReport feasibility_check(const Eigen::VectorXi& lambda, const PrunedProblem& problem,
                                    lp::Sense sense);

struct DualProbe {
  bool lower_integral = false;
  bool upper_integral = false;
  /// Largest distance of any optimal dual from {-1, 0, 1}.
  double max_deviation = 0;
};

/// Solves both pruned LPs and measures how far the returned duals are from
/// {-1, 0, 1} (tolerance 1e-6).
DualProbe dual_integrality_probe(const PrunedProblem& problem, const ProbabilityTable& p);

}  // namespace cbounds
