#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "cbounds/graph.hpp"
#include "cbounds/hyperarc.hpp"
#include "cbounds/lp/linear_program.hpp"
#include "cbounds/probability_table.hpp"

namespace cbounds {

/// Default refusal threshold for materializing R.
inline constexpr std::uint64_t kDefaultResponseCap = 1'000'000;

/// |R| is always a power of two: prod_j 2^(2^|pa(j)|) = 2^E.
struct ResponseCount {
  int log2 = 0;

  /// Exact decimal digits.
  std::string decimal() const;
  double value() const;
  /// Scientific notation with `digits` significant figures, e.g. "1.3e8".
  std::string scientific(int digits = 2) const;
  /// True when |R| <= cap.
  bool within(std::uint64_t cap) const;
};

ResponseCount count_R(const CausalGraph& g);

/// One truth table per B-node, in B-local order. Bit rank(pi) of entry t is
/// the value node a+t takes when its parents (sorted) show pattern pi.
using ResponseIndex = std::vector<std::uint64_t>;

/// The response-function space of a graph. Evaluation needs every B-node to
/// have at most six parents so that a truth table fits one word.
class ResponseSpace {
 public:
  explicit ResponseSpace(const CausalGraph& g);

  const CausalGraph& graph() const { return graph_; }
  int b_count() const { return static_cast<int>(widths_.size()); }
  /// Truth-table length 2^|pa| of B-local node t.
  int table_bits(int t) const { return widths_[t]; }
  ResponseCount count() const { return {total_bits_}; }

  /// Mixed-radix packing (node 0 least significant); needs |R| < 2^64.
  std::uint64_t encode(const ResponseIndex& r) const;
  ResponseIndex decode(std::uint64_t index) const;

  /// Odometer step in enumeration order; returns false after the last index.
  bool next(ResponseIndex& r) const;

 private:
  CausalGraph graph_;
  std::vector<int> widths_;
  int total_bits_ = 0;
};

/// Full assignment (A bits from v_a, B bits computed) under r.
Mask evaluate_FB(const ResponseSpace& s, Mask v_a, const ResponseIndex& r);
/// As evaluate_FB with the nodes of `clamp` held at its values.
Mask evaluate_intervened(const ResponseSpace& s, Mask v_a, const Assignment& clamp,
                         const ResponseIndex& r);

/// The hyperarc v_A -> F_B(v_A, r) induced by r, as a code.
std::uint64_t induced_hyperarc(const ResponseSpace& s, const ResponseIndex& r);

struct Membership {
  bool in_rq = false;
  bool in_rw = true;
  std::uint64_t hyperarc = 0;
};

Membership membership(const ResponseSpace& s, const Query& q, const Observation* w,
                      const ResponseIndex& r);

/// Throws kCapExceeded carrying the exact |R| when |R| > cap.
void require_enumerable(const ResponseSpace& s, std::uint64_t cap);

/// Variables q_r for all r; one equality per cell (v_A, v_B); row index
/// v_A * 2^|B| + v_B.
lp::LinearProgram<double> build_naive_lp(const ResponseSpace& s, const Query& q,
                                         const ProbabilityTable& p, lp::Sense sense,
                                         std::uint64_t cap = kDefaultResponseCap);

/// Charnes-Cooper form of the observation-conditioned query; the last column
/// is alpha and the last row the normalization over R_W.
lp::LinearProgram<double> build_naive_fractional_lp(const ResponseSpace& s, const Query& q,
                                                    const Observation& w,
                                                    const ProbabilityTable& p, lp::Sense sense,
                                                    std::uint64_t cap = kDefaultResponseCap);

/// Interval version: p - delta <= sum <= p + delta per cell, total mass one.
/// With an observation the rows are homogenized by alpha as in the
/// fractional form.
lp::LinearProgram<double> build_naive_finite_lp(const ResponseSpace& s, const Query& q,
                                                const Observation* w,
                                                const ProbabilityTable& p_bar, double delta,
                                                lp::Sense sense,
                                                std::uint64_t cap = kDefaultResponseCap);

struct BenchmarkRun {
  bool completed = false;
  double seconds = 0;
  std::uint64_t visited = 0;
  PrunedProblem problem;
};

/// Builds the pruned problem by iterating over all of R, bucketing each r by
/// its induced hyperarc. Stops (completed = false) once `budget_s` elapses.
BenchmarkRun algorithm3_benchmark(const ResponseSpace& s, const Query& q,
                                  const ProbabilityTable& p,
                                  double budget_s = std::numeric_limits<double>::infinity());
BenchmarkRun algorithm4_benchmark(const ResponseSpace& s, const Query& q, const Observation& w,
                                  const ProbabilityTable& p,
                                  double budget_s = std::numeric_limits<double>::infinity());

/// |R_h| per valid hyperarc, ascending by code, by enumeration of R.
std::vector<std::pair<std::uint64_t, std::uint64_t>> class_sizes(
    const ResponseSpace& s, std::uint64_t cap = kDefaultResponseCap);

/// The classes R_h are disjoint, cover R, and are indexed exactly by H.
bool partition_check(const ResponseSpace& s, std::uint64_t cap = kDefaultResponseCap);

}  // namespace cbounds
