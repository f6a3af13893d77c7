#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "cbounds/hyperarc.hpp"
#include "cbounds/lp/linear_program.hpp"
#include "cbounds/probability_table.hpp"

namespace cbounds {

enum class Method { kPrunedLp, kClosedForm, kNaiveLp, kGreedy, kFiniteData };

const char* to_string(Method m);

struct Bounds {
  double lower = 0;
  double upper = 1;
  Method method = Method::kPrunedLp;
  std::uint64_t h_size = 0;
  double solve_ms = 0;
  lp::Status status = lp::Status::kOptimal;
  /// Optimal duals of the lower and upper LPs, one per row (cells first,
  /// row index v_A * 2^|B| + v_B); empty for LP-free methods.
  Eigen::VectorXd lower_duals;
  Eigen::VectorXd upper_duals;
};

/// Pruned LPs over H: one equality per cell, objective c^L (min) or c^U (max).
lp::LinearProgram<double> pruned_lp(const PrunedProblem& problem, const ProbabilityTable& p,
                                    lp::Sense sense,
                                    long max_columns = lp::SolverOptions{}.max_columns);

/// Homogenized observation LPs: cells sum to alpha * p, mass on R_W is one,
/// objective d^L / d^U. Alpha is the last column.
lp::LinearProgram<double> pruned_observation_lp(const PrunedProblem& problem,
                                                const ProbabilityTable& p, lp::Sense sense,
                                                long max_columns = lp::SolverOptions{}.max_columns);

/// Interval LPs: per cell a <= row (p + delta) and a >= row (p - delta), then
/// total mass; with an observation the rows are scaled by alpha and the R_W
/// normalization row is appended.
lp::LinearProgram<double> pruned_finite_lp(const PrunedProblem& problem,
                                           const ProbabilityTable& p_bar, double delta,
                                           lp::Sense sense,
                                           long max_columns = lp::SolverOptions{}.max_columns);

Bounds bounds_pruned(const PrunedProblem& problem, const ProbabilityTable& p,
                     const lp::SolverOptions& options = {});
Bounds bounds_pruned(const CausalGraph& g, const Query& q, const ProbabilityTable& p,
                     const lp::SolverOptions& options = {});

/// Needs every A-node to be critical for the (reduced) query.
Bounds bounds_closed_form(const CausalGraph& g, const Query& q, const ProbabilityTable& p);
bool closed_form_applies(const CausalGraph& g, const Query& q);

Bounds bounds_with_observation(const PrunedProblem& problem, const ProbabilityTable& p,
                               const lp::SolverOptions& options = {});
Bounds bounds_with_observation(const CausalGraph& g, const Query& q, const Observation& w,
                               const ProbabilityTable& p, const lp::SolverOptions& options = {});

Bounds bounds_finite_data(const PrunedProblem& problem, const ProbabilityTable& p_bar,
                          double delta, const lp::SolverOptions& options = {});
/// `problem` must carry an observation.
Bounds bounds_finite_data_with_observation(const PrunedProblem& problem,
                                           const ProbabilityTable& p_bar, double delta,
                                           const lp::SolverOptions& options = {});

/// Reference bounds from the LPs over all of R (refused above `r_cap`); the
/// observation and delta select the fractional and interval forms.
Bounds bounds_naive(const CausalGraph& g, const Query& q, const Observation* w,
                    const ProbabilityTable& p, double delta = 0,
                    std::uint64_t r_cap = 1'000'000, const lp::SolverOptions& options = {});

struct SweepRow {
  double delta = 0;
  double lower = 0;
  double upper = 0;
  std::string status;
};

/// Finite-data bounds per grid point; errors are recorded in the row status.
std::vector<SweepRow> delta_sweep(const PrunedProblem& problem, const ProbabilityTable& p_bar,
                                  const std::vector<double>& grid,
                                  const lp::SolverOptions& options = {});

}  // namespace cbounds
