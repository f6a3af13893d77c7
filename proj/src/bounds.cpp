#include "cbounds/bounds.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "cbounds/lp/simplex.hpp"
#include "cbounds/response_oracle.hpp"

namespace cbounds {

namespace {

using LP = lp::LinearProgram<double>;
using Clock = std::chrono::steady_clock;

void check_table(const PrunedProblem& problem, const ProbabilityTable& p) {
  if (p.a_count() != problem.graph.a_count() || p.b_count() != problem.graph.b_count()) {
    throw Error(ErrorCode::kDimensionMismatch, "probability table does not match the graph");
  }
}

void check_columns(const PrunedProblem& problem, long max_columns) {
  if (static_cast<long>(problem.size()) > max_columns) {
    throw Error(ErrorCode::kSizeCap, "|H| = " + std::to_string(problem.size()) +
                                         " exceeds the solver column cap " +
                                         std::to_string(max_columns));
  }
}

/// Cell rows touched by hyperarc k, one per v_A.
template <typename F>
void for_cells(const PrunedProblem& problem, std::size_t k, F&& f) {
  const int a = problem.graph.a_count();
  const int b = problem.graph.b_count();
  const std::uint64_t code = problem.codes[k];
  for (std::uint32_t v = 0; v < (std::uint32_t{1} << a); ++v) {
    f(static_cast<int>((v << b) | Hyperarc::entry(code, a, b, v)));
  }
}

double cell_value(const ProbabilityTable& p, int cell) {
  return p(static_cast<std::uint32_t>(cell) >> p.b_count(),
           static_cast<std::uint32_t>(cell) & (p.b_states() - 1));
}

int cell_count(const ProbabilityTable& p) { return static_cast<int>(p.a_states() * p.b_states()); }

bool has_witness(const PrunedProblem& problem) {
  for (std::size_t k = 0; k < problem.size(); ++k) {
    if (problem.dU(k)) return true;
  }
  return false;
}

double clamp_unit(double x) {
  if (x < 0 && x > -1e-7) return 0;
  if (x > 1 && x < 1 + 1e-7) return 1;
  return x;
}

struct PairResult {
  lp::Solution<double> lower;
  lp::Solution<double> upper;
  double ms = 0;
};

PairResult solve_pair(const LP& lo, const LP& hi, const lp::SolverOptions& options) {
  const auto start = Clock::now();
  PairResult out{lp::solve(lo, options), lp::solve(hi, options), 0};
  out.ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
  return out;
}

Bounds finish(const PairResult& r, Method method, std::size_t h_size, ErrorCode infeasible_code,
              const char* infeasible_what) {
  for (const auto* s : {&r.lower, &r.upper}) {
    switch (s->status) {
      case lp::Status::kOptimal: break;
      case lp::Status::kInfeasible: throw Error(infeasible_code, infeasible_what);
      case lp::Status::kUnbounded: throw Error(ErrorCode::kUnbounded, "bound LP is unbounded");
      case lp::Status::kSizeCap: throw Error(ErrorCode::kSizeCap, "bound LP exceeds the column cap");
    }
  }
  Bounds b;
  b.lower = clamp_unit(r.lower.objective);
  b.upper = clamp_unit(r.upper.objective);
  b.method = method;
  b.h_size = h_size;
  b.solve_ms = r.ms;
  b.lower_duals = r.lower.dual;
  b.upper_duals = r.upper.dual;
  return b;
}

}  // namespace

const char* to_string(Method m) {
  switch (m) {
    case Method::kPrunedLp: return "pruned-lp";
    case Method::kClosedForm: return "closed-form";
    case Method::kNaiveLp: return "naive-lp";
    case Method::kGreedy: return "greedy";
    case Method::kFiniteData: return "finite-data";
  }
  return "unknown";
}

LP pruned_lp(const PrunedProblem& problem, const ProbabilityTable& p, lp::Sense sense,
             long max_columns) {
  check_table(problem, p);
  check_columns(problem, max_columns);
  LP lp(sense);
  for (int c = 0; c < cell_count(p); ++c) lp.add_row(lp::Relation::kEqual, cell_value(p, c));
  std::vector<LP::Entry> entries;
  for (std::size_t k = 0; k < problem.size(); ++k) {
    entries.clear();
    for_cells(problem, k, [&](int c) { entries.emplace_back(c, 1.0); });
    const int coeff = sense == lp::Sense::kMinimize ? problem.cL(k) : problem.cU(k);
    lp.add_variable(coeff, entries);
  }
  return lp;
}

LP pruned_observation_lp(const PrunedProblem& problem, const ProbabilityTable& p,
                         lp::Sense sense, long max_columns) {
  check_table(problem, p);
  check_columns(problem, max_columns);
  LP lp(sense);
  const int cells = cell_count(p);
  for (int c = 0; c < cells; ++c) lp.add_row(lp::Relation::kEqual, 0.0);
  const int norm = lp.add_row(lp::Relation::kEqual, 1.0);
  std::vector<LP::Entry> entries;
  for (std::size_t k = 0; k < problem.size(); ++k) {
    entries.clear();
    for_cells(problem, k, [&](int c) { entries.emplace_back(c, 1.0); });
    if (problem.in_rw(k)) entries.emplace_back(norm, 1.0);
    const int coeff = sense == lp::Sense::kMinimize ? problem.dL(k) : problem.dU(k);
    lp.add_variable(coeff, entries);
  }
  entries.clear();
  for (int c = 0; c < cells; ++c) entries.emplace_back(c, -cell_value(p, c));
  lp.add_variable(0.0, entries, 0.0, LP::kInfinity, "alpha");
  return lp;
}

LP pruned_finite_lp(const PrunedProblem& problem, const ProbabilityTable& p_bar, double delta,
                    lp::Sense sense, long max_columns) {
  check_table(problem, p_bar);
  check_columns(problem, max_columns);
  if (!(delta >= 0) || !std::isfinite(delta)) {
    throw Error(ErrorCode::kInvalidTable, "delta must be a finite nonnegative number");
  }
  const bool obs = problem.has_observation;
  LP lp(sense);
  const int cells = cell_count(p_bar);
  for (int c = 0; c < cells; ++c) {
    lp.add_row(lp::Relation::kLessEqual, obs ? 0.0 : cell_value(p_bar, c) + delta);
    lp.add_row(lp::Relation::kGreaterEqual, obs ? 0.0 : cell_value(p_bar, c) - delta);
  }
  const int mass = lp.add_row(lp::Relation::kEqual, obs ? 0.0 : 1.0);
  const int norm = obs ? lp.add_row(lp::Relation::kEqual, 1.0) : -1;
  std::vector<LP::Entry> entries;
  for (std::size_t k = 0; k < problem.size(); ++k) {
    entries.clear();
    for_cells(problem, k, [&](int c) {
      entries.emplace_back(2 * c, 1.0);
      entries.emplace_back(2 * c + 1, 1.0);
    });
    entries.emplace_back(mass, 1.0);
    if (obs && problem.in_rw(k)) entries.emplace_back(norm, 1.0);
    int coeff;
    if (sense == lp::Sense::kMinimize) coeff = obs ? problem.dL(k) : problem.cL(k);
    else coeff = obs ? problem.dU(k) : problem.cU(k);
    lp.add_variable(coeff, entries);
  }
  if (obs) {
    entries.clear();
    for (int c = 0; c < cells; ++c) {
      entries.emplace_back(2 * c, -(cell_value(p_bar, c) + delta));
      entries.emplace_back(2 * c + 1, -(cell_value(p_bar, c) - delta));
    }
    entries.emplace_back(mass, -1.0);
    lp.add_variable(0.0, entries, 0.0, LP::kInfinity, "alpha");
  }
  return lp;
}

Bounds bounds_pruned(const PrunedProblem& problem, const ProbabilityTable& p,
                     const lp::SolverOptions& options) {
  const auto lo = pruned_lp(problem, p, lp::Sense::kMinimize, options.max_columns);
  const auto hi = pruned_lp(problem, p, lp::Sense::kMaximize, options.max_columns);
  return finish(solve_pair(lo, hi, options), Method::kPrunedLp, problem.size(),
                ErrorCode::kInfeasible, "probability table is not compatible with the graph");
}

Bounds bounds_pruned(const CausalGraph& g, const Query& q, const ProbabilityTable& p,
                     const lp::SolverOptions& options) {
  return bounds_pruned(algorithm1(g, q, p), p, options);
}

bool closed_form_applies(const CausalGraph& g, const Query& q) {
  return (g.a_set() & ~critical_for_query(g, reduce_query(g, q))) == 0;
}

Bounds bounds_closed_form(const CausalGraph& g, const Query& q_in, const ProbabilityTable& p) {
  require_valid(g);
  validate_query(g, q_in);
  if (p.a_count() != g.a_count() || p.b_count() != g.b_count()) {
    throw Error(ErrorCode::kDimensionMismatch, "probability table does not match the graph");
  }
  const auto start = Clock::now();
  const Query q = reduce_query(g, q_in);
  const Mask missing = g.a_set() & ~critical_for_query(g, q);
  if (missing) {
    std::string names;
    for (int i : indices_of(missing)) names += (names.empty() ? "" : ",") + g.name(i);
    throw Error(ErrorCode::kPreconditionFailed,
                "closed form needs every context variable to be critical; not critical: {" +
                    names + "}");
  }
  const int a = g.a_count();
  const std::uint32_t qa = static_cast<std::uint32_t>(q.context.values() & low_bits(a));
  double lower = 0;
  double wrong = 0;
  for (std::uint32_t vb = 0; vb < p.b_states(); ++vb) {
    const Mask full = qa | (Mask{vb} << a);
    if (!q.intervention.matched_by(full)) continue;
    if (q.outcome.matched_by(full)) lower += p(qa, vb);
    else wrong += p(qa, vb);
  }
  Bounds b;
  b.lower = clamp_unit(lower);
  b.upper = clamp_unit(1.0 - wrong);
  b.method = Method::kClosedForm;
  b.solve_ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
  return b;
}

Bounds bounds_with_observation(const PrunedProblem& problem, const ProbabilityTable& p,
                               const lp::SolverOptions& options) {
  if (!problem.has_observation) return bounds_pruned(problem, p, options);
  if (!has_witness(problem)) {
    throw Error(ErrorCode::kObservationInvalidatesQuery,
                "no hyperarc is consistent with both the query and the observation");
  }
  const auto lo = pruned_observation_lp(problem, p, lp::Sense::kMinimize, options.max_columns);
  const auto hi = pruned_observation_lp(problem, p, lp::Sense::kMaximize, options.max_columns);
  const auto r = solve_pair(lo, hi, options);
  if (r.lower.status == lp::Status::kInfeasible || r.upper.status == lp::Status::kInfeasible) {
    // Tell an incompatible table apart from an observation of probability zero.
    const auto plain = lp::solve(pruned_lp(problem, p, lp::Sense::kMinimize, options.max_columns),
                                 options);
    if (plain.status == lp::Status::kInfeasible) {
      throw Error(ErrorCode::kInfeasible, "probability table is not compatible with the graph");
    }
    throw Error(ErrorCode::kObservationImpossible,
                "the observation has probability zero under every compatible model");
  }
  return finish(r, Method::kPrunedLp, problem.size(), ErrorCode::kObservationImpossible,
                "the observation has probability zero");
}

Bounds bounds_with_observation(const CausalGraph& g, const Query& q, const Observation& w,
                               const ProbabilityTable& p, const lp::SolverOptions& options) {
  return bounds_with_observation(algorithm2(g, q, w, p), p, options);
}

Bounds bounds_finite_data(const PrunedProblem& problem, const ProbabilityTable& p_bar,
                          double delta, const lp::SolverOptions& options) {
  if (problem.has_observation) {
    return bounds_finite_data_with_observation(problem, p_bar, delta, options);
  }
  const auto lo = pruned_finite_lp(problem, p_bar, delta, lp::Sense::kMinimize, options.max_columns);
  const auto hi = pruned_finite_lp(problem, p_bar, delta, lp::Sense::kMaximize, options.max_columns);
  return finish(solve_pair(lo, hi, options), Method::kFiniteData, problem.size(),
                ErrorCode::kInfeasible, "interval system is empty for this estimate and delta");
}

Bounds bounds_finite_data_with_observation(const PrunedProblem& problem,
                                           const ProbabilityTable& p_bar, double delta,
                                           const lp::SolverOptions& options) {
  if (!problem.has_observation) {
    throw Error(ErrorCode::kInvalidObservation, "problem was built without an observation");
  }
  if (!has_witness(problem)) {
    throw Error(ErrorCode::kObservationInvalidatesQuery,
                "no hyperarc is consistent with both the query and the observation");
  }
  const auto lo = pruned_finite_lp(problem, p_bar, delta, lp::Sense::kMinimize, options.max_columns);
  const auto hi = pruned_finite_lp(problem, p_bar, delta, lp::Sense::kMaximize, options.max_columns);
  return finish(solve_pair(lo, hi, options), Method::kFiniteData, problem.size(),
                ErrorCode::kObservationImpossible,
                "interval system is empty or the observation has probability zero");
}

Bounds bounds_naive(const CausalGraph& g, const Query& q, const Observation* w,
                    const ProbabilityTable& p, double delta, std::uint64_t r_cap,
                    const lp::SolverOptions& options) {
  require_valid(g);
  validate_query(g, q);
  if (w) validate_observation(g, q, *w);
  const ResponseSpace s(g);
  require_enumerable(s, r_cap);
  const Query rq = reduce_query(g, q);
  auto build = [&](lp::Sense sense) {
    if (delta > 0) return build_naive_finite_lp(s, rq, w, p, delta, sense, r_cap);
    if (w) return build_naive_fractional_lp(s, rq, *w, p, sense, r_cap);
    return build_naive_lp(s, rq, p, sense, r_cap);
  };
  const auto lo = build(lp::Sense::kMinimize);
  const auto hi = build(lp::Sense::kMaximize);
  Bounds b = finish(solve_pair(lo, hi, options), Method::kNaiveLp, 0,
                    w ? ErrorCode::kObservationImpossible : ErrorCode::kInfeasible,
                    "no response-function distribution reproduces the table");
  b.h_size = 0;
  return b;
}

std::vector<SweepRow> delta_sweep(const PrunedProblem& problem, const ProbabilityTable& p_bar,
                                  const std::vector<double>& grid,
                                  const lp::SolverOptions& options) {
  if (!std::is_sorted(grid.begin(), grid.end())) {
    throw Error(ErrorCode::kInvalidTable, "delta grid must be sorted");
  }
  std::vector<SweepRow> rows;
  for (double delta : grid) {
    SweepRow row;
    row.delta = delta;
    try {
      const Bounds b = bounds_finite_data(problem, p_bar, delta, options);
      row.lower = b.lower;
      row.upper = b.upper;
      row.status = "optimal";
    } catch (const Error& e) {
      row.lower = std::nan("");
      row.upper = std::nan("");
      row.status = std::string(to_string(e.code()));
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace cbounds
