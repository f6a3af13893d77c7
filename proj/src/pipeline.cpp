#include "cbounds/pipeline.hpp"

#include <chrono>

namespace cbounds {

MethodChoice parse_method(const std::string& s) {
  if (s == "auto") return MethodChoice::kAuto;
  if (s == "pruned" || s == "pruned-lp") return MethodChoice::kPruned;
  if (s == "closed-form") return MethodChoice::kClosedForm;
  if (s == "naive" || s == "naive-lp") return MethodChoice::kNaive;
  if (s == "greedy") return MethodChoice::kGreedy;
  throw Error(ErrorCode::kParse, "unknown method '" + s + "'");
}

Method resolve_method(const ProblemSpec& spec, const BoundRequest& request, std::size_t h_size) {
  const bool observed = spec.observation.has_value();
  switch (request.method) {
    case MethodChoice::kPruned: return request.delta > 0 ? Method::kFiniteData : Method::kPrunedLp;
    case MethodChoice::kClosedForm: return Method::kClosedForm;
    case MethodChoice::kNaive: return Method::kNaiveLp;
    case MethodChoice::kGreedy: return Method::kGreedy;
    case MethodChoice::kAuto: break;
  }
  if (request.delta > 0) return Method::kFiniteData;
  if (!observed && closed_form_applies(spec.graph, spec.query)) return Method::kClosedForm;
  if (static_cast<long>(h_size) <= request.col_cap) return Method::kPrunedLp;
  if (!observed) return Method::kGreedy;
  throw Error(ErrorCode::kSizeCap, "|H| = " + std::to_string(h_size) +
                                       " exceeds the column cap and the greedy does not "
                                       "handle observations");
}

Bounds greedy_bounds(const PrunedProblem& problem, const ProbabilityTable& p,
                     const GreedyOptions& options, GreedyResult* lower, GreedyResult* upper) {
  const auto start = std::chrono::steady_clock::now();
  if (problem.has_observation) {
    throw Error(ErrorCode::kPreconditionFailed, "the greedy does not handle observations");
  }
  const CellIndex index(problem);
  GreedyResult lo = greedy_lower(problem, index, p, options);
  GreedyResult hi = greedy_upper(problem, index, p, options);
  Bounds b;
  b.lower = std::max(0.0, lo.bound);
  b.upper = std::min(1.0, hi.bound);
  b.method = Method::kGreedy;
  b.h_size = problem.size();
  b.solve_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  if (lower) *lower = std::move(lo);
  if (upper) *upper = std::move(hi);
  return b;
}

Bounds compute_bounds(const ProblemSpec& spec, const ProbabilityTable& p,
                      const BoundRequest& request) {
  require_valid(spec.graph);
  validate_query(spec.graph, spec.query);
  if (spec.observation) validate_observation(spec.graph, spec.query, *spec.observation);
  if (request.delta < 0) throw Error(ErrorCode::kInvalidTable, "delta must be nonnegative");

  lp::SolverOptions options;
  options.max_columns = request.col_cap;

  if (request.method == MethodChoice::kNaive) {
    return bounds_naive(spec.graph, spec.query, spec.observation_ptr(), p, request.delta,
                        request.r_cap, options);
  }
  if (request.method == MethodChoice::kClosedForm ||
      (request.method == MethodChoice::kAuto && request.delta == 0 && !spec.observation &&
       closed_form_applies(spec.graph, spec.query))) {
    if (spec.observation || request.delta > 0) {
      throw Error(ErrorCode::kPreconditionFailed,
                  "the closed form covers exact tables without observations only");
    }
    return bounds_closed_form(spec.graph, spec.query, p);
  }

  std::optional<PrunedProblem> built;
  const PrunedProblem* problem = request.prebuilt;
  if (!problem) {
    built = build_pruned(spec.graph, spec.query, spec.observation_ptr());
    problem = &*built;
  }
  switch (resolve_method(spec, request, problem->size())) {
    case Method::kGreedy:
      if (request.delta > 0) {
        throw Error(ErrorCode::kPreconditionFailed, "the greedy covers exact tables only");
      }
      return greedy_bounds(*problem, p);
    case Method::kFiniteData: return bounds_finite_data(*problem, p, request.delta, options);
    default: return bounds_with_observation(*problem, p, options);
  }
}

}  // namespace cbounds
