#pragma once

#include <optional>
#include <string>

#include "cbounds/bounds.hpp"
#include "cbounds/greedy.hpp"
#include "cbounds/io.hpp"

namespace cbounds {

enum class MethodChoice { kAuto, kPruned, kClosedForm, kNaive, kGreedy };

/// "auto", "pruned", "closed-form", "naive", "greedy"; throws kParse otherwise.
MethodChoice parse_method(const std::string& s);

struct BoundRequest {
  MethodChoice method = MethodChoice::kAuto;
  double delta = 0;
  std::uint64_t r_cap = 1'000'000;
  long col_cap = 1'000'000;
  /// Reused instead of rebuilding when set; must match the problem.
  const PrunedProblem* prebuilt = nullptr;
};

/// Resolves kAuto: closed form when there is no observation or delta and
/// every context variable is critical, the pruned LP when |H| fits the
/// column cap, otherwise the greedy (no observation) or a kSizeCap error.
Method resolve_method(const ProblemSpec& spec, const BoundRequest& request, std::size_t h_size);

Bounds compute_bounds(const ProblemSpec& spec, const ProbabilityTable& p,
                      const BoundRequest& request = {});

/// Greedy pair packaged as bounds.
Bounds greedy_bounds(const PrunedProblem& problem, const ProbabilityTable& p,
                     const GreedyOptions& options = {}, GreedyResult* lower = nullptr,
                     GreedyResult* upper = nullptr);

}  // namespace cbounds
