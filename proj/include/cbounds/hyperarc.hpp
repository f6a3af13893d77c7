#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <utility>
#include <vector>

#include "cbounds/graph.hpp"
#include "cbounds/probability_table.hpp"

namespace cbounds {

/// Exhaustive enumeration is refused beyond |B| * 2^|A| table bits.
inline constexpr int kMaxHyperarcBits = 40;

/// A function V_A -> V_B, stored as one integer of |B| * 2^|A| bits. The entry
/// for v_A = 0 occupies the most significant |B| bits, so integer order is the
/// lexicographic order of the table read from v_A = 0 upward.
class Hyperarc {
 public:
  Hyperarc() = default;
  Hyperarc(int a_count, int b_count, std::uint64_t code)
      : code_(code), a_(a_count), b_(b_count) {}

  /// Builds the code from a table of 2^|A| entries, each < 2^|B|.
  static Hyperarc from_table(int a_count, int b_count, const std::vector<std::uint32_t>& table);

  std::uint64_t code() const { return code_; }
  int a_count() const { return a_; }
  int b_count() const { return b_; }
  std::uint32_t rows() const { return std::uint32_t{1} << a_; }

  /// h(v_A) as a B-local bit pattern.
  std::uint32_t operator()(std::uint32_t v_a) const { return entry(code_, a_, b_, v_a); }
  /// Full node assignment of row v_A: v_A in the low |A| bits, h(v_A) above.
  Mask row(std::uint32_t v_a) const { return v_a | (Mask{(*this)(v_a)} << a_); }

  std::vector<std::uint32_t> table() const;

  static std::uint32_t entry(std::uint64_t code, int a_count, int b_count, std::uint32_t v_a) {
    const int shift = b_count * static_cast<int>((std::uint32_t{1} << a_count) - 1 - v_a);
    return static_cast<std::uint32_t>((code >> shift) & low_bits(b_count));
  }

  bool operator==(const Hyperarc&) const = default;

 private:
  std::uint64_t code_ = 0;
  int a_ = 0;
  int b_ = 0;
};

/// Per-hyperarc coefficient bits.
enum HyperarcFlag : std::uint8_t {
  kFlagCL = 1,
  kFlagCU = 2,
  kFlagInRW = 4,
  kFlagDL = 8,
  kFlagDU = 16,
};

/// Valid hyperarcs for a query (and optional observation) with their
/// objective coefficients, sorted by code.
struct PrunedProblem {
  CausalGraph graph;
  Query query;
  Observation observation;
  bool has_observation = false;
  std::vector<std::uint64_t> codes;
  std::vector<std::uint8_t> flags;

  std::size_t size() const { return codes.size(); }
  Hyperarc hyperarc(std::size_t k) const {
    return {graph.a_count(), graph.b_count(), codes[k]};
  }
  int cL(std::size_t k) const { return flags[k] & kFlagCL ? 1 : 0; }
  int cU(std::size_t k) const { return flags[k] & kFlagCU ? 1 : 0; }
  int in_rw(std::size_t k) const { return flags[k] & kFlagInRW ? 1 : 0; }
  int dL(std::size_t k) const { return flags[k] & kFlagDL ? 1 : 0; }
  int dU(std::size_t k) const { return flags[k] & kFlagDU ? 1 : 0; }
};

/// |B| * 2^|A|; throws kCapacityExceeded above kMaxHyperarcBits.
int hyperarc_bits(const CausalGraph& g);

/// Functional consistency: rows that agree on pa(j) agree on j, for all j in B.
bool is_valid(const Hyperarc& h, const CausalGraph& g);

/// Visits every valid hyperarc once, in ascending code order.
void enumerate_valid(const CausalGraph& g, const std::function<void(std::uint64_t)>& visit);
std::vector<std::uint64_t> enumerate_valid(const CausalGraph& g);
std::uint64_t count_valid(const CausalGraph& g);

int coeff_cL(const Hyperarc& h, const CausalGraph& g, const Query& q, Mask c_of_q);
int coeff_cU(const Hyperarc& h, const CausalGraph& g, const Query& q, Mask c_of_q);

/// Exact (c^L, c^U) for h without touching R: evaluates the query under
/// do(q_I) at q_A, forcing each node whose parent pattern appears in some row
/// of h and branching on the others. Agrees with coeff_cL / coeff_cU whenever
/// every outcome value is free once no row matches q_I, which covers the
/// single-outcome examples; differs on e.g. outcomes not downstream of I.
std::pair<int, int> coefficients_exact(const Hyperarc& h, const CausalGraph& g, const Query& q,
                                       Mask c_of_q);

enum class CoefficientRule {
  /// Branching evaluation (coefficients_exact).
  kExact,
  /// The row-witness rule of coeff_cL / coeff_cU.
  kWitness,
};

struct ObservationMembership {
  int in_rw = 0;
  int disjoint_rw = 0;
};

/// Throws kInternal if the in/disjoint dichotomy fails.
ObservationMembership obs_membership(const Hyperarc& h, const CausalGraph& g, const Query& q,
                                     const Observation& w, Mask c_of_w);

int coeff_dL(int c_l, const ObservationMembership& m);
int coeff_dU(int c_u, const ObservationMembership& m);

/// Direct construction of the pruned problem; the table only fixes dimensions.
PrunedProblem algorithm1(const CausalGraph& g, const Query& q, const ProbabilityTable& p,
                         CoefficientRule rule = CoefficientRule::kExact);
PrunedProblem algorithm2(const CausalGraph& g, const Query& q, const Observation& w,
                         const ProbabilityTable& p, CoefficientRule rule = CoefficientRule::kExact);
/// Table-free variant used by both of the above.
PrunedProblem build_pruned(const CausalGraph& g, const Query& q, const Observation* w,
                           CoefficientRule rule = CoefficientRule::kExact);

/// Hash of graph, query and observation, stored in binary dumps.
std::uint64_t problem_hash(const CausalGraph& g, const Query& q, const Observation* w);

void write_pruned(std::ostream& os, const PrunedProblem& problem);
/// Reads a dump produced for the same graph/query/observation; throws kParse
/// on a malformed stream and kDimensionMismatch on a hash mismatch.
PrunedProblem read_pruned(std::istream& is, const CausalGraph& g, const Query& q,
                          const Observation* w);

}  // namespace cbounds
