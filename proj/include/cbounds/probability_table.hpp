#pragma once

#include <Eigen/Core>
#include <cstdint>

#include "cbounds/bits.hpp"

namespace cbounds {

/// Conditional distribution p_{v_B.v_A} = P(V_B = v_B | V_A = v_A).
///
/// Stored densely as a 2^|A| x 2^|B| matrix: row v_A, column v_B, where v_A
/// and v_B are the A-local and B-local bit patterns of a full assignment
/// (cell = v_A | v_B << |A|). Every row is a distribution.
class ProbabilityTable {
 public:
  /// Tolerance on a row sum before it is rejected rather than renormalized.
  static constexpr double kRowSumTolerance = 1e-9;

  ProbabilityTable() = default;
  ProbabilityTable(int a_count, int b_count);
  /// Validates `values`: entries in [0, 1] and row sums within
  /// kRowSumTolerance of one (such rows are renormalized). Throws kInvalidTable.
  ProbabilityTable(int a_count, int b_count, Eigen::MatrixXd values);

  int a_count() const { return a_count_; }
  int b_count() const { return b_count_; }
  std::uint32_t a_states() const { return std::uint32_t{1} << a_count_; }
  std::uint32_t b_states() const { return std::uint32_t{1} << b_count_; }

  double operator()(std::uint32_t v_a, std::uint32_t v_b) const { return values_(v_a, v_b); }
  double cell(Mask full) const {
    return values_(static_cast<Eigen::Index>(full & low_bits(a_count_)),
                   static_cast<Eigen::Index>(full >> a_count_));
  }

  const Eigen::MatrixXd& matrix() const { return values_; }

 private:
  int a_count_ = 0;
  int b_count_ = 0;
  Eigen::MatrixXd values_;
};

}  // namespace cbounds
