#include "cbounds/probability_table.hpp"

#include <cmath>
#include <string>

#include "cbounds/error.hpp"

namespace cbounds {

ProbabilityTable::ProbabilityTable(int a_count, int b_count)
    : a_count_(a_count),
      b_count_(b_count),
      values_(Eigen::MatrixXd::Zero(Eigen::Index{1} << a_count, Eigen::Index{1} << b_count)) {}

ProbabilityTable::ProbabilityTable(int a_count, int b_count, Eigen::MatrixXd values)
    : a_count_(a_count), b_count_(b_count), values_(std::move(values)) {
  if (values_.rows() != (Eigen::Index{1} << a_count) ||
      values_.cols() != (Eigen::Index{1} << b_count)) {
    throw Error(ErrorCode::kDimensionMismatch,
                "probability table must be 2^|A| x 2^|B| = " +
                    std::to_string(1 << a_count) + " x " + std::to_string(1 << b_count));
  }
  if (!values_.allFinite()) throw Error(ErrorCode::kInvalidTable, "non-finite probability");
  constexpr double kEntrySlack = 1e-12;
  if ((values_.array() < -kEntrySlack).any() || (values_.array() > 1.0 + kEntrySlack).any()) {
    throw Error(ErrorCode::kInvalidTable, "probabilities must lie in [0, 1]");
  }
  values_ = values_.cwiseMax(0.0).cwiseMin(1.0);
  for (Eigen::Index r = 0; r < values_.rows(); ++r) {
    const double sum = values_.row(r).sum();
    if (std::abs(sum - 1.0) > kRowSumTolerance) {
      throw Error(ErrorCode::kInvalidTable,
                  "distribution for v_A=" + std::to_string(r) + " sums to " + std::to_string(sum));
    }
    values_.row(r) /= sum;
  }
}

}  // namespace cbounds
