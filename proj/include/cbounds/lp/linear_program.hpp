#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>
#include <cmath>
#include <limits>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "cbounds/error.hpp"

namespace cbounds::lp {

enum class Sense { kMinimize, kMaximize };
enum class Relation { kLessEqual, kEqual, kGreaterEqual };
enum class Status { kOptimal, kInfeasible, kUnbounded, kSizeCap };

inline const char* to_string(Status s) {
  switch (s) {
    case Status::kOptimal: return "optimal";
    case Status::kInfeasible: return "infeasible";
    case Status::kUnbounded: return "unbounded";
    case Status::kSizeCap: return "size_cap";
  }
  return "unknown";
}

/// Coefficients larger than this are rejected as unsanitized input.
inline constexpr double kMaxCoefficient = 1e12;

/// LP model: optimize cost^T x subject to row relations and variable bounds.
/// Built row-first (add_row) and then column-by-column (add_variable with its
/// nonzeros), which matches how the bound LPs are assembled.
template <typename Scalar>
class LinearProgram {
 public:
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using SparseMatrix = Eigen::SparseMatrix<Scalar, Eigen::ColMajor>;
  using Entry = std::pair<int, Scalar>;

  static constexpr Scalar kInfinity = std::numeric_limits<Scalar>::infinity();

  explicit LinearProgram(Sense sense = Sense::kMinimize) : sense_(sense) {}

  Sense sense() const { return sense_; }
  void set_sense(Sense s) { sense_ = s; }

  int add_row(Relation rel, Scalar rhs) {
    check_value(rhs, "right-hand side");
    relations_.push_back(rel);
    rhs_.push_back(rhs);
    dirty_ = true;
    return rows() - 1;
  }

  int add_variable(Scalar cost, const std::vector<Entry>& entries, Scalar lower = 0,
                   Scalar upper = kInfinity, std::string name = {}) {
    check_value(cost, "cost");
    if (std::isnan(static_cast<double>(lower)) || std::isnan(static_cast<double>(upper)) ||
        lower > upper || lower == kInfinity || upper == -kInfinity) {
      throw Error(ErrorCode::kInvalidTable, "invalid variable bounds");
    }
    const int col = cols();
    for (const auto& [row, value] : entries) {
      if (row < 0 || row >= rows()) {
        throw Error(ErrorCode::kDimensionMismatch, "row index out of range");
      }
      check_value(value, "coefficient");
      if (value != Scalar(0)) triplets_.emplace_back(row, col, value);
    }
    cost_.push_back(cost);
    lower_.push_back(lower);
    upper_.push_back(upper);
    names_.push_back(std::move(name));
    dirty_ = true;
    return col;
  }

  int rows() const { return static_cast<int>(rhs_.size()); }
  int cols() const { return static_cast<int>(cost_.size()); }

  Relation relation(int row) const { return relations_[row]; }
  Scalar rhs(int row) const { return rhs_[row]; }
  Scalar cost(int col) const { return cost_[col]; }
  Scalar lower(int col) const { return lower_[col]; }
  Scalar upper(int col) const { return upper_[col]; }
  const std::string& name(int col) const { return names_[col]; }

  Vector rhs_vector() const {
    return Eigen::Map<const Vector>(rhs_.data(), static_cast<Eigen::Index>(rhs_.size()));
  }
  Vector cost_vector() const {
    return Eigen::Map<const Vector>(cost_.data(), static_cast<Eigen::Index>(cost_.size()));
  }

  /// Constraint matrix, compressed column storage.
  const SparseMatrix& matrix() const {
    if (dirty_) {
      matrix_.resize(rows(), cols());
      matrix_.setFromTriplets(triplets_.begin(), triplets_.end());
      matrix_.makeCompressed();
      dirty_ = false;
    }
    return matrix_;
  }

 private:
  static void check_value(Scalar v, const char* what) {
    const double d = static_cast<double>(v);
    if (!std::isfinite(d) || std::abs(d) > kMaxCoefficient) {
      throw Error(ErrorCode::kInvalidTable, std::string("unsanitized LP ") + what);
    }
  }

  Sense sense_;
  std::vector<Relation> relations_;
  std::vector<Scalar> rhs_;
  std::vector<Scalar> cost_;
  std::vector<Scalar> lower_;
  std::vector<Scalar> upper_;
  std::vector<std::string> names_;
  std::vector<Eigen::Triplet<Scalar>> triplets_;
  mutable SparseMatrix matrix_;
  mutable bool dirty_ = true;
};

template <typename Scalar>
struct Solution {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  Status status = Status::kInfeasible;
  Scalar objective = 0;
  Vector primal;
  /// One multiplier per row, signed so that rhs . dual (plus bound terms)
  /// equals the optimum in the problem's own sense.
  Vector dual;
  long iterations = 0;

  bool optimal() const { return status == Status::kOptimal; }
};

struct SolverOptions {
  long max_columns = 1'000'000;
  double feasibility_tolerance = 1e-9;
  double optimality_tolerance = 1e-9;
  double pivot_tolerance = 1e-9;
  int refactor_interval = 64;
  /// Consecutive degenerate pivots before switching to lowest-index pricing.
  int degenerate_limit = 2000;
  long max_iterations = 50'000'000;
};

struct DualReport {
  double primal_residual = 0;
  double dual_residual = 0;
  double duality_gap = 0;
};

/// Residuals of a claimed optimal pair: primal infeasibility, reduced-cost and
/// dual-sign violations, and |primal objective - dual objective|.
template <typename Scalar>
DualReport check_duals(const LinearProgram<Scalar>& lp, const Solution<Scalar>& sol) {
  using Vector = typename LinearProgram<Scalar>::Vector;
  DualReport report;
  const auto& a = lp.matrix();
  const Vector ax = a * sol.primal;
  for (int i = 0; i < lp.rows(); ++i) {
    const double diff = static_cast<double>(ax[i] - lp.rhs(i));
    double viol = 0;
    switch (lp.relation(i)) {
      case Relation::kEqual: viol = std::abs(diff); break;
      case Relation::kLessEqual: viol = std::max(0.0, diff); break;
      case Relation::kGreaterEqual: viol = std::max(0.0, -diff); break;
    }
    report.primal_residual = std::max(report.primal_residual, viol);
  }
  for (int j = 0; j < lp.cols(); ++j) {
    const double x = static_cast<double>(sol.primal[j]);
    report.primal_residual = std::max(
        {report.primal_residual, static_cast<double>(lp.lower(j)) - x,
         x - static_cast<double>(lp.upper(j))});
  }

  // Work in minimization form: sign = +1 (min) or -1 (max).
  const double sign = lp.sense() == Sense::kMinimize ? 1.0 : -1.0;
  const Vector y = sol.dual * Scalar(sign);
  const Vector reduced = lp.cost_vector() * Scalar(sign) - a.transpose() * y;
  double dual_obj = 0;
  for (int i = 0; i < lp.rows(); ++i) {
    const double yi = static_cast<double>(y[i]);
    dual_obj += static_cast<double>(lp.rhs(i)) * yi;
    if (lp.relation(i) == Relation::kLessEqual) {
      report.dual_residual = std::max(report.dual_residual, yi);
    } else if (lp.relation(i) == Relation::kGreaterEqual) {
      report.dual_residual = std::max(report.dual_residual, -yi);
    }
  }
  for (int j = 0; j < lp.cols(); ++j) {
    const double d = static_cast<double>(reduced[j]);
    const double lo = static_cast<double>(lp.lower(j));
    const double hi = static_cast<double>(lp.upper(j));
    if (d > 0) {
      if (std::isfinite(lo)) dual_obj += lo * d;
      else report.dual_residual = std::max(report.dual_residual, d);
    } else if (d < 0) {
      if (std::isfinite(hi)) dual_obj += hi * d;
      else report.dual_residual = std::max(report.dual_residual, -d);
    }
  }
  const double primal_obj = sign * static_cast<double>(lp.cost_vector().dot(sol.primal));
  report.duality_gap = std::abs(primal_obj - dual_obj);
  return report;
}

/// Fixed-column MPS text export. Column order is the model's column order.
template <typename Scalar>
void write_mps(std::ostream& os, const LinearProgram<Scalar>& lp, const std::string& name) {
  auto col_name = [&](int j) {
    return lp.name(j).empty() ? "X" + std::to_string(j) : lp.name(j);
  };
  os << "NAME          " << name << "\n";
  if (lp.sense() == Sense::kMaximize) os << "OBJSENSE\n    MAX\n";
  os << "ROWS\n N  COST\n";
  for (int i = 0; i < lp.rows(); ++i) {
    const char* tag = lp.relation(i) == Relation::kEqual       ? "E"
                      : lp.relation(i) == Relation::kLessEqual ? "L"
                                                               : "G";
    os << " " << tag << "  R" << i << "\n";
  }
  os << "COLUMNS\n";
  os.precision(17);
  const auto& a = lp.matrix();
  for (int j = 0; j < lp.cols(); ++j) {
    if (lp.cost(j) != Scalar(0)) {
      os << "    " << col_name(j) << "  COST  " << static_cast<double>(lp.cost(j)) << "\n";
    }
    for (typename LinearProgram<Scalar>::SparseMatrix::InnerIterator it(a, j); it; ++it) {
      os << "    " << col_name(j) << "  R" << it.row() << "  " << static_cast<double>(it.value())
         << "\n";
    }
  }
  os << "RHS\n";
  for (int i = 0; i < lp.rows(); ++i) {
    if (lp.rhs(i) != Scalar(0)) {
      os << "    RHS  R" << i << "  " << static_cast<double>(lp.rhs(i)) << "\n";
    }
  }
  bool header = false;
  for (int j = 0; j < lp.cols(); ++j) {
    const double lo = static_cast<double>(lp.lower(j));
    const double hi = static_cast<double>(lp.upper(j));
    if (lo == 0 && !std::isfinite(hi)) continue;
    if (!header) {
      os << "BOUNDS\n";
      header = true;
    }
    if (lo == hi) {
      os << " FX BND  " << col_name(j) << "  " << lo << "\n";
      continue;
    }
    if (!std::isfinite(lo)) os << " MI BND  " << col_name(j) << "\n";
    else if (lo != 0) os << " LO BND  " << col_name(j) << "  " << lo << "\n";
    if (std::isfinite(hi)) os << " UP BND  " << col_name(j) << "  " << hi << "\n";
  }
  os << "ENDATA\n";
}

}  // namespace cbounds::lp
