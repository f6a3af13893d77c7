#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <vector>

#include "cbounds/lp/linear_program.hpp"

namespace cbounds::lp {

namespace detail {

/// Bounded-variable revised primal simplex with an explicit dense basis
/// inverse. Rows stay as given: inequality rows get a slack column, and every
/// row gets an artificial column that seeds the phase-one basis. After phase
/// one the artificials are fixed at zero; any that remain basic leave on the
/// next pivot through their row.
///
/// Pricing is partial Dantzig; after `degenerate_limit` consecutive zero-step
/// pivots it switches to lowest-index entering and leaving choices (Bland's
/// rule) until the objective moves again, so the pivot sequence for a given
/// LP is fully deterministic.
template <typename Scalar>
class RevisedSimplex {
 public:
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using SparseMatrix = typename LinearProgram<Scalar>::SparseMatrix;

  RevisedSimplex(const LinearProgram<Scalar>& lp, const SolverOptions& options)
      : lp_(lp), a_(lp.matrix()), opt_(options), m_(lp.rows()), n_(lp.cols()) {
    for (int i = 0; i < m_; ++i) {
      if (lp.relation(i) != Relation::kEqual) {
        slack_row_.push_back(i);
        slack_sign_.push_back(lp.relation(i) == Relation::kLessEqual ? Scalar(1) : Scalar(-1));
      }
    }
    n_slack_ = static_cast<int>(slack_row_.size());
    total_ = n_ + n_slack_ + m_;
    lo_.resize(total_);
    hi_.resize(total_);
    x_.setZero(total_);
    for (int j = 0; j < n_; ++j) {
      lo_[j] = lp.lower(j);
      hi_[j] = lp.upper(j);
    }
    for (int k = n_; k < total_; ++k) {
      lo_[k] = 0;
      hi_[k] = LinearProgram<Scalar>::kInfinity;
    }
    b_ = lp.rhs_vector();
  }

  Solution<Scalar> run() {
    Solution<Scalar> sol;
    if (n_ > opt_.max_columns) {
      sol.status = Status::kSizeCap;
      return sol;
    }
    initialize_basis();

    // Phase one: minimize the sum of artificials.
    cost_.setZero(total_);
    for (int i = 0; i < m_; ++i) cost_[artificial(i)] = 1;
    if (iterate() == Status::kUnbounded) throw Error(ErrorCode::kInternal, "phase one unbounded");
    refactor();
    Scalar infeasibility = 0;
    for (int i = 0; i < m_; ++i) infeasibility += x_[artificial(i)];
    const Scalar scale = Scalar(1) + (m_ > 0 ? b_.cwiseAbs().maxCoeff() : Scalar(0));
    if (infeasibility > Scalar(opt_.feasibility_tolerance) * scale * Scalar(std::max(1, m_))) {
      sol.status = Status::kInfeasible;
      sol.iterations = iterations_;
      return sol;
    }
    for (int i = 0; i < m_; ++i) hi_[artificial(i)] = 0;

    // Phase two on the original objective, in minimization form.
    const Scalar sign = lp_.sense() == Sense::kMinimize ? Scalar(1) : Scalar(-1);
    cost_.setZero(total_);
    for (int j = 0; j < n_; ++j) cost_[j] = sign * lp_.cost(j);
    degenerate_run_ = 0;
    const Status st = iterate();
    sol.iterations = iterations_;
    if (st == Status::kUnbounded) {
      sol.status = Status::kUnbounded;
      return sol;
    }
    refactor();

    sol.status = Status::kOptimal;
    sol.primal.resize(n_);
    for (int j = 0; j < n_; ++j) sol.primal[j] = std::clamp(x_[j], lo_[j], hi_[j]);
    sol.objective = lp_.cost_vector().dot(sol.primal);
    if (!std::isfinite(static_cast<double>(sol.objective))) {
      throw Error(ErrorCode::kInternal, "simplex lost numerical accuracy");
    }
    sol.dual = sign * duals();
    return sol;
  }

 private:
  int artificial(int row) const { return n_ + n_slack_ + row; }
  bool is_fixed(int j) const { return hi_[j] - lo_[j] <= Scalar(0); }

  template <typename F>
  void for_column(int j, F&& f) const {
    if (j < n_) {
      for (typename SparseMatrix::InnerIterator it(a_, j); it; ++it) f(static_cast<int>(it.row()), it.value());
    } else if (j < n_ + n_slack_) {
      f(slack_row_[j - n_], slack_sign_[j - n_]);
    } else {
      f(j - n_ - n_slack_, art_sign_[j - n_ - n_slack_]);
    }
  }

  void initialize_basis() {
    for (int j = 0; j < n_; ++j) {
      if (std::isfinite(static_cast<double>(lo_[j]))) x_[j] = lo_[j];
      else if (std::isfinite(static_cast<double>(hi_[j]))) x_[j] = hi_[j];
      else x_[j] = 0;
    }
    Vector residual = b_;
    for (int j = 0; j < n_; ++j) {
      if (x_[j] != Scalar(0)) for_column(j, [&](int r, Scalar v) { residual[r] -= v * x_[j]; });
    }
    art_sign_.resize(m_);
    basis_.resize(m_);
    position_.assign(total_, -1);
    binv_.setZero(m_, m_);
    for (int i = 0; i < m_; ++i) {
      art_sign_[i] = residual[i] >= Scalar(0) ? Scalar(1) : Scalar(-1);
      x_[artificial(i)] = std::abs(residual[i]);
      basis_[i] = artificial(i);
      position_[artificial(i)] = i;
      binv_(i, i) = art_sign_[i];
    }
    since_refactor_ = 0;
  }

  void refactor() {
    if (m_ == 0) return;
    Matrix basis_matrix = Matrix::Zero(m_, m_);
    for (int i = 0; i < m_; ++i) {
      for_column(basis_[i], [&](int r, Scalar v) { basis_matrix(r, i) = v; });
    }
    binv_ = basis_matrix.partialPivLu().inverse();
    if (!binv_.allFinite()) throw Error(ErrorCode::kInternal, "singular simplex basis");
    Vector rhs = b_;
    for (int j = 0; j < total_; ++j) {
      if (position_[j] < 0 && x_[j] != Scalar(0)) {
        for_column(j, [&](int r, Scalar v) { rhs[r] -= v * x_[j]; });
      }
    }
    const Vector xb = binv_ * rhs;
    for (int i = 0; i < m_; ++i) x_[basis_[i]] = xb[i];
    since_refactor_ = 0;
  }

  Vector duals() const {
    Vector cb(m_);
    for (int i = 0; i < m_; ++i) cb[i] = cost_[basis_[i]];
    return binv_.transpose() * cb;
  }

  Scalar reduced_cost(int j, const Vector& y) const {
    Scalar d = cost_[j];
    for_column(j, [&](int r, Scalar v) { d -= y[r] * v; });
    return d;
  }

  /// Entering candidate; direction +1 raises it from its lower bound, -1
  /// lowers it from its upper bound. Returns -1 at optimality.
  int choose_entering(const Vector& y, int& direction) {
    const Scalar tol = Scalar(opt_.optimality_tolerance);
    auto eligible = [&](int j, Scalar d, int& dir) {
      if (position_[j] >= 0 || is_fixed(j)) return false;
      const bool at_upper = std::isfinite(static_cast<double>(hi_[j])) && x_[j] >= hi_[j];
      if (!at_upper && d < -tol) {
        dir = 1;
        return true;
      }
      const bool at_lower = std::isfinite(static_cast<double>(lo_[j])) && x_[j] <= lo_[j];
      if (!at_lower && d > tol) {
        dir = -1;
        return true;
      }
      return false;
    };

    if (bland_) {
      for (int j = 0; j < total_; ++j) {
        int dir = 0;
        if (eligible(j, reduced_cost(j, y), dir)) {
          direction = dir;
          return j;
        }
      }
      return -1;
    }

    const int segment = std::max(256, total_ / 8);
    int best = -1;
    Scalar best_score = 0;
    int scanned = 0;
    for (int step = 0; step < total_; ++step) {
      const int j = (price_start_ + step) % total_;
      int dir = 0;
      const Scalar d = reduced_cost(j, y);
      if (eligible(j, d, dir) && std::abs(d) > best_score) {
        best_score = std::abs(d);
        best = j;
        direction = dir;
      }
      if (++scanned >= segment && best >= 0) break;
    }
    if (best >= 0) price_start_ = (price_start_ + scanned) % total_;
    return best;
  }

  Status iterate() {
    Vector y;
    Vector w(m_);
    for (;;) {
      if (++iterations_ > opt_.max_iterations) {
        throw Error(ErrorCode::kInternal, "simplex iteration limit reached");
      }
      if (since_refactor_ >= opt_.refactor_interval) refactor();

      y = duals();
      int direction = 0;
      const int q = choose_entering(y, direction);
      if (q < 0) return Status::kOptimal;

      w.setZero();
      for_column(q, [&](int r, Scalar v) { w.noalias() += v * binv_.col(r); });

      // Harris ratio test; basic i moves by -direction * w[i] per unit step.
      // Pass one finds the longest step with bounds relaxed by the feasibility
      // tolerance, pass two takes the largest pivot among rows blocking within it.
      const Scalar wmax = m_ > 0 ? w.cwiseAbs().maxCoeff() : Scalar(0);
      const Scalar piv_tol = Scalar(opt_.pivot_tolerance) * std::max(Scalar(1), wmax);
      const Scalar relax = Scalar(opt_.feasibility_tolerance);
      auto ratio_of = [&](int i, Scalar slack_extra, Scalar& ratio) {
        const Scalar delta = -Scalar(direction) * w[i];
        const int var = basis_[i];
        if (delta < -piv_tol && std::isfinite(static_cast<double>(lo_[var]))) {
          ratio = (std::max(Scalar(0), x_[var] - lo_[var]) + slack_extra) / -delta;
          return true;
        }
        if (delta > piv_tol && std::isfinite(static_cast<double>(hi_[var]))) {
          ratio = (std::max(Scalar(0), hi_[var] - x_[var]) + slack_extra) / delta;
          return true;
        }
        return false;
      };
      Scalar bound = LinearProgram<Scalar>::kInfinity;
      for (int i = 0; i < m_; ++i) {
        Scalar ratio;
        if (ratio_of(i, relax, ratio)) bound = std::min(bound, ratio);
      }
      Scalar theta = hi_[q] - lo_[q];
      int leave = -1;
      if (!(theta <= bound)) {
        theta = LinearProgram<Scalar>::kInfinity;
        Scalar leave_mag = 0;
        for (int i = 0; i < m_; ++i) {
          Scalar ratio;
          if (!ratio_of(i, Scalar(0), ratio) || ratio > bound) continue;
          const Scalar mag = std::abs(w[i]);
          const bool take = leave < 0 || (bland_ ? basis_[i] < basis_[leave] : mag > leave_mag);
          if (take) {
            leave = i;
            leave_mag = mag;
            theta = ratio;
          }
        }
      }

      if (!std::isfinite(static_cast<double>(theta))) return Status::kUnbounded;

      const Scalar step = Scalar(direction) * theta;
      if (theta > Scalar(opt_.feasibility_tolerance)) {
        degenerate_run_ = 0;
        bland_ = false;
      } else if (++degenerate_run_ >= opt_.degenerate_limit) {
        bland_ = true;
      }

      x_[q] += step;
      for (int i = 0; i < m_; ++i) x_[basis_[i]] -= step * w[i];

      if (leave < 0) {
        // Bound flip: the entering variable crosses to its other bound.
        x_[q] = direction > 0 ? hi_[q] : lo_[q];
        continue;
      }

      const int out = basis_[leave];
      const Scalar delta_out = -Scalar(direction) * w[leave];
      x_[out] = delta_out < 0 ? lo_[out] : hi_[out];
      position_[out] = -1;
      basis_[leave] = q;
      position_[q] = leave;

      const Scalar pivot = w[leave];
      binv_.row(leave) /= pivot;
      for (int i = 0; i < m_; ++i) {
        if (i != leave && w[i] != Scalar(0)) binv_.row(i) -= w[i] * binv_.row(leave);
      }
      ++since_refactor_;
    }
  }

  const LinearProgram<Scalar>& lp_;
  const SparseMatrix& a_;
  SolverOptions opt_;
  int m_;
  int n_;
  int n_slack_ = 0;
  int total_ = 0;
  std::vector<int> slack_row_;
  std::vector<Scalar> slack_sign_;
  std::vector<Scalar> art_sign_;
  Vector lo_, hi_, cost_, x_, b_;
  std::vector<int> basis_;
  std::vector<int> position_;
  Matrix binv_;
  int since_refactor_ = 0;
  int degenerate_run_ = 0;
  bool bland_ = false;
  int price_start_ = 0;
  long iterations_ = 0;
};

}  // namespace detail

/// Solves `lp` to optimality. Never throws for infeasible, unbounded, or
/// oversized models; those are reported through Solution::status.
template <typename Scalar>
Solution<Scalar> solve(const LinearProgram<Scalar>& lp, const SolverOptions& options = {}) {
  return detail::RevisedSimplex<Scalar>(lp, options).run();
}

}  // namespace cbounds::lp
