#include <random>

#include "cbounds/lp/simplex.hpp"
#include "doctest.h"

using namespace cbounds::lp;

TEST_CASE("single equality has value and dual") {
  LinearProgram<double> lp(Sense::kMinimize);
  lp.add_row(Relation::kEqual, 0.3);
  lp.add_variable(1.0, {{0, 1.0}});
  const auto sol = solve(lp);
  REQUIRE(sol.optimal());
  CHECK(sol.objective == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(sol.dual[0] == doctest::Approx(1.0));
  CHECK(check_duals(lp, sol).duality_gap <= 1e-8);
}

TEST_CASE("conflicting equalities are infeasible") {
  LinearProgram<double> lp;
  lp.add_row(Relation::kEqual, 0.2);
  lp.add_row(Relation::kEqual, 0.3);
  lp.add_variable(1.0, {{0, 1.0}, {1, 1.0}});
  CHECK(solve(lp).status == Status::kInfeasible);
}

TEST_CASE("unbounded ray is reported") {
  LinearProgram<double> lp(Sense::kMaximize);
  lp.add_row(Relation::kGreaterEqual, 1.0);
  lp.add_variable(1.0, {{0, 1.0}});
  CHECK(solve(lp).status == Status::kUnbounded);
}

TEST_CASE("column cap yields size_cap") {
  LinearProgram<double> lp;
  lp.add_row(Relation::kEqual, 1.0);
  for (int j = 0; j < 5; ++j) lp.add_variable(1.0, {{0, 1.0}});
  SolverOptions opt;
  opt.max_columns = 4;
  CHECK(solve(lp, opt).status == Status::kSizeCap);
}

TEST_CASE("unsanitized coefficients are rejected") {
  LinearProgram<double> lp;
  lp.add_row(Relation::kEqual, 1.0);
  CHECK_THROWS_AS(lp.add_variable(1.0, {{0, 1e13}}), cbounds::Error);
  CHECK_THROWS_AS(lp.add_row(Relation::kEqual, std::nan("")), cbounds::Error);
}

TEST_CASE("mixed relations with bounds match a hand solution") {
  // max 3x + 2y  s.t. x + y <= 4, x + 3y <= 6, x <= 3
  LinearProgram<double> lp(Sense::kMaximize);
  lp.add_row(Relation::kLessEqual, 4);
  lp.add_row(Relation::kLessEqual, 6);
  lp.add_variable(3, {{0, 1}, {1, 1}}, 0, 3);
  lp.add_variable(2, {{0, 1}, {1, 3}});
  const auto sol = solve(lp);
  REQUIRE(sol.optimal());
  CHECK(sol.objective == doctest::Approx(11.0));
  CHECK(sol.primal[0] == doctest::Approx(3.0));
  CHECK(sol.primal[1] == doctest::Approx(1.0));
  const auto rep = check_duals(lp, sol);
  CHECK(rep.duality_gap <= 1e-8);
  CHECK(rep.dual_residual <= 1e-8);
}

TEST_CASE("random transportation-like LPs satisfy strong duality") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0, 1);
  for (int rep = 0; rep < 50; ++rep) {
    const int m = 6;
    const int n = 30;
    LinearProgram<double> lp(rep % 2 ? Sense::kMaximize : Sense::kMinimize);
    // Rows are cell sums of a random feasible point.
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(m, n);
    Eigen::VectorXd x0(n);
    for (int j = 0; j < n; ++j) {
      x0[j] = u(rng);
      for (int i = 0; i < m; ++i) if (u(rng) < 0.4) a(i, j) = 1;
    }
    const Eigen::VectorXd b = a * x0;
    for (int i = 0; i < m; ++i) lp.add_row(i < 3 ? Relation::kEqual : Relation::kLessEqual, b[i]);
    for (int j = 0; j < n; ++j) {
      std::vector<LinearProgram<double>::Entry> e;
      for (int i = 0; i < m; ++i) if (a(i, j) != 0) e.emplace_back(i, 1.0);
      lp.add_variable(std::floor(u(rng) * 3), e, 0, 2);
    }
    const auto sol = solve(lp);
    REQUIRE(sol.optimal());
    const auto r = check_duals(lp, sol);
    CHECK(r.primal_residual <= 1e-8);
    CHECK(r.dual_residual <= 1e-8);
    CHECK(r.duality_gap <= 1e-8);
  }
}

TEST_CASE("perturbed duals are detected") {
  LinearProgram<double> lp;
  lp.add_row(Relation::kEqual, 0.3);
  lp.add_variable(1.0, {{0, 1.0}});
  auto sol = solve(lp);
  sol.dual[0] += 0.5;
  CHECK(check_duals(lp, sol).dual_residual > 0.1);
}

TEST_CASE("Beale's cycling example terminates") {
  LinearProgram<double> lp(Sense::kMinimize);
  lp.add_row(Relation::kLessEqual, 0);
  lp.add_row(Relation::kLessEqual, 0);
  lp.add_row(Relation::kLessEqual, 1);
  lp.add_variable(-0.75, {{0, 0.25}, {1, 0.5}});
  lp.add_variable(20, {{0, -8}, {1, -12}});
  lp.add_variable(-0.5, {{0, -1}, {1, -0.5}, {2, 1}});
  lp.add_variable(6, {{0, 9}, {1, 3}});
  for (int limit : {1, 40, 2000}) {
    SolverOptions opt;
    opt.degenerate_limit = limit;
    opt.max_iterations = 1000;
    const auto sol = solve(lp, opt);
    REQUIRE(sol.optimal());
    CHECK(sol.objective == doctest::Approx(-1.25));
  }
}
