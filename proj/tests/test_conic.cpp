#include "inertid/interior_point.hpp"

#include <gtest/gtest.h>

#include <random>
#include <sstream>

using namespace inertid;

namespace {

// min x0 + x1 s.t. x >= 1 elementwise, x0 + 2 x1 >= 4
TEST(InteriorPoint, SmallLinearProgram) {
  ConicProgram p;
  p.add_block("x", 2);
  p.objective() << 1.0, 1.0;
  Eigen::MatrixXd F(3, 2);
  F << 1, 0, 0, 1, 1, 2;
  Eigen::VectorXd f(3);
  f << -1, -1, -4;
  p.add_nonnegative(F, f, "lin");
  const Solution s = solve(p);
  ASSERT_EQ(s.status, SolveStatus::optimal) << s.diagnostic;
  EXPECT_NEAR(s.x[0], 1.0, 1e-7);
  EXPECT_NEAR(s.x[1], 1.5, 1e-7);
  EXPECT_NEAR(s.primal_objective, 2.5, 1e-7);
}

// min t s.t. |x - a| <= t  -> x = a
TEST(InteriorPoint, SecondOrderProjection) {
  ConicProgram p;
  p.add_block("t", 1);
  p.add_block("x", 3);
  p.objective()[0] = 1.0;
  Eigen::MatrixXd F = Eigen::MatrixXd::Zero(4, 4);
  F(0, 0) = 1.0;
  F.bottomRightCorner(3, 3).setIdentity();
  Eigen::VectorXd f(4);
  f << 0, -1, 2, -3;
  p.add_second_order(F, f, "norm");
  // x0 <= 0
  Eigen::MatrixXd G = Eigen::MatrixXd::Zero(1, 4);
  G(0, 1) = -1.0;
  p.add_nonnegative(G, Eigen::VectorXd::Zero(1), "x0<=0");
  const Solution s = solve(p);
  ASSERT_EQ(s.status, SolveStatus::optimal) << s.diagnostic;
  EXPECT_NEAR(s.x[1], 0.0, 1e-7);
  EXPECT_NEAR(s.x[2], -2.0, 1e-7);
  EXPECT_NEAR(s.x[3], 3.0, 1e-7);
  EXPECT_NEAR(s.primal_objective, 1.0, 1e-7);
}

// min trace(C X) s.t. X_ii = 1 -- max-cut style SDP with known optimum for
// C = -ones: X = ones, value -n^2.
TEST(InteriorPoint, SmallSdp) {
  const int n = 3;
  ConicProgram p;
  p.add_block("X", svec_size(n));
  Eigen::MatrixXd C = -Eigen::MatrixXd::Ones(n, n);
  p.objective() = svec(C);
  Eigen::MatrixXd F = Eigen::MatrixXd::Identity(svec_size(n), svec_size(n));
  p.add_psd(n, F, Eigen::VectorXd::Zero(svec_size(n)), "X");
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, svec_size(n));
  int k = 0;
  for (int j = 0; j < n; ++j)
    for (int i = j; i < n; ++i, ++k)
      if (i == j) A(j, k) = 1.0;
  p.add_equalities(A, Eigen::VectorXd::Ones(n));
  const Solution s = solve(p);
  ASSERT_EQ(s.status, SolveStatus::optimal) << s.diagnostic;
  EXPECT_NEAR(s.primal_objective, -9.0, 1e-6);
}

TEST(InteriorPoint, DetectsInfeasibility) {
  ConicProgram p;
  p.add_block("x", 1);
  p.objective()[0] = 1.0;
  Eigen::MatrixXd F(2, 1);
  F << 1, -1;
  Eigen::VectorXd f(2);
  f << -2, 1;  // x >= 2 and x <= 1
  p.add_nonnegative(F, f, "bounds");
  const Solution s = solve(p);
  EXPECT_EQ(s.status, SolveStatus::infeasible);
}

TEST(InteriorPoint, DetectsUnbounded) {
  ConicProgram p;
  p.add_block("x", 1);
  p.objective()[0] = -1.0;
  Eigen::MatrixXd F(1, 1);
  F << 1;
  p.add_nonnegative(F, Eigen::VectorXd::Zero(1), "x>=0");
  const Solution s = solve(p);
  EXPECT_EQ(s.status, SolveStatus::unbounded);
}

}  // namespace
