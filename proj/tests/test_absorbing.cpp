#include <algorithm>
#include <cmath>

#include <gtest/gtest.h>

#include "stackop/absorbing.hpp"
#include "stackop/errors.hpp"
#include "stackop/game.hpp"
#include "test_util.hpp"

namespace stackop {
namespace {

// Independent route to Q_UB: F = sum_l P_UU^l truncated once ||P_UU^l||_inf
// drops below 1e-12, then Q_UB = F P_UB.
Eigen::MatrixXd neumann_qub(const AbsorptionModel& m) {
  const Eigen::Index nu = m.p_uu.rows();
  Eigen::MatrixXd f = Eigen::MatrixXd::Identity(nu, nu);
  Eigen::MatrixXd power = Eigen::MatrixXd::Identity(nu, nu);
  for (int l = 1; l < 200000; ++l) {
    power = power * m.p_uu;
    f += power;
    if (power.cwiseAbs().rowwise().sum().maxCoeff() < 1e-12) break;
  }
  return f * m.p_ub;
}

double sup_norm(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

WeightedGraph edgeless(int n) {
  std::vector<double> anchor(n);
  for (int i = 0; i < n; ++i) anchor[i] = 0.5 + i;
  return WeightedGraph(anchor, {});
}

TEST(BuildTransition, G2) {
  const AbsorptionModel m = build_transition(testing::g2().graph);
  Eigen::Matrix2d puu;
  puu << 0, 0.5, 0.5, 0;
  EXPECT_TRUE(m.p_uu.isApprox(puu, 0));
  EXPECT_TRUE(m.p_ub.isApprox(Eigen::Matrix2d(Eigen::Vector2d(0.5, 0.5).asDiagonal()), 0));
}

TEST(BuildTransition, EdgelessGoesStraightToCopies) {
  const AbsorptionModel m = build_transition(edgeless(4));
  EXPECT_TRUE(m.p_uu.isZero(0));
  EXPECT_TRUE(m.p_ub.isIdentity(0));
}

TEST(BuildTransition, PathMiddleRow) {
  const auto gi = generate_graph(GraphKind::Path, 3, 0, 1.0, OpinionMode::fixed(0));
  const AbsorptionModel m = build_transition(gi.graph);
  EXPECT_DOUBLE_EQ(m.p_uu(1, 0), 1.0 / 3);
  EXPECT_DOUBLE_EQ(m.p_uu(1, 1), 0.0);
  EXPECT_DOUBLE_EQ(m.p_uu(1, 2), 1.0 / 3);
  EXPECT_DOUBLE_EQ(m.p_ub(1, 1), 1.0 / 3);
}

TEST(BuildTransition, RowsAreStochastic) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto gi = testing::random_instance(15, seed);
    const AbsorptionModel m = build_transition(gi.graph);
    for (Eigen::Index i = 0; i < m.p_uu.rows(); ++i) {
      EXPECT_NEAR(m.p_uu.row(i).sum() + m.p_ub.row(i).sum(), 1.0, 1e-12);
    }
    EXPECT_GE(m.p_uu.minCoeff(), 0.0);
    EXPECT_GE(m.p_ub.minCoeff(), 0.0);
  }
}

TEST(ComputeQub, G2) {
  const AbsorptionModel m = solve_absorption(testing::g2().graph);
  Eigen::Matrix2d q;
  q << 2.0 / 3, 1.0 / 3, 1.0 / 3, 2.0 / 3;
  EXPECT_LT((m.q_ub - q).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_NEAR(m.ell[0], 1.0, 1e-12);
  EXPECT_NEAR(m.ell[1], 1.0, 1e-12);
}

TEST(ComputeQub, EdgelessIsIdentity) {
  const AbsorptionModel m = solve_absorption(edgeless(5));
  EXPECT_TRUE(m.q_ub.isIdentity(1e-15));
  EXPECT_TRUE(m.ell.isOnes(1e-15));
}

TEST(ComputeQub, MatchesNeumannSeriesAndInvariants) {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const int n = 2 + static_cast<int>(seed % 25);
    const auto gi = testing::random_instance(n, seed);
    const AbsorptionModel m = solve_absorption(gi.graph);
    EXPECT_LT((m.q_ub - neumann_qub(m)).cwiseAbs().maxCoeff(), 1e-9) << "seed " << seed;
    EXPECT_GE(m.q_ub.minCoeff(), -1e-15);
    for (Eigen::Index i = 0; i < m.q_ub.rows(); ++i) EXPECT_NEAR(m.q_ub.row(i).sum(), 1.0, 1e-9);
    EXPECT_GE(m.ell.minCoeff(), -1e-15);
    EXPECT_NEAR(m.ell.sum(), n, 1e-9);
  }
}

TEST(ComputeQub, SingularSystemWhenValidationBypassed) {
  // Zero anchors never absorb; build the walk by hand from an invalid graph.
  const WeightedGraph g({0.0, 0.0}, {{0, 1, 1.0}, {1, 0, 1.0}});
  try {
    compute_qub(build_transition(g));
    FAIL() << "expected SingularSystem";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::SingularSystem);
  }
}

TEST(EquilibriumOpinions, G2) {
  const auto gi = testing::g2();
  const auto z = equilibrium_opinions(solve_absorption(gi.graph), gi.opinions);
  EXPECT_NEAR(z[0], 2.0 / 3, 1e-12);
  EXPECT_NEAR(z[1], 1.0 / 3, 1e-12);
}

TEST(EquilibriumOpinions, ConstantInputIsFixed) {
  const auto gi = testing::random_instance(12, 4);
  const auto z = equilibrium_opinions(solve_absorption(gi.graph), OpinionVector(std::vector<double>(12, 1.0)));
  for (double v : z) EXPECT_NEAR(v, 1.0, 1e-12);
}

TEST(EquilibriumOpinions, EdgelessReturnsS) {
  const OpinionVector s({0.3, -0.2, 1.0});
  const auto z = equilibrium_opinions(solve_absorption(edgeless(3)), s);
  EXPECT_EQ(z, s.values());
}

TEST(EquilibriumOpinions, DimensionMismatch) {
  const AbsorptionModel m = solve_absorption(testing::g2().graph);
  EXPECT_THROW(equilibrium_opinions(m, OpinionVector({0.0, 0.0, 0.0})), Error);
}

TEST(EquilibriumOpinions, StaysWithinInputRangeAndIsMonotone) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto gi = testing::random_instance(10, seed);
    const AbsorptionModel m = solve_absorption(gi.graph);
    const auto z = equilibrium_opinions(m, gi.opinions);
    const auto [lo, hi] = std::minmax_element(gi.opinions.values().begin(), gi.opinions.values().end());
    for (double v : z) {
      EXPECT_GE(v, *lo - 1e-12);
      EXPECT_LE(v, *hi + 1e-12);
    }
    for (int j = 0; j < 10; ++j) {
      std::vector<double> bumped = gi.opinions.values();
      bumped[j] = std::min(1.0, bumped[j] + 0.5);
      const auto z2 = equilibrium_opinions(m, OpinionVector(bumped));
      for (int i = 0; i < 10; ++i) EXPECT_GE(z2[i], z[i] - 1e-12);
    }
  }
}

TEST(FixedPoint, SolverSatisfiesUpdateRule) {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    const int n = 1 + static_cast<int>(seed % 50);
    const auto gi = testing::random_instance(n, seed * 7);
    const auto z = equilibrium_opinions(solve_absorption(gi.graph), gi.opinions);
    EXPECT_LE(sup_norm(z, update_step(gi.graph, gi.opinions.values(), z)), 1e-9);
  }
}

TEST(IterateDynamics, G2MatchesSolver) {
  const auto gi = testing::g2();
  const auto res = iterate_dynamics(gi.graph, gi.opinions, 1e-10);
  EXPECT_NEAR(res.z[0], 2.0 / 3, 1e-9);
  EXPECT_NEAR(res.z[1], 1.0 / 3, 1e-9);
}

TEST(IterateDynamics, EdgelessConvergesInOneSweep) {
  const OpinionVector s({0.1, -0.7});
  const auto res = iterate_dynamics(edgeless(2), s, 1e-12);
  EXPECT_EQ(res.iterations, 1);
  EXPECT_NEAR(res.z[0], 0.1, 1e-15);
  EXPECT_NEAR(res.z[1], -0.7, 1e-15);
}

TEST(IterateDynamics, AgreesWithSolverAndHasSmallResidual) {
  for (std::uint64_t seed = 1; seed <= 15; ++seed) {
    const auto gi = testing::random_instance(20, seed);
    const auto res = iterate_dynamics(gi.graph, gi.opinions, 1e-10);
    EXPECT_LT(sup_norm(res.z, update_step(gi.graph, gi.opinions.values(), res.z)), 1e-10);
    const auto z = equilibrium_opinions(solve_absorption(gi.graph), gi.opinions);
    EXPECT_LE(sup_norm(res.z, z), 1e-6);
  }
}

TEST(IterateDynamics, ErrorsOnBadInput) {
  const auto gi = testing::g2();
  EXPECT_THROW(iterate_dynamics(gi.graph, gi.opinions, 0.0), Error);
  try {
    iterate_dynamics(gi.graph, gi.opinions, 1e-15, 3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NoConvergence);
  }
}

// No node can lower its individual cost by moving its expressed opinion.
TEST(IterateDynamics, ResultIsNashOnGrid) {
  const auto gi = testing::random_instance(8, 11, 0.5);
  const auto z = iterate_dynamics(gi.graph, gi.opinions, 1e-12).z;
  for (int i = 0; i < 8; ++i) {
    const double base = individual_cost(gi.graph, z, gi.opinions, i);
    for (int step = 0; step <= 400; ++step) {
      std::vector<double> dev = z;
      dev[i] = -1.0 + step * 0.005;
      EXPECT_LE(base, individual_cost(gi.graph, dev, gi.opinions, i) + 1e-12);
    }
  }
}

TEST(ExpressedControl, G2FixNodeOne) {
  const auto gi = testing::g2();
  const auto z = expressed_control_equilibrium(gi.graph, gi.opinions, {0}, 1.0);
  EXPECT_NEAR(z[0], 1.0, 1e-12);
  EXPECT_NEAR(z[1], 0.5, 1e-12);
}

TEST(ExpressedControl, AllFixed) {
  const auto gi = testing::random_instance(5, 2);
  const auto z = expressed_control_equilibrium(gi.graph, gi.opinions, {0, 1, 2, 3, 4}, -0.25);
  for (double v : z) EXPECT_EQ(v, -0.25);
}

TEST(ExpressedControl, EmptySetMatchesStandardModel) {
  const auto gi = testing::random_instance(9, 6);
  const auto a = expressed_control_equilibrium(gi.graph, gi.opinions, {}, 1.0);
  const auto b = equilibrium_opinions(solve_absorption(gi.graph), gi.opinions);
  EXPECT_LE(sup_norm(a, b), 1e-14);
}

TEST(ExpressedControl, FixedPointOfFreeNodes) {
  const auto gi = testing::random_instance(12, 9, 0.4);
  const std::vector<NodeIndex> fixed{2, 5, 7};
  const auto z = expressed_control_equilibrium(gi.graph, gi.opinions, fixed, 1.0);
  const auto upd = update_step(gi.graph, gi.opinions.values(), z);
  for (int i = 0; i < 12; ++i) {
    if (std::find(fixed.begin(), fixed.end(), i) != fixed.end()) {
      EXPECT_EQ(z[i], 1.0);
    } else {
      EXPECT_NEAR(z[i], upd[i], 1e-12);
    }
  }
}

TEST(ExpressedControl, Errors) {
  const auto gi = testing::g2();
  EXPECT_THROW(expressed_control_equilibrium(gi.graph, OpinionVector({0.0}), {0}, 1.0), Error);
  EXPECT_THROW(expressed_control_equilibrium(gi.graph, gi.opinions, {5}, 1.0), Error);
  EXPECT_THROW(expressed_control_equilibrium(gi.graph, gi.opinions, {0}, 2.0), Error);
}

}  // namespace
}  // namespace stackop
