#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "oracles.hpp"
#include "voi/covering.hpp"
#include "voi/errors.hpp"
#include "voi/random.hpp"

namespace voi {
namespace {

MatrixXd line_points(std::initializer_list<double> xs) {
  MatrixXd p(static_cast<Index>(xs.size()), 1);
  Index i = 0;
  for (double x : xs) p(i++, 0) = x;
  return p;
}

TEST(GreedyPacking, PointsOnALine) {
  const PointCloud cloud = PointCloud::from_points(line_points({0, 1, 2, 3}), CloudProvenance::Grid);
  const IntrinsicMetric metric(PosteriorOperator::identity(1));
  EXPECT_EQ(greedy_packing(cloud, metric, 0.9).size(), 4u);
  EXPECT_EQ(greedy_packing(cloud, metric, 1.5).size(), 2u);
  EXPECT_EQ(greedy_packing(cloud, metric, 10.0).size(), 1u);
  EXPECT_THROW(greedy_packing(cloud, metric, 0.0), InvalidArgument);
}

TEST(GreedyPacking, SeparatedCoveringAndBelowExactPacking) {
  RandomStream rng(4, 0);
  for (int trial = 0; trial < 30; ++trial) {
    const Index d = 1 + trial % 3;
    const Index n = 6 + trial % 7;
    MatrixXd pts(n, d);
    for (Index i = 0; i < n; ++i) {
      for (Index j = 0; j < d; ++j) pts(i, j) = rng.uniform(-1.0, 1.0);
    }
    const PosteriorOperator op = random_bounded_operator(d, SpectralBand(0.3, 2.0), 100 + trial);
    const MatrixXd dist = testing::pairwise_rho(pts, op.w());
    const PointCloud cloud = PointCloud::from_points(pts, CloudProvenance::UniformRandom);
    const double eps = rng.uniform(0.1, 1.0);
    const auto chosen = greedy_packing(cloud, IntrinsicMetric(op), eps);
    for (std::size_t a = 0; a < chosen.size(); ++a) {
      for (std::size_t b = a + 1; b < chosen.size(); ++b) EXPECT_GT(dist(chosen[a], chosen[b]), eps);
    }
    for (Index i = 0; i < n; ++i) {
      double nearest = INFINITY;
      for (Index c : chosen) nearest = std::min(nearest, dist(i, c));
      EXPECT_LE(nearest, eps + 1e-12);
    }
    EXPECT_LE(static_cast<int>(chosen.size()), testing::exact_packing_number(dist, eps));
  }
}

TEST(PackingCoveringSandwich, BracketsExactCoveringNumber) {
  RandomStream rng(9, 0);
  for (int trial = 0; trial < 40; ++trial) {
    const Index d = 1 + trial % 4;
    const Index n = 4 + trial % 9;
    MatrixXd pts(n, d);
    for (Index i = 0; i < n; ++i) {
      for (Index j = 0; j < d; ++j) pts(i, j) = rng.uniform(-1.0, 1.0);
    }
    const PosteriorOperator op = random_bounded_operator(d, SpectralBand(0.5, 2.0), 7 * trial + 1);
    const MatrixXd dist = testing::pairwise_rho(pts, op.w());
    const PointCloud cloud = PointCloud::from_points(pts, CloudProvenance::UniformRandom);
    for (double eps : {0.1, 0.3, 0.6, 1.2}) {
      const CoveringEstimate est = packing_covering_sandwich(cloud, IntrinsicMetric(op), eps);
      const int exact = testing::exact_covering_number(dist, eps);
      EXPECT_LE(est.n_lower(), exact) << "trial " << trial << " eps " << eps;
      EXPECT_GE(*est.n_upper(), exact) << "trial " << trial << " eps " << eps;
      EXPECT_EQ(est.method, "greedy-packing");
    }
  }
}

TEST(PackingCoveringSandwich, SquareGrid) {
  // 4 x 4 grid with spacing 1/3 on [-0.5, 0.5]^2.
  MatrixXd pts(16, 2);
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) pts.row(4 * i + j) << -0.5 + i / 3.0, -0.5 + j / 3.0;
  }
  const MatrixXd dist = testing::pairwise_rho(pts, MatrixXd::Identity(2, 2));
  const PointCloud cloud = PointCloud::from_points(pts, CloudProvenance::Grid);
  const CoveringEstimate est = packing_covering_sandwich(cloud, IntrinsicMetric(PosteriorOperator::identity(2)), 0.4);
  const int exact = testing::exact_covering_number(dist, 0.4);
  EXPECT_GE(exact, 4);
  EXPECT_LE(est.n_lower(), exact);
  EXPECT_GE(*est.n_upper(), exact);
}

TEST(VolumeBounds, IntervalAndDisk) {
  const CoveringEstimate one = volume_bounds(ActionSet::l2_ball(1), PosteriorOperator::identity(1), 0.5);
  EXPECT_EQ(one.n_lower(), 2.0);
  EXPECT_EQ(*one.n_upper(), 5.0);
  const CoveringEstimate two = volume_bounds(ActionSet::l2_ball(2), PosteriorOperator::identity(2), 0.5);
  EXPECT_EQ(two.n_lower(), 4.0);
  EXPECT_EQ(*two.n_upper(), 25.0);
  EXPECT_EQ(two.method, "volume");
}

TEST(VolumeBounds, LargeEpsilonGivesOne) {
  const CoveringEstimate est = volume_bounds(ActionSet::l2_ball(3), PosteriorOperator::identity(3), 100.0);
  EXPECT_EQ(est.n_lower(), 1.0);
  EXPECT_EQ(est.log_n_lower, 0.0);
}

TEST(VolumeBounds, CubeHasNoUpperBound) {
  const CoveringEstimate est = volume_bounds(ActionSet::linf_ball(2), PosteriorOperator::identity(2), 0.5);
  EXPECT_FALSE(est.log_n_upper.has_value());
  // Vol([-1,1]^2) / Vol(0.5 B_2) = 4 / (pi / 4).
  EXPECT_EQ(est.n_lower(), std::ceil(16.0 / std::numbers::pi));
}

TEST(VolumeBounds, MonotoneInEpsilon) {
  const PosteriorOperator op = random_bounded_operator(6, SpectralBand(0.5, 2.0), 3);
  double prev_lower = INFINITY;
  double prev_upper = INFINITY;
  for (double eps = 0.05; eps < 5.0; eps *= 1.3) {
    const CoveringEstimate est = volume_bounds(ActionSet::l2_ball(6), op, eps);
    EXPECT_LE(est.log_n_lower, prev_lower);
    EXPECT_LE(*est.log_n_upper, prev_upper);
    EXPECT_LE(est.log_n_lower, *est.log_n_upper);
    prev_lower = est.log_n_lower;
    prev_upper = *est.log_n_upper;
  }
}

TEST(VolumeBounds, HighDimensionStaysFinite) {
  const CoveringEstimate est = volume_bounds(ActionSet::l2_ball(2000), PosteriorOperator::identity(2000), 0.1);
  EXPECT_TRUE(std::isfinite(est.log_n_lower));
  EXPECT_NEAR(est.log_n_lower, 2000.0 * std::log(10.0), 1e-9 * 2000.0 * std::log(10.0));
}

TEST(VolumeBounds, Errors) {
  MatrixXd w = MatrixXd::Identity(2, 2);
  w(1, 1) = 0.0;
  EXPECT_THROW(volume_bounds(ActionSet::l2_ball(2), PosteriorOperator::from_matrix(w), 0.5), SingularOperator);
  EXPECT_THROW(volume_bounds(ActionSet::l1_ball(2), PosteriorOperator::identity(2), 0.5), UnsupportedSet);
  EXPECT_THROW(volume_bounds(ActionSet::l2_ball(3), PosteriorOperator::identity(2), 0.5), DimensionMismatch);
}

TEST(LogCeilCount, EdgeCases) {
  EXPECT_EQ(log_ceil_count(-3.0), 0.0);
  EXPECT_EQ(log_ceil_count(0.0), 0.0);
  EXPECT_DOUBLE_EQ(log_ceil_count(std::log(4.0)), std::log(4.0));
  EXPECT_DOUBLE_EQ(log_ceil_count(std::log(3.2)), std::log(4.0));
  EXPECT_EQ(log_ceil_count(100.0), 100.0);
}

TEST(PointCloud, GeneratedPointsLieInTheSet) {
  for (SetKind kind : {SetKind::L1Ball, SetKind::L2Ball, SetKind::LinfBall}) {
    const ActionSet set = ActionSet::ball(kind, 3);
    for (CloudProvenance p :
         {CloudProvenance::Grid, CloudProvenance::LowDiscrepancy, CloudProvenance::UniformRandom}) {
      const PointCloud cloud = PointCloud::generate(set, 500, p, 2);
      EXPECT_GT(cloud.size(), 0);
      for (Index i = 0; i < cloud.size(); ++i) {
        EXPECT_TRUE(set.contains(cloud.points().row(i).transpose(), 1e-12)) << to_string(p);
      }
    }
  }
  EXPECT_EQ(PointCloud::generate(ActionSet::linf_ball(3), 1, CloudProvenance::Vertices).size(), 8);
  EXPECT_EQ(PointCloud::generate(ActionSet::l1_ball(3), 1, CloudProvenance::Vertices).size(), 6);
  EXPECT_THROW(PointCloud::generate(ActionSet::l2_ball(3), 1, CloudProvenance::Vertices), UnsupportedSet);
}

TEST(PointCloud, MembershipChecked) {
  const ActionSet set = ActionSet::l2_ball(1);
  EXPECT_THROW(PointCloud::from_points(line_points({0.0, 1.5}), CloudProvenance::Grid, &set), InvalidArgument);
  EXPECT_NO_THROW(PointCloud::from_points(line_points({0.0, 1.0}), CloudProvenance::Grid, &set));
}

TEST(PointCloud, DefaultSizes) {
  EXPECT_EQ(PointCloud::default_for(ActionSet::l2_ball(4)).size(), 4096);
  EXPECT_EQ(PointCloud::default_for(ActionSet::l2_ball(4)).provenance(), CloudProvenance::LowDiscrepancy);
  EXPECT_EQ(PointCloud::default_for(ActionSet::l2_ball(20)).size(), 65536);
}

}  // namespace
}  // namespace voi
