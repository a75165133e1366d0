#include "oracles.hpp"

#include <mimo_ee.hpp>

#include <gtest/gtest.h>

using namespace mimo_ee;

TEST(OrderStatMean, SingleDrawIsGammaMean)
{
  const GammaOrderSpec spec{ 4.0, 1.0, 1, 1 };
  EXPECT_NEAR(order_stat_mean_exact(spec, 1), 4.0, 4e-8);
}

TEST(OrderStatMean, PartitionIdentity)
{
  for (auto [m, k] : { std::pair{ 10u, 3.0 }, std::pair{ 50u, 5.0 }, std::pair{ 220u, 20.0 } }) {
    const GammaOrderSpec spec{ k, 1.0, m, m };
    double sum = 0.0;
    for (std::size_t r = 1; r <= m; ++r)
      sum += order_stat_mean_exact(spec, r);
    EXPECT_NEAR(sum / (m * k), 1.0, 1e-6) << "M=" << m;
  }
}

TEST(OrderStatMean, GreatestOrientationAgainstSorting)
{
  const GammaOrderSpec spec{ 3.0, 1.0, 10, 10 };
  const auto mc = oracle::sorted_gamma_means(10, 3.0, 1.0, 200000, 77);
  EXPECT_NEAR(order_stat_mean_exact(spec, 1) / mc[0], 1.0, 0.005);
  EXPECT_NEAR(order_stat_mean_exact(spec, 10) / mc[9], 1.0, 0.01);
  EXPECT_GT(order_stat_mean_exact(spec, 1), order_stat_mean_exact(spec, 2));
}

TEST(OrderStatMean, RejectsBadRank)
{
  const GammaOrderSpec spec{ 3.0, 1.0, 10, 10 };
  EXPECT_THROW(order_stat_mean_exact(spec, 0), std::invalid_argument);
  EXPECT_THROW(order_stat_mean_exact(spec, 11), std::invalid_argument);
  EXPECT_THROW(order_stat_mean_exact({ 0.5, 1.0, 10, 10 }, 1), std::invalid_argument);
}

TEST(OrderStatMean, UnreachableToleranceRaises)
{
  QuadratureOptions opt;
  opt.relative_tolerance = 1e-30;
  opt.max_depth = 1;
  opt.pieces = 1;
  EXPECT_THROW(order_stat_mean_exact({ 20.0, 1.0, 220, 220 }, 100, opt), QuadratureFailure);
}

TEST(TopBound, TightAtFullSelection)
{
  const GammaOrderSpec spec{ 7.0, 1.0, 50, 50 };
  EXPECT_DOUBLE_EQ(top_mean_bound(spec), 7.0);
  EXPECT_DOUBLE_EQ(top_sum_bound(spec), 350.0);
}

TEST(TopBound, DominatesQuadrature)
{
  const GammaOrderSpec spec{ 97.0, 1.0, 220, 137 };
  const double exact = top_mean_exact(spec);
  const double bound = top_mean_bound(spec);
  EXPECT_GE(bound, exact);
  EXPECT_LT((bound - exact) / exact, 0.05);
  EXPECT_NEAR(top_sum_bound(spec), 137.0 * bound, 1e-9 * top_sum_bound(spec));
}

TEST(TopBound, ExcessScalesWithRatio)
{
  // (M - F)/F = 3 versus 3/2: the excess over the mean shrinks by sqrt(2)
  const GammaOrderSpec a{ 5.0, 1.0, 200, 50 };
  const GammaOrderSpec b{ 5.0, 1.0, 200, 80 };
  EXPECT_NEAR((top_mean_bound(a) - 5.0) / (top_mean_bound(b) - 5.0), std::sqrt(2.0), 1e-12);
}
