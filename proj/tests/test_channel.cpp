#include "oracles.hpp"

#include <mimo_ee.hpp>

#include <gtest/gtest.h>

using namespace mimo_ee;

namespace {

// E{1/r} for the default cell, from a 2-D annulus quadrature (see oracles.hpp)
constexpr double kFrozenInversePathloss = 1.245814554821222e12;

SystemConfig square(std::size_t m, std::size_t k)
{
  SystemConfig cfg;
  cfg.total_antennas = m;
  cfg.users = k;
  return cfg;
}

} // namespace

TEST(SmallScale, UnitTotalVariance)
{
  SystemConfig cfg = square(1000, 100);
  RandomStream s(1, 0, Substream::small_scale);
  const CMatrix h = sample_small_scale(cfg, s);
  EXPECT_NEAR(h.cwiseAbs2().mean(), 1.0, 0.02);
}

TEST(SmallScale, RealPartVariance)
{
  SystemConfig cfg = square(220, 1);
  double acc = 0.0;
  std::size_t n = 0;
  for (std::uint64_t t = 0; t < 200; ++t) {
    RandomStream s(2, t, Substream::small_scale);
    const CMatrix h = sample_small_scale(cfg, s);
    for (Eigen::Index i = 0; i < h.size(); ++i, ++n)
      acc += h(i).real() * h(i).real();
  }
  EXPECT_NEAR(acc / static_cast<double>(n), 0.5, 0.02);
}

TEST(SmallScale, ZeroVarianceGivesZeros)
{
  SystemConfig cfg = square(8, 3);
  cfg.fading_variance = 0.0;
  RandomStream s(3, 0, Substream::small_scale);
  EXPECT_TRUE(sample_small_scale(cfg, s).isZero(0.0));
}

TEST(SmallScale, FourthMomentOfExponential)
{
  SystemConfig cfg = square(1000, 1000);
  RandomStream s(4, 0, Substream::small_scale);
  const CMatrix h = sample_small_scale(cfg, s);
  const double m4 = h.cwiseAbs2().cwiseAbs2().mean();
  EXPECT_NEAR(m4, 2.0, 0.03 * 2.0);
}

TEST(SmallScale, BitReproducible)
{
  SystemConfig cfg = square(16, 4);
  RandomStream a(9, 5, Substream::small_scale);
  RandomStream b(9, 5, Substream::small_scale);
  RandomStream c(9, 6, Substream::small_scale);
  const CMatrix ha = sample_small_scale(cfg, a);
  EXPECT_TRUE(ha == sample_small_scale(cfg, b));
  EXPECT_FALSE(ha == sample_small_scale(cfg, c));
}

TEST(Pathloss, AtMinDistance)
{
  SystemConfig cfg;
  EXPECT_DOUBLE_EQ(pathloss_at(cfg, 35.0), std::pow(10.0, -3.53) / std::pow(35.0, 3.76));
}

TEST(Pathloss, NoAttenuation)
{
  SystemConfig cfg;
  cfg.pathloss_reference = 1.0;
  cfg.pathloss_exponent = 0.0;
  RandomStream s(1, 0, Substream::pathloss);
  const RVector r = sample_user_pathloss(cfg, s);
  EXPECT_TRUE(r.isOnes(0.0));
  EXPECT_DOUBLE_EQ(expected_inverse_pathloss(cfg), 1.0);
}

TEST(Pathloss, DistancesStayInCell)
{
  SystemConfig cfg;
  RandomStream s(5, 0, Substream::pathloss);
  for (int i = 0; i < 100000; ++i) {
    const double d = sample_user_distance(cfg, s);
    ASSERT_GE(d, cfg.min_distance);
    ASSERT_LE(d, cfg.max_distance);
  }
}

TEST(Pathloss, EmpiricalInverseMatchesClosedForm)
{
  SystemConfig cfg;
  RandomStream s(6, 0, Substream::pathloss);
  double acc = 0.0;
  const int n = 1000000;
  for (int i = 0; i < n; ++i)
    acc += 1.0 / pathloss_at(cfg, sample_user_distance(cfg, s));
  EXPECT_NEAR(acc / n / expected_inverse_pathloss(cfg), 1.0, 0.005);
}

TEST(Pathloss, ClosedFormMatchesAnnulusQuadrature)
{
  SystemConfig cfg;
  const double quad = oracle::annulus_inverse_pathloss(cfg.min_distance, cfg.max_distance, cfg.pathloss_exponent,
                                                       cfg.pathloss_reference);
  EXPECT_NEAR(quad / kFrozenInversePathloss, 1.0, 1e-10);
  EXPECT_NEAR(expected_inverse_pathloss(cfg) / kFrozenInversePathloss, 1.0, 1e-12);
}

TEST(Pathloss, LinearInReference)
{
  SystemConfig cfg;
  const double base = expected_inverse_pathloss(cfg);
  cfg.pathloss_reference *= 2.0;
  EXPECT_DOUBLE_EQ(expected_inverse_pathloss(cfg), base / 2.0);
}

TEST(Pathloss, RejectsPoleExponent)
{
  SystemConfig cfg;
  cfg.pathloss_exponent = -2.0;
  EXPECT_THROW(expected_inverse_pathloss(cfg), std::invalid_argument);
}

TEST(Assemble, OnesKeepsH)
{
  SystemConfig cfg = square(5, 3);
  RandomStream s(1, 0, Substream::small_scale);
  CMatrix h = sample_small_scale(cfg, s);
  const auto real = assemble_channel(h, RVector::Ones(3));
  EXPECT_TRUE(real.composite == h);
}

TEST(Assemble, ScalesColumnNorm)
{
  SystemConfig cfg = square(7, 1);
  RandomStream s(1, 0, Substream::small_scale);
  CMatrix h = sample_small_scale(cfg, s);
  RVector r(1);
  r << 4.0;
  const auto real = assemble_channel(h, r);
  EXPECT_NEAR(real.composite.col(0).norm(), 2.0 * h.col(0).norm(), 1e-14);
}

TEST(Assemble, EntrywiseProduct)
{
  SystemConfig cfg = square(3, 2);
  RandomStream s(8, 0, Substream::small_scale);
  CMatrix h = sample_small_scale(cfg, s);
  RVector r(2);
  r << 0.3, 7.5;
  const auto real = assemble_channel(h, r);
  for (int m = 0; m < 3; ++m)
    for (int k = 0; k < 2; ++k)
      EXPECT_EQ(real.composite(m, k), h(m, k) * std::sqrt(r(k)));
}

TEST(Assemble, DimensionMismatch)
{
  EXPECT_THROW(assemble_channel(CMatrix::Zero(4, 3), RVector::Ones(2)), std::invalid_argument);
}
