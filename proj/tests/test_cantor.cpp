#include <gtest/gtest.h>

#include "oracles/oracles.hpp"
#include "spectra_lab/cantor/dimension.hpp"
#include "spectra_lab/cantor/limit_geometry.hpp"
#include "spectra_lab/cantor/sumset.hpp"
#include "spectra_lab/cantor/thickness.hpp"
#include "spectra_lab/cf/gauss_cantor.hpp"

using namespace spectra_lab;

namespace {

const double kLog2Log3 = std::log(2.0) / std::log(3.0);

ExactInterval rational_interval(BigRational lo, BigRational hi) {
  return {QuadraticSurd::rational(lo), QuadraticSurd::rational(hi)};
}

}  // namespace

TEST(RegularCantorSet, AffineCylinderLengths) {
  auto k = middle_third();
  for (int n = 0; n <= 6; ++n) {
    auto cover = cylinders(k, n);
    EXPECT_EQ(cover.intervals.size(), std::size_t(1) << n);
    EXPECT_EQ(cover.total_length(), QuadraticSurd::rational(BigRational(1 << n, static_cast<int>(std::pow(3, n)))));
  }
  auto c = k.cylinder({0, 1});
  EXPECT_EQ(c.lo, QuadraticSurd::rational(BigRational(2, 9)));
  EXPECT_EQ(c.hi, QuadraticSurd::rational(BigRational(1, 3)));
}

TEST(RegularCantorSet, GaussCylindersNestInsideParents) {
  auto k = gauss_cantor_set(3);
  for (const auto& parent : cylinder_level(k, 2))
    for (const auto& child : children(k, parent)) EXPECT_TRUE(parent.interval.contains(child.interval));
  const auto& b = k.derivative_bounds();
  EXPECT_LT(b.c_min, b.c_max);
  EXPECT_LT(b.c_max, QuadraticSurd(1));
}

TEST(RegularCantorSet, InvalidRatiosAreRejected) {
  EXPECT_THROW(affine_two_branch(BigRational(1, 2)), std::invalid_argument);
  EXPECT_THROW(affine_two_branch(BigRational(0)), std::invalid_argument);
}

TEST(Dimension, MiddleThirdEnclosure) {
  auto d = hausdorff_dim(middle_third(), 1e-6);
  EXPECT_LE(d.lower, kLog2Log3);
  EXPECT_GE(d.upper, kLog2Log3);
  EXPECT_LE(d.width(), 1e-6);
  EXPECT_TRUE(d.converged);
}

TEST(Dimension, AffineQuarterIsOneHalf) {
  auto d = hausdorff_dim(affine_two_branch(BigRational(1, 4)), 1e-8);
  EXPECT_LE(d.lower, 0.5);
  EXPECT_GE(d.upper, 0.5);
}

TEST(Dimension, GaussSetsMatchDeterminantOracle) {
  for (int n : {2, 3}) {
    const double oracle = oracles::gauss_cantor_dimension(n, 8);
    auto d = hausdorff_dim(gauss_cantor_set(n), 1e-6);
    EXPECT_LE(d.lower, oracle + 1e-7) << n;
    EXPECT_GE(d.upper, oracle - 1e-7) << n;
    EXPECT_NEAR(d.midpoint(), oracle, 1e-4) << n;
  }
}

TEST(Dimension, EnclosuresNestAcrossDepths) {
  auto d = hausdorff_dim(gauss_cantor_set(2), 1e-6);
  ASSERT_GE(d.history.size(), 2u);
  for (const auto& row : d.history) {
    EXPECT_LE(row.lower, d.upper + 1e-15);
    EXPECT_GE(row.upper, d.lower - 1e-15);
  }
}

TEST(Dimension, IntervalHasDimensionOne) {
  auto d = hausdorff_dim(interval_set());
  EXPECT_EQ(d.lower, 1.0);
  EXPECT_EQ(d.upper, 1.0);
}

TEST(Dimension, BoxCountingAgrees) {
  auto box = box_dim_estimate(middle_third(), 4, 12);
  EXPECT_NEAR(box.slope, kLog2Log3, 1e-2);
  EXPECT_EQ(box.rows.size(), 9u);
  for (std::size_t i = 1; i < box.rows.size(); ++i) EXPECT_LT(box.rows[i].scale, box.rows[i - 1].scale);
  auto gauss = box_dim_estimate(gauss_cantor_set(2), 4, 12);
  EXPECT_NEAR(gauss.slope, oracles::gauss_cantor_dimension(2), 1e-2);
}

TEST(Thickness, AffineThicknessIsExact) {
  // ratio r: bridge r, gap 1 - 2r
  auto t = thickness(middle_third(), 4);
  EXPECT_EQ(t.lower_bound, BigRational(1));
  EXPECT_TRUE(t.nested);
  EXPECT_EQ(thickness(affine_two_branch(BigRational(2, 5)), 1).lower_bound, BigRational(2));
  EXPECT_TRUE(thickness(interval_set(), 1).infinite);
}

TEST(Thickness, GaussLowerBoundBelowExactMinimum) {
  for (int depth : {2, 4, 6}) {
    auto t = thickness(gauss_cantor_set(2), depth);
    ASSERT_TRUE(t.exact_min);
    EXPECT_LE(t.lower_bound.convert_to<double>(), t.exact_min->to_double());
    EXPECT_GT(t.lower_bound, BigRational(0));
  }
}

TEST(GapLemma, ThickPairsIntersect) {
  auto k = affine_two_branch(BigRational(2, 5));
  EXPECT_EQ(gap_lemma_test(k, k, BigRational(0)).status, GapLemmaStatus::certified_nonempty);
  EXPECT_EQ(gap_lemma_test(k, k, BigRational(2)).status, GapLemmaStatus::disjoint_hulls);
  // thickness product 1 is not enough for the strict lemma
  auto c = middle_third();
  EXPECT_EQ(gap_lemma_test(c, c, BigRational(0)).status, GapLemmaStatus::inconclusive);
}

TEST(GapLemma, SweepCertifiesOnlyLinkedTranslates) {
  auto k = affine_two_branch(BigRational(2, 5));
  auto sweep = stable_intersection_sweep(k, k, BigRational(-3, 2), BigRational(3, 2), 31);
  ASSERT_TRUE(sweep.any_certified());
  for (const auto& p : sweep.points) {
    if (p.status != GapLemmaStatus::certified_nonempty) continue;
    EXPECT_LE(abs(p.t), BigRational(1));
    EXPECT_TRUE(intersection_survives(k, k, p.t, 8));
  }
}

TEST(Intersection, SurvivalMatchesDifferenceSetCover) {
  // K symmetric, so K - K = K + K - 1
  auto k = affine_two_branch(BigRational(1, 4));
  const int depth = 6;
  auto cover = oracles::affine_sum_cover(0.25, depth);
  for (int i = 0; i <= 194; ++i) {
    BigRational t(i - 97, 97);
    double td = t.convert_to<double>();
    EXPECT_EQ(intersection_survives(k, k, t, depth), oracles::covered(cover, td + 1, td + 1)) << i;
  }
}

TEST(Sumset, MiddleThirdCoversQuarterToSevenQuarters) {
  auto c = middle_third();
  auto cert = sumset_contains_interval(c, c, rational_interval(BigRational(1, 4), BigRational(7, 4)), 14);
  EXPECT_TRUE(cert.certified);
  EXPECT_TRUE(cert.proof.has_value());
  auto cover = oracles::affine_sum_cover(1.0 / 3, 10);
  EXPECT_TRUE(oracles::covered(cover, 0.25, 1.75));
}

TEST(Sumset, ThinSetsFailWithWitnessInTarget) {
  auto k = affine_two_branch(BigRational(1, 4));
  auto cert = sumset_contains_interval(k, k, rational_interval(BigRational(0), BigRational(2)), 10);
  EXPECT_FALSE(cert.certified);
  EXPECT_EQ(cert.depth_used, 10);
  ASSERT_TRUE(cert.witness.has_value());
  const double w = cert.witness->to_double();
  EXPECT_GE(w, 0.0);
  EXPECT_LE(w, 2.0);
  // the failure is genuine: K + K misses (1/2, 3/4)
  auto cover = oracles::affine_sum_cover(0.25, 8);
  EXPECT_FALSE(oracles::covered(cover, 0.0, 2.0));
  EXPECT_FALSE(oracles::covered(cover, 0.625, 0.625));
}

TEST(Sumset, RejectsEmptyTargets) {
  auto c = middle_third();
  EXPECT_THROW(sumset_contains_interval(c, c, rational_interval(1, 1), 4), std::invalid_argument);
}

TEST(LimitGeometry, AffineSetsHaveNoDrift) {
  auto fit = limit_geometry_cauchy(middle_third(), FiniteWord(12, 0), 2, 10);
  for (double d : fit.distances) EXPECT_EQ(d, 0.0);
  EXPECT_EQ(fit.ratio, 0.0);
}

TEST(LimitGeometry, RenormalizedMapsFixTheDomain) {
  auto k = gauss_cantor_set(2);
  FiniteWord theta{0, 1, 0, 1, 0, 1, 0, 1};
  for (int n = 1; n <= 6; ++n) {
    auto g = limit_geometry(k, theta, n);
    EXPECT_EQ(g.values.front(), g.domain.lo);
    EXPECT_EQ(g.values.back(), g.domain.hi);
    for (std::size_t i = 1; i < g.values.size(); ++i) EXPECT_LT(g.values[i - 1], g.values[i]);
  }
  EXPECT_THROW(limit_geometry(k, theta, 8), std::invalid_argument);
}

TEST(LimitGeometry, GaussDriftDecaysGeometrically) {
  auto k = gauss_cantor_set(2);
  FiniteWord theta;
  for (int i = 0; i < 12; ++i) theta.push_back(i % 2);
  auto fit = limit_geometry_cauchy(k, theta, 2, 10);
  ASSERT_EQ(fit.distances.size(), 9u);
  for (std::size_t i = 1; i < fit.distances.size(); ++i) EXPECT_LT(fit.distances[i], fit.distances[i - 1]);
  const auto& b = k.derivative_bounds();
  EXPECT_GE(fit.ratio, b.c_min.to_double());
  EXPECT_LE(fit.ratio, b.c_max.to_double());
}
