#include <gtest/gtest.h>

#include <random>

#include "oracles/oracles.hpp"
#include "spectra_lab/models/avoidance.hpp"
#include "spectra_lab/models/cat_map.hpp"
#include "spectra_lab/models/horseshoe.hpp"
#include "spectra_lab/models/markov_partition.hpp"

using namespace spectra_lab;

TEST(CatMap, FixedPointCountsFollowTraceRecurrence) {
  auto t = cat_map();
  for (int p = 1; p <= 10; ++p) EXPECT_EQ(periodic_point_count(t, p), BigInt(oracles::cat_map_fixed_points(p))) << p;
}

TEST(CatMap, EnumeratedPointsAreFixedByThePower) {
  auto t = cat_map();
  for (int p = 1; p <= 5; ++p) {
    auto pts = periodic_points(t, p);
    EXPECT_EQ(static_cast<std::int64_t>(pts.size()), oracles::cat_map_fixed_points(p));
    IntMatrix2 mp = power(t.matrix, p);
    for (const auto& x : pts) EXPECT_EQ(apply_matrix(mp, x), x);
  }
}

TEST(CatMap, OrbitClassesPartitionPeriodicPoints) {
  TorusSystem sys(cat_map());
  auto orbits = sys.periodic_orbits(6);
  for (int p = 1; p <= 6; ++p) {
    std::int64_t total = 0;
    for (const auto& o : orbits)
      if (p % o.period == 0) total += o.period;
    EXPECT_EQ(total, oracles::cat_map_fixed_points(p)) << p;
  }
}

TEST(CatMap, RejectsNonHyperbolicMatrices) {
  EXPECT_THROW(toral_automorphism({1, 1, 0, 1}), std::invalid_argument);
  EXPECT_THROW(toral_automorphism({2, 1, 1, 2}), std::invalid_argument);
  EXPECT_THROW(toral_automorphism({0, 1, -1, 0}), std::invalid_argument);
}

TEST(MarkovPartition, CellsTileTheTorus) {
  auto m = markov_partition_cat();
  EXPECT_EQ(m.cells.size(), 5u);
  EXPECT_EQ(m.total_area(), QuadraticSurd(1));
  EXPECT_NEAR(spectral_radius(m.coding).mid(), m.automorphism.lambda.to_double(), 1e-10);
  EXPECT_NEAR(invariant_set_dimension(m.automorphism, m.coding), 2.0, 1e-10);
}

TEST(MarkovPartition, CodesOfOrbitsAreAdmissible) {
  auto m = markov_partition_cat();
  std::mt19937 rng(17);
  std::uniform_int_distribution<int> num(0, 996);
  for (int trial = 0; trial < 100; ++trial) {
    TorusPoint p{BigRational(num(rng), 997), BigRational(num(rng), 997)};
    auto w = m.code(p, 12);
    EXPECT_TRUE(m.coding.admissible(w)) << p.to_string();
  }
}

TEST(Avoidance, RemovingCellsLowersDimension) {
  auto m = markov_partition_cat();
  auto r = avoidance_subsystem(m, std::set<int>{0});
  EXPECT_FALSE(r.empty);
  EXPECT_LT(invariant_set_dimension(m.automorphism, r.subsystem), 2.0);
  std::set<int> all;
  for (int c = 0; c < static_cast<int>(m.cells.size()); ++c) all.insert(c);
  EXPECT_TRUE(avoidance_subsystem(m, all).empty);
  EXPECT_THROW(avoidance_subsystem(m, std::set<int>{9}), std::invalid_argument);
}

TEST(Avoidance, DeeperCellsCostLess) {
  auto m = markov_partition_cat();
  const int c = m.cell_of(TorusPoint{0, 0});
  double prev = 0.0;
  for (int k = 1; k <= 5; ++k) {
    auto r = avoidance_subsystem(m, FiniteWord(static_cast<std::size_t>(k), c));
    EXPECT_EQ(r.depth, k);
    double d = invariant_set_dimension(m.automorphism, r.subsystem);
    EXPECT_GT(d, prev);
    EXPECT_LT(d, 2.0);
    prev = d;
  }
}

TEST(Horseshoe, DimensionIsSumOfFactors) {
  auto h = affine_horseshoe(BigRational(1, 3), BigRational(1, 4));
  EXPECT_NEAR(h.dimension(), std::log(2.0) / std::log(3.0) + 0.5, 1e-15);
  auto rects = h.rectangles();
  EXPECT_EQ(rects[0][3], BigRational(1, 4));
  EXPECT_EQ(rects[1][2], BigRational(3, 4));
}

TEST(Horseshoe, PeriodicPointsLieInTheProductSet) {
  HorseshoeSystem sys(affine_horseshoe(BigRational(1, 3), BigRational(1, 3)));
  auto orbits = sys.periodic_orbits(5);
  std::size_t points = 0;
  for (const auto& o : orbits) {
    points += static_cast<std::size_t>(o.period);
    // points of the middle-third set have ternary expansions avoiding 1: check depth 8
    for (const auto& v : {o.point.x, o.point.y}) {
      BigRational z = v;
      for (int i = 0; i < 8; ++i) {
        z *= 3;
        BigInt digit = numerator(z) / denominator(z);
        EXPECT_NE(digit, BigInt(1)) << sys.describe(o.point);
        z -= BigRational(digit);
      }
    }
  }
  EXPECT_EQ(points, 2u + 2u + 6u + 12u + 30u);
}
