#include <gtest/gtest.h>

#include <random>

#include "oracles/oracles.hpp"
#include "spectra_lab/cf/continued_fraction.hpp"
#include "spectra_lab/cf/gauss_cantor.hpp"

using namespace spectra_lab;

namespace {

double cf_double(const std::vector<Digit>& prefix, const std::vector<Digit>& period) {
  std::vector<Digit> digits = prefix;
  for (int rep = 0; rep < 60; ++rep) digits.insert(digits.end(), period.begin(), period.end());
  double x = 0.0;
  for (std::size_t i = digits.size(); i-- > 1;) x = 1.0 / (static_cast<double>(digits[i]) + x);
  return static_cast<double>(digits[0]) + x;
}

CFSequence random_sequence(std::mt19937& rng, int max_digit) {
  std::uniform_int_distribution<int> len(1, 3), center_len(0, 4), digit(1, max_digit);
  auto draw = [&](int n) {
    std::vector<Digit> v;
    for (int i = 0; i < n; ++i) v.push_back(digit(rng));
    return v;
  };
  return CFSequence::make(draw(len(rng)), draw(center_len(rng)), draw(len(rng)));
}

}  // namespace

TEST(ContinuedFraction, PeriodicValuesAreExactSurds) {
  QuadraticSurd r5 = QuadraticSurd::sqrt(5);
  EXPECT_EQ(periodic_cf_value({1}), (QuadraticSurd(1) + r5) / QuadraticSurd(2));
  EXPECT_EQ(periodic_cf_value({2}), QuadraticSurd(1) + QuadraticSurd::sqrt(2));
  EXPECT_EQ(periodic_cf_value({1, 2}), (QuadraticSurd(1) + QuadraticSurd::sqrt(3)) / QuadraticSurd(2));
  EXPECT_EQ(cf_value({{0, 1}, {2}}), QuadraticSurd(1) / QuadraticSurd::sqrt(2));
}

TEST(ContinuedFraction, ValuesMatchFloatingEvaluation) {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> digit(1, 5), len(0, 4), plen(1, 4);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Digit> prefix, period;
    for (int i = len(rng); i > 0; --i) prefix.push_back(digit(rng));
    for (int i = plen(rng); i > 0; --i) period.push_back(digit(rng));
    if (prefix.empty()) prefix.push_back(0);
    EXPECT_NEAR(cf_value({prefix, period}).to_double(), cf_double(prefix, period), 1e-12);
  }
}

TEST(ContinuedFraction, ConvergentsOfGoldenRatioAreFibonacciRatios) {
  auto c = convergents({{1}, {1}}, 10);
  std::vector<long long> fib{1, 1, 2, 3, 5, 8, 13, 21, 34, 55, 89, 144};
  ASSERT_EQ(c.size(), 10u);
  for (std::size_t k = 0; k < c.size(); ++k) EXPECT_EQ(c[k], BigRational(fib[k + 1], fib[k])) << k;
}

TEST(ContinuedFraction, InvalidDigitsAreRejected) {
  EXPECT_THROW(cf_value({{1, 0}, {1}}), std::invalid_argument);
  EXPECT_THROW(CFSequence::make({1}, {}, {}), std::invalid_argument);
  EXPECT_THROW(CFSequence::make({1}, {0}, {1}), std::invalid_argument);
}

TEST(CFSequence, EqualityIgnoresRepresentation) {
  EXPECT_EQ(CFSequence::periodic({1, 2}), CFSequence::periodic({1, 2, 1, 2}));
  EXPECT_EQ(CFSequence::periodic({1, 2}).shifted(2), CFSequence::periodic({1, 2}));
  EXPECT_FALSE(CFSequence::periodic({1, 2}).shifted(1) == CFSequence::periodic({1, 2}));
  auto x = CFSequence::make({1}, {2, 2}, {1});
  EXPECT_EQ(x.shifted(3).shifted(-3), x);
}

TEST(CFSequence, JsonRoundTrip) {
  auto x = CFSequence::make({1, 2}, {3, 1, 4}, {2});
  nlohmann::json j = x;
  auto y = j.get<CFSequence>();
  EXPECT_EQ(y, x);
  EXPECT_EQ(y.origin, x.origin);
}

TEST(HeightFunction, ClassicalValues) {
  EXPECT_EQ(*height_function(CFSequence::periodic({1}), 0).exact(), QuadraticSurd::sqrt(5));
  EXPECT_EQ(*height_function(CFSequence::periodic({2}), 0).exact(), QuadraticSurd(2) * QuadraticSurd::sqrt(2));
}

TEST(HeightFunction, MatchesFloatingOracle) {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    auto x = random_sequence(rng, 4);
    for (std::int64_t pos = -3; pos <= 5; ++pos) {
      double oracle = oracles::height([&](long long j) { return static_cast<long long>(x.digit(pos + j)); });
      EXPECT_NEAR(height_function(x, pos).to_double(), oracle, 1e-11) << x.to_string() << " at " << pos;
    }
  }
}

TEST(GaussCantor, HullAndBranches) {
  auto k = gauss_cantor_set(2);
  EXPECT_EQ(k.symbol_count(), 2);
  EXPECT_NEAR(k.hull().lo.to_double(), cf_double({0}, {2, 1}), 1e-14);
  EXPECT_NEAR(k.hull().hi.to_double(), cf_double({0}, {1, 2}), 1e-14);
  EXPECT_EQ(k.hull().lo, (QuadraticSurd::sqrt(3) - QuadraticSurd(1)) / QuadraticSurd(2));
  EXPECT_EQ(k.label(), "gauss:2");
  EXPECT_THROW(gauss_cantor_set(0), std::invalid_argument);
}
