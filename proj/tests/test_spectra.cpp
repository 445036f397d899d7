#include <gtest/gtest.h>

#include <random>

#include "oracles/oracles.hpp"
#include "spectra_lab/models/cat_map.hpp"
#include "spectra_lab/models/horseshoe.hpp"
#include "spectra_lab/spectra/cf_shift.hpp"
#include "spectra_lab/spectra/flow.hpp"

using namespace spectra_lab;

namespace {

CFSequence random_sequence(std::mt19937& rng, int max_digit) {
  std::uniform_int_distribution<int> len(1, 3), center_len(0, 5), digit(1, max_digit);
  auto draw = [&](int n) {
    std::vector<Digit> v;
    for (int i = 0; i < n; ++i) v.push_back(digit(rng));
    return v;
  };
  return CFSequence::make(draw(len(rng)), draw(center_len(rng)), draw(len(rng)));
}

double oracle_height(const CFSequence& x, std::int64_t n) {
  return oracles::height([&](long long j) { return static_cast<long long>(x.digit(n + j)); });
}

bool exact_less_equal(const CertifiedReal& a, const CertifiedReal& b) {
  auto c = compare(a, b);
  return c == std::partial_ordering::less || c == std::partial_ordering::equivalent;
}

}  // namespace

TEST(CFShift, MarkovValuesBelowThreeAreMarkovTriples) {
  auto samples = sample_spectrum(CFShiftSystem(2), height_observable(), 6);
  std::vector<QuadraticSurd> below;
  for (const auto& s : samples)
    if (s.value.to_double() < 3.0) below.push_back(*s.value.exact());
  auto oracle = oracles::markov_values_below_3();
  ASSERT_EQ(below.size(), oracle.size());
  for (std::size_t i = 0; i < oracle.size(); ++i) {
    QuadraticSurd scaled = below[i] * QuadraticSurd(oracle[i].m);
    EXPECT_EQ(scaled * scaled, QuadraticSurd(oracle[i].radicand)) << below[i];
  }
  EXPECT_EQ(*samples.front().value.exact(), QuadraticSurd::sqrt(5));
  EXPECT_EQ(samples.front().witness, "1");
}

TEST(CFShift, MarkovNumbersOracleSanity) {
  EXPECT_EQ(oracles::markov_numbers(30), (std::vector<std::int64_t>{1, 2, 5, 13, 29}));
}

TEST(CFShift, SamplesAreSortedAndDistinct) {
  auto samples = sample_spectrum(CFShiftSystem(3), height_observable(), 4);
  for (std::size_t i = 1; i < samples.size(); ++i)
    EXPECT_EQ(compare(samples[i - 1].value, samples[i].value), std::partial_ordering::less);
}

TEST(CFShift, MarkovValueMatchesWindowedOracle) {
  CFShiftSystem sys(4);
  auto f = height_observable();
  std::mt19937 rng(3);
  for (int trial = 0; trial < 40; ++trial) {
    auto x = random_sequence(rng, 4);
    double oracle = 0.0;
    for (std::int64_t n = -60; n <= 60; ++n) oracle = std::max(oracle, oracle_height(x, n));
    EXPECT_NEAR(markov_value_at(sys, f, x).to_double(), oracle, 1e-10) << x.to_string();
    double tail = 0.0;
    for (std::int64_t n = 100; n < 124; ++n) tail = std::max(tail, oracle_height(x, n));
    EXPECT_NEAR(lagrange_value(sys, f, x).value.to_double(), tail, 1e-10) << x.to_string();
  }
}

TEST(CFShift, LagrangeBelowMarkovAndShiftInvariant) {
  CFShiftSystem sys(3);
  auto f = height_observable();
  std::mt19937 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    auto x = random_sequence(rng, 3);
    auto m = markov_value_at(sys, f, x);
    EXPECT_TRUE(exact_less_equal(lagrange_value(sys, f, x).value, m));
    EXPECT_EQ(compare(markov_value_at(sys, f, x.shifted(trial % 7 - 3)), m), std::partial_ordering::equivalent);
  }
}

TEST(CFShift, AffineEquivariance) {
  CFShiftSystem sys(2);
  auto f = height_observable();
  auto g = f.scaled(2.0).shifted(0.5);
  auto x = CFSequence::make({1, 2}, {2, 1, 1}, {1});
  auto m = markov_value_at(sys, f, x);
  auto mg = markov_value_at(sys, g, x);
  EXPECT_EQ(compare(mg, m * CertifiedReal(2) + CertifiedReal(QuadraticSurd::rational(BigRational(1, 2)))),
            std::partial_ordering::equivalent);
}

TEST(CFShift, OrbitMustCloseUp) {
  CFShiftSystem sys(2);
  Orbit<CFSequence> bad{CFSequence::periodic({1, 2}), 1, "1,2"};
  EXPECT_THROW(markov_value(sys, height_observable(), bad), std::invalid_argument);
  EXPECT_THROW(sample_spectrum(sys, height_observable(), 0), std::invalid_argument);
}

TEST(SpectrumReport, GapsRunsAndHistogram) {
  std::vector<double> v{1.0, 1.005, 1.01, 1.5, 1.505, 3.0};
  auto r = spectrum_report(v, 0.01);
  EXPECT_TRUE(r.nonrigorous);
  ASSERT_EQ(r.gaps.size(), 2u);
  EXPECT_DOUBLE_EQ(r.gaps[0].first, 1.01);
  EXPECT_DOUBLE_EQ(r.gaps[1].second, 3.0);
  ASSERT_TRUE(r.densest);
  EXPECT_EQ(r.densest->samples, 3u);
  std::size_t total = 0;
  for (const auto& [edge, count] : r.histogram) total += count;
  EXPECT_EQ(total, v.size());
  EXPECT_THROW(spectrum_report(std::vector<double>{2.0, 1.0}, 0.01), std::invalid_argument);
  EXPECT_FALSE(spectrum_report(std::vector<double>{}, 0.01).warnings.empty());
}

TEST(Horseshoe, CoordinateSumValuesAreExact) {
  HorseshoeSystem sys(affine_horseshoe(BigRational(1, 3), BigRational(1, 4)));
  auto samples = sample_spectrum(sys, horseshoe_coordinate_sum(), 4);
  for (const auto& s : samples) EXPECT_TRUE(s.value.is_exact());
  // fixed points (0,0) and (1,1)
  EXPECT_EQ(*samples.front().value.exact(), QuadraticSurd(0));
  EXPECT_EQ(*samples.back().value.exact(), QuadraticSurd(2));
  auto p = sys.make({0, 1});
  EXPECT_EQ(p.y, BigRational(1, 5));  // fixed point of y -> (y/4 + 3/4) / 4
  EXPECT_EQ(sys.inverse_iterate(sys.iterate(p)), p);
}

TEST(Horseshoe, RejectsOverlappingRectangles) {
  EXPECT_THROW(affine_horseshoe(BigRational(1, 2), BigRational(1, 3)), std::invalid_argument);
}

TEST(SuspensionFlow, FlowComposes) {
  auto susp = suspend(TorusSystem(cat_map()), [](const TorusPoint& p) { return 1.0 + 0.25 * to_double(p.x); });
  FlowPoint<TorusPoint> p{{BigRational(1, 2), BigRational(1, 2)}, 0.3};
  auto a = susp.flow(susp.flow(p, 1.7), 2.2);
  auto b = susp.flow(p, 3.9);
  EXPECT_EQ(a.base, b.base);
  EXPECT_NEAR(a.s, b.s, 1e-12);
  auto back = susp.flow(b, -3.9);
  EXPECT_EQ(back.base, p.base);
  EXPECT_NEAR(back.s, p.s, 1e-12);
  EXPECT_THROW(suspend(TorusSystem(cat_map()), [](const TorusPoint&) { return 0.0; }), std::invalid_argument);
}

TEST(SuspensionFlow, SectionMatchesFlowOracle) {
  auto susp = suspend(TorusSystem(cat_map()), [](const TorusPoint&) { return 1.0; });
  FlowObservable<TorusPoint> f{"cos(2 pi x) + s",
                               [](const TorusPoint& p, double s) { return std::cos(2 * M_PI * to_double(p.x)) + s; },
                               1.0};
  auto r = flow_section_inclusion(susp, f, 2);
  EXPECT_EQ(r.violations, 0u);
  EXPECT_TRUE(r.certified);
  // with unit roof the flow sup over a closed orbit is max cos(2 pi x_i) + 1
  auto orbits = susp.base().periodic_orbits(2);
  ASSERT_EQ(orbits.size(), r.entries.size());
  for (std::size_t i = 0; i < orbits.size(); ++i) {
    double oracle = -2.0;
    auto x = orbits[i].point;
    for (int k = 0; k < orbits[i].period; ++k, x = susp.base().iterate(x))
      oracle = std::max(oracle, std::cos(2 * M_PI * to_double(x.x)) + 1.0);
    EXPECT_NEAR(r.entries[i].section_value, oracle, 1e-6) << r.entries[i].witness;
    EXPECT_NEAR(r.entries[i].flow_value, oracle, 1e-3) << r.entries[i].witness;
  }
}
