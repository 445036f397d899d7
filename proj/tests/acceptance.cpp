// Acceptance gate: one PASS/FAIL line per criterion, exit status 1 if any criterion fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "oracles/oracles.hpp"
#include "spectra_lab/cantor/dimension.hpp"
#include "spectra_lab/cantor/limit_geometry.hpp"
#include "spectra_lab/cantor/sumset.hpp"
#include "spectra_lab/cantor/thickness.hpp"
#include "spectra_lab/cf/gauss_cantor.hpp"
#include "spectra_lab/models/avoidance.hpp"
#include "spectra_lab/models/cat_map.hpp"
#include "spectra_lab/models/horseshoe.hpp"
#include "spectra_lab/models/markov_partition.hpp"
#include "spectra_lab/spectra/cf_shift.hpp"
#include "spectra_lab/spectra/flow.hpp"

using namespace spectra_lab;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void criterion(const std::string& id, const std::string& name, double limit_s, const std::function<Outcome()>& body,
               bool counts = true) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (secs > limit_s) {
    o.pass = false;
    o.detail += "; runtime " + std::to_string(secs) + " s exceeds " + std::to_string(limit_s) + " s";
  }
  if (!o.pass && counts) ++failures;
  std::printf("%s %-4s %s: %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", id.c_str(), name.c_str(), o.detail.c_str(), secs);
  std::fflush(stdout);
}

std::string fmt(double x, int digits = 10) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return buf;
}

bool equivalent(const CertifiedReal& a, const CertifiedReal& b) { return compare(a, b) == std::partial_ordering::equivalent; }

// value == sqrt(radicand) / m, decided exactly
bool is_markov_value(const QuadraticSurd& v, const oracles::MarkovValue& o) {
  QuadraticSurd s = v * QuadraticSurd(o.m);
  return v.sign() > 0 && s * s == QuadraticSurd(o.radicand);
}

std::vector<QuadraticSurd> cf_values_below_3() {
  std::vector<QuadraticSurd> out;
  for (const auto& s : sample_spectrum(CFShiftSystem(2), height_observable(), 6))
    if (s.value.to_double() < 3.0) out.push_back(*s.value.exact());
  return out;
}

std::string join(const std::vector<QuadraticSurd>& v) {
  std::string s;
  for (const auto& x : v) s += (s.empty() ? "" : ", ") + x.to_string();
  return "{" + s + "}";
}

Outcome markov_set_matches(const std::vector<QuadraticSurd>& found, std::size_t oracle_count) {
  auto oracle = oracles::markov_values_below_3();
  oracle.resize(oracle_count);
  bool ok = found.size() == oracle.size();
  for (std::size_t i = 0; ok && i < found.size(); ++i) ok = is_markov_value(found[i], oracle[i]);
  std::string want;
  for (const auto& o : oracle) want += (want.empty() ? "" : ", ") + ("sqrt(" + std::to_string(o.radicand) + ")/" + std::to_string(o.m));
  return {ok, "sampled " + join(found) + " vs oracle {" + want + "}"};
}

}  // namespace

int main() {
  criterion("1", "classical spectrum bottom", 1.0, [] {
    auto samples = sample_spectrum(CFShiftSystem(2), height_observable(), 6);
    const auto& min = samples.front().value;
    bool ok = min.is_exact() && *min.exact() == QuadraticSurd::sqrt(5);
    return Outcome{ok, "min = " + min.to_string() + " at witness (" + samples.front().witness + ")"};
  });

  criterion("2", "discrete Markov values below 3", 10.0, [] { return markov_set_matches(cf_values_below_3(), 3); });
  criterion("2+", "full Markov-triple oracle m in {1,2,5,13,29} (supplementary)", 10.0,
            [] { return markov_set_matches(cf_values_below_3(), 5); }, false);

  criterion("3", "interval in C(4) + C(4)", 300.0, [] {
    auto k = gauss_cantor_set(4);
    ExactInterval target{QuadraticSurd::rational(BigRational(9, 10)), QuadraticSurd::rational(BigRational(11, 10))};
    auto cert = sumset_contains_interval(k, k, target, 14);
    return Outcome{cert.certified, std::string(cert.certified ? "certified" : "not certified") + ", depth " +
                                       std::to_string(cert.depth_used) + ", " + std::to_string(cert.nodes) + " nodes"};
  });

  criterion("4a", "middle-third dimension enclosure", 60.0, [] {
    const double exact = std::log(2.0) / std::log(3.0);
    auto d = hausdorff_dim(middle_third(), 1e-6);
    auto box = box_dim_estimate(middle_third(), 4, 12);
    bool ok = d.lower <= exact && exact <= d.upper && d.width() <= 1e-6 && std::abs(box.slope - d.midpoint()) <= 1e-2;
    return Outcome{ok, "[" + fmt(d.lower, 12) + ", " + fmt(d.upper, 12) + "] width " + fmt(d.width(), 3) +
                           ", box slope " + fmt(box.slope, 6)};
  });
  criterion("4b", "C(2) dimension vs periodic-point oracle", 60.0, [] {
    const double oracle = oracles::gauss_cantor_dimension(2, 8);
    auto d = hausdorff_dim(gauss_cantor_set(2), 1e-6);
    auto box = box_dim_estimate(gauss_cantor_set(2), 4, 12);
    bool ok = std::abs(d.midpoint() - oracle) <= 1e-4 && std::abs(box.slope - d.midpoint()) <= 1e-2;
    return Outcome{ok, "midpoint " + fmt(d.midpoint(), 12) + " vs oracle " + fmt(oracle, 12) + ", box slope " +
                           fmt(box.slope, 6)};
  });

  criterion("5", "horseshoe dimension additivity", 60.0, [] {
    auto h = affine_horseshoe(BigRational(1, 3), BigRational(1, 3));
    auto ds = hausdorff_dim(h.stable_set, 1e-8);
    auto du = hausdorff_dim(h.unstable_set, 1e-8);
    const double exact = 2 * std::log(2.0) / std::log(3.0);
    const double sum = ds.midpoint() + du.midpoint();
    const double width = ds.width() + du.width();
    bool ok = std::abs(h.dimension() - sum) <= 2 * width && std::abs(h.dimension() - exact) <= 1e-15 &&
              ds.lower + du.lower <= exact && exact <= ds.upper + du.upper;
    return Outcome{ok, "HD = " + fmt(h.dimension(), 15) + ", factors sum " + fmt(sum, 15) + " width " + fmt(width, 3)};
  });

  criterion("6", "avoidance dimensions approach the full value", 60.0, [] {
    auto m = markov_partition_cat();
    const int c = m.cell_of(TorusPoint{0, 0});
    std::string detail = "cat map:";
    double prev = -1.0, last = 0.0;
    bool increasing = true;
    for (int k = 2; k <= 6; ++k) {
      auto r = avoidance_subsystem(m, FiniteWord(static_cast<std::size_t>(k), c));
      last = invariant_set_dimension(m.automorphism, r.subsystem);
      increasing = increasing && last > prev;
      prev = last;
      detail += " " + fmt(last, 6);
    }
    auto s = avoid_word(SubshiftSFT::full_shift(2), FiniteWord(12, 1));
    const double sym = symbolic_dimension(s, 1.0 / 3);
    const double gap = std::log(2.0) / std::log(3.0) - sym;
    detail += "; symbolic n=12: " + fmt(sym, 8) + " (gap " + fmt(gap, 3) + ")";
    return Outcome{increasing && last > 1.95 && gap >= 0 && gap < 0.01, detail};
  });

  criterion("7", "flow-to-section inclusion", 60.0, [] {
    auto susp = suspend(TorusSystem(cat_map()), [](const TorusPoint&) { return 1.0; });
    FlowObservable<TorusPoint> f{
        "cos(2 pi x) + s", [](const TorusPoint& p, double s) { return std::cos(2 * M_PI * to_double(p.x)) + s; }, 1.0};
    auto r = flow_section_inclusion(susp, f, 3, 10);
    return Outcome{r.violations == 0 && !r.entries.empty(),
                   std::to_string(r.entries.size()) + " orbits, " + std::to_string(r.violations) + " violations"};
  });

  criterion("8", "spectrum property suite", 60.0, [] {
    CFShiftSystem sys(3);
    auto f = height_observable();
    auto g = f.scaled(3.0).shifted(-0.5);
    std::mt19937 rng(8);
    std::uniform_int_distribution<int> len(1, 3), center_len(0, 5), digit(1, 3), shift(-6, 6);
    auto draw = [&](int n) {
      std::vector<Digit> v;
      for (int i = 0; i < n; ++i) v.push_back(digit(rng));
      return v;
    };
    int lm = 0, orbit = 0, affine = 0;
    const CertifiedReal three(3), half(QuadraticSurd::rational(BigRational(1, 2)));
    for (int trial = 0; trial < 1000; ++trial) {
      auto x = CFSequence::make(draw(len(rng)), draw(center_len(rng)), draw(len(rng)));
      auto m = markov_value_at(sys, f, x);
      auto l = lagrange_value(sys, f, x).value;
      auto c = compare(l, m);
      if (c == std::partial_ordering::less || c == std::partial_ordering::equivalent) ++lm;
      if (equivalent(markov_value_at(sys, f, x.shifted(shift(rng))), m)) ++orbit;
      if (equivalent(markov_value_at(sys, g, x), m * three - half)) ++affine;
    }
    auto small = sample_spectrum(CFShiftSystem(2), f, 5);
    auto large = sample_spectrum(CFShiftSystem(3), f, 5);
    std::size_t contained = 0;
    for (const auto& s : small)
      for (const auto& t : large)
        if (equivalent(s.value, t.value)) {
          ++contained;
          break;
        }
    bool ok = lm == 1000 && orbit == 1000 && affine == 1000 && contained == small.size();
    return Outcome{ok, "L<=M " + std::to_string(lm) + "/1000, orbit " + std::to_string(orbit) + "/1000, affine " +
                           std::to_string(affine) + "/1000, subsystem " + std::to_string(contained) + "/" +
                           std::to_string(small.size())};
  });

  criterion("9", "limit-geometry convergence", 10.0, [] {
    auto k = gauss_cantor_set(2);
    FiniteWord theta;
    for (int i = 0; i < 12; ++i) theta.push_back(i % 2);
    auto fit = limit_geometry_cauchy(k, theta, 2, 10);
    const double c_min = k.derivative_bounds().c_min.to_double(), c_max = k.derivative_bounds().c_max.to_double();
    bool decaying = true;
    for (std::size_t i = 1; i < fit.distances.size(); ++i) decaying = decaying && fit.distances[i] < fit.distances[i - 1];
    auto affine = limit_geometry_cauchy(middle_third(), FiniteWord(12, 0), 2, 10);
    bool zero = std::all_of(affine.distances.begin(), affine.distances.end(), [](double d) { return d == 0.0; });
    bool ok = decaying && fit.ratio >= c_min && fit.ratio <= c_max && zero;
    return Outcome{ok, "ratio " + fmt(fit.ratio, 6) + " in [" + fmt(c_min, 6) + ", " + fmt(c_max, 6) + "], sup " +
                           fmt(fit.distances.front(), 3) + " -> " + fmt(fit.distances.back(), 3) +
                           (zero ? ", affine identically 0" : ", affine nonzero")};
  });

  criterion("10", "stable intersection sweep", 60.0, [] {
    auto k = affine_two_branch(BigRational(2, 5));
    auto sweep = stable_intersection_sweep(k, k, BigRational(-1, 2), BigRational(1, 2), 101);
    std::size_t certified = 0, survived = 0;
    for (const auto& p : sweep.points) {
      if (p.status != GapLemmaStatus::certified_nonempty) continue;
      ++certified;
      if (intersection_survives(k, k, p.t, 12)) ++survived;
    }
    return Outcome{sweep.any_certified() && survived == certified,
                   std::to_string(certified) + "/101 certified, " + std::to_string(survived) +
                       " survive depth-12 refinement"};
  });

  criterion("11", "cat-map periodic-point counts", 1.0, [] {
    auto t = cat_map();
    bool ok = true;
    std::string detail;
    for (int p = 1; p <= 10; ++p) {
      BigInt n = periodic_point_count(t, p);
      QuadraticSurd lp = 1;
      for (int i = 0; i < p; ++i) lp *= t.lambda;
      QuadraticSurd closed = lp + QuadraticSurd(1) / lp - QuadraticSurd(2);
      ok = ok && n == BigInt(oracles::cat_map_fixed_points(p)) && closed == QuadraticSurd(n);
      if (p == 1 || p == 10) detail += (detail.empty() ? "" : ", ") + ("p=" + std::to_string(p) + ": " + n.str());
    }
    return Outcome{ok, detail};
  });

  std::printf("summary: %d of 11 criteria failed\n", failures);
  return failures ? 1 : 0;
}
