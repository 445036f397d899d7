#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "spectra_lab/core/certified_real.hpp"
#include "spectra_lab/core/parallel.hpp"

namespace spectra_lab {

// A periodic orbit given by one of its points and its minimal period.
template <class Point>
struct Orbit {
  Point point;
  int period = 1;
  std::string witness;
};

template <class S>
concept DiscreteSystem = requires(const S& s, const typename S::Point& x, int p) {
  typename S::Point;
  { s.iterate(x) } -> std::convertible_to<typename S::Point>;
  { s.inverse_iterate(x) } -> std::convertible_to<typename S::Point>;
  { s.same_point(x, x) } -> std::convertible_to<bool>;
  { s.describe(x) } -> std::convertible_to<std::string>;
  { s.periodic_orbits(p) } -> std::convertible_to<std::vector<Orbit<typename S::Point>>>;
};

// Systems whose points carry a declared eventually periodic forward itinerary.
template <class S>
concept HasPeriodicTail = DiscreteSystem<S> && requires(const S& s, const typename S::Point& x) {
  { s.periodic_tail(x) } -> std::convertible_to<std::optional<Orbit<typename S::Point>>>;
};

// Systems that can list finitely many points whose values realize the two-sided sup.
template <class S>
concept HasMarkovSupport = DiscreteSystem<S> && requires(const S& s, const typename S::Point& x) {
  { s.markov_support(x) } -> std::convertible_to<std::vector<typename S::Point>>;
};

template <class V>
struct value_traits;

template <>
struct value_traits<CertifiedReal> {
  static bool less(const CertifiedReal& a, const CertifiedReal& b) {
    auto c = compare(a, b);
    if (c == std::partial_ordering::unordered) return a.to_double() < b.to_double();
    return c == std::partial_ordering::less;
  }
  static bool same(const CertifiedReal& a, const CertifiedReal& b) {
    if (a.exact_sum() && b.exact_sum()) return a == b;
    return std::abs(a.to_double() - b.to_double()) <= 1e-12;
  }
  static CertifiedReal max(const CertifiedReal& a, const CertifiedReal& b) { return CertifiedReal::max(a, b); }
  static CertifiedReal add(const CertifiedReal& a, double c) { return a + CertifiedReal(exact_constant(c)); }
  static CertifiedReal scale(const CertifiedReal& a, double c) { return a * CertifiedReal(exact_constant(c)); }
  static double to_double(const CertifiedReal& a) { return a.to_double(); }
  static std::optional<std::string> exact_string(const CertifiedReal& a) {
    if (a.exact_sum()) return a.to_string();
    return std::nullopt;
  }
  static bool is_exact(const CertifiedReal& a) { return a.exact_sum().has_value(); }

 private:
  static QuadraticSurd exact_constant(double c) { return QuadraticSurd::rational(rational_from_double(c)); }
};

template <>
struct value_traits<double> {
  static bool less(double a, double b) { return a < b; }
  static bool same(double a, double b) { return std::abs(a - b) <= 1e-12; }
  static double max(double a, double b) { return std::max(a, b); }
  static double add(double a, double c) { return a + c; }
  static double scale(double a, double c) { return a * c; }
  static double to_double(double a) { return a; }
  static std::optional<std::string> exact_string(double) { return std::nullopt; }
  static bool is_exact(double) { return false; }
};

template <class Point, class V>
struct Observable {
  std::string label;
  std::function<V(const Point&)> evaluate;
  std::optional<double> lipschitz;  // unset: exact evaluation

  V operator()(const Point& x) const { return evaluate(x); }

  Observable shifted(double c) const {
    auto f = evaluate;
    return {label + " + c", [f, c](const Point& x) { return value_traits<V>::add(f(x), c); }, lipschitz};
  }
  Observable scaled(double c) const {
    if (!(c > 0)) throw std::invalid_argument("observable scale must be positive");
    auto f = evaluate;
    std::optional<double> l = lipschitz ? std::optional<double>(*lipschitz * c) : std::nullopt;
    return {label + " * c", [f, c](const Point& x) { return value_traits<V>::scale(f(x), c); }, l};
  }
};

template <class Point>
Observable<Point, CertifiedReal> constant_observable(long long c) {
  return {"constant", [c](const Point&) { return CertifiedReal(c); }, std::nullopt};
}

enum class SpectrumKind { markov, lagrange };

inline std::string to_string(SpectrumKind k) { return k == SpectrumKind::markov ? "markov" : "lagrange"; }

template <class V>
struct SpectrumSample {
  V value;
  std::string witness;
  int period = 0;
  SpectrumKind kind = SpectrumKind::markov;
  int horizon = 0;    // positions examined: one period, or transient plus period
  int argmax = 0;     // offset along the orbit where the max is attained
};

namespace detail {

template <DiscreteSystem S, class V>
SpectrumSample<V> max_over_orbit(const S& sys, const Observable<typename S::Point, V>& f,
                                 const Orbit<typename S::Point>& orbit) {
  if (orbit.period < 1) throw std::invalid_argument("orbit period must be >= 1");
  using T = value_traits<V>;
  typename S::Point x = orbit.point;
  SpectrumSample<V> out{f(x), orbit.witness, orbit.period, SpectrumKind::markov, orbit.period, 0};
  for (int i = 1; i < orbit.period; ++i) {
    x = sys.iterate(x);
    V v = f(x);
    if (T::less(out.value, v)) {
      out.value = v;
      out.argmax = i;
    }
  }
  if (!sys.same_point(sys.iterate(x), orbit.point))
    throw std::invalid_argument("orbit does not close up after its period: " + orbit.witness);
  return out;
}

}  // namespace detail

// sup of f over the orbit; the orbit is checked to close up under iterate.
template <DiscreteSystem S, class V>
SpectrumSample<V> markov_value(const S& sys, const Observable<typename S::Point, V>& f,
                               const Orbit<typename S::Point>& orbit) {
  return detail::max_over_orbit(sys, f, orbit);
}

// sup over n in Z of f(phi^n x) for an arbitrary point whose system can bound the sup
// by finitely many points.
template <HasMarkovSupport S, class V>
V markov_value_at(const S& sys, const Observable<typename S::Point, V>& f, const typename S::Point& x) {
  auto support = sys.markov_support(x);
  if (support.empty()) throw std::invalid_argument("empty markov support");
  V best = f(support.front());
  for (std::size_t i = 1; i < support.size(); ++i) best = value_traits<V>::max(best, f(support[i]));
  return best;
}

// limsup over forward iterates: the max over the periodic tail.
template <HasPeriodicTail S, class V>
SpectrumSample<V> lagrange_value(const S& sys, const Observable<typename S::Point, V>& f, const typename S::Point& x) {
  auto tail = sys.periodic_tail(x);
  if (!tail) throw std::invalid_argument("point has no declared periodic tail");
  auto s = detail::max_over_orbit(sys, f, *tail);
  s.kind = SpectrumKind::lagrange;
  s.witness = sys.describe(x);
  return s;
}

// Markov values of all periodic orbit classes of period <= max_period, sorted ascending,
// equal values merged (the first witness in (period, witness) order is kept).
template <DiscreteSystem S, class V>
std::vector<SpectrumSample<V>> sample_spectrum(const S& sys, const Observable<typename S::Point, V>& f,
                                               int max_period) {
  if (max_period < 1) throw std::invalid_argument("max_period must be >= 1");
  using T = value_traits<V>;
  auto orbits = sys.periodic_orbits(max_period);
  std::function<SpectrumSample<V>(std::size_t)> eval = [&](std::size_t i) { return markov_value(sys, f, orbits[i]); };
  auto samples = parallel_map<SpectrumSample<V>>(orbits.size(), eval);
  std::sort(samples.begin(), samples.end(), [](const SpectrumSample<V>& a, const SpectrumSample<V>& b) {
    if (T::less(a.value, b.value)) return true;
    if (T::less(b.value, a.value)) return false;
    if (a.period != b.period) return a.period < b.period;
    return a.witness < b.witness;
  });
  std::vector<SpectrumSample<V>> out;
  for (auto& s : samples) {
    if (!out.empty() && T::same(out.back().value, s.value)) continue;
    out.push_back(std::move(s));
  }
  return out;
}

struct SpectrumRun {
  double lo = 0.0;
  double hi = 0.0;
  std::size_t samples = 0;
};

struct SpectrumReport {
  bool nonrigorous = true;
  double resolution = 0.0;
  std::size_t sample_count = 0;
  std::optional<double> min;
  std::optional<double> max;
  std::vector<std::pair<double, double>> gaps;  // consecutive samples further apart than resolution
  std::optional<SpectrumRun> densest;           // run with the most samples
  std::optional<SpectrumRun> longest;           // run with the largest extent
  std::vector<std::pair<double, std::size_t>> histogram;  // (bin left edge, count), bin width = resolution
  std::vector<std::string> warnings;
};

// Heuristic coverage picture of sorted sample values. A run is a maximal chain of samples
// with consecutive spacing <= resolution.
inline SpectrumReport spectrum_report(const std::vector<double>& values, double resolution) {
  if (!(resolution > 0)) throw std::invalid_argument("resolution must be positive");
  SpectrumReport r;
  r.resolution = resolution;
  r.sample_count = values.size();
  if (values.empty()) {
    r.warnings.push_back("no samples");
    return r;
  }
  if (!std::is_sorted(values.begin(), values.end())) throw std::invalid_argument("spectrum_report needs sorted samples");
  r.min = values.front();
  r.max = values.back();
  SpectrumRun cur{values.front(), values.front(), 1};
  auto close_run = [&](const SpectrumRun& run) {
    if (!r.densest || run.samples > r.densest->samples) r.densest = run;
    if (!r.longest || run.hi - run.lo > r.longest->hi - r.longest->lo) r.longest = run;
  };
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] - values[i - 1] > resolution) {
      r.gaps.push_back({values[i - 1], values[i]});
      close_run(cur);
      cur = {values[i], values[i], 1};
    } else {
      cur.hi = values[i];
      ++cur.samples;
    }
  }
  close_run(cur);
  const double base = std::floor(values.front() / resolution) * resolution;
  std::map<long long, std::size_t> bins;
  for (double v : values) ++bins[static_cast<long long>(std::floor((v - base) / resolution))];
  for (const auto& [b, c] : bins) r.histogram.push_back({base + static_cast<double>(b) * resolution, c});
  return r;
}

template <class V>
SpectrumReport spectrum_report(const std::vector<SpectrumSample<V>>& samples, double resolution) {
  std::vector<double> values;
  for (const auto& s : samples) values.push_back(value_traits<V>::to_double(s.value));
  return spectrum_report(values, resolution);
}

}  // namespace spectra_lab
