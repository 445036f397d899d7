#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "spectra_lab/spectra/engine.hpp"

namespace spectra_lab {

template <class Point>
struct FlowPoint {
  Point base;
  double s = 0.0;  // fiber time, 0 <= s < roof(base)
};

template <class Point>
struct FlowObservable {
  std::string label;
  std::function<double(const Point&, double)> evaluate;
  std::optional<double> lipschitz_time;  // Lipschitz constant in the fiber time

  double operator()(const Point& x, double s) const { return evaluate(x, s); }
};

// Suspension of base under roof: (x, roof(x)) is identified with (base(x), 0).
template <DiscreteSystem S>
class SuspensionFlow {
 public:
  using Point = typename S::Point;

  SuspensionFlow(S base, std::function<double(const Point&)> roof, std::string roof_label = "roof")
      : base_(std::move(base)), roof_(std::move(roof)), roof_label_(std::move(roof_label)) {}

  const S& base() const { return base_; }
  double roof(const Point& x) const { return roof_(x); }
  const std::string& roof_label() const { return roof_label_; }

  // phi^t(x, s) by composing whole fiber passages.
  FlowPoint<Point> flow(const FlowPoint<Point>& p, double t) const {
    FlowPoint<Point> q = p;
    double s = q.s + t;
    while (s >= roof(q.base)) {
      s -= roof(q.base);
      q.base = base_.iterate(q.base);
    }
    while (s < 0) {
      q.base = base_.inverse_iterate(q.base);
      s += roof(q.base);
    }
    q.s = s;
    return q;
  }

  // Period of the closed flow orbit through a periodic base orbit.
  double orbit_period(const Orbit<Point>& orbit) const {
    double total = 0.0;
    Point x = orbit.point;
    for (int i = 0; i < orbit.period; ++i) {
      total += roof(x);
      x = base_.iterate(x);
    }
    return total;
  }

 private:
  S base_;
  std::function<double(const Point&)> roof_;
  std::string roof_label_;
};

// Checks roof > 0 on every periodic point up to check_period.
template <DiscreteSystem S>
SuspensionFlow<S> suspend(S base, std::function<double(const typename S::Point&)> roof, std::string label = "roof",
                          int check_period = 3) {
  for (const auto& o : base.periodic_orbits(check_period)) {
    auto x = o.point;
    for (int i = 0; i < o.period; ++i) {
      double r = roof(x);
      if (!(r > 0)) throw std::invalid_argument("roof must be positive; got " + std::to_string(r) + " at " + base.describe(x));
      x = base.iterate(x);
    }
  }
  return SuspensionFlow<S>(std::move(base), std::move(roof), std::move(label));
}

struct FlowMax {
  double value = 0.0;
  bool certified = false;      // true when a Lipschitz hint bounds the sampling error
  double error_bound = 0.0;    // true max <= value + error_bound when certified
};

inline constexpr int kFlowSamplesPerSegment = 64;

namespace detail {

// Max of g on [0, len]: grid of `samples` steps, then golden-section search on the two
// cells around the grid argmax.
inline std::pair<double, double> segment_max(const std::function<double(double)>& g, double len, int samples) {
  const double h = len / samples;
  int best = 0;
  double best_v = g(0.0);
  for (int k = 1; k <= samples; ++k) {
    double v = g(k * h);
    if (v > best_v) {
      best_v = v;
      best = k;
    }
  }
  double a = std::max(0.0, (best - 1) * h), b = std::min(len, (best + 1) * h);
  const double inv_phi = (std::sqrt(5.0) - 1) / 2;
  double c = b - inv_phi * (b - a), d = a + inv_phi * (b - a);
  double gc = g(c), gd = g(d);
  for (int it = 0; it < 60 && b - a > 1e-15; ++it) {
    if (gc > gd) {
      b = d;
      d = c;
      gd = gc;
      c = b - inv_phi * (b - a);
      gc = g(c);
    } else {
      a = c;
      c = d;
      gc = gd;
      d = a + inv_phi * (b - a);
      gd = g(d);
    }
  }
  return {std::max({best_v, gc, gd}), h};
}

}  // namespace detail

// max F over the flow segment from the previous return to the next return through (x, 0).
template <DiscreteSystem S>
FlowMax max_f_flow(const SuspensionFlow<S>& susp, const FlowObservable<typename S::Point>& f,
                   const typename S::Point& x, int samples = kFlowSamplesPerSegment) {
  if (samples < 1) throw std::invalid_argument("samples must be >= 1");
  auto prev = susp.base().inverse_iterate(x);
  FlowMax out;
  double h = 0.0;
  bool first = true;
  for (const auto& p : {prev, x}) {
    auto [v, step] = detail::segment_max([&](double s) { return f(p, s); }, susp.roof(p), samples);
    out.value = first ? v : std::max(out.value, v);
    h = std::max(h, step);
    first = false;
  }
  if (f.lipschitz_time) {
    out.certified = true;
    out.error_bound = *f.lipschitz_time * h / 2;
  }
  return out;
}

// sup of F over the closed flow orbit of a periodic base orbit, sampled per fiber.
template <DiscreteSystem S>
FlowMax flow_orbit_max(const SuspensionFlow<S>& susp, const FlowObservable<typename S::Point>& f,
                       const Orbit<typename S::Point>& orbit, int samples) {
  FlowMax out;
  auto x = orbit.point;
  double h = 0.0;
  for (int i = 0; i < orbit.period; ++i) {
    auto [v, step] = detail::segment_max([&](double s) { return f(x, s); }, susp.roof(x), samples);
    out.value = i == 0 ? v : std::max(out.value, v);
    h = std::max(h, step);
    x = susp.base().iterate(x);
  }
  if (f.lipschitz_time) {
    out.certified = true;
    out.error_bound = *f.lipschitz_time * h / 2;
  }
  return out;
}

struct InclusionEntry {
  std::string witness;
  int period = 0;
  double section_value = 0.0;  // markov value of maxF over the base orbit
  double flow_value = 0.0;     // sup of F over the closed flow orbit
  bool ok = true;
};

struct InclusionReport {
  std::vector<InclusionEntry> entries;
  std::size_t violations = 0;
  double tolerance = 0.0;
  bool certified = false;
};

// For each periodic base orbit, the Markov value of the section observable maxF equals the
// flow Markov value of F over the suspended closed orbit. The flow side is sampled
// oracle_refinement times finer than maxF.
template <DiscreteSystem S>
InclusionReport flow_section_inclusion(const SuspensionFlow<S>& susp, const FlowObservable<typename S::Point>& f,
                                       int max_period, int oracle_refinement = 10, double tolerance = 1e-9) {
  if (max_period < 1) throw std::invalid_argument("max_period must be >= 1");
  InclusionReport r;
  r.tolerance = tolerance;
  r.certified = f.lipschitz_time.has_value();
  Observable<typename S::Point, double> section{
      "max " + f.label, [&](const typename S::Point& x) { return max_f_flow(susp, f, x).value; }, std::nullopt};
  for (const auto& orbit : susp.base().periodic_orbits(max_period)) {
    InclusionEntry e;
    e.witness = orbit.witness;
    e.period = orbit.period;
    e.section_value = markov_value(susp.base(), section, orbit).value;
    auto oracle = flow_orbit_max(susp, f, orbit, kFlowSamplesPerSegment * oracle_refinement);
    e.flow_value = oracle.value;
    double allowed = tolerance;
    if (f.lipschitz_time) {
      double longest = 0.0;
      auto x = orbit.point;
      for (int i = 0; i < orbit.period; ++i, x = susp.base().iterate(x)) longest = std::max(longest, susp.roof(x));
      allowed += *f.lipschitz_time * longest / kFlowSamplesPerSegment;
    }
    e.ok = std::abs(e.section_value - e.flow_value) <= allowed;
    if (!e.ok) ++r.violations;
    r.entries.push_back(std::move(e));
  }
  return r;
}

}  // namespace spectra_lab
