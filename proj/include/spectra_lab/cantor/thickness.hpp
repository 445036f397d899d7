#pragma once

#include <algorithm>
#include <cstddef>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "spectra_lab/cantor/regular_cantor_set.hpp"

namespace spectra_lab {

struct GapBridge {
  ExactInterval gap;
  QuadraticSurd left_bridge;
  QuadraticSurd right_bridge;
  QuadraticSurd ratio;  // min(bridges) / |gap|
  std::size_t first_child = 0;  // children spanned by the two bridges
  std::size_t last_child = 0;
};

// Gaps between consecutive children of a parent cylinder, removed largest first; the
// bridges of a gap are the pieces of the parent left between it and the gaps removed
// before it.
inline std::vector<GapBridge> gap_bridges(const ExactInterval& parent, const std::vector<Cylinder>& kids) {
  std::vector<GapBridge> out;
  if (kids.size() < 2) return out;
  std::vector<ExactInterval> gaps;
  for (std::size_t i = 0; i + 1 < kids.size(); ++i) gaps.push_back({kids[i].interval.hi, kids[i + 1].interval.lo});
  std::vector<std::size_t> order(gaps.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return gaps[y].length() < gaps[x].length(); });
  std::vector<bool> removed(gaps.size(), false);
  for (std::size_t i : order) {
    // gap i sits between child i and child i + 1
    QuadraticSurd left_end = parent.lo;
    std::size_t first = 0;
    for (std::size_t j = i; j-- > 0;) {
      if (removed[j]) {
        left_end = gaps[j].hi;
        first = j + 1;
        break;
      }
    }
    QuadraticSurd right_end = parent.hi;
    std::size_t last = kids.size() - 1;
    for (std::size_t j = i + 1; j < gaps.size(); ++j) {
      if (removed[j]) {
        right_end = gaps[j].lo;
        last = j;
        break;
      }
    }
    removed[i] = true;
    if (gaps[i].length().sign() <= 0) continue;
    GapBridge g{gaps[i], gaps[i].lo - left_end, right_end - gaps[i].hi, 0, first, last};
    g.ratio = std::min(g.left_bridge, g.right_bridge) / gaps[i].length();
    out.push_back(std::move(g));
  }
  return out;
}

struct ParentThickness {
  FiniteWord word;
  std::size_t gaps = 0;
  double min_ratio = 0.0;      // exact minimum over this parent's gaps
  double slack_factor = 1.0;   // 1 - distortion slack, for parents at the working depth
};

struct ThicknessEstimate {
  int depth = 0;
  bool infinite = false;
  BigRational lower_bound = 0;
  std::optional<QuadraticSurd> exact_min;  // min exact ratio over parents of length <= depth
  // Every gap inside a child is shorter than each gap whose bridge runs through that child,
  // checked on parents of length < depth; otherwise bridges may be cut short.
  bool nested = true;
  std::vector<ParentThickness> ledger;

  double value() const { return infinite ? std::numeric_limits<double>::infinity() : lower_bound.convert_to<double>(); }
};

// Sound lower bound for the Newhouse thickness. Gaps inside parents of word length < depth
// are measured exactly. Every deeper parent is the image of a length-depth parent u under
// a composition of branches, whose ratios change by at most the factor
// 1 - L |I_u| / (1 - c_max) (bounded distortion), so those parents carry that slack.
inline ThicknessEstimate thickness(const RegularCantorSet& k, int depth) {
  if (depth < 1) throw std::invalid_argument("thickness needs depth >= 1");
  ThicknessEstimate out;
  out.depth = depth;
  if (k.kind() == CantorKind::interval) {
    out.infinite = true;
    return out;
  }
  const BigRational c_max = k.derivative_bounds().c_max.upper_rational(64);
  const BigRational spread = k.distortion_constant() / (1 - c_max);

  std::optional<BigRational> bound;
  std::vector<Cylinder> level{root_cylinder(k)};
  std::vector<std::optional<QuadraticSurd>> outer_gap{std::nullopt};  // shortest gap bridged through each cylinder
  for (int n = 0; n <= depth; ++n) {
    std::vector<Cylinder> next;
    std::vector<std::optional<QuadraticSurd>> next_outer;
    for (std::size_t p = 0; p < level.size(); ++p) {
      const Cylinder& parent = level[p];
      auto kids = children(k, parent);
      auto gb = gap_bridges(parent.interval, kids);
      std::vector<std::optional<QuadraticSurd>> bridged(kids.size(), outer_gap[p]);
      for (const auto& g : gb) {
        QuadraticSurd len = g.gap.length();
        if (outer_gap[p] && !(len < *outer_gap[p])) out.nested = false;
        for (std::size_t c = g.first_child; c <= g.last_child; ++c)
          bridged[c] = bridged[c] ? std::min(*bridged[c], len) : len;
      }
      if (!gb.empty()) {
        QuadraticSurd worst = gb.front().ratio;
        for (const auto& g : gb) worst = std::min(worst, g.ratio);
        out.exact_min = out.exact_min ? std::min(*out.exact_min, worst) : worst;
        BigRational candidate = worst.lower_rational(64);
        ParentThickness pt{parent.word, gb.size(), worst.to_double(), 1.0};
        if (n == depth) {
          BigRational slack = spread * parent.interval.length().upper_rational(64);
          BigRational factor = slack >= 1 ? BigRational(0) : 1 - slack;
          candidate *= factor;
          pt.slack_factor = factor.convert_to<double>();
        }
        bound = bound ? std::min(*bound, candidate) : candidate;
        out.ledger.push_back(std::move(pt));
      }
      if (n < depth) {
        for (std::size_t c = 0; c < kids.size(); ++c) {
          next.push_back(std::move(kids[c]));
          next_outer.push_back(bridged[c]);
        }
      }
    }
    level = std::move(next);
    outer_gap = std::move(next_outer);
  }
  // No gaps at all: a single point or a degenerate presentation.
  out.lower_bound = bound ? *bound : BigRational(0);
  return out;
}

// Upper bound for every gap of K inside the cylinder c, given a thickness lower bound tau:
// direct child gaps exactly, deeper gaps by |child| / (1 + 2 tau).
inline QuadraticSurd max_gap_bound(const RegularCantorSet& k, const Cylinder& c, const ThicknessEstimate& tau) {
  auto kids = children(k, c);
  QuadraticSurd worst = 0;
  for (std::size_t i = 0; i + 1 < kids.size(); ++i) worst = std::max(worst, kids[i + 1].interval.lo - kids[i].interval.hi);
  if (!tau.infinite) {
    QuadraticSurd denom = QuadraticSurd::rational(1 + 2 * tau.lower_bound);
    for (const auto& ch : kids) worst = std::max(worst, ch.interval.length() / denom);
  }
  return worst;
}

namespace detail {

// Does the closed interval h sit inside a bounded open gap of K?
inline bool inside_gap(const RegularCantorSet& k, const ExactInterval& h, int max_levels = 4096) {
  Cylinder c = root_cylinder(k);
  if (!c.interval.contains(h)) return false;
  const QuadraticSurd len = h.length();
  for (int level = 0; level < max_levels; ++level) {
    if (!(len < c.interval.length())) return false;
    auto kids = children(k, c);
    std::optional<Cylinder> holder;
    for (std::size_t i = 0; i < kids.size(); ++i) {
      if (i + 1 < kids.size() && kids[i].interval.hi < h.lo && h.hi < kids[i + 1].interval.lo) return true;
      if (kids[i].interval.contains(h)) holder = kids[i];
    }
    if (!holder) return false;
    c = std::move(*holder);
  }
  return false;
}

}  // namespace detail

enum class GapLemmaStatus { certified_nonempty, inconclusive, disjoint_hulls };

inline std::string to_string(GapLemmaStatus s) {
  switch (s) {
    case GapLemmaStatus::certified_nonempty:
      return "certified-nonempty";
    case GapLemmaStatus::inconclusive:
      return "inconclusive";
    case GapLemmaStatus::disjoint_hulls:
      return "disjoint-hulls";
  }
  return "?";
}

struct GapLemmaResult {
  GapLemmaStatus status = GapLemmaStatus::inconclusive;
  bool hulls_intersect = false;
  bool second_in_gap_of_first = false;
  bool first_in_gap_of_second = false;
  bool thick_enough = false;  // tau1 * tau2 > 1
};

inline bool thickness_product_exceeds(const ThicknessEstimate& a, const ThicknessEstimate& b, const BigRational& level) {
  if (a.infinite || b.infinite) {
    // infinity times zero stays undecided
    return (a.infinite || a.lower_bound > 0) && (b.infinite || b.lower_bound > 0);
  }
  return a.lower_bound * b.lower_bound > level;
}

// Newhouse gap lemma for K and K2 + t.
inline GapLemmaResult gap_lemma_test(const RegularCantorSet& k, const RegularCantorSet& k2, const BigRational& t,
                                     const ThicknessEstimate& tau1, const ThicknessEstimate& tau2) {
  GapLemmaResult r;
  QuadraticSurd shift = QuadraticSurd::rational(t);
  ExactInterval h1 = k.hull();
  ExactInterval h2 = k2.hull().translated(shift);
  r.hulls_intersect = h1.intersects(h2);
  if (!r.hulls_intersect) {
    r.status = GapLemmaStatus::disjoint_hulls;
    return r;
  }
  r.thick_enough = thickness_product_exceeds(tau1, tau2, 1);
  r.second_in_gap_of_first = detail::inside_gap(k, h2);
  r.first_in_gap_of_second = detail::inside_gap(k2, h1.translated(-shift));
  r.status = (r.thick_enough && !r.second_in_gap_of_first && !r.first_in_gap_of_second)
                 ? GapLemmaStatus::certified_nonempty
                 : GapLemmaStatus::inconclusive;
  return r;
}

inline int default_thickness_depth(const RegularCantorSet& k) { return k.is_affine() ? 1 : 6; }

inline GapLemmaResult gap_lemma_test(const RegularCantorSet& k, const RegularCantorSet& k2, const BigRational& t) {
  return gap_lemma_test(k, k2, t, thickness(k, default_thickness_depth(k)), thickness(k2, default_thickness_depth(k2)));
}

struct SweepPoint {
  BigRational t;
  GapLemmaStatus status;
};

struct SweepResult {
  std::vector<SweepPoint> points;
  std::vector<std::pair<BigRational, BigRational>> certified_ranges;  // maximal runs of certified grid points
  bool any_certified() const { return !certified_ranges.empty(); }
};

// Gap-lemma test on the grid a + i (b - a) / (steps - 1), i = 0..steps-1.
inline SweepResult stable_intersection_sweep(const RegularCantorSet& k, const RegularCantorSet& k2, const BigRational& a,
                                             const BigRational& b, int steps, const ThicknessEstimate& tau1,
                                             const ThicknessEstimate& tau2) {
  if (steps < 1) throw std::invalid_argument("sweep needs steps >= 1");
  if (b < a) throw std::invalid_argument("sweep range needs a <= b");
  SweepResult out;
  for (int i = 0; i < steps; ++i) {
    BigRational t = steps == 1 ? a : a + (b - a) * BigRational(i, steps - 1);
    out.points.push_back({t, gap_lemma_test(k, k2, t, tau1, tau2).status});
  }
  for (std::size_t i = 0; i < out.points.size();) {
    if (out.points[i].status != GapLemmaStatus::certified_nonempty) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j + 1 < out.points.size() && out.points[j + 1].status == GapLemmaStatus::certified_nonempty) ++j;
    out.certified_ranges.push_back({out.points[i].t, out.points[j].t});
    i = j + 1;
  }
  return out;
}

inline SweepResult stable_intersection_sweep(const RegularCantorSet& k, const RegularCantorSet& k2, const BigRational& a,
                                             const BigRational& b, int steps, std::optional<int> thickness_depth = {}) {
  if (steps < 1) throw std::invalid_argument("sweep needs steps >= 1");
  if (b < a) throw std::invalid_argument("sweep range needs a <= b");
  return stable_intersection_sweep(k, k2, a, b, steps, thickness(k, thickness_depth.value_or(default_thickness_depth(k))),
                                   thickness(k2, thickness_depth.value_or(default_thickness_depth(k2))));
}

// Necessary condition for K ∩ (K2 + t) != {}: some pair of depth-n cylinders of K and
// K2 + t intersect. Depth-first with exact endpoints; stops at the first surviving pair.
inline bool intersection_survives(const RegularCantorSet& k, const RegularCantorSet& k2, const BigRational& t,
                                  int depth, std::size_t node_cap = std::size_t(1) << 24) {
  if (depth < 0) throw std::invalid_argument("depth must be >= 0");
  const QuadraticSurd shift = QuadraticSurd::rational(t);
  struct Pair {
    Cylinder a, b;
    int level;
  };
  std::vector<Pair> stack{{root_cylinder(k), root_cylinder(k2), 0}};
  std::size_t visited = 0;
  while (!stack.empty()) {
    Pair p = std::move(stack.back());
    stack.pop_back();
    if (!p.a.interval.intersects(p.b.interval.translated(shift))) continue;
    if (p.level == depth) return true;
    if (++visited > node_cap) throw resource_limit_error("intersection cross-check exceeds node cap");
    auto ka = children(k, p.a);
    auto kb = children(k2, p.b);
    for (auto& x : ka)
      for (auto& y : kb) stack.push_back({x, y, p.level + 1});
  }
  return false;
}

}  // namespace spectra_lab
