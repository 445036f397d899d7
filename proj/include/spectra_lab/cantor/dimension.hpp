#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

#include "spectra_lab/cantor/regular_cantor_set.hpp"
#include "spectra_lab/core/perron.hpp"

namespace spectra_lab {

struct DimensionRow {
  int depth = 0;
  double lower = 0.0;
  double upper = 0.0;
  double estimate = 0.0;
};

struct DimensionEnclosure {
  double lower = 0.0;
  double upper = 0.0;
  double estimate = 0.0;  // root with mean contraction ratios at the working depth
  int depth = 0;
  bool converged = false;  // false: depth cap reached before tol
  std::vector<DimensionRow> history;

  double width() const { return upper - lower; }
  double midpoint() const { return 0.5 * (lower + upper); }
};

namespace detail {

struct GraphDirected {
  SparseMatrix lo;  // min |psi'| per transition, exponent applied later
  SparseMatrix hi;
  SparseMatrix mid;
};

// States are the admissible words of length n; state u feeds u' = u[1:] x through
// psi_{u0, u'0} restricted to I_{u'}.
inline GraphDirected graph_directed_system(const RegularCantorSet& k, int n, std::size_t state_cap) {
  auto level = cylinder_level(k, n, state_cap);
  const auto sym = static_cast<std::size_t>(k.symbol_count());
  std::size_t space = 1;
  for (int i = 0; i < n; ++i) {
    if (space > state_cap) throw resource_limit_error("graph-directed state space exceeds cap");
    space *= sym;
  }
  auto code = [sym](const FiniteWord& w) {
    std::size_t c = 0;
    for (int s : w) c = c * sym + static_cast<std::size_t>(s);
    return c;
  };
  std::vector<std::ptrdiff_t> index(space, -1);
  std::vector<std::array<double, 2>> ends(level.size());
  for (std::size_t i = 0; i < level.size(); ++i) {
    index[code(level[i].word)] = static_cast<std::ptrdiff_t>(i);
    ends[i] = {level[i].interval.lower_double(), level[i].interval.upper_double()};
  }
  constexpr double pad = 1e-14;
  GraphDirected g;
  const std::size_t tail_mod = space / sym;
  for (const auto& cyl : level) {
    std::vector<std::pair<std::size_t, double>> rlo, rhi, rmid;
    std::size_t shifted = (code(cyl.word) % tail_mod) * sym;
    for (int x : k.subshift().successors(cyl.word.back())) {
      std::ptrdiff_t j = index[shifted + static_cast<std::size_t>(x)];
      if (j < 0) continue;
      const FiniteWord& target = level[static_cast<std::size_t>(j)].word;
      const Mobius& m = k.branch(cyl.word.front(), target.front());
      double a = m.abs_derivative(ends[j][0]);
      double b = m.abs_derivative(ends[j][1]);
      double c = m.abs_derivative(0.5 * (ends[j][0] + ends[j][1]));
      auto col = static_cast<std::size_t>(j);
      rlo.push_back({col, std::min(a, b) * (1 - pad)});
      rhi.push_back({col, std::max(a, b) * (1 + pad)});
      rmid.push_back({col, c});
    }
    g.lo.add_row(rlo);
    g.hi.add_row(rhi);
    g.mid.add_row(rmid);
  }
  return g;
}

inline SparseMatrix powered(const SparseMatrix& m, double s, double nudge) {
  SparseMatrix r = m;
  for (double& v : r.val) v = std::pow(v, s) * nudge;
  return r;
}

// Largest s in [lo, hi] with accept(s) true, assuming accept is monotone (true then false).
inline double bisect_last_true(double lo, double hi, const std::function<bool(double)>& accept, int steps = 60) {
  for (int i = 0; i < steps && hi - lo > 1e-15; ++i) {
    double mid = 0.5 * (lo + hi);
    (accept(mid) ? lo : hi) = mid;
  }
  return lo;
}

// Smallest s in [lo, hi] with accept(s) true; hi is returned untested if nothing smaller passes.
inline double bisect_first_true(double lo, double hi, const std::function<bool(double)>& accept, int steps = 60) {
  for (int i = 0; i < steps && hi - lo > 1e-15; ++i) {
    double mid = 0.5 * (lo + hi);
    (accept(mid) ? hi : lo) = mid;
  }
  return hi;
}

}  // namespace detail

// Hausdorff dimension enclosure from the graph-directed system on depth-n cylinders:
// the root of rho(A_min(s)) = 1 bounds the dimension from below, rho(A_max(s)) = 1
// from above. Depth grows until the width is <= tol or depth_cap is reached.
inline DimensionEnclosure hausdorff_dim(const RegularCantorSet& k, double tol = 1e-6, int depth_cap = 16,
                                        std::size_t state_cap = std::size_t(1) << 20) {
  if (!(tol > 0)) throw std::invalid_argument("tol must be positive");
  DimensionEnclosure out;
  if (k.kind() == CantorKind::interval) {
    out.lower = out.upper = out.estimate = 1.0;
    out.converged = true;
    return out;
  }
  if (k.is_degenerate() || spectral_radius(k.subshift(), 1e-9).upper <= 1.0 + 1e-9) {
    out.converged = true;
    return out;
  }
  constexpr std::size_t iters = 100000;
  constexpr double rel = 1e-13;
  double lo = 0.0, hi = 1.0;
  for (int n = 1; n <= depth_cap; ++n) {
    auto g = detail::graph_directed_system(k, n, state_cap);
    double s_lo = detail::bisect_last_true(lo, hi, [&](double s) {
      return perron_bounds(detail::powered(g.lo, s, 1 - 1e-15), rel, iters, 1.0).lower >= 1.0;
    });
    double s_hi = detail::bisect_first_true(lo, hi, [&](double s) {
      return perron_bounds(detail::powered(g.hi, s, 1 + 1e-15), rel, iters, 1.0).upper <= 1.0;
    });
    lo = std::max(lo, s_lo);
    hi = std::min(hi, s_hi);
    double est = detail::bisect_last_true(lo, hi, [&](double s) {
      auto b = perron_bounds(detail::powered(g.mid, s, 1.0), rel, iters);
      return 0.5 * (b.lower + b.upper) >= 1.0;
    });
    out.history.push_back({n, lo, hi, est});
    out.lower = lo;
    out.upper = hi;
    out.estimate = est;
    out.depth = n;
    if (hi - lo <= tol) {
      out.converged = true;
      break;
    }
  }
  return out;
}

struct BoxCountRow {
  int depth = 0;
  double scale = 0.0;
  std::size_t count = 0;
};

struct BoxDimEstimate {
  double slope = 0.0;
  std::vector<BoxCountRow> rows;
};

namespace detail {

struct FloatCylinder {
  int last = 0;
  std::array<double, 4> map{1, 0, 0, 1};
  double lo = 0, hi = 0;
};

inline std::array<double, 4> float_matrix(const Mobius& m) {
  return {m.a.convert_to<double>(), m.b.convert_to<double>(), m.c.convert_to<double>(), m.d.convert_to<double>()};
}

inline std::array<double, 4> compose(const std::array<double, 4>& x, const std::array<double, 4>& y) {
  return {x[0] * y[0] + x[1] * y[2], x[0] * y[1] + x[1] * y[3], x[2] * y[0] + x[3] * y[2], x[2] * y[1] + x[3] * y[3]};
}

inline double apply_map(const std::array<double, 4>& m, double x) { return (m[0] * x + m[1]) / (m[2] * x + m[3]); }

class FloatCylinderTree {
 public:
  explicit FloatCylinderTree(const RegularCantorSet& k) : k_(k) {
    for (int a = 0; a < k.symbol_count(); ++a) {
      base_.push_back({k.base(a).lo.to_double(), k.base(a).hi.to_double()});
      for (int b : k.subshift().successors(a)) maps_[{a, b}] = float_matrix(k.branch(a, b));
    }
  }
  std::vector<FloatCylinder> roots() const {
    std::vector<FloatCylinder> out;
    for (int a = 0; a < k_.symbol_count(); ++a) out.push_back({a, {1, 0, 0, 1}, base_[a][0], base_[a][1]});
    return out;
  }
  std::vector<FloatCylinder> children(const FloatCylinder& c) const {
    std::vector<FloatCylinder> out;
    for (int b : k_.subshift().successors(c.last)) {
      FloatCylinder ch;
      ch.last = b;
      ch.map = compose(c.map, maps_.at({c.last, b}));
      double x = apply_map(ch.map, base_[b][0]);
      double y = apply_map(ch.map, base_[b][1]);
      ch.lo = std::min(x, y);
      ch.hi = std::max(x, y);
      out.push_back(ch);
    }
    return out;
  }

 private:
  const RegularCantorSet& k_;
  std::vector<std::array<double, 2>> base_;
  std::map<std::pair<int, int>, std::array<double, 4>> maps_;
};

}  // namespace detail

// Least-squares slope of log N(eps_n) against log(1/eps_n), n in [depth_lo, depth_hi].
// eps_n is the geometric mean length of the depth-n cylinders and N(eps) counts the
// stopping-time cover: cylinders of length <= eps whose parent is longer than eps.
inline BoxDimEstimate box_dim_estimate(const RegularCantorSet& k, int depth_lo, int depth_hi,
                                       std::size_t cap = std::size_t(1) << 24) {
  if (depth_lo < 1 || depth_hi - depth_lo + 1 < 3) throw std::invalid_argument("box_dim_estimate needs >= 3 depths");
  BoxDimEstimate out;
  if (k.kind() == CantorKind::interval) {
    out.slope = 1.0;
    return out;
  }
  if (k.is_degenerate()) return out;
  detail::FloatCylinderTree tree(k);
  for (int n = depth_lo; n <= depth_hi; ++n) {
    // geometric mean of depth-n lengths
    double log_sum = 0;
    std::size_t count = 0;
    std::vector<detail::FloatCylinder> level = tree.roots();
    for (int d = 1; d < n; ++d) {
      std::vector<detail::FloatCylinder> next;
      for (const auto& c : level)
        for (const auto& ch : tree.children(c)) next.push_back(ch);
      if (next.size() > cap) throw resource_limit_error("box_dim_estimate cylinder count exceeds cap");
      level = std::move(next);
    }
    for (const auto& c : level) {
      log_sum += std::log(c.hi - c.lo);
      ++count;
    }
    double eps = std::exp(log_sum / static_cast<double>(count));
    std::size_t covered = 0;
    std::vector<detail::FloatCylinder> stack = tree.roots();
    while (!stack.empty()) {
      auto c = stack.back();
      stack.pop_back();
      if (c.hi - c.lo <= eps * (1 + 1e-9)) {
        ++covered;
        continue;
      }
      for (const auto& ch : tree.children(c)) stack.push_back(ch);
      if (stack.size() > cap) throw resource_limit_error("box_dim_estimate cover exceeds cap");
    }
    out.rows.push_back({n, eps, covered});
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double m = static_cast<double>(out.rows.size());
  for (const auto& r : out.rows) {
    double x = std::log(1.0 / r.scale);
    double y = std::log(static_cast<double>(r.count));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  out.slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  return out;
}

}  // namespace spectra_lab
