#pragma once

// Reference values computed from first principles with plain integers and doubles. Nothing
// here calls into the library, so agreement with it is an independent check.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

namespace oracles {

// Markov triples (1,1,1) (1,1,2) (1,2,5) (1,5,13) (2,5,29): value sqrt(9m^2 - 4) / m.
struct MarkovValue {
  std::int64_t m;
  std::int64_t radicand;  // 9 m^2 - 4
  double value;
};

inline std::vector<MarkovValue> markov_values_below_3() {
  std::vector<MarkovValue> out;
  for (std::int64_t m : {1, 2, 5, 13, 29}) {
    std::int64_t rad = 9 * m * m - 4;
    out.push_back({m, rad, std::sqrt(static_cast<double>(rad)) / static_cast<double>(m)});
  }
  return out;
}

// Markov numbers reached from (1,1,1) by Vieta moves, up to bound.
inline std::vector<std::int64_t> markov_numbers(std::int64_t bound) {
  std::vector<std::int64_t> found{1};
  std::vector<std::array<std::int64_t, 3>> stack{{1, 1, 1}};
  std::vector<std::array<std::int64_t, 3>> seen;
  while (!stack.empty()) {
    auto t = stack.back();
    stack.pop_back();
    std::sort(t.begin(), t.end());
    if (std::find(seen.begin(), seen.end(), t) != seen.end()) continue;
    seen.push_back(t);
    for (int i = 0; i < 3; ++i) {
      auto u = t;
      u[i] = 3 * t[(i + 1) % 3] * t[(i + 2) % 3] - t[i];
      if (u[i] <= 0 || u[i] > bound) continue;
      if (std::find(found.begin(), found.end(), u[i]) == found.end()) found.push_back(u[i]);
      stack.push_back(u);
    }
  }
  std::sort(found.begin(), found.end());
  return found;
}

// Trace of [[2,1],[1,1]]^p by t_p = 3 t_{p-1} - t_{p-2}; the number of fixed points of the
// p-th iterate on the torus is |det(A^p - I)| = t_p - 2.
inline std::int64_t cat_map_fixed_points(int p) {
  std::int64_t a = 2, b = 3;  // t_0, t_1
  for (int i = 1; i < p; ++i) {
    std::int64_t c = 3 * b - a;
    a = b;
    b = c;
  }
  return (p == 0 ? a : b) - 2;
}

// Cyclic words of length p over an alphabet of size n with every consecutive pair (including
// the wrap-around) allowed. Brute force over all n^p words.
inline std::int64_t cyclic_word_count(int n, const std::vector<std::vector<int>>& allowed, int p) {
  std::vector<int> w(static_cast<std::size_t>(p), 0);
  std::int64_t count = 0;
  while (true) {
    bool ok = true;
    for (int i = 0; i < p && ok; ++i) ok = allowed[w[i]][w[(i + 1) % p]] != 0;
    if (ok) ++count;
    int i = 0;
    while (i < p && ++w[i] == n) w[i++] = 0;
    if (i == p) return count;
  }
}

// Growth rate of binary strings avoiding `pattern`, from exact DP counts over suffix states.
inline double avoiding_growth_rate(const std::vector<int>& pattern, int length = 400) {
  const std::size_t k = pattern.size();
  // state: longest suffix that is a proper prefix of pattern (KMP automaton)
  auto next_state = [&](std::size_t s, int c) {
    std::vector<int> w(pattern.begin(), pattern.begin() + static_cast<std::ptrdiff_t>(s));
    w.push_back(c);
    for (std::size_t len = std::min(w.size(), k); len > 0; --len)
      if (std::equal(w.end() - static_cast<std::ptrdiff_t>(len), w.end(), pattern.begin())) return len;
    return std::size_t(0);
  };
  std::vector<double> count(k, 0.0);
  count[0] = 1.0;
  double prev = 1.0, ratio = 0.0;
  for (int n = 0; n < length; ++n) {
    std::vector<double> next(k, 0.0);
    for (std::size_t s = 0; s < k; ++s)
      for (int c : {0, 1}) {
        std::size_t t = next_state(s, c);
        if (t < k) next[t] += count[s];
      }
    double total = 0.0;
    for (double v : next) total += v;
    ratio = total / prev;
    for (double& v : next) v /= total;  // keep the numbers bounded
    count = next;
    prev = 1.0;
  }
  return ratio;
}

// Dimension of the Gauss Cantor set with digits 1..n as the zero of the dynamical
// determinant det(1 - L_s) truncated at order max_period. Traces come from periodic points:
// tr L_s^p = sum over words w of length p of |D_w|^s / (1 - D_w), where D_w is the
// derivative of the inverse-branch composition at its fixed point.
inline double gauss_cantor_dimension(int n, int max_period = 8) {
  struct Orbit {
    int p;
    double derivative;
  };
  std::vector<Orbit> orbits;
  for (int p = 1; p <= max_period; ++p) {
    std::vector<int> w(static_cast<std::size_t>(p), 1);
    while (true) {
      double d = 1.0;
      for (int i = 0; i < p; ++i) {
        // x_i = [0; w_i, w_{i+1}, ...] periodic, evaluated from a long tail
        double x = 0.0;
        for (int rep = 0; rep < 80; ++rep)
          for (int j = p - 1; j >= 0; --j) x = 1.0 / (w[(i + j) % p] + x);
        d *= -x * x;
      }
      orbits.push_back({p, d});
      int i = 0;
      while (i < p && ++w[i] > n) w[i++] = 1;
      if (i == p) break;
    }
  }
  auto det = [&](double s) {
    std::vector<double> c(static_cast<std::size_t>(max_period) + 1, 0.0);
    for (const auto& o : orbits) c[o.p] -= std::pow(std::abs(o.derivative), s) / (1.0 - o.derivative) / o.p;
    std::vector<double> a(c.size(), 0.0);
    a[0] = 1.0;
    for (std::size_t m = 1; m < a.size(); ++m) {
      for (std::size_t k = 1; k <= m; ++k) a[m] += static_cast<double>(k) * c[k] * a[m - k];
      a[m] /= static_cast<double>(m);
    }
    double sum = 0.0;
    for (double v : a) sum += v;
    return sum;
  };
  double lo = 0.05, hi = 0.999;
  const bool lo_sign = det(lo) > 0;
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    ((det(mid) > 0) == lo_sign ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// Union of I_w + I_v over depth-n cylinder pairs of two affine two-branch sets on [0,1]
// with ratio r, as sorted disjoint intervals.
inline std::vector<std::pair<double, double>> affine_sum_cover(double r, int depth) {
  std::vector<double> left{0.0};
  for (int n = 0; n < depth; ++n) {
    std::vector<double> next;
    double len = std::pow(r, n);
    for (double a : left) {
      next.push_back(a);
      next.push_back(a + len * (1 - r));
    }
    left = next;
  }
  const double len = std::pow(r, depth);
  std::vector<double> starts;
  for (double a : left)
    for (double b : left) starts.push_back(a + b);
  std::sort(starts.begin(), starts.end());
  std::vector<std::pair<double, double>> out;
  for (double s : starts) {
    if (!out.empty() && s <= out.back().second + 1e-12)
      out.back().second = std::max(out.back().second, s + 2 * len);
    else
      out.push_back({s, s + 2 * len});
  }
  return out;
}

inline bool covered(const std::vector<std::pair<double, double>>& cover, double lo, double hi) {
  for (const auto& [a, b] : cover)
    if (a <= lo + 1e-12 && hi <= b + 1e-12) return true;
  return false;
}

// Height of a bi-infinite CF sequence at the origin in doubles: [a_0; a_1, ...] + [0; a_-1, ...].
inline double height(const std::function<long long(long long)>& digit_at) {
  double fwd = 0.0, back = 0.0;
  for (long long j = 200; j >= 1; --j) fwd = 1.0 / (digit_at(j) + fwd);
  for (long long j = 200; j >= 1; --j) back = 1.0 / (digit_at(-j) + back);
  return static_cast<double>(digit_at(0)) + fwd + back;
}

}  // namespace oracles
