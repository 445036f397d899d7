#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <numeric>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include "spectra_lab/core/bigint.hpp"
#include "spectra_lab/core/errors.hpp"
#include "spectra_lab/core/quadratic_surd.hpp"
#include "spectra_lab/spectra/engine.hpp"

namespace spectra_lab {

using IntMatrix2 = std::array<std::int64_t, 4>;  // row major [[m0, m1], [m2, m3]]

inline IntMatrix2 multiply(const IntMatrix2& x, const IntMatrix2& y) {
  return {x[0] * y[0] + x[1] * y[2], x[0] * y[1] + x[1] * y[3], x[2] * y[0] + x[3] * y[2], x[2] * y[1] + x[3] * y[3]};
}

inline IntMatrix2 power(const IntMatrix2& m, int p) {
  IntMatrix2 r{1, 0, 0, 1};
  for (int i = 0; i < p; ++i) r = multiply(r, m);
  return r;
}

struct ToralAutomorphism {
  IntMatrix2 matrix{2, 1, 1, 1};
  QuadraticSurd lambda;    // expanding eigenvalue
  std::array<QuadraticSurd, 2> unstable;  // eigendirection for lambda
  std::array<QuadraticSurd, 2> stable;    // eigendirection for +-1/lambda

  std::int64_t det() const { return matrix[0] * matrix[3] - matrix[1] * matrix[2]; }
  std::int64_t trace() const { return matrix[0] + matrix[3]; }
  QuadraticSurd lambda_inverse() const { return QuadraticSurd(1) / lambda; }
};

// Hyperbolic automorphism of the 2-torus given by an integer matrix with det +-1.
inline ToralAutomorphism toral_automorphism(const IntMatrix2& m) {
  ToralAutomorphism t;
  t.matrix = m;
  const std::int64_t det = t.det(), tr = t.trace();
  if (det != 1 && det != -1) throw std::invalid_argument("toral automorphism needs determinant +-1");
  const std::int64_t disc = tr * tr - 4 * det;
  if (disc <= 0 || QuadraticSurd::sqrt(disc).is_rational())
    throw std::invalid_argument("toral automorphism must be hyperbolic with irrational eigenvalues");
  // eigenvalues (tr +- sqrt(disc)) / 2; lambda is the one of modulus > 1
  QuadraticSurd root = QuadraticSurd::sqrt(disc);
  QuadraticSurd plus = (QuadraticSurd(tr) + root) / QuadraticSurd(2);
  QuadraticSurd minus = (QuadraticSurd(tr) - root) / QuadraticSurd(2);
  auto abs = [](const QuadraticSurd& x) { return x.sign() < 0 ? -x : x; };
  t.lambda = QuadraticSurd(1) < abs(plus) ? plus : minus;
  QuadraticSurd mu = t.lambda == plus ? minus : plus;
  if (!(QuadraticSurd(1) < abs(t.lambda))) throw std::invalid_argument("toral automorphism is not hyperbolic");
  // (m - e I) v = 0 with v = (m1, e - m0), nonzero because m1 != 0 for irrational e
  if (m[1] == 0) throw std::invalid_argument("toral automorphism needs m[0][1] != 0");
  t.unstable = {QuadraticSurd(m[1]), t.lambda - QuadraticSurd(m[0])};
  t.stable = {QuadraticSurd(m[1]), mu - QuadraticSurd(m[0])};
  return t;
}

// [[2,1],[1,1]], lambda = (3 + sqrt 5) / 2
inline ToralAutomorphism cat_map() { return toral_automorphism({2, 1, 1, 1}); }

struct TorusPoint {
  BigRational x = 0;
  BigRational y = 0;

  friend bool operator==(const TorusPoint&, const TorusPoint&) = default;
  friend bool operator<(const TorusPoint& a, const TorusPoint& b) {
    if (a.x != b.x) return a.x < b.x;
    return a.y < b.y;
  }
  std::string to_string() const { return "(" + rational_string(x) + ", " + rational_string(y) + ")"; }
};

inline BigRational frac(const BigRational& q) {
  return q - BigRational(floor_div(numerator(q), denominator(q)));
}

inline TorusPoint apply_matrix(const IntMatrix2& m, const TorusPoint& p) {
  return {frac(m[0] * p.x + m[1] * p.y), frac(m[2] * p.x + m[3] * p.y)};
}

inline constexpr std::size_t kDefaultPointCap = 5'000'000;

// All fixed points of T^p: the group (A^p - I)^{-1} Z^2 / Z^2, generated by the columns of
// the inverse matrix. There are |det(A^p - I)| of them.
inline std::vector<TorusPoint> periodic_points(const ToralAutomorphism& t, int p, std::size_t cap = kDefaultPointCap) {
  if (p < 1) throw std::invalid_argument("period must be >= 1");
  IntMatrix2 m = power(t.matrix, p);
  if (std::abs(m[0]) > (std::int64_t(1) << 30) || std::abs(m[3]) > (std::int64_t(1) << 30))
    throw resource_limit_error("period too large for the 64-bit point enumeration");
  m[0] -= 1;
  m[3] -= 1;
  const std::int64_t det = m[0] * m[3] - m[1] * m[2];
  if (det == 0) throw std::domain_error("A^p - I is singular");
  const std::int64_t n = det < 0 ? -det : det;
  if (static_cast<std::size_t>(n) > cap) throw resource_limit_error("periodic point count exceeds cap");
  const std::int64_t sg = det < 0 ? -1 : 1;
  auto mod = [n](std::int64_t v) { return ((v % n) + n) % n; };
  // columns of adj(M) / det, in units of 1/n
  const std::array<std::int64_t, 2> g1{mod(sg * m[3]), mod(-sg * m[2])};
  const std::array<std::int64_t, 2> g2{mod(-sg * m[1]), mod(sg * m[0])};
  std::vector<std::array<std::int64_t, 2>> sub{{0, 0}};
  for (auto v = g1; v != std::array<std::int64_t, 2>{0, 0}; v = {mod(v[0] + g1[0]), mod(v[1] + g1[1])}) sub.push_back(v);
  std::unordered_set<std::int64_t> in_sub;
  for (const auto& v : sub) in_sub.insert(v[0] * n + v[1]);
  std::vector<std::array<std::int64_t, 2>> all;
  std::array<std::int64_t, 2> shift{0, 0};
  do {
    for (const auto& v : sub) all.push_back({mod(v[0] + shift[0]), mod(v[1] + shift[1])});
    shift = {mod(shift[0] + g2[0]), mod(shift[1] + g2[1])};
  } while (!in_sub.count(shift[0] * n + shift[1]));
  if (static_cast<std::int64_t>(all.size()) != n) throw std::logic_error("periodic point enumeration incomplete");
  std::sort(all.begin(), all.end());
  std::vector<TorusPoint> out;
  out.reserve(all.size());
  for (const auto& v : all) out.push_back({BigRational(v[0], n), BigRational(v[1], n)});
  return out;
}

// lambda^p + lambda^-p - 2 for det +1, via the trace recurrence t_p = tr t_{p-1} - det t_{p-2}.
inline BigInt periodic_point_count(const ToralAutomorphism& t, int p) {
  if (p < 1) throw std::invalid_argument("period must be >= 1");
  BigInt a = 2, b = t.trace();  // traces of A^0, A^1
  for (int i = 1; i < p; ++i) {
    BigInt c = t.trace() * b - t.det() * a;
    a = b;
    b = c;
  }
  // |det(A^p - I)| = |1 - tr A^p + det A^p|
  BigInt v = 1 - b + (t.det() == 1 || p % 2 == 0 ? 1 : -1);
  return v < 0 ? BigInt(-v) : v;
}

// The automorphism acting on rational torus points.
class TorusSystem {
 public:
  using Point = TorusPoint;

  explicit TorusSystem(ToralAutomorphism t, std::size_t cap = kDefaultPointCap) : t_(std::move(t)), cap_(cap) {
    const auto& m = t_.matrix;
    const std::int64_t d = t_.det();
    inverse_ = {d * m[3], -d * m[1], -d * m[2], d * m[0]};
  }

  const ToralAutomorphism& automorphism() const { return t_; }

  Point iterate(const Point& x) const { return apply_matrix(t_.matrix, x); }
  Point inverse_iterate(const Point& x) const { return apply_matrix(inverse_, x); }
  bool same_point(const Point& a, const Point& b) const { return a == b; }
  std::string describe(const Point& x) const { return x.to_string(); }

  // Orbit classes of minimal period p <= max_period, represented by their least point.
  std::vector<Orbit<Point>> periodic_orbits(int max_period) const {
    std::vector<Orbit<Point>> out;
    for (int p = 1; p <= max_period; ++p) {
      std::set<Point> seen;
      for (const auto& x : periodic_points(t_, p, cap_)) {
        if (seen.count(x)) continue;
        std::vector<Point> orbit{x};
        for (Point y = iterate(x); !(y == x); y = iterate(y)) orbit.push_back(y);
        for (const auto& y : orbit) seen.insert(y);
        if (static_cast<int>(orbit.size()) != p) continue;
        Point rep = *std::min_element(orbit.begin(), orbit.end());
        out.push_back({rep, p, rep.to_string()});
      }
    }
    return out;
  }

 private:
  ToralAutomorphism t_;
  IntMatrix2 inverse_{};
  std::size_t cap_;
};

static_assert(DiscreteSystem<TorusSystem>);

}  // namespace spectra_lab
