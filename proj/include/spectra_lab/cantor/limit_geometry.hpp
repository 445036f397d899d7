#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "spectra_lab/cantor/regular_cantor_set.hpp"

namespace spectra_lab {

// theta is read backwards: theta[0] = θ_0, theta[1] = θ_{-1}, ...; consecutive entries
// must satisfy (theta[i+1], theta[i]) allowed. θⁿ is the word (θ_{-n}, ..., θ_0).
struct LimitGeometry {
  FiniteWord theta;
  int n = 0;
  ExactInterval domain;    // I(θ_0)
  ExactInterval cylinder;  // I(θⁿ)
  bool branch_reverses = false;
  std::vector<QuadraticSurd> grid;
  std::vector<QuadraticSurd> values;  // k_nθ at the grid points, exact
  std::vector<double> log_derivative; // log |D k_nθ| at the grid points
};

inline FiniteWord forward_word(const FiniteWord& theta, int n) {
  return FiniteWord(theta.rbegin() + static_cast<std::ptrdiff_t>(theta.size()) - n - 1, theta.rend());
}

// k_nθ = B ∘ ψ, where ψ maps I(θ_0) onto I(θⁿ) along the branches of θⁿ and B is the
// affine map of I(θⁿ) onto I(θ_0) that makes the composite increasing.
inline LimitGeometry limit_geometry(const RegularCantorSet& k, const FiniteWord& theta, int n, int points = 33) {
  if (n < 0) throw std::invalid_argument("limit_geometry needs n >= 0");
  if (points < 33) throw std::invalid_argument("limit_geometry needs at least 33 grid points");
  if (theta.size() < static_cast<std::size_t>(n) + 1)
    throw std::invalid_argument("theta must have at least n + 1 symbols");
  if (!k.subshift().admissible(FiniteWord(theta.rbegin(), theta.rend())))
    throw std::invalid_argument("theta is not admissible");
  LimitGeometry out;
  out.theta = theta;
  out.n = n;
  out.domain = k.base(theta[0]);
  FiniteWord word = forward_word(theta, n);
  Mobius psi = k.word_map(word);
  out.cylinder = image(psi, out.domain);
  out.branch_reverses = psi.det() < 0;
  const QuadraticSurd& r = out.domain.lo;
  const QuadraticSurd scale = out.domain.length() / out.cylinder.length();
  const double log_scale = std::log(scale.to_double());
  const QuadraticSurd step = out.domain.length() / QuadraticSurd(points - 1);
  for (int i = 0; i < points; ++i) {
    QuadraticSurd x = i == points - 1 ? out.domain.hi : r + step * QuadraticSurd(i);
    QuadraticSurd y = psi(x);
    QuadraticSurd kx = out.branch_reverses ? r + (out.cylinder.hi - y) * scale : r + (y - out.cylinder.lo) * scale;
    out.grid.push_back(x);
    out.values.push_back(kx);
    out.log_derivative.push_back(std::log(psi.abs_derivative(x).to_double()) + log_scale);
  }
  return out;
}

inline double sup_distance(const LimitGeometry& a, const LimitGeometry& b) {
  if (a.grid.size() != b.grid.size()) throw std::invalid_argument("limit geometries sampled on different grids");
  double d = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) d = std::max(d, std::abs((a.values[i] - b.values[i]).to_double()));
  return d;
}

struct CauchyFit {
  std::vector<double> distances;  // sup |k_n - k_{n+1}|, n = n_lo..n_hi
  std::vector<double> lengths;    // |I(θⁿ)|
  double constant = 0.0;          // smallest C with distance <= C |I(θⁿ)| for every n
  double ratio = 0.0;             // exp of the least-squares slope of log distance in n; 0 if any distance is 0
};

inline CauchyFit limit_geometry_cauchy(const RegularCantorSet& k, const FiniteWord& theta, int n_lo, int n_hi,
                                       int points = 33) {
  if (n_lo < 0 || n_hi < n_lo) throw std::invalid_argument("limit_geometry_cauchy needs 0 <= n_lo <= n_hi");
  CauchyFit fit;
  LimitGeometry prev = limit_geometry(k, theta, n_lo, points);
  for (int n = n_lo; n <= n_hi; ++n) {
    LimitGeometry next = limit_geometry(k, theta, n + 1, points);
    double dist = sup_distance(prev, next);
    double len = prev.cylinder.length().to_double();
    fit.distances.push_back(dist);
    fit.lengths.push_back(len);
    if (len > 0) fit.constant = std::max(fit.constant, dist / len);
    prev = std::move(next);
  }
  if (fit.distances.size() >= 2 &&
      std::all_of(fit.distances.begin(), fit.distances.end(), [](double d) { return d > 0; })) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double m = static_cast<double>(fit.distances.size());
    for (std::size_t i = 0; i < fit.distances.size(); ++i) {
      double x = static_cast<double>(i), y = std::log(fit.distances[i]);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    fit.ratio = std::exp((m * sxy - sx * sy) / (m * sxx - sx * sx));
  }
  return fit;
}

}  // namespace spectra_lab
