#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "spectra_lab/cantor/regular_cantor_set.hpp"
#include "spectra_lab/spectra/engine.hpp"
#include "spectra_lab/symbolic/subshift.hpp"

namespace spectra_lab {

// Two-branch affine horseshoe on the unit square. The horizontal strip [0,1] x I_u(a) is
// stretched by 1/lambda_u vertically and squeezed by lambda_s horizontally onto the
// vertical strip I_s(a) x [0,1], where I(0) = [0, lambda], I(1) = [1 - lambda, 1]. The
// invariant set is K^s x K^u.
struct AffineHorseshoe {
  BigRational lambda_s;
  BigRational lambda_u;
  RegularCantorSet stable_set;    // K^s: horizontal coordinates
  RegularCantorSet unstable_set;  // K^u: vertical coordinates

  // rectangles R_a = I_s-hull x I_u(a), as [x_lo, x_hi, y_lo, y_hi]
  std::array<std::array<BigRational, 4>, 2> rectangles() const {
    return {{{0, 1, 0, lambda_u}, {0, 1, 1 - lambda_u, 1}}};
  }

  // Moran dimension of each factor, summed.
  double dimension() const {
    return std::log(2.0) / std::log(1.0 / lambda_s.convert_to<double>()) +
           std::log(2.0) / std::log(1.0 / lambda_u.convert_to<double>());
  }
};

inline AffineHorseshoe affine_horseshoe(const BigRational& lambda_s, const BigRational& lambda_u) {
  for (const auto* l : {&lambda_s, &lambda_u})
    if (!(*l > 0 && *l < BigRational(1, 2)))
      throw std::invalid_argument("horseshoe ratios must lie in (0, 1/2); the rectangles overlap otherwise");
  return {lambda_s, lambda_u, affine_two_branch(lambda_s).relabeled("horseshoe-stable"),
          affine_two_branch(lambda_u).relabeled("horseshoe-unstable")};
}

struct HorseshoePoint {
  std::vector<int> word;  // periodic itinerary read from time 0
  BigRational x;          // stable coordinate, from the past
  BigRational y;          // unstable coordinate, from the future
  friend bool operator==(const HorseshoePoint& a, const HorseshoePoint& b) { return a.word == b.word; }
};

// The horseshoe map on its periodic points, with exact rational coordinates.
class HorseshoeSystem {
 public:
  using Point = HorseshoePoint;

  explicit HorseshoeSystem(AffineHorseshoe h, std::size_t orbit_cap = kDefaultOrbitCap)
      : h_(std::move(h)), cap_(orbit_cap) {}

  const AffineHorseshoe& horseshoe() const { return h_; }

  Point make(std::vector<int> word) const {
    if (word.empty()) throw std::invalid_argument("horseshoe itinerary needs a period");
    for (int a : word)
      if (a != 0 && a != 1) throw std::invalid_argument("horseshoe symbols are 0 and 1");
    Point p;
    p.word = std::move(word);
    p.y = fixed_point(h_.lambda_u, p.word, false);
    p.x = fixed_point(h_.lambda_s, p.word, true);
    return p;
  }

  Point iterate(const Point& p) const {
    std::vector<int> w(p.word.begin() + 1, p.word.end());
    w.push_back(p.word.front());
    return make(std::move(w));
  }
  Point inverse_iterate(const Point& p) const {
    std::vector<int> w{p.word.back()};
    w.insert(w.end(), p.word.begin(), p.word.end() - 1);
    return make(std::move(w));
  }
  bool same_point(const Point& a, const Point& b) const { return a == b; }
  std::string describe(const Point& p) const {
    std::string s;
    for (int a : p.word) s += std::to_string(a);
    return s;
  }

  std::vector<Orbit<Point>> periodic_orbits(int max_period) const {
    std::vector<Orbit<Point>> out;
    for (const auto& w : enumerate_periodic_up_to(SubshiftSFT::full_shift(2), max_period, cap_)) {
      Point p = make(w.symbols());
      out.push_back({p, static_cast<int>(w.period()), describe(p)});
    }
    return out;
  }

 private:
  // Fixed point of psi_{w0} o psi_{w1} o ... (future) or psi_{w_{p-1}} o psi_{w_{p-2}} o ...
  // (past), with psi_0(t) = r t and psi_1(t) = r t + 1 - r.
  static BigRational fixed_point(const BigRational& r, const std::vector<int>& w, bool past) {
    BigRational slope = 1, offset = 0;  // composite t -> slope t + offset
    auto step = [&](int a) {
      offset += slope * (a == 1 ? 1 - r : BigRational(0));
      slope *= r;
    };
    if (past) {
      for (auto it = w.rbegin(); it != w.rend(); ++it) step(*it);
    } else {
      for (int a : w) step(a);
    }
    return offset / (1 - slope);
  }

  AffineHorseshoe h_;
  std::size_t cap_;
};

static_assert(DiscreteSystem<HorseshoeSystem>);

inline Observable<HorseshoePoint, CertifiedReal> horseshoe_coordinate_sum() {
  return {"x+y",
          [](const HorseshoePoint& p) { return CertifiedReal(QuadraticSurd::rational(p.x + p.y)); },
          std::nullopt};
}

}  // namespace spectra_lab
