#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "spectra_lab/cf/continued_fraction.hpp"
#include "spectra_lab/spectra/engine.hpp"
#include "spectra_lab/symbolic/subshift.hpp"

namespace spectra_lab {

// Two-sided shift on continued-fraction digits 1..N. A point is an eventually periodic
// bi-infinite digit sequence; iterate moves the origin one step right.
class CFShiftSystem {
 public:
  using Point = CFSequence;

  explicit CFShiftSystem(int max_digit, std::size_t orbit_cap = kDefaultOrbitCap)
      : max_digit_(max_digit), orbit_cap_(orbit_cap) {
    if (max_digit < 1) throw std::invalid_argument("digit bound must be >= 1");
  }

  int max_digit() const { return max_digit_; }

  Point iterate(const Point& x) const { return x.shifted(1); }
  Point inverse_iterate(const Point& x) const { return x.shifted(-1); }
  bool same_point(const Point& x, const Point& y) const { return x == y; }
  std::string describe(const Point& x) const { return x.to_string(); }

  std::vector<Orbit<Point>> periodic_orbits(int max_period) const {
    std::vector<Orbit<Point>> out;
    for (const auto& w : enumerate_periodic_up_to(SubshiftSFT::full_shift(max_digit_), max_period, orbit_cap_)) {
      std::vector<Digit> digits;
      for (int s : w.symbols()) digits.push_back(s + 1);
      out.push_back({Point::periodic(digits), static_cast<int>(digits.size()), witness(digits)});
    }
    return out;
  }

  std::optional<Orbit<Point>> periodic_tail(const Point& x) const {
    auto p = static_cast<int>(x.right_period.size());
    Point tail = Point::periodic(x.right_period);
    return Orbit<Point>{tail, p, witness(x.right_period)};
  }

  // Positions within two tail periods of the center, plus both periodic tails: far out the
  // heights approach the tail orbit values monotonically in each residue class of
  // position modulo 2 * period, so the window holds every value that exceeds the limits.
  std::vector<Point> markov_support(const Point& x) const {
    std::vector<Point> out;
    const auto lo = -x.origin - 2 * static_cast<std::int64_t>(x.left_period.size()) - 1;
    const auto hi = x.center_size() - x.origin + 2 * static_cast<std::int64_t>(x.right_period.size()) + 1;
    for (std::int64_t i = lo; i <= hi; ++i) out.push_back(x.shifted(i));
    for (const auto* tail : {&x.left_period, &x.right_period}) {
      Point t = Point::periodic(*tail);
      for (std::size_t i = 0; i < tail->size(); ++i) out.push_back(t.shifted(static_cast<std::int64_t>(i)));
    }
    return out;
  }

  static std::string witness(const std::vector<Digit>& digits) {
    std::string s;
    for (std::size_t i = 0; i < digits.size(); ++i) s += (i ? "," : "") + std::to_string(digits[i]);
    return s;
  }

 private:
  int max_digit_;
  std::size_t orbit_cap_;
};

static_assert(HasPeriodicTail<CFShiftSystem> && HasMarkovSupport<CFShiftSystem>);

// f(theta) = [a_0; a_1, ...] + [0; a_{-1}, a_{-2}, ...]
inline Observable<CFSequence, CertifiedReal> height_observable() {
  return {"height", [](const CFSequence& x) { return height_function(x, 0); }, std::nullopt};
}

}  // namespace spectra_lab
