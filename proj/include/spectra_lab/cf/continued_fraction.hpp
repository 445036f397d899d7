#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "spectra_lab/core/certified_real.hpp"
#include "spectra_lab/core/mobius.hpp"
#include "spectra_lab/core/quadratic_surd.hpp"

namespace spectra_lab {

using Digit = std::int64_t;

// [prefix; period, period, ...]; prefix[0] is the integer part and may be 0.
// An empty period denotes a finite continued fraction.
struct OneSidedCF {
  std::vector<Digit> prefix;
  std::vector<Digit> period;
};

inline void validate(const OneSidedCF& cf) {
  if (cf.prefix.empty() && cf.period.empty()) throw std::invalid_argument("empty continued fraction");
  for (std::size_t i = 0; i < cf.prefix.size(); ++i) {
    if (cf.prefix[i] < (i == 0 ? 0 : 1)) throw std::invalid_argument("continued-fraction digits must be >= 1");
  }
  for (Digit b : cf.period)
    if (b < 1) throw std::invalid_argument("continued-fraction digits must be >= 1");
}

// Product of the one-step matrices [[b,1],[1,0]].
inline Mobius cf_matrix(const std::vector<Digit>& digits) {
  Mobius m;
  for (Digit b : digits) m = m.compose(Mobius::cf_step(b));
  return m;
}

// Value of the purely periodic [b0; b1, ..., b_{k-1}, b0, ...]: the root > 1 of
// Q t^2 + (Q' - P) t - P' = 0 where [[P, P'], [Q, Q']] is the period matrix.
inline QuadraticSurd periodic_cf_value(const std::vector<Digit>& period) {
  Mobius m = cf_matrix(period);
  BigInt disc = (m.a + m.d) * (m.a + m.d) - 4 * m.det();
  return QuadraticSurd(m.a - m.d, 1, 2 * m.c, disc);
}

inline QuadraticSurd cf_value(const OneSidedCF& cf) {
  validate(cf);
  if (cf.period.empty()) {
    // finite: fold from the right
    BigRational x(cf.prefix.back());
    for (auto it = cf.prefix.rbegin() + 1; it != cf.prefix.rend(); ++it) x = BigRational(*it) + 1 / x;
    return QuadraticSurd::rational(x);
  }
  QuadraticSurd tail = periodic_cf_value(cf.period);
  return cf_matrix(cf.prefix)(tail);
}

// Convergents p_k/q_k of the first n digits.
inline std::vector<BigRational> convergents(const OneSidedCF& cf, std::size_t n) {
  validate(cf);
  std::vector<BigRational> out;
  BigInt p0 = 1, q0 = 0, p1 = 0, q1 = 1;  // p_{-1}, q_{-1}, p_{-2}, q_{-2}
  for (std::size_t k = 0; k < n; ++k) {
    Digit a;
    if (k < cf.prefix.size()) {
      a = cf.prefix[k];
    } else if (!cf.period.empty()) {
      a = cf.period[(k - cf.prefix.size()) % cf.period.size()];
    } else {
      break;
    }
    BigInt p = a * p0 + p1;
    BigInt q = a * q0 + q1;
    p1 = p0;
    q1 = q0;
    p0 = p;
    q0 = q;
    out.emplace_back(p, q);
  }
  return out;
}

// Bi-infinite digit sequence: ... left left | center | right right ...
// Index i refers to absolute position origin + i; the center occupies absolute
// positions 0..center.size()-1.
struct CFSequence {
  std::vector<Digit> left_period{1};
  std::vector<Digit> center;
  std::vector<Digit> right_period{1};
  std::int64_t origin = 0;

  static CFSequence periodic(std::vector<Digit> period) {
    CFSequence s;
    s.left_period = period;
    s.right_period = std::move(period);
    return s;
  }
  static CFSequence make(std::vector<Digit> left, std::vector<Digit> center, std::vector<Digit> right) {
    CFSequence s;
    s.left_period = std::move(left);
    s.right_period = std::move(right);
    s.origin = static_cast<std::int64_t>(center.size() / 2);
    s.center = std::move(center);
    s.validate();
    return s;
  }

  void validate() const {
    if (left_period.empty() || right_period.empty()) throw std::invalid_argument("CFSequence tails need a period");
    for (const auto* v : {&left_period, &center, &right_period})
      for (Digit b : *v)
        if (b < 1) throw std::invalid_argument("CFSequence digits must be >= 1");
  }

  std::int64_t center_size() const { return static_cast<std::int64_t>(center.size()); }

  Digit digit_at_absolute(std::int64_t j) const {
    const auto len = center_size();
    if (j >= 0 && j < len) return center[static_cast<std::size_t>(j)];
    if (j >= len) return right_period[static_cast<std::size_t>((j - len) % static_cast<std::int64_t>(right_period.size()))];
    auto l = static_cast<std::int64_t>(left_period.size());
    return left_period[static_cast<std::size_t>(((j % l) + l) % l)];
  }
  Digit digit(std::int64_t i) const { return digit_at_absolute(origin + i); }

  CFSequence shifted(std::int64_t k) const {
    CFSequence s = *this;
    s.origin += k;
    return s;
  }

  // [a_i; a_{i+1}, ...]
  OneSidedCF forward_from(std::int64_t i) const {
    std::int64_t j = origin + i;
    const auto len = center_size();
    OneSidedCF cf;
    for (; j < len; ++j) cf.prefix.push_back(digit_at_absolute(j));
    for (std::size_t k = 0; k < right_period.size(); ++k) cf.period.push_back(digit_at_absolute(j + static_cast<std::int64_t>(k)));
    return cf;
  }
  // [0; a_{i-1}, a_{i-2}, ...]
  OneSidedCF backward_from(std::int64_t i) const {
    std::int64_t j = origin + i - 1;
    OneSidedCF cf;
    cf.prefix.push_back(0);
    for (; j >= 0; --j) cf.prefix.push_back(digit_at_absolute(j));
    for (std::size_t k = 0; k < left_period.size(); ++k) cf.period.push_back(digit_at_absolute(j - static_cast<std::int64_t>(k)));
    return cf;
  }

  // Same bi-infinite sequence with the same origin.
  friend bool operator==(const CFSequence& x, const CFSequence& y) {
    std::int64_t lo = std::min(-x.origin, -y.origin) -
                      static_cast<std::int64_t>(x.left_period.size() + y.left_period.size());
    std::int64_t hi = std::max(x.center_size() - x.origin, y.center_size() - y.origin) +
                      static_cast<std::int64_t>(x.right_period.size() + y.right_period.size());
    for (std::int64_t i = lo; i < hi; ++i)
      if (x.digit(i) != y.digit(i)) return false;
    return true;
  }

  std::string to_string() const {
    auto join = [](const std::vector<Digit>& v) {
      std::string s;
      for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
      return s;
    };
    return "(" + join(left_period) + ")*|" + join(center) + "|(" + join(right_period) + ")* @" + std::to_string(origin);
  }
};

inline void to_json(nlohmann::json& j, const CFSequence& s) {
  j = nlohmann::json{{"left_period", s.left_period}, {"center", s.center}, {"right_period", s.right_period},
                     {"origin", s.origin}};
}

inline void from_json(const nlohmann::json& j, CFSequence& s) {
  if (!j.is_object()) throw std::invalid_argument("CFSequence JSON must be an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    const auto& k = it.key();
    if (k != "left_period" && k != "center" && k != "right_period" && k != "origin") {
      throw std::invalid_argument("CFSequence JSON: unknown key '" + k + "'");
    }
  }
  s = CFSequence::make(j.at("left_period").get<std::vector<Digit>>(), j.value("center", std::vector<Digit>{}),
                       j.at("right_period").get<std::vector<Digit>>());
  if (j.contains("origin")) s.origin = j.at("origin").get<std::int64_t>();
}

// [a_i; a_{i+1}, ...] + [0; a_{i-1}, a_{i-2}, ...]. Exact when both tails lie in the
// same quadratic field, otherwise an 80-digit certified enclosure.
inline CertifiedReal height_function(const CFSequence& theta, std::int64_t position) {
  QuadraticSurd alpha = cf_value(theta.forward_from(position));
  QuadraticSurd beta = cf_value(theta.backward_from(position));
  return CertifiedReal(alpha) + CertifiedReal(beta);
}

}  // namespace spectra_lab
