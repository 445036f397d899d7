#pragma once

#include <map>
#include <optional>
#include <string>

#include "spectra_lab/core/bigint.hpp"
#include "spectra_lab/core/interval.hpp"
#include "spectra_lab/core/quadratic_surd.hpp"

namespace spectra_lab {

// Finite sum of rational multiples of square roots of distinct squarefree positive
// integers; key 1 holds the rational part. Square roots of distinct squarefree integers
// are linearly independent over Q, so a sum is zero iff every coefficient is.
class SurdSum {
 public:
  SurdSum() = default;

  // Empty when x lies in an imaginary quadratic field.
  static std::optional<SurdSum> from(const QuadraticSurd& x) {
    SurdSum s;
    s.add(1, BigRational(x.p(), x.r()));
    if (x.q() != 0) {
      if (x.d() < 0) return std::nullopt;
      s.add(x.d(), BigRational(x.q(), x.r()));
    }
    return s;
  }

  const std::map<BigInt, BigRational>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  // The same number as a single quadratic surd, when at most one radical is present.
  std::optional<QuadraticSurd> as_surd() const {
    BigRational rational = 0;
    std::optional<std::pair<BigInt, BigRational>> radical;
    for (const auto& [d, c] : terms_) {
      if (d == 1) {
        rational = c;
      } else if (radical) {
        return std::nullopt;
      } else {
        radical = {d, c};
      }
    }
    QuadraticSurd out = QuadraticSurd::rational(rational);
    if (radical) out += QuadraticSurd::rational(radical->second) * QuadraticSurd::sqrt(radical->first);
    return out;
  }

  BigInterval enclose(mpfr_prec_t prec) const {
    BigInterval v = BigInterval::from_integer(0, prec);
    for (const auto& [d, c] : terms_) {
      BigInterval term = BigInterval::from_rational(c, prec);
      if (d != 1) term = term * BigInterval::sqrt_of(d, prec);
      v = v + term;
    }
    return v;
  }

  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::string s;
    for (const auto& [d, c] : terms_) {
      std::string term = d == 1 ? rational_string(abs(c)) : (abs(c) == 1 ? "" : rational_string(abs(c)) + "*") + "sqrt(" + d.str() + ")";
      if (s.empty()) {
        s = (c < 0 ? "-" : "") + term;
      } else {
        s += (c < 0 ? " - " : " + ") + term;
      }
    }
    return s;
  }

  friend SurdSum operator+(SurdSum a, const SurdSum& b) {
    for (const auto& [d, c] : b.terms_) a.add(d, c);
    return a;
  }
  friend SurdSum operator-(const SurdSum& a) {
    SurdSum s;
    for (const auto& [d, c] : a.terms_) s.terms_[d] = -c;
    return s;
  }
  friend SurdSum operator-(const SurdSum& a, const SurdSum& b) { return a + (-b); }
  // sqrt(a) sqrt(b) = g sqrt((a/g)(b/g)) with g = gcd(a, b); the product stays squarefree
  friend SurdSum operator*(const SurdSum& a, const SurdSum& b) {
    SurdSum s;
    for (const auto& [da, ca] : a.terms_)
      for (const auto& [db, cb] : b.terms_) {
        BigInt g = gcd(da, db);
        s.add((da / g) * (db / g), ca * cb * BigRational(g));
      }
    return s;
  }
  friend bool operator==(const SurdSum& a, const SurdSum& b) { return (a - b).is_zero(); }

 private:
  void add(const BigInt& d, const BigRational& c) {
    if (c == 0) return;
    auto& slot = terms_[d];
    slot += c;
    if (slot == 0) terms_.erase(d);
  }

  std::map<BigInt, BigRational> terms_;
};

}  // namespace spectra_lab
