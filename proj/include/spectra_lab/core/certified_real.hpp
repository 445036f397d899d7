#pragma once

#include <compare>
#include <optional>
#include <string>

#include "spectra_lab/core/interval.hpp"
#include "spectra_lab/core/quadratic_surd.hpp"
#include "spectra_lab/core/surd_sum.hpp"

namespace spectra_lab {

// A real number known exactly as a sum of square roots (a quadratic surd when a single
// field suffices) or only through a certified MPFR enclosure (hulls of undecided maxima).
class CertifiedReal {
 public:
  CertifiedReal() : CertifiedReal(QuadraticSurd(0)) {}
  CertifiedReal(const QuadraticSurd& x)  // NOLINT(google-explicit-constructor)
      : exact_(x), sum_(SurdSum::from(x)), enclosure_(x.enclose()) {}
  CertifiedReal(long long n) : CertifiedReal(QuadraticSurd(n)) {}  // NOLINT
  explicit CertifiedReal(BigInterval enclosure) : enclosure_(std::move(enclosure)) {}
  explicit CertifiedReal(const SurdSum& s) {
    if (auto q = s.as_surd()) {
      *this = CertifiedReal(*q);
    } else {
      sum_ = s;
      enclosure_ = s.enclose(kDefaultPrecision);
    }
  }

  // exact() is set when the value is a single quadratic surd; exact_sum() whenever the
  // value is known exactly at all.
  bool is_exact() const { return exact_.has_value(); }
  const std::optional<QuadraticSurd>& exact() const { return exact_; }
  const std::optional<SurdSum>& exact_sum() const { return sum_; }
  const BigInterval& enclosure() const { return enclosure_; }

  double to_double() const { return exact_ ? exact_->to_double() : enclosure_.midpoint(); }
  std::string to_string() const {
    if (exact_) return exact_->to_string();
    return sum_ ? sum_->to_string() : enclosure_.decimal(30);
  }
  std::string decimal(int digits = 20) const {
    return exact_ ? exact_->enclose(kDefaultPrecision).decimal(digits) : enclosure_.decimal(digits);
  }

  friend CertifiedReal operator+(const CertifiedReal& a, const CertifiedReal& b) {
    if (a.exact_ && b.exact_ && a.exact_->same_field(*b.exact_)) return CertifiedReal(*a.exact_ + *b.exact_);
    if (a.sum_ && b.sum_) return CertifiedReal(*a.sum_ + *b.sum_);
    return CertifiedReal(a.enclosure_ + b.enclosure_);
  }
  friend CertifiedReal operator-(const CertifiedReal& a) {
    if (a.exact_) return CertifiedReal(-*a.exact_);
    if (a.sum_) return CertifiedReal(-*a.sum_);
    return CertifiedReal(-a.enclosure_);
  }
  friend CertifiedReal operator-(const CertifiedReal& a, const CertifiedReal& b) { return a + (-b); }
  friend CertifiedReal operator*(const CertifiedReal& a, const CertifiedReal& b) {
    if (a.exact_ && b.exact_ && a.exact_->same_field(*b.exact_)) return CertifiedReal(*a.exact_ * *b.exact_);
    if (a.sum_ && b.sum_) return CertifiedReal(*a.sum_ * *b.sum_);
    return CertifiedReal(a.enclosure_ * b.enclosure_);
  }

  // Exact when both values are known exactly: equality is decided on coefficients, and a
  // nonzero difference is refined until its enclosure excludes zero. Unordered only for
  // overlapping enclosures of inexact values.
  friend std::partial_ordering compare(const CertifiedReal& a, const CertifiedReal& b) {
    if (a.exact_ && b.exact_ && a.exact_->same_field(*b.exact_)) return (*a.exact_ <=> *b.exact_);
    if (a.sum_ && b.sum_) {
      const SurdSum diff = *a.sum_ - *b.sum_;
      if (diff.is_zero()) return std::partial_ordering::equivalent;
      for (mpfr_prec_t prec = kDefaultPrecision; prec <= 65536; prec *= 2) {
        BigInterval x = diff.enclose(prec);
        BigInterval zero = BigInterval::from_integer(0, prec);
        if (x.certainly_less(zero)) return std::partial_ordering::less;
        if (zero.certainly_less(x)) return std::partial_ordering::greater;
      }
      throw undecidable_error("could not separate " + a.to_string() + " and " + b.to_string());
    }
    if (a.enclosure_.certainly_less(b.enclosure_)) return std::partial_ordering::less;
    if (b.enclosure_.certainly_less(a.enclosure_)) return std::partial_ordering::greater;
    return std::partial_ordering::unordered;
  }
  friend bool operator==(const CertifiedReal& a, const CertifiedReal& b) {
    return a.sum_ && b.sum_ && compare(a, b) == std::partial_ordering::equivalent;
  }

  // max(a, b); the hull of both enclosures if the order cannot be decided.
  static CertifiedReal max(const CertifiedReal& a, const CertifiedReal& b) {
    auto c = compare(a, b);
    if (c == std::partial_ordering::unordered) return CertifiedReal(BigInterval::max(a.enclosure_, b.enclosure_));
    return c == std::partial_ordering::less ? b : a;
  }

 private:
  std::optional<QuadraticSurd> exact_;
  std::optional<SurdSum> sum_;
  BigInterval enclosure_;
};

}  // namespace spectra_lab
