#pragma once

#include <mpfr.h>

#include <algorithm>
#include <stdexcept>
#include <string>
#include <utility>

#include "spectra_lab/core/bigint.hpp"

namespace spectra_lab {

// 80 decimal digits plus guard bits.
inline constexpr mpfr_prec_t kDefaultPrecision = 280;

// Closed interval [lo, hi] with MPFR endpoints and outward rounding.
class BigInterval {
 public:
  explicit BigInterval(mpfr_prec_t prec = kDefaultPrecision) {
    mpfr_init2(lo_, prec);
    mpfr_init2(hi_, prec);
    mpfr_set_zero(lo_, 1);
    mpfr_set_zero(hi_, 1);
  }
  BigInterval(const BigInterval& o) {
    mpfr_init2(lo_, mpfr_get_prec(o.lo_));
    mpfr_init2(hi_, mpfr_get_prec(o.hi_));
    mpfr_set(lo_, o.lo_, MPFR_RNDD);
    mpfr_set(hi_, o.hi_, MPFR_RNDU);
  }
  BigInterval(BigInterval&& o) noexcept : BigInterval(mpfr_prec_t(MPFR_PREC_MIN)) { swap(o); }
  BigInterval& operator=(BigInterval o) noexcept {
    swap(o);
    return *this;
  }
  ~BigInterval() {
    mpfr_clear(lo_);
    mpfr_clear(hi_);
  }
  void swap(BigInterval& o) noexcept {
    mpfr_swap(lo_, o.lo_);
    mpfr_swap(hi_, o.hi_);
  }

  static BigInterval from_integer(const BigInt& n, mpfr_prec_t prec = kDefaultPrecision) {
    BigInterval r(prec);
    mpfr_set_z(r.lo_, n.backend().data(), MPFR_RNDD);
    mpfr_set_z(r.hi_, n.backend().data(), MPFR_RNDU);
    return r;
  }
  static BigInterval from_rational(const BigRational& q, mpfr_prec_t prec = kDefaultPrecision) {
    BigInterval r(prec);
    mpfr_set_q(r.lo_, q.backend().data(), MPFR_RNDD);
    mpfr_set_q(r.hi_, q.backend().data(), MPFR_RNDU);
    return r;
  }
  static BigInterval from_double(double x, mpfr_prec_t prec = kDefaultPrecision) {
    BigInterval r(prec);
    mpfr_set_d(r.lo_, x, MPFR_RNDD);
    mpfr_set_d(r.hi_, x, MPFR_RNDU);
    return r;
  }
  static BigInterval sqrt_of(const BigInt& n, mpfr_prec_t prec = kDefaultPrecision) {
    if (n < 0) throw std::domain_error("sqrt of negative integer");
    BigInterval r = from_integer(n, prec);
    mpfr_sqrt(r.lo_, r.lo_, MPFR_RNDD);
    mpfr_sqrt(r.hi_, r.hi_, MPFR_RNDU);
    return r;
  }
  static BigInterval hull(const BigInterval& a, const BigInterval& b) {
    BigInterval r(std::max(a.precision(), b.precision()));
    mpfr_min(r.lo_, a.lo_, b.lo_, MPFR_RNDD);
    mpfr_max(r.hi_, a.hi_, b.hi_, MPFR_RNDU);
    return r;
  }
  // Enclosure of max(x, y) for x in a, y in b.
  static BigInterval max(const BigInterval& a, const BigInterval& b) {
    BigInterval r(std::max(a.precision(), b.precision()));
    mpfr_max(r.lo_, a.lo_, b.lo_, MPFR_RNDD);
    mpfr_max(r.hi_, a.hi_, b.hi_, MPFR_RNDU);
    return r;
  }

  mpfr_prec_t precision() const { return mpfr_get_prec(lo_); }
  double lower() const { return mpfr_get_d(lo_, MPFR_RNDD); }
  double upper() const { return mpfr_get_d(hi_, MPFR_RNDU); }
  double midpoint() const {
    BigInterval m(precision() + 2);
    mpfr_add(m.lo_, lo_, hi_, MPFR_RNDN);
    mpfr_div_2ui(m.lo_, m.lo_, 1, MPFR_RNDN);
    return mpfr_get_d(m.lo_, MPFR_RNDN);
  }
  double width() const {
    BigInterval w(precision());
    mpfr_sub(w.hi_, hi_, lo_, MPFR_RNDU);
    return mpfr_get_d(w.hi_, MPFR_RNDU);
  }
  bool contains_zero() const { return mpfr_sgn(lo_) <= 0 && mpfr_sgn(hi_) >= 0; }
  bool contains(const BigRational& q) const {
    return mpfr_cmp_q(lo_, q.backend().data()) <= 0 && mpfr_cmp_q(hi_, q.backend().data()) >= 0;
  }
  bool certainly_less(const BigInterval& o) const { return mpfr_less_p(hi_, o.lo_) != 0; }
  bool overlaps(const BigInterval& o) const { return !certainly_less(o) && !o.certainly_less(*this); }
  bool subset_of(const BigInterval& o) const {
    return mpfr_greaterequal_p(lo_, o.lo_) && mpfr_lessequal_p(hi_, o.hi_);
  }

  // Midpoint with `digits` significant decimal digits.
  std::string decimal(int digits) const {
    BigInterval m(precision() + 2);
    mpfr_add(m.lo_, lo_, hi_, MPFR_RNDN);
    mpfr_div_2ui(m.lo_, m.lo_, 1, MPFR_RNDN);
    std::string fmt = "%." + std::to_string(std::max(digits - 1, 0)) + "Re";
    char* out = nullptr;
    mpfr_asprintf(&out, fmt.c_str(), m.lo_);
    std::string s(out);
    mpfr_free_str(out);
    return s;
  }

  friend BigInterval operator+(const BigInterval& a, const BigInterval& b) {
    BigInterval r(std::max(a.precision(), b.precision()));
    mpfr_add(r.lo_, a.lo_, b.lo_, MPFR_RNDD);
    mpfr_add(r.hi_, a.hi_, b.hi_, MPFR_RNDU);
    return r;
  }
  friend BigInterval operator-(const BigInterval& a, const BigInterval& b) {
    BigInterval r(std::max(a.precision(), b.precision()));
    mpfr_sub(r.lo_, a.lo_, b.hi_, MPFR_RNDD);
    mpfr_sub(r.hi_, a.hi_, b.lo_, MPFR_RNDU);
    return r;
  }
  friend BigInterval operator-(const BigInterval& a) {
    BigInterval r(a.precision());
    mpfr_neg(r.lo_, a.hi_, MPFR_RNDD);
    mpfr_neg(r.hi_, a.lo_, MPFR_RNDU);
    return r;
  }
  friend BigInterval operator*(const BigInterval& a, const BigInterval& b) {
    mpfr_prec_t prec = std::max(a.precision(), b.precision());
    BigInterval r(prec);
    mpfr_t t;
    mpfr_init2(t, prec);
    bool first = true;
    for (auto x : {a.lo_, a.hi_}) {
      for (auto y : {b.lo_, b.hi_}) {
        mpfr_mul(t, x, y, MPFR_RNDD);
        if (first || mpfr_less_p(t, r.lo_)) mpfr_set(r.lo_, t, MPFR_RNDD);
        mpfr_mul(t, x, y, MPFR_RNDU);
        if (first || mpfr_greater_p(t, r.hi_)) mpfr_set(r.hi_, t, MPFR_RNDU);
        first = false;
      }
    }
    mpfr_clear(t);
    return r;
  }
  friend BigInterval operator/(const BigInterval& a, const BigInterval& b) {
    if (b.contains_zero()) throw std::domain_error("interval division by an interval containing 0");
    mpfr_prec_t prec = std::max(a.precision(), b.precision());
    BigInterval r(prec);
    mpfr_t t;
    mpfr_init2(t, prec);
    bool first = true;
    for (auto x : {a.lo_, a.hi_}) {
      for (auto y : {b.lo_, b.hi_}) {
        mpfr_div(t, x, y, MPFR_RNDD);
        if (first || mpfr_less_p(t, r.lo_)) mpfr_set(r.lo_, t, MPFR_RNDD);
        mpfr_div(t, x, y, MPFR_RNDU);
        if (first || mpfr_greater_p(t, r.hi_)) mpfr_set(r.hi_, t, MPFR_RNDU);
        first = false;
      }
    }
    mpfr_clear(t);
    return r;
  }

 private:
  mpfr_t lo_;
  mpfr_t hi_;
};

}  // namespace spectra_lab
