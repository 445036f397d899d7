#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <mutex>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "spectra_lab/core/bigint.hpp"
#include "spectra_lab/core/errors.hpp"
#include "spectra_lab/core/interval.hpp"

namespace spectra_lab {

// n = root^2 * square_free with square_free square-free.
struct SquareFreeSplit {
  BigInt root;
  BigInt square_free;
};

namespace detail {

// Primes below 2^21.4, enough to trial-divide any u64 up to its cube root.
inline const std::vector<std::uint32_t>& small_primes() {
  static const std::vector<std::uint32_t> primes = [] {
    constexpr std::uint32_t limit = 2'700'000;
    std::vector<bool> composite(limit + 1, false);
    std::vector<std::uint32_t> out;
    for (std::uint32_t i = 2; i <= limit; ++i) {
      if (composite[i]) continue;
      out.push_back(i);
      for (std::uint64_t j = std::uint64_t(i) * i; j <= limit; j += i) composite[j] = true;
    }
    return out;
  }();
  return primes;
}

inline std::uint64_t isqrt_u64(std::uint64_t n) {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
  while (r > 0 && static_cast<unsigned __int128>(r) * r > n) --r;
  while (static_cast<unsigned __int128>(r + 1) * (r + 1) <= n) ++r;
  return r;
}

inline SquareFreeSplit square_free_u64(std::uint64_t n) {
  std::uint64_t root = 1;
  std::uint64_t free = 1;
  for (std::uint32_t p : small_primes()) {
    if (static_cast<unsigned __int128>(p) * p * p > n) break;
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    for (int i = 0; i + 1 < e; i += 2) root *= p;
    if (e % 2 == 1) free *= p;
  }
  // n now has at most two prime factors, all larger than the last trial prime.
  std::uint64_t s = isqrt_u64(n);
  if (s * s == n) {
    root *= s;
  } else {
    free *= n;
  }
  return {BigInt(root), BigInt(free)};
}

inline SquareFreeSplit square_free_big(BigInt n) {
  BigInt root = 1;
  BigInt free = 1;
  const auto& primes = small_primes();
  for (std::uint32_t p : primes) {
    if (n == 1) break;
    if (fits_u64(n)) {
      auto rest = square_free_u64(static_cast<std::uint64_t>(n));
      return {root * rest.root, free * rest.square_free};
    }
    int e = 0;
    while (mpz_divisible_ui_p(n.backend().data(), p)) {
      n /= p;
      ++e;
    }
    for (int i = 0; i + 1 < e; i += 2) root *= p;
    if (e % 2 == 1) free *= p;
  }
  if (n == 1) return {root, free};
  if (mpz_perfect_square_p(n.backend().data())) return {root * boost::multiprecision::sqrt(n), free};
  BigInt bound = primes.back();
  if (n < bound * bound * bound || mpz_probab_prime_p(n.backend().data(), 40) > 0) {
    return {root, free * n};
  }
  throw undecidable_error("cannot certify square-free part of " + n.str());
}

}  // namespace detail

inline SquareFreeSplit square_free_split(const BigInt& n) {
  if (n < 0) throw std::domain_error("square_free_split of a negative integer");
  if (n == 0) return {BigInt(0), BigInt(0)};
  if (fits_u64(n)) return detail::square_free_u64(static_cast<std::uint64_t>(n));
  static std::mutex mu;
  static std::map<BigInt, SquareFreeSplit> cache;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
  }
  auto s = detail::square_free_big(n);
  std::lock_guard<std::mutex> lock(mu);
  cache.emplace(n, s);
  return s;
}

// Exact element (p + q*sqrt(d)) / r of Q(sqrt d).
// Canonical: r > 0, gcd(p, q, r) = 1, d square-free >= 2, or d = q = 0 for rationals.
class QuadraticSurd {
 public:
  QuadraticSurd() = default;
  QuadraticSurd(long long n) : p_(n) {}  // NOLINT(google-explicit-constructor)
  QuadraticSurd(const BigInt& n) : p_(n) {}  // NOLINT(google-explicit-constructor)
  QuadraticSurd(BigInt p, BigInt q, BigInt r, BigInt d)
      : p_(std::move(p)), q_(std::move(q)), r_(std::move(r)), d_(std::move(d)) {
    normalize(true);
  }

  static QuadraticSurd rational(const BigInt& num, const BigInt& den) { return {num, 0, den, 0}; }
  static QuadraticSurd rational(const BigRational& v) { return rational(numerator(v), denominator(v)); }
  static QuadraticSurd sqrt(const BigInt& n) { return {0, 1, 1, n}; }

  const BigInt& p() const { return p_; }
  const BigInt& q() const { return q_; }
  const BigInt& r() const { return r_; }
  const BigInt& d() const { return d_; }
  bool is_rational() const { return d_ == 0; }
  BigRational rational_value() const {
    if (!is_rational()) throw std::domain_error("surd is irrational");
    return BigRational(p_, r_);
  }

  int sign() const {
    int sp = p_.sign();
    int sq = q_.sign();
    if (sq == 0) return sp;
    if (sp == 0 || sp == sq) return sq;
    // p and q*sqrt(d) have opposite signs; d is not a square so they never cancel.
    return p_ * p_ > q_ * q_ * d_ ? sp : sq;
  }

  QuadraticSurd conjugate() const { return {p_, -q_, r_, d_}; }
  // (p + q sqrt d)(p - q sqrt d) / r^2
  BigRational norm() const { return BigRational(p_ * p_ - q_ * q_ * d_, r_ * r_); }

  bool same_field(const QuadraticSurd& o) const { return d_ == 0 || o.d_ == 0 || d_ == o.d_; }

  BigInt floor() const {
    if (q_ == 0) return floor_div(p_, r_);
    BigInt s = boost::multiprecision::sqrt(q_ * q_ * d_);
    BigInt a = q_ > 0 ? p_ + s : p_ - s - 1;
    return floor_div(a, r_);
  }
  BigInt ceil() const {
    BigInt f = floor();
    return (*this == QuadraticSurd(f)) ? f : f + 1;
  }

  // Rational bounds with denominator 2^bits.
  BigRational lower_rational(unsigned bits) const {
    return BigRational(scaled(bits).floor(), pow2(bits));
  }
  BigRational upper_rational(unsigned bits) const {
    return BigRational(scaled(bits).ceil(), pow2(bits));
  }

  BigInterval enclose(mpfr_prec_t prec = kDefaultPrecision) const {
    BigInterval v = BigInterval::from_integer(p_, prec);
    if (q_ != 0) v = v + BigInterval::from_integer(q_, prec) * BigInterval::sqrt_of(d_, prec);
    return v / BigInterval::from_integer(r_, prec);
  }
  double to_double() const {
    if (q_ == 0) return BigRational(p_, r_).convert_to<double>();
    return enclose(128).midpoint();
  }
  double lower_double() const { return enclose(128).lower(); }
  double upper_double() const { return enclose(128).upper(); }

  // "sqrt(221)/5", "(1 + sqrt(5))/2", "-3/7"
  std::string to_string() const {
    if (q_ == 0) return r_ == 1 ? p_.str() : p_.str() + "/" + r_.str();
    std::string rad;
    if (q_ == 1) {
      rad = "sqrt(" + d_.str() + ")";
    } else if (q_ == -1) {
      rad = "-sqrt(" + d_.str() + ")";
    } else {
      rad = q_.str() + "*sqrt(" + d_.str() + ")";
    }
    std::string num;
    if (p_ == 0) {
      num = rad;
    } else {
      std::string tail = q_ < 0 ? " - " + rad.substr(1) : " + " + rad;
      num = p_.str() + tail;
      if (r_ != 1) num = "(" + num + ")";
    }
    return r_ == 1 ? num : num + "/" + r_.str();
  }

  friend QuadraticSurd operator-(const QuadraticSurd& a) { return a.raw(-a.p_, -a.q_, a.r_, a.d_); }
  friend QuadraticSurd operator+(const QuadraticSurd& a, const QuadraticSurd& b) {
    BigInt d = common_field(a, b);
    return a.raw(a.p_ * b.r_ + b.p_ * a.r_, a.q_ * b.r_ + b.q_ * a.r_, a.r_ * b.r_, d);
  }
  friend QuadraticSurd operator-(const QuadraticSurd& a, const QuadraticSurd& b) { return a + (-b); }
  friend QuadraticSurd operator*(const QuadraticSurd& a, const QuadraticSurd& b) {
    BigInt d = common_field(a, b);
    return a.raw(a.p_ * b.p_ + a.q_ * b.q_ * d, a.p_ * b.q_ + a.q_ * b.p_, a.r_ * b.r_, d);
  }
  friend QuadraticSurd operator/(const QuadraticSurd& a, const QuadraticSurd& b) {
    BigInt d = common_field(a, b);
    BigInt den = b.p_ * b.p_ - b.q_ * b.q_ * d;
    if (den == 0) throw std::domain_error("QuadraticSurd division by zero");
    // a / b = r_b (p_a + q_a s)(p_b - q_b s) / (r_a (p_b^2 - q_b^2 d))
    BigInt np = b.r_ * (a.p_ * b.p_ - a.q_ * b.q_ * d);
    BigInt nq = b.r_ * (a.q_ * b.p_ - a.p_ * b.q_);
    return a.raw(np, nq, a.r_ * den, d);
  }
  QuadraticSurd& operator+=(const QuadraticSurd& o) { return *this = *this + o; }
  QuadraticSurd& operator-=(const QuadraticSurd& o) { return *this = *this - o; }
  QuadraticSurd& operator*=(const QuadraticSurd& o) { return *this = *this * o; }
  QuadraticSurd& operator/=(const QuadraticSurd& o) { return *this = *this / o; }

  friend bool operator==(const QuadraticSurd& a, const QuadraticSurd& b) {
    return a.p_ == b.p_ && a.q_ == b.q_ && a.r_ == b.r_ && a.d_ == b.d_;
  }
  // Throws std::domain_error when the operands live in different quadratic fields.
  friend std::strong_ordering operator<=>(const QuadraticSurd& a, const QuadraticSurd& b) {
    int s = (a - b).sign();
    return s < 0 ? std::strong_ordering::less
                 : (s > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  friend std::ostream& operator<<(std::ostream& os, const QuadraticSurd& x) { return os << x.to_string(); }

 private:
  static BigInt common_field(const QuadraticSurd& a, const QuadraticSurd& b) {
    if (a.d_ == 0) return b.d_;
    if (b.d_ == 0 || a.d_ == b.d_) return a.d_;
    throw std::domain_error("QuadraticSurd operands in different fields: Q(sqrt " + a.d_.str() +
                            ") and Q(sqrt " + b.d_.str() + ")");
  }

  // d is known square-free already.
  QuadraticSurd raw(BigInt p, BigInt q, BigInt r, BigInt d) const {
    QuadraticSurd x;
    x.p_ = std::move(p);
    x.q_ = std::move(q);
    x.r_ = std::move(r);
    x.d_ = std::move(d);
    x.normalize(false);
    return x;
  }

  QuadraticSurd scaled(unsigned bits) const { return raw(p_ << bits, q_ << bits, r_, d_); }

  void normalize(bool split_d) {
    if (r_ == 0) throw std::domain_error("QuadraticSurd with zero denominator");
    if (d_ < 0) throw std::domain_error("QuadraticSurd with negative radicand");
    if (split_d && d_ > 1 && q_ != 0) {
      auto s = square_free_split(d_);
      q_ *= s.root;
      d_ = s.square_free;
    }
    if (d_ == 1) {
      p_ += q_;
      q_ = 0;
    }
    if (q_ == 0 || d_ == 0) {
      q_ = 0;
      d_ = 0;
    }
    if (r_ < 0) {
      p_ = -p_;
      q_ = -q_;
      r_ = -r_;
    }
    BigInt g = gcd(gcd(p_, q_), r_);
    if (g > 1) {
      p_ /= g;
      q_ /= g;
      r_ /= g;
    }
  }

  BigInt p_ = 0;
  BigInt q_ = 0;
  BigInt r_ = 1;
  BigInt d_ = 0;
};

}  // namespace spectra_lab
