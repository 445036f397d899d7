#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

namespace spectra_lab {

using BigInt = boost::multiprecision::number<boost::multiprecision::gmp_int, boost::multiprecision::et_off>;
using BigRational =
    boost::multiprecision::number<boost::multiprecision::gmp_rational, boost::multiprecision::et_off>;

inline bool fits_u64(const BigInt& n) {
  return n >= 0 && n <= BigInt(std::numeric_limits<std::uint64_t>::max());
}

inline BigInt floor_div(const BigInt& a, const BigInt& b) {
  BigInt q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

inline BigInt pow2(unsigned k) { return BigInt(1) << k; }

// Exact conversion of a finite double.
inline BigRational rational_from_double(double x) {
  if (x == 0.0) return BigRational(0);
  int e = 0;
  double m = std::frexp(x, &e);
  auto scaled = static_cast<std::int64_t>(std::ldexp(m, 53));
  e -= 53;
  BigRational r(scaled);
  if (e >= 0) return r * BigRational(pow2(static_cast<unsigned>(e)));
  return r / BigRational(pow2(static_cast<unsigned>(-e)));
}

inline double to_double(const BigRational& q) { return q.convert_to<double>(); }

inline std::string rational_string(const BigRational& q) {
  if (denominator(q) == 1) return numerator(q).str();
  return numerator(q).str() + "/" + denominator(q).str();
}

}  // namespace spectra_lab
