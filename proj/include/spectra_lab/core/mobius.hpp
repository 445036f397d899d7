#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include "spectra_lab/core/bigint.hpp"
#include "spectra_lab/core/quadratic_surd.hpp"

namespace spectra_lab {

// x -> (a x + b) / (c x + d) with integer coefficients.
struct Mobius {
  BigInt a = 1, b = 0, c = 0, d = 1;

  static Mobius identity() { return {}; }
  // x -> 1 / (n + x), the inverse Gauss branch for digit n.
  static Mobius gauss_branch(const BigInt& n) { return {0, 1, 1, n}; }
  // x -> n + 1/x, one continued-fraction step.
  static Mobius cf_step(const BigInt& n) { return {n, 1, 1, 0}; }
  // Affine x -> (num x + off) / den.
  static Mobius affine(const BigInt& num, const BigInt& off, const BigInt& den) { return {num, off, 0, den}; }

  BigInt det() const { return a * d - b * c; }
  bool is_affine() const { return c == 0; }

  // (*this)(other(x))
  Mobius compose(const Mobius& o) const {
    return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
  }

  QuadraticSurd operator()(const QuadraticSurd& x) const {
    QuadraticSurd den = QuadraticSurd(c) * x + QuadraticSurd(d);
    if (den.sign() == 0) throw std::domain_error("Mobius map evaluated at its pole");
    return (QuadraticSurd(a) * x + QuadraticSurd(b)) / den;
  }
  BigRational operator()(const BigRational& x) const {
    BigRational den = BigRational(c) * x + BigRational(d);
    if (den == 0) throw std::domain_error("Mobius map evaluated at its pole");
    return (BigRational(a) * x + BigRational(b)) / den;
  }
  double operator()(double x) const {
    return (a.convert_to<double>() * x + b.convert_to<double>()) / (c.convert_to<double>() * x + d.convert_to<double>());
  }

  // |derivative| = |det| / (c x + d)^2
  QuadraticSurd abs_derivative(const QuadraticSurd& x) const {
    QuadraticSurd den = QuadraticSurd(c) * x + QuadraticSurd(d);
    BigInt ad = det() < 0 ? BigInt(-det()) : det();
    return QuadraticSurd(ad) / (den * den);
  }
  double abs_derivative(double x) const {
    double den = c.convert_to<double>() * x + d.convert_to<double>();
    return std::abs(det().convert_to<double>()) / (den * den);
  }

  // Pole -d/c lies in the closed interval [lo, hi]?
  bool pole_in(const QuadraticSurd& lo, const QuadraticSurd& hi) const {
    if (c == 0) return false;
    QuadraticSurd l = QuadraticSurd(c) * lo + QuadraticSurd(d);
    QuadraticSurd h = QuadraticSurd(c) * hi + QuadraticSurd(d);
    return l.sign() * h.sign() <= 0;
  }

  friend bool operator==(const Mobius&, const Mobius&) = default;

  std::string to_string() const {
    return "[[" + a.str() + "," + b.str() + "],[" + c.str() + "," + d.str() + "]]";
  }
};

}  // namespace spectra_lab
