#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "spectra_lab/core/errors.hpp"
#include "spectra_lab/core/mobius.hpp"
#include "spectra_lab/core/quadratic_surd.hpp"
#include "spectra_lab/symbolic/subshift.hpp"

namespace spectra_lab {

struct ExactInterval {
  QuadraticSurd lo;
  QuadraticSurd hi;

  QuadraticSurd length() const { return hi - lo; }
  bool is_point() const { return lo == hi; }
  bool contains(const QuadraticSurd& x) const { return lo <= x && x <= hi; }
  bool contains(const ExactInterval& o) const { return lo <= o.lo && o.hi <= hi; }
  bool intersects(const ExactInterval& o) const { return !(hi < o.lo || o.hi < lo); }
  ExactInterval translated(const QuadraticSurd& t) const { return {lo + t, hi + t}; }
  double lower_double() const { return lo.lower_double(); }
  double upper_double() const { return hi.upper_double(); }

  friend ExactInterval operator+(const ExactInterval& a, const ExactInterval& b) { return {a.lo + b.lo, a.hi + b.hi}; }
  friend bool operator==(const ExactInterval&, const ExactInterval&) = default;
};

// Image of an interval under a Mobius map without a pole on it.
inline ExactInterval image(const Mobius& m, const ExactInterval& j) {
  QuadraticSurd x = m(j.lo);
  QuadraticSurd y = m(j.hi);
  return x <= y ? ExactInterval{x, y} : ExactInterval{y, x};
}

enum class CantorKind { cantor, interval };

struct DerivativeBounds {
  QuadraticSurd c_min;
  QuadraticSurd c_max;
};

// Expansive Markov map of type Sigma_B, stored through its inverse branches
// psi_{a,b}: I(b) -> I(a,b) in I(a). Cylinder I_w for w = w0..w_{n-1} is
// psi_{w0 w1} o ... o psi_{w_{n-2} w_{n-1}} (I(w_{n-1})).
class RegularCantorSet {
 public:
  RegularCantorSet(std::string label, SubshiftSFT shift, std::vector<ExactInterval> base,
                   std::map<std::pair<int, int>, Mobius> branches, CantorKind kind = CantorKind::cantor)
      : label_(std::move(label)),
        shift_(std::move(shift)),
        base_(std::move(base)),
        branches_(std::move(branches)),
        kind_(kind) {
    validate();
  }

  const std::string& label() const { return label_; }
  const SubshiftSFT& subshift() const { return shift_; }
  int symbol_count() const { return shift_.size(); }
  CantorKind kind() const { return kind_; }
  const ExactInterval& base(int a) const { return base_.at(static_cast<std::size_t>(a)); }
  const Mobius& branch(int a, int b) const { return branches_.at({a, b}); }
  const ExactInterval& hull() const { return hull_; }
  const DerivativeBounds& derivative_bounds() const { return bounds_; }
  // Upper bound for |(log |psi'|)'| over all branches: 2|c| / min |c x + d|.
  const BigRational& distortion_constant() const { return distortion_; }
  bool is_affine() const {
    return std::all_of(branches_.begin(), branches_.end(), [](const auto& kv) { return kv.second.is_affine(); });
  }
  // Every base interval is a single point (for example the Gauss set with one digit).
  bool is_degenerate() const {
    return std::all_of(base_.begin(), base_.end(), [](const ExactInterval& j) { return j.is_point(); });
  }

  RegularCantorSet relabeled(std::string label) const {
    RegularCantorSet k = *this;
    k.label_ = std::move(label);
    return k;
  }

  Mobius word_map(const FiniteWord& w) const {
    Mobius m;
    for (std::size_t i = 0; i + 1 < w.size(); ++i) m = m.compose(branch(w[i], w[i + 1]));
    return m;
  }
  ExactInterval cylinder(const FiniteWord& w) const {
    if (w.empty()) return hull_;
    if (!shift_.admissible(w)) throw std::invalid_argument("cylinder of a non-admissible word");
    return image(word_map(w), base(w.back()));
  }

 private:
  void validate() {
    const int k = shift_.size();
    if (k == 0) throw std::invalid_argument("RegularCantorSet needs a nonempty subshift");
    if (!shift_.is_pruned()) throw std::invalid_argument("RegularCantorSet subshift must be pruned");
    if (static_cast<int>(base_.size()) != k) throw std::invalid_argument("one base interval per symbol required");
    for (const auto& j : base_)
      if (j.hi < j.lo) throw std::invalid_argument("base interval with hi < lo");
    for (const auto& [ab, m] : branches_) {
      if (!shift_.allows(ab.first, ab.second)) throw std::invalid_argument("branch given for a forbidden pair");
    }
    const bool touching_ok = kind_ == CantorKind::interval;
    auto check_disjoint = [touching_ok](std::vector<ExactInterval> v, const std::string& what) {
      std::sort(v.begin(), v.end(), [](const auto& x, const auto& y) { return x.lo < y.lo; });
      for (std::size_t i = 1; i < v.size(); ++i) {
        int s = (v[i].lo - v[i - 1].hi).sign();
        if (s < 0 || (s == 0 && !touching_ok)) throw std::invalid_argument(what + " are not separated by gaps");
      }
      return v;
    };
    check_disjoint(base_, "base intervals");

    bool first = true;
    BigRational worst_distortion = 0;
    for (int a = 0; a < k; ++a) {
      std::vector<ExactInterval> kids;
      for (int b : shift_.successors(a)) {
        auto it = branches_.find({a, b});
        if (it == branches_.end()) throw std::invalid_argument("missing branch for allowed pair");
        const Mobius& m = it->second;
        const ExactInterval& dom = base(b);
        if (m.pole_in(dom.lo, dom.hi)) throw std::invalid_argument("branch has a pole on its domain");
        ExactInterval img = image(m, dom);
        if (!base(a).contains(img)) throw std::invalid_argument("branch image leaves its base interval");
        kids.push_back(img);
        QuadraticSurd d0 = m.abs_derivative(dom.lo);
        QuadraticSurd d1 = m.abs_derivative(dom.hi);
        QuadraticSurd lo = std::min(d0, d1), hi = std::max(d0, d1);
        if (!(hi < QuadraticSurd(1))) throw std::invalid_argument("branch is not a contraction");
        if (lo.sign() <= 0) throw std::invalid_argument("branch derivative vanishes");
        if (first) {
          bounds_ = {lo, hi};
          first = false;
        } else {
          bounds_.c_min = std::min(bounds_.c_min, lo);
          bounds_.c_max = std::max(bounds_.c_max, hi);
        }
        if (m.c != 0) {
          QuadraticSurd e0 = QuadraticSurd(m.c) * dom.lo + QuadraticSurd(m.d);
          QuadraticSurd e1 = QuadraticSurd(m.c) * dom.hi + QuadraticSurd(m.d);
          if (e0.sign() < 0) e0 = -e0;
          if (e1.sign() < 0) e1 = -e1;
          QuadraticSurd ratio = QuadraticSurd(2 * abs(m.c)) / std::min(e0, e1);
          worst_distortion = std::max(worst_distortion, ratio.upper_rational(64));
        }
      }
      auto sorted = check_disjoint(kids, "children of base interval " + std::to_string(a));
      if (!(sorted.front().lo == base(a).lo && sorted.back().hi == base(a).hi)) {
        throw std::invalid_argument("children of base interval " + std::to_string(a) + " do not span it");
      }
    }
    distortion_ = worst_distortion;
    hull_ = base_.front();
    for (const auto& j : base_) {
      hull_.lo = std::min(hull_.lo, j.lo);
      hull_.hi = std::max(hull_.hi, j.hi);
    }
  }

  std::string label_;
  SubshiftSFT shift_;
  std::vector<ExactInterval> base_;
  std::map<std::pair<int, int>, Mobius> branches_;
  CantorKind kind_;
  ExactInterval hull_;
  DerivativeBounds bounds_;
  BigRational distortion_ = 0;
};

// Full shift on maps.size() symbols, I(i) = maps[i](hull).
inline RegularCantorSet from_full_ifs(std::string label, const ExactInterval& hull, const std::vector<Mobius>& maps,
                                      CantorKind kind = CantorKind::cantor) {
  const int k = static_cast<int>(maps.size());
  std::vector<ExactInterval> base;
  std::map<std::pair<int, int>, Mobius> branches;
  for (int a = 0; a < k; ++a) {
    base.push_back(image(maps[a], hull));
    for (int b = 0; b < k; ++b) branches[{a, b}] = maps[a];
  }
  return RegularCantorSet(std::move(label), SubshiftSFT::full_shift(k), std::move(base), std::move(branches), kind);
}

// Two affine branches x -> r x and x -> r x + 1 - r on [0, 1], 0 < r < 1/2.
inline RegularCantorSet affine_two_branch(const BigRational& r) {
  if (!(r > 0 && r < BigRational(1, 2))) throw std::invalid_argument("affine ratio must lie in (0, 1/2)");
  BigInt p = numerator(r), q = denominator(r);
  return from_full_ifs("affine:" + rational_string(r), {QuadraticSurd(0), QuadraticSurd(1)},
                       {Mobius::affine(p, 0, q), Mobius::affine(p, q - p, q)});
}

inline RegularCantorSet middle_third() { return affine_two_branch(BigRational(1, 3)).relabeled("midthird"); }

// The whole interval [lo, hi] presented with two halving branches; thickness is infinite.
inline RegularCantorSet interval_set(const BigRational& lo = 0, const BigRational& hi = 1) {
  if (!(lo < hi)) throw std::invalid_argument("interval_set needs lo < hi");
  auto half = [](const BigRational& c) {
    // x -> (x + c) / 2
    BigInt p = numerator(c), q = denominator(c);
    return Mobius::affine(q, p, 2 * q);
  };
  return from_full_ifs("interval", {QuadraticSurd::rational(lo), QuadraticSurd::rational(hi)}, {half(lo), half(hi)},
                       CantorKind::interval);
}

struct Cylinder {
  FiniteWord word;
  ExactInterval interval;
  Mobius map;  // word_map(word); identity for the empty word
};

inline std::vector<Cylinder> children(const RegularCantorSet& k, const Cylinder& c) {
  std::vector<Cylinder> out;
  if (c.word.empty()) {
    for (int a = 0; a < k.symbol_count(); ++a) out.push_back({{a}, k.base(a), Mobius()});
  } else {
    int last = c.word.back();
    for (int b : k.subshift().successors(last)) {
      Cylinder ch;
      ch.word = c.word;
      ch.word.push_back(b);
      ch.map = c.map.compose(k.branch(last, b));
      ch.interval = image(ch.map, k.base(b));
      out.push_back(std::move(ch));
    }
  }
  std::sort(out.begin(), out.end(), [](const Cylinder& x, const Cylinder& y) { return x.interval.lo < y.interval.lo; });
  return out;
}

inline Cylinder root_cylinder(const RegularCantorSet& k) { return {{}, k.hull(), Mobius()}; }

struct CoverEntry {
  FiniteWord word;
  ExactInterval interval;
  double deriv_min = 1.0;  // bounds of |D word_map| on I(last symbol)
  double deriv_max = 1.0;
};

struct CylinderCover {
  int depth = 0;
  std::vector<CoverEntry> intervals;  // sorted by left endpoint
  double distortion_ratio = 1.0;      // max deriv_max / deriv_min
  QuadraticSurd total_length() const {
    QuadraticSurd s = 0;
    for (const auto& e : intervals) s += e.interval.length();
    return s;
  }
};

inline constexpr std::size_t kDefaultCylinderCap = std::size_t(1) << 22;

inline std::vector<Cylinder> cylinder_level(const RegularCantorSet& k, int depth,
                                            std::size_t cap = kDefaultCylinderCap) {
  if (depth < 0) throw std::invalid_argument("depth must be >= 0");
  std::vector<Cylinder> level{root_cylinder(k)};
  for (int n = 0; n < depth; ++n) {
    std::vector<Cylinder> next;
    for (const auto& c : level) {
      for (auto& ch : children(k, c)) {
        if (next.size() >= cap) throw resource_limit_error("cylinder count exceeds cap of " + std::to_string(cap));
        next.push_back(std::move(ch));
      }
    }
    level = std::move(next);
  }
  std::sort(level.begin(), level.end(), [](const Cylinder& x, const Cylinder& y) { return x.interval.lo < y.interval.lo; });
  return level;
}

inline CylinderCover cylinders(const RegularCantorSet& k, int depth, std::size_t cap = kDefaultCylinderCap) {
  CylinderCover cover;
  cover.depth = depth;
  for (auto& c : cylinder_level(k, depth, cap)) {
    CoverEntry e{c.word, c.interval};
    if (!c.word.empty()) {
      const ExactInterval& dom = k.base(c.word.back());
      QuadraticSurd d0 = c.map.abs_derivative(dom.lo);
      QuadraticSurd d1 = c.map.abs_derivative(dom.hi);
      e.deriv_min = std::min(d0, d1).lower_double();
      e.deriv_max = std::max(d0, d1).upper_double();
      if (e.deriv_min > 0) cover.distortion_ratio = std::max(cover.distortion_ratio, e.deriv_max / e.deriv_min);
    }
    cover.intervals.push_back(std::move(e));
  }
  return cover;
}

}  // namespace spectra_lab
