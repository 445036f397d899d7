#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "spectra_lab/cantor/thickness.hpp"

namespace spectra_lab {

// One node of a covering proof: every t in t_interval is a sum x + y with x in K inside
// the cylinder of `first` and y in K2 inside the cylinder of `second`.
struct ProofNode {
  ExactInterval t_interval;
  FiniteWord first;
  FiniteWord second;
  std::string rule;  // "thickness", "endpoint" or "split"
  std::vector<ProofNode> children;
};

struct IntervalCertificate {
  ExactInterval target;
  bool certified = false;
  std::optional<QuadraticSurd> witness;  // uncovered t when not certified
  int depth_used = 0;
  std::size_t nodes = 0;
  bool exact_endpoints = true;  // false: sums of incompatible surds replaced by inner rational bounds
  std::optional<ProofNode> proof;
};

inline constexpr std::size_t kDefaultSumsetNodeBudget = 500000;

namespace detail {

inline std::set<BigInt> surd_fields(const RegularCantorSet& k) {
  std::set<BigInt> out;
  for (int a = 0; a < k.symbol_count(); ++a)
    for (const auto* x : {&k.base(a).lo, &k.base(a).hi})
      if (!x->is_rational()) out.insert(x->d());
  return out;
}

class SumsetProver {
 public:
  SumsetProver(const RegularCantorSet& k1, const RegularCantorSet& k2, int depth_cap, std::size_t budget)
      : k1_(k1), k2_(k2), depth_cap_(depth_cap), budget_(budget) {
    tau1_ = thickness(k1, default_thickness_depth(k1));
    tau2_ = thickness(k2, default_thickness_depth(k2));
    auto f = surd_fields(k1);
    f.merge(surd_fields(k2));
    exact_ = f.size() <= 1;
    product_ok_ = tau1_.nested && tau2_.nested && thickness_product_at_least_one();
  }

  bool exact() const { return exact_; }
  std::size_t nodes() const { return nodes_; }
  int depth_used() const { return depth_used_; }
  const std::optional<QuadraticSurd>& witness() const { return witness_; }

  std::optional<ProofNode> prove(const ExactInterval& t, const Cylinder& w, const Cylinder& v, int depth) {
    if (++nodes_ > budget_) throw resource_limit_error("sumset node budget exhausted");
    depth_used_ = std::max(depth_used_, depth);
    ProofNode node{t, w.word, v.word, "", {}};
    ExactInterval sum = inner_sum(w.interval, v.interval);
    if (t.is_point() && (exact_sum_equals(t.lo, w.interval.lo, v.interval.lo) ||
                         exact_sum_equals(t.lo, w.interval.hi, v.interval.hi))) {
      node.rule = "endpoint";
      return node;
    }
    if (sum.contains(t) && sum_fills_hull(w, v)) {
      node.rule = "thickness";
      return node;
    }
    if (depth >= depth_cap_) {
      witness_ = midpoint(t);
      return std::nullopt;
    }
    // refine the longer cylinder
    bool split_first = !(w.interval.length() < v.interval.length());
    std::vector<std::pair<Cylinder, Cylinder>> pairs;
    if (split_first) {
      for (auto& c : children(k1_, w)) pairs.push_back({std::move(c), v});
    } else {
      for (auto& c : children(k2_, v)) pairs.push_back({w, std::move(c)});
    }
    if (pairs.empty()) {
      witness_ = midpoint(t);
      return std::nullopt;
    }
    std::vector<ExactInterval> sums;
    for (const auto& [a, b] : pairs) sums.push_back(inner_sum(a.interval, b.interval));
    node.rule = "split";
    // greedy cover of t by the pair sums
    QuadraticSurd cur = t.lo;
    bool first_piece = true;
    while (true) {
      std::optional<std::size_t> best;
      for (std::size_t i = 0; i < sums.size(); ++i) {
        if (!(sums[i].lo <= cur)) continue;
        if (sums[i].hi < cur || (!first_piece && sums[i].hi == cur)) continue;
        if (!best || sums[*best].hi < sums[i].hi) best = i;
      }
      if (!best) {
        witness_ = uncovered_point(cur, t, sums);
        return std::nullopt;
      }
      QuadraticSurd end = std::min(sums[*best].hi, t.hi);
      auto child = prove({cur, end}, pairs[*best].first, pairs[*best].second, depth + 1);
      if (!child) return std::nullopt;
      node.children.push_back(std::move(*child));
      if (!(end < t.hi)) break;
      cur = end;
      first_piece = false;
    }
    return node;
  }

 private:
  bool thickness_product_at_least_one() const {
    if (tau1_.infinite || tau2_.infinite)
      return (tau1_.infinite || tau1_.lower_bound > 0) && (tau2_.infinite || tau2_.lower_bound > 0);
    return tau1_.lower_bound * tau2_.lower_bound >= 1;
  }

  // Pieces of K and K2 inside the two cylinders sum to the full hull sum when
  // tau1 tau2 >= 1 and neither piece has a gap longer than the other piece's hull.
  bool sum_fills_hull(const Cylinder& w, const Cylinder& v) const {
    if (!product_ok_) return false;
    return certainly_le(max_gap_bound(k1_, w, tau1_), v.interval.length()) &&
           certainly_le(max_gap_bound(k2_, v, tau2_), w.interval.length());
  }

  // cylinder endpoints are points of the sets, so an exact endpoint sum is a member of K + K2
  bool exact_sum_equals(const QuadraticSurd& t, const QuadraticSurd& x, const QuadraticSurd& y) const {
    if (!(exact_ || x.same_field(y))) return false;
    QuadraticSurd s = x + y;
    return s.same_field(t) && s == t;
  }

  bool certainly_le(const QuadraticSurd& a, const QuadraticSurd& b) const {
    if (a.same_field(b)) return a <= b;
    return a.upper_rational(kBits) <= b.lower_rational(kBits);
  }

  // x + y when exact, otherwise an inner rational bound (rounded up for left ends).
  QuadraticSurd sum_point(const QuadraticSurd& x, const QuadraticSurd& y, bool left) const {
    if (exact_ || x.same_field(y)) return x + y;
    return QuadraticSurd::rational(left ? rounded_up(x) + rounded_up(y) : rounded_down(x) + rounded_down(y));
  }

  ExactInterval inner_sum(const ExactInterval& a, const ExactInterval& b) const {
    return {sum_point(a.lo, b.lo, true), sum_point(a.hi, b.hi, false)};
  }

  static BigRational rounded_up(const QuadraticSurd& x) {
    return x.is_rational() ? x.rational_value() : x.upper_rational(kBits);
  }
  static BigRational rounded_down(const QuadraticSurd& x) {
    return x.is_rational() ? x.rational_value() : x.lower_rational(kBits);
  }

  static QuadraticSurd midpoint(const ExactInterval& t) {
    return (t.lo + t.hi) / QuadraticSurd(2);
  }

  static QuadraticSurd uncovered_point(const QuadraticSurd& cur, const ExactInterval& t,
                                       const std::vector<ExactInterval>& sums) {
    // t.lo itself uncovered, or the hole just right of cur
    bool cur_covered = false;
    QuadraticSurd next = t.hi;
    for (const auto& s : sums) {
      if (s.contains(cur)) cur_covered = true;
      if (cur < s.lo && s.lo < next) next = s.lo;
    }
    if (!cur_covered) return cur;
    return (cur + next) / QuadraticSurd(2);
  }

  static constexpr unsigned kBits = 192;
  const RegularCantorSet& k1_;
  const RegularCantorSet& k2_;
  int depth_cap_;
  std::size_t budget_;
  ThicknessEstimate tau1_, tau2_;
  bool exact_ = true;
  bool product_ok_ = false;
  std::size_t nodes_ = 0;
  int depth_used_ = 0;
  std::optional<QuadraticSurd> witness_;
};

}  // namespace detail

// Certificate that every t in [lo, hi] lies in K + K2, built by refining cylinder pairs until
// each piece of the target is closed by the thickness sum rule or an exact endpoint sum.
inline IntervalCertificate sumset_contains_interval(const RegularCantorSet& k, const RegularCantorSet& k2,
                                                    const ExactInterval& target, int depth_cap,
                                                    std::size_t node_budget = kDefaultSumsetNodeBudget) {
  if (!(target.lo < target.hi)) throw std::invalid_argument("sumset target needs lo < hi");
  if (depth_cap < 0) throw std::invalid_argument("depth_cap must be >= 0");
  IntervalCertificate cert;
  cert.target = target;
  detail::SumsetProver prover(k, k2, depth_cap, node_budget);
  cert.exact_endpoints = prover.exact();
  try {
    cert.proof = prover.prove(target, root_cylinder(k), root_cylinder(k2), 0);
  } catch (const resource_limit_error&) {
    cert.proof.reset();
    if (!prover.witness()) cert.witness = (target.lo + target.hi) / QuadraticSurd(2);
  }
  cert.certified = cert.proof.has_value();
  if (!cert.certified && !cert.witness) cert.witness = prover.witness();
  cert.depth_used = prover.depth_used();
  cert.nodes = prover.nodes();
  return cert;
}

inline nlohmann::json interval_json(const ExactInterval& t) {
  return {{"lo", t.lo.to_string()}, {"hi", t.hi.to_string()}, {"lo_approx", t.lo.lower_double()},
          {"hi_approx", t.hi.upper_double()}};
}

inline nlohmann::json proof_json(const ProofNode& n) {
  nlohmann::json kids = nlohmann::json::array();
  for (const auto& c : n.children) kids.push_back(proof_json(c));
  return {{"t_interval", interval_json(n.t_interval)},
          {"cylinder_pair", {n.first, n.second}},
          {"rule", n.rule},
          {"children", kids}};
}

inline nlohmann::json certificate_json(const IntervalCertificate& c) {
  nlohmann::json j{{"target", interval_json(c.target)},
                   {"status", c.certified ? "certified" : "failed"},
                   {"depth_used", c.depth_used},
                   {"nodes_visited", c.nodes},
                   {"exact_endpoints", c.exact_endpoints},
                   {"nodes", nlohmann::json::array()}};
  if (c.proof) j["nodes"].push_back(proof_json(*c.proof));
  if (c.witness) j["witness"] = {{"t", c.witness->to_string()}, {"t_approx", c.witness->to_double()}};
  return j;
}

}  // namespace spectra_lab
