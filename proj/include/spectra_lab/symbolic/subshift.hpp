#pragma once

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstddef>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "spectra_lab/core/bigint.hpp"
#include "spectra_lab/core/errors.hpp"
#include "spectra_lab/core/perron.hpp"

namespace spectra_lab {

// Symbols are indices into the alphabet of the ambient subshift.
using FiniteWord = std::vector<int>;

// Orbit class of a periodic bi-infinite sequence, stored as its primitive root in
// lexicographically minimal rotation.
class PeriodicWord {
 public:
  PeriodicWord() = default;
  explicit PeriodicWord(std::vector<int> symbols) : symbols_(canonical(std::move(symbols))) {}

  const std::vector<int>& symbols() const { return symbols_; }
  std::size_t period() const { return symbols_.size(); }
  int operator[](std::size_t i) const { return symbols_[i % symbols_.size()]; }

  // Primitive root of the input, rotated to its least rotation.
  static std::vector<int> canonical(std::vector<int> w) {
    if (w.empty()) throw std::invalid_argument("PeriodicWord needs at least one symbol");
    const std::size_t n = w.size();
    std::size_t p = n;
    for (std::size_t cand = 1; cand < n; ++cand) {
      if (n % cand != 0) continue;
      bool ok = true;
      for (std::size_t i = cand; i < n && ok; ++i) ok = w[i] == w[i - cand];
      if (ok) {
        p = cand;
        break;
      }
    }
    w.resize(p);
    std::size_t best = 0;
    for (std::size_t s = 1; s < p; ++s) {
      for (std::size_t i = 0; i < p; ++i) {
        int a = w[(s + i) % p];
        int b = w[(best + i) % p];
        if (a != b) {
          if (a < b) best = s;
          break;
        }
      }
    }
    std::rotate(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(best), w.end());
    return w;
  }

  friend auto operator<=>(const PeriodicWord&, const PeriodicWord&) = default;

 private:
  std::vector<int> symbols_{0};
};

class SubshiftSFT {
 public:
  SubshiftSFT() = default;
  SubshiftSFT(std::vector<std::string> alphabet, const std::vector<std::pair<int, int>>& allowed,
              std::string label = "")
      : alphabet_(std::move(alphabet)),
        allowed_(alphabet_.size(), std::vector<char>(alphabet_.size(), 0)),
        label_(std::move(label)) {
    std::set<std::string> seen(alphabet_.begin(), alphabet_.end());
    if (seen.size() != alphabet_.size()) throw std::invalid_argument("duplicate symbol in alphabet");
    for (auto [a, b] : allowed) {
      if (a < 0 || b < 0 || a >= size() || b >= size()) {
        throw std::invalid_argument("allowed pair (" + std::to_string(a) + "," + std::to_string(b) +
                                    ") outside the alphabet");
      }
      allowed_[a][b] = 1;
    }
  }

  static SubshiftSFT full_shift(int k) {
    std::vector<std::string> alpha;
    std::vector<std::pair<int, int>> pairs;
    for (int a = 0; a < k; ++a) {
      alpha.push_back(std::to_string(a));
      for (int b = 0; b < k; ++b) pairs.push_back({a, b});
    }
    return SubshiftSFT(alpha, pairs, "full-" + std::to_string(k) + "-shift");
  }
  static SubshiftSFT golden_mean() { return SubshiftSFT({"0", "1"}, {{0, 0}, {0, 1}, {1, 0}}, "golden-mean"); }
  static SubshiftSFT from_matrix(std::vector<std::string> alphabet, const std::vector<std::vector<int>>& m,
                                 std::string label = "") {
    std::vector<std::pair<int, int>> pairs;
    for (std::size_t a = 0; a < m.size(); ++a) {
      if (m[a].size() != m.size()) throw std::invalid_argument("transition matrix must be square");
      for (std::size_t b = 0; b < m.size(); ++b) {
        if (m[a][b]) pairs.push_back({static_cast<int>(a), static_cast<int>(b)});
      }
    }
    return SubshiftSFT(std::move(alphabet), pairs, std::move(label));
  }

  int size() const { return static_cast<int>(alphabet_.size()); }
  bool empty() const { return alphabet_.empty(); }
  const std::vector<std::string>& alphabet() const { return alphabet_; }
  const std::string& symbol(int a) const { return alphabet_.at(a); }
  const std::string& label() const { return label_; }
  bool allows(int a, int b) const { return allowed_[a][b] != 0; }

  int index_of(const std::string& sym) const {
    auto it = std::find(alphabet_.begin(), alphabet_.end(), sym);
    if (it == alphabet_.end()) throw std::invalid_argument("unknown symbol '" + sym + "'");
    return static_cast<int>(it - alphabet_.begin());
  }
  std::vector<int> successors(int a) const {
    std::vector<int> out;
    for (int b = 0; b < size(); ++b)
      if (allows(a, b)) out.push_back(b);
    return out;
  }
  std::vector<std::pair<int, int>> allowed_pairs() const {
    std::vector<std::pair<int, int>> out;
    for (int a = 0; a < size(); ++a)
      for (int b = 0; b < size(); ++b)
        if (allows(a, b)) out.push_back({a, b});
    return out;
  }
  std::size_t edge_count() const { return allowed_pairs().size(); }

  bool admissible(const FiniteWord& w) const {
    for (int s : w)
      if (s < 0 || s >= size()) return false;
    for (std::size_t i = 1; i < w.size(); ++i)
      if (!allows(w[i - 1], w[i])) return false;
    return true;
  }
  bool admissible(const PeriodicWord& w) const {
    const auto& s = w.symbols();
    return admissible(s) && allows(s.back(), s.front());
  }

  // Every symbol has a predecessor and a successor.
  bool is_pruned() const {
    for (int a = 0; a < size(); ++a) {
      bool in = false, out = false;
      for (int b = 0; b < size(); ++b) {
        out = out || allows(a, b);
        in = in || allows(b, a);
      }
      if (!in || !out) return false;
    }
    return true;
  }

  // Repeatedly drops symbols with a zero row or column.
  SubshiftSFT pruned() const {
    std::vector<bool> keep(size(), true);
    for (bool changed = true; changed;) {
      changed = false;
      for (int a = 0; a < size(); ++a) {
        if (!keep[a]) continue;
        bool in = false, out = false;
        for (int b = 0; b < size(); ++b) {
          if (!keep[b]) continue;
          out = out || allows(a, b);
          in = in || allows(b, a);
        }
        if (!in || !out) {
          keep[a] = false;
          changed = true;
        }
      }
    }
    return restricted(keep);
  }

  // Sub-SFT on the symbols with keep[a] true, keeping the induced transitions.
  SubshiftSFT restricted(const std::vector<bool>& keep, std::string label = "") const {
    std::vector<int> remap(size(), -1);
    std::vector<std::string> alpha;
    for (int a = 0; a < size(); ++a) {
      if (keep[a]) {
        remap[a] = static_cast<int>(alpha.size());
        alpha.push_back(alphabet_[a]);
      }
    }
    std::vector<std::pair<int, int>> pairs;
    for (auto [a, b] : allowed_pairs())
      if (keep[a] && keep[b]) pairs.push_back({remap[a], remap[b]});
    return SubshiftSFT(std::move(alpha), pairs, label.empty() ? label_ : std::move(label));
  }

  std::vector<std::vector<int>> matrix() const {
    std::vector<std::vector<int>> m(size(), std::vector<int>(size(), 0));
    for (int a = 0; a < size(); ++a)
      for (int b = 0; b < size(); ++b) m[a][b] = allows(a, b);
    return m;
  }
  SparseMatrix sparse() const {
    SparseMatrix m;
    for (int a = 0; a < size(); ++a) {
      std::vector<std::pair<std::size_t, double>> row;
      for (int b = 0; b < size(); ++b)
        if (allows(a, b)) row.push_back({static_cast<std::size_t>(b), 1.0});
      m.add_row(row);
    }
    return m;
  }

  SubshiftSFT with_label(std::string label) const {
    SubshiftSFT s = *this;
    s.label_ = std::move(label);
    return s;
  }

  friend bool operator==(const SubshiftSFT& a, const SubshiftSFT& b) {
    return a.alphabet_ == b.alphabet_ && a.allowed_ == b.allowed_;
  }

 private:
  std::vector<std::string> alphabet_;
  std::vector<std::vector<char>> allowed_;
  std::string label_;
};

inline void to_json(nlohmann::json& j, const SubshiftSFT& s) {
  nlohmann::json pairs = nlohmann::json::array();
  for (auto [a, b] : s.allowed_pairs()) pairs.push_back({s.symbol(a), s.symbol(b)});
  j = nlohmann::json{{"alphabet", s.alphabet()}, {"allowed", pairs}, {"label", s.label()}};
}

inline void from_json(const nlohmann::json& j, SubshiftSFT& s) {
  if (!j.is_object()) throw std::invalid_argument("subshift JSON must be an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (it.key() != "alphabet" && it.key() != "allowed" && it.key() != "label") {
      throw std::invalid_argument("subshift JSON: unknown key '" + it.key() + "'");
    }
  }
  if (!j.contains("alphabet") || !j.contains("allowed")) {
    throw std::invalid_argument("subshift JSON needs 'alphabet' and 'allowed'");
  }
  std::vector<std::string> alpha;
  for (const auto& a : j.at("alphabet")) alpha.push_back(a.is_string() ? a.get<std::string>() : a.dump());
  SubshiftSFT probe(alpha, {});
  std::vector<std::pair<int, int>> pairs;
  for (const auto& e : j.at("allowed")) {
    if (!e.is_array() || e.size() != 2) throw std::invalid_argument("allowed entries must be pairs");
    auto name = [](const nlohmann::json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); };
    pairs.push_back({probe.index_of(name(e[0])), probe.index_of(name(e[1]))});
  }
  s = SubshiftSFT(alpha, pairs, j.value("label", std::string()));
}

// Irreducible: the transition graph is strongly connected (and nonempty).
inline bool is_irreducible(const SubshiftSFT& s) {
  if (s.empty()) return false;
  std::size_t count = 0;
  detail::strong_components(s.sparse(), count);
  return count == 1 && s.is_pruned();
}

// Primitive transition matrix; Wielandt's bound (n-1)^2+1 on the exponent.
inline bool is_topologically_mixing(const SubshiftSFT& s) {
  const int n = s.size();
  if (n == 0) return false;
  std::vector<std::vector<char>> p(n, std::vector<char>(n));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) p[a][b] = s.allows(a, b);
  const long long bound = static_cast<long long>(n - 1) * (n - 1) + 1;
  for (long long k = 1;; ++k) {
    bool positive = true;
    for (int a = 0; a < n && positive; ++a)
      for (int b = 0; b < n && positive; ++b) positive = p[a][b];
    if (positive) return true;
    if (k >= bound) return false;
    std::vector<std::vector<char>> next(n, std::vector<char>(n, 0));
    for (int a = 0; a < n; ++a)
      for (int c = 0; c < n; ++c)
        if (p[a][c])
          for (int b = 0; b < n; ++b)
            if (s.allows(c, b)) next[a][b] = 1;
    p = std::move(next);
  }
}

// trace(A^p): number of points fixed by the p-th power of the shift.
inline BigInt fixed_point_count(const SubshiftSFT& s, int p) {
  if (p < 1) throw std::invalid_argument("period must be >= 1");
  const int n = s.size();
  using Mat = std::vector<std::vector<BigInt>>;
  auto mul = [n](const Mat& x, const Mat& y) {
    Mat z(n, std::vector<BigInt>(n, 0));
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k)
        if (x[i][k] != 0)
          for (int j = 0; j < n; ++j) z[i][j] += x[i][k] * y[k][j];
    return z;
  };
  Mat base(n, std::vector<BigInt>(n, 0)), acc(n, std::vector<BigInt>(n, 0));
  for (int i = 0; i < n; ++i) {
    acc[i][i] = 1;
    for (int j = 0; j < n; ++j) base[i][j] = s.allows(i, j) ? 1 : 0;
  }
  for (int e = p; e > 0; e >>= 1) {
    if (e & 1) acc = mul(acc, base);
    if (e > 1) base = mul(base, base);
  }
  BigInt tr = 0;
  for (int i = 0; i < n; ++i) tr += acc[i][i];
  return tr;
}

inline constexpr std::size_t kDefaultOrbitCap = 1'000'000;

namespace detail {

// Lyndon words (prime necklaces) admissible in s, via the FKM recursion pruned on
// forbidden transitions. accept(len) selects the lengths to report.
inline void lyndon_words(const SubshiftSFT& s, int max_len, const std::function<bool(int)>& accept,
                         std::size_t cap, std::vector<PeriodicWord>& out) {
  const int k = s.size();
  if (k == 0 || max_len < 1) return;
  std::vector<int> a(static_cast<std::size_t>(max_len) + 1, 0);
  std::function<void(int, int)> gen = [&](int t, int p) {
    int len = t - 1;
    if (len >= 1 && p == len && accept(len) && s.allows(a[len], a[1])) {
      if (out.size() >= cap) {
        throw resource_limit_error("periodic orbit enumeration exceeded cap of " + std::to_string(cap));
      }
      out.emplace_back(std::vector<int>(a.begin() + 1, a.begin() + 1 + len));
    }
    if (t > max_len) return;
    int start = t == 1 ? 0 : a[t - p];
    for (int j = start; j < k; ++j) {
      if (t > 1 && !s.allows(a[t - 1], j)) continue;
      a[t] = j;
      gen(t + 1, j == start && t > 1 ? p : t);
    }
  };
  gen(1, 1);
}

}  // namespace detail

// All orbit classes whose period divides p, in lexicographic order of their canonical words.
inline std::vector<PeriodicWord> enumerate_periodic(const SubshiftSFT& s, int p,
                                                    std::size_t cap = kDefaultOrbitCap) {
  if (p < 1) throw std::invalid_argument("period must be >= 1");
  std::vector<PeriodicWord> out;
  detail::lyndon_words(s, p, [p](int len) { return p % len == 0; }, cap, out);
  return out;
}

// All orbit classes of minimal period <= p.
inline std::vector<PeriodicWord> enumerate_periodic_up_to(const SubshiftSFT& s, int p,
                                                          std::size_t cap = kDefaultOrbitCap) {
  if (p < 1) throw std::invalid_argument("period must be >= 1");
  std::vector<PeriodicWord> out;
  detail::lyndon_words(s, p, [](int) { return true; }, cap, out);
  return out;
}

// Sub-SFT whose sequences are exactly those of s with no occurrence of w.
// |w| = 1 deletes the symbol; |w| >= 2 recodes on (|w|-1)-blocks. The result is pruned
// and may be empty (check .empty()).
inline SubshiftSFT avoid_word(const SubshiftSFT& s, const FiniteWord& w, std::size_t state_cap = 1u << 22) {
  if (w.empty()) throw std::invalid_argument("avoid_word needs a nonempty word");
  for (int x : w)
    if (x < 0 || x >= s.size()) throw std::invalid_argument("avoid_word: symbol outside the alphabet");
  std::string wname;
  for (int x : w) wname += s.symbol(x);
  std::string label = s.label() + " avoiding " + wname;
  if (w.size() == 1) {
    std::vector<bool> keep(s.size(), true);
    keep[w[0]] = false;
    return s.restricted(keep, label).pruned();
  }
  const std::size_t m = w.size() - 1;
  bool dotted = std::any_of(s.alphabet().begin(), s.alphabet().end(),
                            [](const std::string& x) { return x.size() != 1; });

  // Admissible m-blocks in lexicographic order.
  std::vector<FiniteWord> blocks;
  FiniteWord cur;
  std::function<void()> grow = [&] {
    if (cur.size() == m) {
      if (blocks.size() >= state_cap) throw resource_limit_error("avoid_word block count exceeds cap");
      blocks.push_back(cur);
      return;
    }
    for (int b = 0; b < s.size(); ++b) {
      if (!cur.empty() && !s.allows(cur.back(), b)) continue;
      cur.push_back(b);
      grow();
      cur.pop_back();
    }
  };
  grow();
  std::map<FiniteWord, int> index;
  std::vector<std::string> names;
  for (const auto& b : blocks) {
    index.emplace(b, static_cast<int>(names.size()));
    std::string name;
    for (std::size_t i = 0; i < b.size(); ++i) {
      if (dotted && i > 0) name += '.';
      name += s.symbol(b[i]);
    }
    names.push_back(name);
  }
  std::vector<std::pair<int, int>> pairs;
  for (std::size_t u = 0; u < blocks.size(); ++u) {
    FiniteWord next(blocks[u].begin() + 1, blocks[u].end());
    next.push_back(0);
    for (int c = 0; c < s.size(); ++c) {
      if (!s.allows(blocks[u].back(), c)) continue;
      next.back() = c;
      FiniteWord joined = blocks[u];
      joined.push_back(c);
      if (joined == w) continue;
      pairs.push_back({static_cast<int>(u), index.at(next)});
    }
  }
  return SubshiftSFT(names, pairs, label).pruned();
}

struct RadiusEnclosure {
  double lower = 0.0;
  double upper = 0.0;
  double mid() const { return 0.5 * (lower + upper); }
  double width() const { return upper - lower; }
};

// Perron root of the transition matrix with a Collatz-Wielandt enclosure of width <= tol.
inline RadiusEnclosure spectral_radius(const SubshiftSFT& s, double tol = 1e-12,
                                       std::size_t max_iter = 200000) {
  if (s.empty()) throw std::invalid_argument("spectral_radius of an empty subshift");
  auto b = perron_bounds(s.sparse(), 0.25 * tol, max_iter);
  if (b.upper - b.lower > tol) {
    throw convergence_error("spectral_radius: enclosure width " + std::to_string(b.upper - b.lower) +
                            " above tol after " + std::to_string(b.iterations) + " iterations");
  }
  return {b.lower, b.upper};
}

// Dimension of the self-similar model where every symbol contracts by `ratio`.
inline double symbolic_dimension(const SubshiftSFT& s, double ratio, double tol = 1e-12) {
  if (!(ratio > 0.0 && ratio < 1.0)) throw std::invalid_argument("ratio must lie in (0,1)");
  double rho = spectral_radius(s, tol).mid();
  if (rho <= 1.0) return 0.0;
  return std::log(rho) / std::log(1.0 / ratio);
}

}  // namespace spectra_lab
