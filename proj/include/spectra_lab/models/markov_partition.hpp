#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "spectra_lab/cantor/regular_cantor_set.hpp"
#include "spectra_lab/models/cat_map.hpp"
#include "spectra_lab/symbolic/subshift.hpp"

namespace spectra_lab {

// Axis-parallel rectangle in eigen-coordinates (alpha along the unstable direction,
// beta along the stable one), half-open: [alpha.lo, alpha.hi) x [beta.lo, beta.hi).
struct EigenRect {
  ExactInterval alpha;
  ExactInterval beta;

  bool contains(const QuadraticSurd& a, const QuadraticSurd& b) const {
    return alpha.lo <= a && a < alpha.hi && beta.lo <= b && b < beta.hi;
  }
  EigenRect translated(const QuadraticSurd& da, const QuadraticSurd& db) const {
    return {alpha.translated(da), beta.translated(db)};
  }
  friend bool operator==(const EigenRect&, const EigenRect&) = default;
};

inline std::optional<EigenRect> overlap(const EigenRect& x, const EigenRect& y) {
  EigenRect r{{std::max(x.alpha.lo, y.alpha.lo), std::min(x.alpha.hi, y.alpha.hi)},
              {std::max(x.beta.lo, y.beta.lo), std::min(x.beta.hi, y.beta.hi)}};
  if (!(r.alpha.lo < r.alpha.hi) || !(r.beta.lo < r.beta.hi)) return std::nullopt;
  return r;
}

struct PartitionCell {
  int rect = 0;    // home rectangle
  int target = 0;  // rectangle its image crosses
  EigenRect box;
  QuadraticSurd area;  // Euclidean area on the torus
};

struct MarkovPartitionModel {
  ToralAutomorphism automorphism;
  std::array<EigenRect, 2> rects;
  std::vector<PartitionCell> cells;
  SubshiftSFT coding;
  std::array<std::array<QuadraticSurd, 2>, 2> lattice;  // eigen-coordinates of (1,0) and (0,1)
  std::vector<std::array<double, 4>> approx_boxes;      // alpha lo/hi, beta lo/hi
  std::array<double, 5> approx_frame{};                 // u0, u1, s0, s1, det

  std::pair<QuadraticSurd, QuadraticSurd> eigen_coordinates(const QuadraticSurd& x, const QuadraticSurd& y) const {
    const auto& u = automorphism.unstable;
    const auto& s = automorphism.stable;
    QuadraticSurd det = u[0] * s[1] - u[1] * s[0];
    return {(x * s[1] - y * s[0]) / det, (u[0] * y - u[1] * x) / det};
  }

  // Cell of a torus point, found by trying lifts near the fundamental domain. A double
  // pass settles points at least 1e-9 inside a cell; the rest are located exactly.
  int cell_of(const TorusPoint& p) const {
    const double x = p.x.convert_to<double>(), y = p.y.convert_to<double>();
    const auto [u0, u1, s0, s1, det] = approx_frame;
    constexpr double margin = 1e-9;
    for (int m1 = -3; m1 <= 3; ++m1) {
      for (int m2 = -3; m2 <= 3; ++m2) {
        const double a = ((x + m1) * s1 - (y + m2) * s0) / det, b = (u0 * (y + m2) - u1 * (x + m1)) / det;
        for (std::size_t c = 0; c < approx_boxes.size(); ++c) {
          const auto& bx = approx_boxes[c];
          if (bx[0] + margin < a && a < bx[1] - margin && bx[2] + margin < b && b < bx[3] - margin)
            return static_cast<int>(c);
        }
      }
    }
    return cell_of_exact(p);
  }

  int cell_of_exact(const TorusPoint& p) const {
    for (int m1 = -3; m1 <= 3; ++m1) {
      for (int m2 = -3; m2 <= 3; ++m2) {
        auto [a, b] = eigen_coordinates(QuadraticSurd::rational(p.x + m1), QuadraticSurd::rational(p.y + m2));
        for (std::size_t c = 0; c < cells.size(); ++c)
          if (cells[c].box.contains(a, b)) return static_cast<int>(c);
      }
    }
    throw std::logic_error("point not covered by the partition: " + p.to_string());
  }

  // Cells visited by p, T p, ..., T^{depth-1} p.
  FiniteWord code(TorusPoint p, int depth) const {
    FiniteWord w;
    for (int i = 0; i < depth; ++i) {
      w.push_back(cell_of(p));
      p = apply_matrix(automorphism.matrix, p);
    }
    return w;
  }

  QuadraticSurd total_area() const {
    QuadraticSurd s = 0;
    for (const auto& c : cells) s += c.area;
    return s;
  }
};

// Two-rectangle partition of the torus for [[2,1],[1,1]], refined so the coding is a 0-1
// subshift. In orthonormal eigen-coordinates the lattice is spanned by (a, b) and (b, -a)
// with a = phi / sqrt(phi + 2), b = 1 / sqrt(phi + 2), which tiles the plane by a square
// of side a with a square of side b at its lower right corner. The transition relation is
// read off from exact rectangle intersections of the images with lattice translates.
inline MarkovPartitionModel markov_partition_cat() {
  MarkovPartitionModel m;
  m.automorphism = cat_map();
  const auto& t = m.automorphism;
  const QuadraticSurd phi = (QuadraticSurd(1) + QuadraticSurd::sqrt(5)) / QuadraticSurd(2);
  const QuadraticSurd k = phi + QuadraticSurd(2);
  // side lengths in the (alpha, beta) coordinates of unstable (1, 1/phi) and stable (1, -phi)
  const QuadraticSurd big_a = phi * phi / k, big_b = phi / k;
  const QuadraticSurd small_a = phi / k, small_b = QuadraticSurd(1) / k;
  m.rects = {EigenRect{{0, big_a}, {0, big_b}}, EigenRect{{big_a, big_a + small_a}, {0, small_b}}};
  for (int i = 0; i < 2; ++i) {
    auto [a, b] = m.eigen_coordinates(i == 0 ? 1 : 0, i == 0 ? 0 : 1);
    m.lattice[static_cast<std::size_t>(i)] = {a, b};
  }
  const QuadraticSurd lam = t.lambda, lam_inv = t.lambda_inverse();
  const auto& u = t.unstable;
  const auto& s = t.stable;
  QuadraticSurd det = u[0] * s[1] - u[1] * s[0];
  const QuadraticSurd jac = det.sign() < 0 ? -det : det;

  for (int i = 0; i < 2; ++i) {
    const EigenRect& r = m.rects[static_cast<std::size_t>(i)];
    EigenRect img{{r.alpha.lo * lam, r.alpha.hi * lam}, {r.beta.lo * lam_inv, r.beta.hi * lam_inv}};
    for (int n1 = -6; n1 <= 6; ++n1) {
      for (int n2 = -6; n2 <= 6; ++n2) {
        QuadraticSurd da = m.lattice[0][0] * QuadraticSurd(n1) + m.lattice[1][0] * QuadraticSurd(n2);
        QuadraticSurd db = m.lattice[0][1] * QuadraticSurd(n1) + m.lattice[1][1] * QuadraticSurd(n2);
        for (int j = 0; j < 2; ++j) {
          EigenRect target = m.rects[static_cast<std::size_t>(j)].translated(da, db);
          auto q = overlap(img, target);
          if (!q) continue;
          if (!(q->alpha == target.alpha) || !(q->beta == img.beta))
            throw std::logic_error("cat-map partition fails the Markov crossing condition");
          EigenRect cell{{q->alpha.lo * lam_inv, q->alpha.hi * lam_inv}, {q->beta.lo * lam, q->beta.hi * lam}};
          m.cells.push_back({i, j, cell, cell.alpha.length() * cell.beta.length() * jac});
        }
      }
    }
  }
  // Home-rectangle order, then left to right, for stable symbol names.
  std::sort(m.cells.begin(), m.cells.end(), [](const PartitionCell& x, const PartitionCell& y) {
    if (x.rect != y.rect) return x.rect < y.rect;
    return x.box.alpha.lo < y.box.alpha.lo;
  });
  // Transition c -> d iff T(C_c) meets C_d in positive area, modulo the lattice.
  std::vector<std::string> names;
  for (std::size_t c = 0; c < m.cells.size(); ++c) names.push_back(std::to_string(c));
  std::vector<std::pair<int, int>> pairs;
  for (std::size_t c = 0; c < m.cells.size(); ++c) {
    const auto& cb = m.cells[c].box;
    EigenRect img{{cb.alpha.lo * lam, cb.alpha.hi * lam}, {cb.beta.lo * lam_inv, cb.beta.hi * lam_inv}};
    for (std::size_t d = 0; d < m.cells.size(); ++d) {
      bool hit = false;
      for (int n1 = -6; n1 <= 6 && !hit; ++n1) {
        for (int n2 = -6; n2 <= 6 && !hit; ++n2) {
          QuadraticSurd da = m.lattice[0][0] * QuadraticSurd(n1) + m.lattice[1][0] * QuadraticSurd(n2);
          QuadraticSurd db = m.lattice[0][1] * QuadraticSurd(n1) + m.lattice[1][1] * QuadraticSurd(n2);
          hit = overlap(img, m.cells[d].box.translated(da, db)).has_value();
        }
      }
      if (hit) pairs.push_back({static_cast<int>(c), static_cast<int>(d)});
    }
  }
  m.coding = SubshiftSFT(names, pairs, "catmap-partition");
  for (const auto& c : m.cells)
    m.approx_boxes.push_back({c.box.alpha.lo.to_double(), c.box.alpha.hi.to_double(), c.box.beta.lo.to_double(),
                              c.box.beta.hi.to_double()});
  m.approx_frame = {u[0].to_double(), u[1].to_double(), s[0].to_double(), s[1].to_double(), det.to_double()};
  if (!(m.total_area() == QuadraticSurd(1))) throw std::logic_error("cat-map partition cells do not tile the torus");
  return m;
}

}  // namespace spectra_lab
