#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <optional>
#include <vector>

namespace spectra_lab {

// Nonnegative matrix in compressed-row form.
struct SparseMatrix {
  std::size_t n = 0;
  std::vector<std::size_t> row_start{0};
  std::vector<std::size_t> col;
  std::vector<double> val;

  void add_row(const std::vector<std::pair<std::size_t, double>>& entries) {
    for (const auto& [j, v] : entries) {
      col.push_back(j);
      val.push_back(v);
    }
    row_start.push_back(col.size());
    ++n;
  }
};

struct PerronBounds {
  double lower = 0.0;
  double upper = 0.0;
  bool converged = false;
  std::size_t iterations = 0;
};

namespace detail {

// Strongly connected components (iterative Tarjan). Returns component id per vertex.
inline std::vector<std::size_t> strong_components(const SparseMatrix& a, std::size_t& count) {
  const std::size_t n = a.n;
  constexpr std::size_t unset = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> index(n, unset), low(n, 0), comp(n, unset);
  std::vector<bool> on_stack(n, false);
  std::vector<std::size_t> stack;
  std::vector<std::pair<std::size_t, std::size_t>> call;
  std::size_t counter = 0;
  count = 0;
  for (std::size_t root = 0; root < n; ++root) {
    if (index[root] != unset) continue;
    call.push_back({root, a.row_start[root]});
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!call.empty()) {
      auto& [v, e] = call.back();
      if (e < a.row_start[v + 1]) {
        std::size_t w = a.col[e++];
        if (index[w] == unset) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          call.push_back({w, a.row_start[w]});
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      if (low[v] == index[v]) {
        std::size_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          comp[w] = count;
        } while (w != v);
        ++count;
      }
      std::size_t done = v;
      call.pop_back();
      if (!call.empty()) low[call.back().first] = std::min(low[call.back().first], low[done]);
    }
  }
  return comp;
}

// Period (gcd of cycle lengths) of an irreducible block given by `members`.
inline std::size_t block_period(const SparseMatrix& a, const std::vector<std::size_t>& members,
                                const std::vector<std::size_t>& comp, std::size_t id) {
  constexpr std::size_t unset = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> level(a.n, unset);
  std::vector<std::size_t> queue{members.front()};
  level[members.front()] = 0;
  std::size_t g = 0;
  for (std::size_t h = 0; h < queue.size(); ++h) {
    std::size_t v = queue[h];
    for (std::size_t e = a.row_start[v]; e < a.row_start[v + 1]; ++e) {
      std::size_t w = a.col[e];
      if (comp[w] != id || a.val[e] <= 0) continue;
      if (level[w] == unset) {
        level[w] = level[v] + 1;
        queue.push_back(w);
      } else {
        auto diff = static_cast<long long>(level[v] + 1) - static_cast<long long>(level[w]);
        g = std::gcd(g, static_cast<std::size_t>(std::llabs(diff)));
      }
    }
  }
  return g;
}

}  // namespace detail

// Collatz-Wielandt enclosure of the Perron root, computed per irreducible block with
// power iteration (shifted by the identity on periodic blocks). Bounds are padded by a
// small relative margin for floating-point rounding.
//
// `threshold`: stop as soon as the enclosure excludes this value.
inline PerronBounds perron_bounds(const SparseMatrix& a, double rel_tol, std::size_t max_iter,
                                  std::optional<double> threshold = std::nullopt) {
  PerronBounds out;
  out.converged = true;
  if (a.n == 0) return out;
  std::size_t ncomp = 0;
  auto comp = detail::strong_components(a, ncomp);
  std::vector<std::vector<std::size_t>> members(ncomp);
  for (std::size_t v = 0; v < a.n; ++v) members[comp[v]].push_back(v);
  std::vector<std::size_t> local(a.n, 0);
  constexpr double pad = 1e-14;

  for (std::size_t id = 0; id < ncomp; ++id) {
    const auto& mem = members[id];
    bool cyclic = false;
    for (std::size_t v : mem) {
      for (std::size_t e = a.row_start[v]; e < a.row_start[v + 1]; ++e) {
        if (comp[a.col[e]] == id && a.val[e] > 0) cyclic = true;
      }
    }
    if (!cyclic) continue;
    for (std::size_t i = 0; i < mem.size(); ++i) local[mem[i]] = i;
    double shift = detail::block_period(a, mem, comp, id) == 1 ? 0.0 : 1.0;

    std::vector<double> x(mem.size(), 1.0), y(mem.size());
    double lo = 0, hi = std::numeric_limits<double>::infinity();
    bool done = false;
    std::size_t it = 0;
    for (; it < max_iter && !done; ++it) {
      double cmin = std::numeric_limits<double>::infinity();
      double cmax = 0.0;
      for (std::size_t i = 0; i < mem.size(); ++i) {
        std::size_t v = mem[i];
        double s = shift * x[i];
        for (std::size_t e = a.row_start[v]; e < a.row_start[v + 1]; ++e) {
          if (comp[a.col[e]] == id) s += a.val[e] * x[local[a.col[e]]];
        }
        y[i] = s;
        double ratio = s / x[i];
        cmin = std::min(cmin, ratio);
        cmax = std::max(cmax, ratio);
      }
      lo = std::max(lo, (cmin - shift) * (1 - pad));
      hi = std::min(hi, (cmax - shift) * (1 + pad));
      double norm = *std::max_element(y.begin(), y.end());
      for (std::size_t i = 0; i < mem.size(); ++i) x[i] = y[i] / norm;
      if (hi - lo <= rel_tol * hi) done = true;
      if (threshold && (lo > *threshold || hi < *threshold)) done = true;
      // Blocks that cannot raise the global maximum need no further work.
      if (hi <= out.lower) done = true;
    }
    out.iterations = std::max(out.iterations, it);
    if (!(hi - lo <= rel_tol * hi) && !(hi <= out.lower) &&
        !(threshold && (lo > *threshold || hi < *threshold))) {
      out.converged = false;
    }
    out.lower = std::max(out.lower, lo);
    out.upper = std::max(out.upper, hi);
  }
  return out;
}

}  // namespace spectra_lab
