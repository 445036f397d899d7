#pragma once

#include <cmath>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "spectra_lab/models/markov_partition.hpp"
#include "spectra_lab/symbolic/subshift.hpp"

namespace spectra_lab {

struct AvoidanceResult {
  SubshiftSFT subsystem;
  bool empty = false;
  int depth = 0;  // length of the forbidden cylinder word; 1 for whole cells
  std::string note;
};

// Removes whole partition cells.
inline AvoidanceResult avoidance_subsystem(const MarkovPartitionModel& m, const std::set<int>& forbidden_cells) {
  AvoidanceResult r;
  r.depth = 1;
  std::vector<bool> keep(static_cast<std::size_t>(m.coding.size()), true);
  for (int c : forbidden_cells) {
    if (c < 0 || c >= m.coding.size()) throw std::invalid_argument("forbidden cell out of range");
    keep[static_cast<std::size_t>(c)] = false;
  }
  r.subsystem = m.coding.restricted(keep, m.coding.label() + "-avoid").pruned();
  r.empty = r.subsystem.empty();
  if (r.empty) r.note = "no orbit avoids the forbidden cells";
  return r;
}

// Removes the refined cell [w] = C_{w0} ∩ T^-1 C_{w1} ∩ ... of depth |w|.
inline AvoidanceResult avoidance_subsystem(const MarkovPartitionModel& m, const FiniteWord& forbidden) {
  AvoidanceResult r;
  r.depth = static_cast<int>(forbidden.size());
  r.subsystem = avoid_word(m.coding, forbidden);
  r.empty = r.subsystem.empty();
  if (r.empty) r.note = "no orbit avoids the forbidden word";
  return r;
}

// Stable and unstable rates are both 1/lambda, so each factor has dimension
// log rho / log lambda and the invariant set has twice that.
inline double invariant_set_dimension(const ToralAutomorphism& t, const SubshiftSFT& s, double tol = 1e-12) {
  if (s.empty()) return 0.0;
  double rho = spectral_radius(s, tol).mid();
  if (rho <= 1.0) return 0.0;
  return 2.0 * std::log(rho) / std::log(t.lambda.to_double());
}

}  // namespace spectra_lab
