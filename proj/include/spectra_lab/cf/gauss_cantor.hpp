#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "spectra_lab/cantor/regular_cantor_set.hpp"
#include "spectra_lab/cf/continued_fraction.hpp"

namespace spectra_lab {

// C(N): numbers in (0,1) whose continued-fraction digits are all <= N.
// Symbol i stands for digit i + 1, with inverse branch x -> 1/(i + 1 + x).
// Hull [ [0; N,1,N,1,...], [0; 1,N,1,N,...] ] as exact surds.
inline RegularCantorSet gauss_cantor_set(int n) {
  if (n < 1) throw std::invalid_argument("gauss_cantor_set needs N >= 1");
  ExactInterval hull{cf_value({{0}, {n, 1}}), cf_value({{0}, {1, n}})};
  std::vector<Mobius> maps;
  for (int a = 1; a <= n; ++a) maps.push_back(Mobius::gauss_branch(a));
  return from_full_ifs("gauss:" + std::to_string(n), hull, maps);
}

}  // namespace spectra_lab
