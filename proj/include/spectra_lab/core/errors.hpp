#pragma once

#include <stdexcept>
#include <string>

namespace spectra_lab {

// A configured cap (orbit count, cylinder count, node budget) was exceeded.
class resource_limit_error : public std::runtime_error {
 public:
  explicit resource_limit_error(const std::string& what) : std::runtime_error(what) {}
};

// An iterative method hit its iteration cap before reaching the requested width.
class convergence_error : public std::runtime_error {
 public:
  explicit convergence_error(const std::string& what) : std::runtime_error(what) {}
};

// Exact or interval arithmetic could not decide a comparison or a factorization.
class undecidable_error : public std::runtime_error {
 public:
  explicit undecidable_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace spectra_lab
