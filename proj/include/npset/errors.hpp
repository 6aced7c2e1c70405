#pragma once

#include <stdexcept>

namespace npset {

// Usage errors (bad parameters, violated preconditions) are reported with
// std::invalid_argument. The types below mark resource-side failures.

// A brute-force oracle was asked for a field larger than its ceiling.
class OracleRefusal : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Pollard rho exhausted its step budget.
class FactorizationFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A verdict cache was written by a different engine version (or is corrupt).
class CacheMismatch : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace npset
