#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace rmhmc {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Raised when the log-density, its derivatives or the metric become
// non-finite or cannot be factorized. Samplers treat it as a rejection.
class UnstableRegionError : public std::runtime_error {
 public:
  explicit UnstableRegionError(const std::string& what) : std::runtime_error(what) {}
};

// Invalid user-supplied configuration or model parameters.
class ConfigError : public std::invalid_argument {
 public:
  explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

inline bool all_finite(const Vector& v) { return v.allFinite(); }

}  // namespace rmhmc
