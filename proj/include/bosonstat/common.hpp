#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace bosonstat {

using complexd = std::complex<double>;
using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

// Thrown when an input violates an operation's contract (bad sizes,
// non-unitary matrices, parameters out of range, unparsable files).
class invalid_input : public std::runtime_error {
 public:
  explicit invalid_input(const std::string& what) : std::runtime_error(what) {}
};

// Thrown when an input exceeds a configured size cap (e.g. full-group
// operations over S_n with n beyond the cap).
class size_limit_error : public std::runtime_error {
 public:
  explicit size_limit_error(const std::string& what) : std::runtime_error(what) {}
};

// Thrown when a computation fails numerically (singular designs,
// non-physical class functions, infeasible calibrations).
class numerical_error : public std::runtime_error {
 public:
  explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

inline void require(bool cond, const std::string& what) {
  if (!cond) throw invalid_input(what);
}

}  // namespace bosonstat
