#pragma once

#include <complex>
#include <limits>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace funcobs {

inline constexpr const char* kVersion = "0.1.0";

/// Machine epsilon used by every default tolerance in this library.
inline constexpr double kMachineEpsilon = std::numeric_limits<double>::epsilon();

using Complex = std::complex<double>;

/// Tolerance policy for all SVD-based rank decisions.
///
/// With mode SvdRelative the threshold is tolerance * sigma_max, or the
/// machine default  sigma_max * max(rows, cols) * epsilon  when tolerance
/// is zero. With mode SvdAbsolute the threshold is the tolerance itself
/// (zero again meaning the machine default).
struct RankPolicy {
  enum class Mode { SvdRelative, SvdAbsolute };
  Mode mode = Mode::SvdRelative;
  double tolerance = 0.0;
};

inline double rank_threshold(const RankPolicy& policy, double sigma_max,
                             Eigen::Index rows, Eigen::Index cols) {
  if (policy.tolerance < 0.0) throw std::invalid_argument("rank tolerance must be nonnegative");
  const double machine_default =
      sigma_max * static_cast<double>(std::max(rows, cols)) * kMachineEpsilon;
  if (policy.tolerance == 0.0) return machine_default;
  return policy.mode == RankPolicy::Mode::SvdAbsolute ? policy.tolerance
                                                      : policy.tolerance * sigma_max;
}

/// A state-space triple (A, C, F): dynamics, measurements, and the
/// functional of states to be reconstructed.
struct SystemTriple {
  Eigen::MatrixXd A;  // n x n
  Eigen::MatrixXd C;  // p x n, p >= 0
  Eigen::MatrixXd F;  // r x n, r >= 1

  Eigen::Index n() const { return A.rows(); }
  Eigen::Index p() const { return C.rows(); }
  Eigen::Index r() const { return F.rows(); }

  void validate() const {
    if (A.rows() != A.cols()) throw std::invalid_argument("A must be square");
    if (C.cols() != A.rows()) throw std::invalid_argument("C must have as many columns as A");
    if (F.cols() != A.rows()) throw std::invalid_argument("F must have as many columns as A");
    if (F.rows() < 1) throw std::invalid_argument("F must have at least one row");
    if (!A.allFinite() || !C.allFinite() || !F.allFinite())
      throw std::invalid_argument("system matrices must be finite");
  }
};

class NotDiagonalizableError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnsupportedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NumericalDegeneracyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace funcobs
