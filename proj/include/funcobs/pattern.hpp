#pragma once

#include <random>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "funcobs/prime_field.hpp"

namespace funcobs {

/// Zero/free structured matrix: each position either holds a fixed zero or
/// an independent free parameter.
class PatternMatrix {
 public:
  PatternMatrix() = default;
  PatternMatrix(int rows, int cols) : rows_(rows), cols_(cols), mask_(rows * cols, 0u) {}

  static PatternMatrix fromSupport(int rows, int cols,
                                   const std::vector<std::pair<int, int>>& support);
  /// 1 x n pattern with a single free entry at `state` (0-based).
  static PatternMatrix unitRow(int n, int state);
  static PatternMatrix identity(int n);
  static PatternMatrix vstack(const PatternMatrix& top, const PatternMatrix& bottom);

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  bool at(int i, int j) const { return mask_[static_cast<std::size_t>(i) * cols_ + j] != 0u; }
  void set(int i, int j, bool on = true) {
    mask_[static_cast<std::size_t>(i) * cols_ + j] = on ? 1u : 0u;
  }

  int supportSize() const;
  PatternMatrix transposed() const;
  PatternMatrix selectRows(std::span<const int> rows) const;
  /// 0-based column indices that carry at least one free entry.
  std::vector<int> nonzeroColumns() const;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<std::uint8_t> mask_;
};

/// Structured triple (Abar, Cbar, Fbar) with matching state dimension.
struct PatternTriple {
  PatternMatrix A;
  PatternMatrix C;
  PatternMatrix F;

  int n() const { return A.rows(); }
  int p() const { return C.rows(); }
  int r() const { return F.rows(); }

  void validate() const;
  /// 0-based functional state set X_F (states with a free entry in Fbar).
  std::vector<int> functionalStates() const { return F.nonzeroColumns(); }
};

/// Real realization with free entries drawn from +/-[0.5, 1.5] so the
/// support pattern is preserved.
Eigen::MatrixXd random_real_realization(const PatternMatrix& pm, std::mt19937_64& rng);
Eigen::MatrixXd random_real_realization(const PatternMatrix& pm, std::uint64_t seed);

/// Field realization with free entries uniform in [1, p-1] (never 0).
PrimeFieldMatrix random_field_realization(const PatternMatrix& pm, std::mt19937_64& rng);
PrimeFieldMatrix random_field_realization(const PatternMatrix& pm, std::uint64_t seed);

}  // namespace funcobs
