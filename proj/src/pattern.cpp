#include "funcobs/pattern.hpp"

#include <stdexcept>

namespace funcobs {

PatternMatrix PatternMatrix::fromSupport(int rows, int cols,
                                         const std::vector<std::pair<int, int>>& support) {
  PatternMatrix pm(rows, cols);
  for (const auto& [i, j] : support) {
    if (i < 0 || i >= rows || j < 0 || j >= cols)
      throw std::invalid_argument("pattern support position out of bounds");
    pm.set(i, j);
  }
  return pm;
}

PatternMatrix PatternMatrix::unitRow(int n, int state) {
  if (state < 0 || state >= n) throw std::invalid_argument("unitRow: state index out of bounds");
  PatternMatrix pm(1, n);
  pm.set(0, state);
  return pm;
}

PatternMatrix PatternMatrix::identity(int n) {
  PatternMatrix pm(n, n);
  for (int i = 0; i < n; ++i) pm.set(i, i);
  return pm;
}

PatternMatrix PatternMatrix::vstack(const PatternMatrix& top, const PatternMatrix& bottom) {
  if (top.cols() != bottom.cols() && top.rows() != 0 && bottom.rows() != 0)
    throw std::invalid_argument("pattern vstack: column counts differ");
  const int cols = top.rows() != 0 ? top.cols() : bottom.cols();
  PatternMatrix out(top.rows() + bottom.rows(), cols);
  for (int i = 0; i < top.rows(); ++i)
    for (int j = 0; j < cols; ++j) out.set(i, j, top.at(i, j));
  for (int i = 0; i < bottom.rows(); ++i)
    for (int j = 0; j < cols; ++j) out.set(top.rows() + i, j, bottom.at(i, j));
  return out;
}

int PatternMatrix::supportSize() const {
  int count = 0;
  for (auto v : mask_) count += v != 0u;
  return count;
}

PatternMatrix PatternMatrix::transposed() const {
  PatternMatrix out(cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) out.set(j, i, at(i, j));
  return out;
}

PatternMatrix PatternMatrix::selectRows(std::span<const int> rows) const {
  PatternMatrix out(static_cast<int>(rows.size()), cols_);
  for (std::size_t k = 0; k < rows.size(); ++k) {
    if (rows[k] < 0 || rows[k] >= rows_)
      throw std::invalid_argument("selectRows: row index out of bounds");
    for (int j = 0; j < cols_; ++j) out.set(static_cast<int>(k), j, at(rows[k], j));
  }
  return out;
}

std::vector<int> PatternMatrix::nonzeroColumns() const {
  std::vector<int> cols;
  for (int j = 0; j < cols_; ++j)
    for (int i = 0; i < rows_; ++i)
      if (at(i, j)) {
        cols.push_back(j);
        break;
      }
  return cols;
}

void PatternTriple::validate() const {
  if (A.rows() != A.cols()) throw std::invalid_argument("Abar must be square");
  if (C.cols() != A.cols() && C.rows() != 0)
    throw std::invalid_argument("Cbar must have as many columns as Abar");
  if (F.cols() != A.cols() && F.rows() != 0)
    throw std::invalid_argument("Fbar must have as many columns as Abar");
}

Eigen::MatrixXd random_real_realization(const PatternMatrix& pm, std::mt19937_64& rng) {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(pm.rows(), pm.cols());
  std::uniform_real_distribution<double> magnitude(0.5, 1.5);
  std::bernoulli_distribution negative(0.5);
  for (int i = 0; i < pm.rows(); ++i)
    for (int j = 0; j < pm.cols(); ++j)
      if (pm.at(i, j)) {
        const double value = magnitude(rng);
        out(i, j) = negative(rng) ? -value : value;
      }
  return out;
}

Eigen::MatrixXd random_real_realization(const PatternMatrix& pm, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return random_real_realization(pm, rng);
}

PrimeFieldMatrix random_field_realization(const PatternMatrix& pm, std::mt19937_64& rng) {
  PrimeFieldMatrix out(pm.rows(), pm.cols());
  std::uniform_int_distribution<std::uint32_t> residue(1u, kFieldPrime - 1u);
  for (int i = 0; i < pm.rows(); ++i)
    for (int j = 0; j < pm.cols(); ++j)
      if (pm.at(i, j)) out.at(i, j) = residue(rng);
  return out;
}

PrimeFieldMatrix random_field_realization(const PatternMatrix& pm, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return random_field_realization(pm, rng);
}

}  // namespace funcobs
