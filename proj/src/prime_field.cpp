#include "funcobs/prime_field.hpp"

#include <stdexcept>

namespace funcobs {

std::uint32_t field_pow(std::uint32_t base, std::uint64_t exp) {
  std::uint32_t result = 1u;
  std::uint32_t acc = base;
  while (exp > 0) {
    if (exp & 1u) result = field_mul(result, acc);
    acc = field_mul(acc, acc);
    exp >>= 1u;
  }
  return result;
}

PrimeFieldMatrix PrimeFieldMatrix::identity(int n) {
  PrimeFieldMatrix m(n, n);
  for (int i = 0; i < n; ++i) m.at(i, i) = 1u;
  return m;
}

PrimeFieldMatrix field_matmul(const PrimeFieldMatrix& a, const PrimeFieldMatrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("field_matmul: dimension mismatch");
  PrimeFieldMatrix out(a.rows(), b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int k = 0; k < a.cols(); ++k) {
      const std::uint32_t aik = a.at(i, k);
      if (aik == 0u) continue;
      for (int j = 0; j < b.cols(); ++j)
        out.at(i, j) = field_add(out.at(i, j), field_mul(aik, b.at(k, j)));
    }
  return out;
}

PrimeFieldMatrix field_vstack(const PrimeFieldMatrix& top, const PrimeFieldMatrix& bottom) {
  if (top.cols() != bottom.cols() && top.rows() != 0 && bottom.rows() != 0)
    throw std::invalid_argument("field_vstack: column counts differ");
  const int cols = top.rows() != 0 ? top.cols() : bottom.cols();
  PrimeFieldMatrix out(top.rows() + bottom.rows(), cols);
  for (int i = 0; i < top.rows(); ++i)
    for (int j = 0; j < cols; ++j) out.at(i, j) = top.at(i, j);
  for (int i = 0; i < bottom.rows(); ++i)
    for (int j = 0; j < cols; ++j) out.at(top.rows() + i, j) = bottom.at(i, j);
  return out;
}

int prime_field_rank(PrimeFieldMatrix m) {
  int rank = 0;
  int pivot_row = 0;
  for (int col = 0; col < m.cols() && pivot_row < m.rows(); ++col) {
    int pivot = -1;
    for (int i = pivot_row; i < m.rows(); ++i)
      if (m.at(i, col) != 0u) {
        pivot = i;
        break;
      }
    if (pivot < 0) continue;
    if (pivot != pivot_row)
      for (int j = col; j < m.cols(); ++j) std::swap(m.at(pivot, j), m.at(pivot_row, j));
    const std::uint32_t inv = field_inv(m.at(pivot_row, col));
    for (int i = pivot_row + 1; i < m.rows(); ++i) {
      const std::uint32_t factor = field_mul(m.at(i, col), inv);
      if (factor == 0u) continue;
      for (int j = col; j < m.cols(); ++j)
        m.at(i, j) = field_sub(m.at(i, j), field_mul(factor, m.at(pivot_row, j)));
    }
    ++pivot_row;
    ++rank;
  }
  return rank;
}

PrimeFieldMatrix field_observability_matrix(const PrimeFieldMatrix& a,
                                            const PrimeFieldMatrix& c) {
  if (a.rows() != a.cols()) throw std::invalid_argument("field_observability_matrix: A not square");
  if (c.cols() != a.rows())
    throw std::invalid_argument("field_observability_matrix: C column count mismatch");
  const int n = a.rows();
  const int p = c.rows();
  PrimeFieldMatrix out(n * p, n);
  PrimeFieldMatrix block = c;
  for (int t = 0; t < n; ++t) {
    for (int i = 0; i < p; ++i)
      for (int j = 0; j < n; ++j) out.at(t * p + i, j) = block.at(i, j);
    if (t + 1 < n) block = field_matmul(block, a);
  }
  return out;
}

PrimeFieldMatrix field_controllability_matrix(const PrimeFieldMatrix& a,
                                              const PrimeFieldMatrix& b) {
  if (a.rows() != a.cols())
    throw std::invalid_argument("field_controllability_matrix: A not square");
  if (b.rows() != a.rows())
    throw std::invalid_argument("field_controllability_matrix: B row count mismatch");
  const int n = a.rows();
  const int m = b.cols();
  PrimeFieldMatrix out(n, n * m);
  PrimeFieldMatrix block = b;
  for (int t = 0; t < n; ++t) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < m; ++j) out.at(i, t * m + j) = block.at(i, j);
    if (t + 1 < n) block = field_matmul(a, block);
  }
  return out;
}

}  // namespace funcobs
