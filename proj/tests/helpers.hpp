#pragma once

#include <random>
#include <vector>

#include <Eigen/Dense>

#include "funcobs/analysis.hpp"
#include "funcobs/pattern.hpp"
#include "funcobs/types.hpp"

namespace testutil {

using funcobs::Complex;

// 5-state system that is functionally detectable but not functionally
// observable; its state matrix is defective (two 2x2 Jordan blocks).
inline funcobs::SystemTriple detectable_not_observable_5x5() {
  Eigen::MatrixXd a(5, 5);
  a << -1, 0, 0, 0, 1,
        0, 1, 0, 0, 0,
        0, 1, 1, 0, 0,
        0, 0, 0, 0, 0,
        0, 0, 0, 0, -1;
  Eigen::MatrixXd c(1, 5);
  c << 0, 1, 0, 1, 1;
  Eigen::MatrixXd f(1, 5);
  f << 1, 1, 0, 0, 0;
  return {a, c, f};
}

// Jordan data of the 5x5 fixture: blocks for eigenvalues 1, -1, 0 with
// generalized eigenvectors picked from standard basis vectors.
inline std::vector<funcobs::JordanBlockData> jordan_blocks_5x5() {
  auto col = [](int i) {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(5);
    v(i) = Complex(1.0, 0.0);
    return v;
  };
  std::vector<funcobs::JordanBlockData> blocks(3);
  blocks[0].eigenvalue = Complex(1.0, 0.0);
  blocks[0].J.resize(2, 2);
  blocks[0].J << Complex(1, 0), Complex(1, 0), Complex(0, 0), Complex(1, 0);
  blocks[0].T.resize(5, 2);
  blocks[0].T.col(0) = col(2);
  blocks[0].T.col(1) = col(1);
  blocks[1].eigenvalue = Complex(-1.0, 0.0);
  blocks[1].J.resize(2, 2);
  blocks[1].J << Complex(-1, 0), Complex(1, 0), Complex(0, 0), Complex(-1, 0);
  blocks[1].T.resize(5, 2);
  blocks[1].T.col(0) = col(0);
  blocks[1].T.col(1) = col(4);
  blocks[2].eigenvalue = Complex(0.0, 0.0);
  blocks[2].J.resize(1, 1);
  blocks[2].J << Complex(0, 0);
  blocks[2].T.resize(5, 1);
  blocks[2].T.col(0) = col(3);
  return blocks;
}

// Nilpotent 3-chain where the PBH-style test passes at the only eigenvalue
// yet the triple is neither functionally observable nor detectable.
inline funcobs::SystemTriple nilpotent_counterexample_3x3() {
  Eigen::MatrixXd a(3, 3);
  a << 0, 1, 0,
       0, 0, 1,
       0, 0, 0;
  Eigen::MatrixXd c(1, 3);
  c << 0, 0, 1;
  Eigen::MatrixXd f(1, 3);
  f << 0, 1, 0;
  return {a, c, f};
}

// Pattern triple whose extra sensing entry destroys SFO (generic ranks 3 vs 2).
inline funcobs::PatternTriple sfo_broken_by_link_3() {
  using funcobs::PatternMatrix;
  PatternMatrix a = PatternMatrix::fromSupport(3, 3, {{1, 0}});
  PatternMatrix c = PatternMatrix::fromSupport(1, 3, {{0, 1}, {0, 2}});
  PatternMatrix f = PatternMatrix::fromSupport(1, 3, {{0, 1}});
  return {a, c, f};
}

// Same triple without the (1,3) sensing entry; this one is SFO.
inline funcobs::PatternTriple sfo_intact_3() {
  using funcobs::PatternMatrix;
  PatternMatrix a = PatternMatrix::fromSupport(3, 3, {{1, 0}});
  PatternMatrix c = PatternMatrix::fromSupport(1, 3, {{0, 1}});
  PatternMatrix f = PatternMatrix::fromSupport(1, 3, {{0, 1}});
  return {a, c, f};
}

// 7-state, single-output chain with a side branch: d_o = 5 and exactly the
// states {1, 2, 5} are reached by every maximum independent walk family.
inline funcobs::PatternMatrix chain_branch_7_A() {
  // edges x2->x1, x3->x2, x4->x3, x5->x4, x6->x2, x7->x6
  return funcobs::PatternMatrix::fromSupport(
      7, 7, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {1, 5}, {5, 6}});
}

inline funcobs::PatternMatrix chain_branch_7_C() {
  return funcobs::PatternMatrix::fromSupport(1, 7, {{0, 0}});  // x1 -> y1
}

inline funcobs::PatternTriple chain_branch_7(std::vector<int> functionalStates) {
  funcobs::PatternMatrix f(static_cast<int>(functionalStates.size()), 7);
  for (std::size_t k = 0; k < functionalStates.size(); ++k)
    f.set(static_cast<int>(k), functionalStates[k]);
  return {chain_branch_7_A(), chain_branch_7_C(), f};
}

// 8-state minimal-design fixture: two complex pairs 1 +/- i (multiplicity 3)
// and -2 +/- i (multiplicity 1), F picking the first four states.
inline Eigen::MatrixXd rotation_blocks_8x8_A() {
  Eigen::MatrixXd a(8, 8);
  a << 0, 4, 3, -2, -3, 0, -4, 1,
      -1, -1, -1, 1, 0, 3, 1, 4,
       2, 10, 1, -3, -3, 3, -3, 5,
      -1, 9, 1, -2, -3, 9, -1, 13,
       0, 0, 0, 0, 1, 1, 0, 0,
       0, 0, 0, 0, -1, 1, 0, 0,
       0, 0, 0, 0, 0, 0, 1, 1,
       0, 0, 0, 0, 0, 0, -1, 1;
  return a;
}

inline Eigen::MatrixXd rotation_blocks_8x8_F() {
  Eigen::MatrixXd f(4, 8);
  f << Eigen::MatrixXd::Identity(4, 4), Eigen::MatrixXd::Zero(4, 4);
  return f;
}

inline Eigen::MatrixXd rotation_blocks_8x8_reference_C() {
  Eigen::MatrixXd c(2, 8);
  c << 0, -3, 0, 1, 0, 0, 0, 0,
       0, 1, 0, 0, 0, 0, 0, 0;
  return c;
}

// Set-cover-shaped structural placement instance: ground states x1..x4,
// collector states x5..x7 for the subsets {1,2}, {2,3}, {3,4}, self-loops
// everywhere, one dedicated sensor per state, functionals on the ground set.
inline funcobs::PatternTriple set_cover_pattern() {
  using funcobs::PatternMatrix;
  PatternMatrix a(7, 7);
  for (int i = 0; i < 7; ++i) a.set(i, i);
  a.set(4, 0); a.set(4, 1);          // x1, x2 -> x5
  a.set(5, 1); a.set(5, 2);          // x2, x3 -> x6
  a.set(6, 2); a.set(6, 3);          // x3, x4 -> x7
  PatternMatrix c = PatternMatrix::identity(7);
  PatternMatrix f(4, 7);
  for (int i = 0; i < 4; ++i) f.set(i, i);
  return {a, c, f};
}

// Exact integer rank via fraction-free (Bareiss) elimination; the
// independent oracle for small integer matrices.
inline int exact_int_rank(std::vector<std::vector<long long>> m) {
  if (m.empty() || m[0].empty()) return 0;
  const int rows = static_cast<int>(m.size());
  const int cols = static_cast<int>(m[0].size());
  long long prev = 1;
  int rank = 0;
  int pivotRow = 0;
  for (int col = 0; col < cols && pivotRow < rows; ++col) {
    int pivot = -1;
    for (int i = pivotRow; i < rows; ++i)
      if (m[i][col] != 0) {
        pivot = i;
        break;
      }
    if (pivot < 0) continue;
    std::swap(m[pivot], m[pivotRow]);
    for (int i = pivotRow + 1; i < rows; ++i) {
      for (int j = col + 1; j < cols; ++j)
        m[i][j] = (m[pivotRow][col] * m[i][j] - m[i][col] * m[pivotRow][j]) / prev;
      m[i][col] = 0;
    }
    prev = m[pivotRow][col];
    ++pivotRow;
    ++rank;
  }
  return rank;
}

inline Eigen::MatrixXd random_gaussian(int rows, int cols, std::mt19937_64& rng) {
  std::normal_distribution<double> dist(0.0, 1.0);
  Eigen::MatrixXd m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = dist(rng);
  return m;
}

inline Eigen::MatrixXd random_orthogonal(int n, std::mt19937_64& rng) {
  const Eigen::MatrixXd g = random_gaussian(n, n, rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  return qr.householderQ();
}

// Diagonalizable state matrix by orthogonal similarity of a random diagonal
// spectrum drawn from a small separated grid (repeats allowed).
inline Eigen::MatrixXd random_diagonalizable(int n, std::mt19937_64& rng,
                                             std::vector<double>* spectrumOut = nullptr) {
  static const double grid[] = {-2.5, -1.6, -0.7, 0.0, 0.4, 1.2, 2.1, 3.0};
  std::uniform_int_distribution<int> pick(0, 7);
  Eigen::VectorXd d(n);
  for (int i = 0; i < n; ++i) d(i) = grid[pick(rng)];
  if (spectrumOut) spectrumOut->assign(d.data(), d.data() + n);
  const Eigen::MatrixXd q = random_orthogonal(n, rng);
  return q * d.asDiagonal() * q.transpose();
}

// Integer diagonalizable matrix with a repeat-prone integer spectrum,
// conjugated by a random unimodular integer matrix. Everything is exactly
// representable, so numerical rank decisions on such instances sit far from
// the SVD threshold instead of riding the rounding noise of an irrational
// similarity.
inline Eigen::MatrixXd random_int_diagonalizable(int n, std::mt19937_64& rng,
                                                 std::vector<double>* spectrumOut = nullptr) {
  static const int grid[] = {-2, -1, 0, 1, 2};
  std::uniform_int_distribution<int> pickValue(0, 4);
  std::uniform_int_distribution<int> pickIndex(0, n - 1);
  std::bernoulli_distribution negate(0.5);
  for (;;) {
    Eigen::MatrixXd s = Eigen::MatrixXd::Identity(n, n);
    Eigen::MatrixXd sinv = Eigen::MatrixXd::Identity(n, n);
    for (int k = 0; k < 2 * n; ++k) {
      const int i = pickIndex(rng);
      const int j = pickIndex(rng);
      if (i == j) continue;
      const double t = negate(rng) ? -1.0 : 1.0;
      s.row(j) += t * s.row(i);      // S <- E S
      sinv.col(i) -= t * sinv.col(j);  // S^-1 <- S^-1 E^-1
    }
    if (s.cwiseAbs().maxCoeff() > 16 || sinv.cwiseAbs().maxCoeff() > 16) continue;
    Eigen::VectorXd d(n);
    for (int i = 0; i < n; ++i) d(i) = grid[pickValue(rng)];
    if (spectrumOut) spectrumOut->assign(d.data(), d.data() + n);
    return s * d.asDiagonal() * sinv;
  }
}

inline Eigen::MatrixXd random_int_matrix(int rows, int cols, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> entry(-2, 2);
  Eigen::MatrixXd m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = entry(rng);
  return m;
}

inline funcobs::PatternMatrix random_pattern(int rows, int cols, double density,
                                             std::mt19937_64& rng) {
  std::bernoulli_distribution coin(density);
  funcobs::PatternMatrix pm(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j)
      if (coin(rng)) pm.set(i, j);
  return pm;
}

inline std::vector<int> iota_vector(int count) {
  std::vector<int> v(count);
  for (int i = 0; i < count; ++i) v[i] = i;
  return v;
}

// Functional made of power-of-two multiples of rows of C: exactly inside the
// row space of the observability matrix, with no floating-point residue that
// could put the instance on a rank-decision knife edge.
inline Eigen::MatrixXd scaled_row_subset(const Eigen::MatrixXd& c, int rows,
                                         std::mt19937_64& rng) {
  Eigen::MatrixXd f(rows, c.cols());
  std::uniform_int_distribution<int> pickRow(0, static_cast<int>(c.rows()) - 1);
  std::uniform_int_distribution<int> pickExp(-1, 2);
  for (int i = 0; i < rows; ++i)
    f.row(i) = std::ldexp(1.0, pickExp(rng)) * c.row(pickRow(rng));
  return f;
}

}  // namespace testutil
