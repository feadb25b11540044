#pragma once

#include <stdexcept>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "funcobs/types.hpp"

namespace funcobs {

/// Numerical rank of a dense real or complex matrix under the given policy.
/// Empty matrices (zero rows or columns) have rank 0.
template <typename Derived>
int rank(const Eigen::MatrixBase<Derived>& m, const RankPolicy& policy = {}) {
  using Plain = typename Derived::PlainObject;
  const Plain mat = m.eval();
  if (mat.rows() == 0 || mat.cols() == 0) return 0;
  if (!mat.allFinite()) throw std::invalid_argument("rank: matrix has non-finite entries");
  Eigen::JacobiSVD<Plain> svd(mat);
  const auto& sv = svd.singularValues();
  const double sigma_max = sv.size() > 0 ? sv(0) : 0.0;
  const double threshold = rank_threshold(policy, sigma_max, mat.rows(), mat.cols());
  int r = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > threshold) ++r;
  return r;
}

/// Orthonormal basis of the kernel of M, as columns of an n x (n - rank M)
/// matrix. M may have zero rows, in which case the kernel is all of R^n.
template <typename Derived>
typename Derived::PlainObject kernel_basis(const Eigen::MatrixBase<Derived>& m,
                                           const RankPolicy& policy = {}) {
  using Plain = typename Derived::PlainObject;
  const Plain mat = m.eval();
  const Eigen::Index n = mat.cols();
  if (mat.rows() == 0) return Plain::Identity(n, n);
  if (n == 0) return Plain(0, 0);
  if (!mat.allFinite()) throw std::invalid_argument("kernel_basis: matrix has non-finite entries");
  Eigen::JacobiSVD<Plain> svd(mat, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double sigma_max = sv.size() > 0 ? sv(0) : 0.0;
  const double threshold = rank_threshold(policy, sigma_max, mat.rows(), mat.cols());
  int r = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > threshold) ++r;
  return svd.matrixV().rightCols(n - r);
}

/// Stacks two matrices with equal column counts. A zero-row side is allowed
/// to carry any column count; the other side's count wins.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> vstack(
    const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& top,
    const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& bottom) {
  if (top.rows() == 0) return bottom;
  if (bottom.rows() == 0) return top;
  if (top.cols() != bottom.cols())
    throw std::invalid_argument("vstack: column counts differ");
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> out(top.rows() + bottom.rows(),
                                                            top.cols());
  out.topRows(top.rows()) = top;
  out.bottomRows(bottom.rows()) = bottom;
  return out;
}

/// Observability matrix col{C, CA, ..., CA^(n-1)} of a pair with n states.
/// Works for real and complex pairs alike (the complex form is used on
/// per-eigenvalue Jordan blocks).
template <typename DerivedA, typename DerivedC>
typename DerivedC::PlainObject observability_matrix(const Eigen::MatrixBase<DerivedA>& a,
                                                    const Eigen::MatrixBase<DerivedC>& c) {
  static_assert(std::is_same_v<typename DerivedA::Scalar, typename DerivedC::Scalar>,
                "A and C must share a scalar type");
  using Plain = typename DerivedC::PlainObject;
  using PlainA = typename DerivedA::PlainObject;
  const PlainA A = a.eval();
  const Plain C = c.eval();
  if (A.rows() != A.cols()) throw std::invalid_argument("observability_matrix: A must be square");
  if (C.cols() != A.rows())
    throw std::invalid_argument("observability_matrix: C has wrong column count");
  const Eigen::Index n = A.rows();
  const Eigen::Index p = C.rows();
  Plain out(n * p, n);
  Plain block = C;
  for (Eigen::Index t = 0; t < n; ++t) {
    out.middleRows(t * p, p) = block;
    if (t + 1 < n) block = block * A;
  }
  return out;
}

/// True when stacking R under M does not increase the rank, i.e. the rows
/// of R already lie in the row space of M.
template <typename DerivedM, typename DerivedR>
bool row_space_contains(const Eigen::MatrixBase<DerivedM>& m,
                        const Eigen::MatrixBase<DerivedR>& r,
                        const RankPolicy& policy = {}) {
  using Plain = typename DerivedM::PlainObject;
  const Plain M = m.eval();
  const Plain R = r.eval();
  if (M.cols() != R.cols() && M.rows() != 0 && R.rows() != 0)
    throw std::invalid_argument("row_space_contains: column counts differ");
  return rank(vstack<typename Plain::Scalar>(M, R), policy) == rank(M, policy);
}

}  // namespace funcobs
