#pragma once

#include <vector>

#include <Eigen/Dense>

#include "funcobs/types.hpp"

namespace funcobs {

/// One distinct eigenvalue of a diagonalizable real matrix, together with a
/// basis of its eigenspace. Non-real groups appear in conjugate pairs whose
/// eigenvector blocks are exact conjugates; `conjugatePartner` holds the
/// index of the paired group (-1 for real eigenvalues).
struct EigenGroup {
  Complex eigenvalue;
  int multiplicity = 0;
  Eigen::MatrixXcd eigenvectors;  // n x multiplicity
  int conjugatePartner = -1;

  bool isReal() const { return eigenvalue.imag() == 0.0; }
};

/// Spectrum of a diagonalizable matrix grouped by distinct eigenvalue.
/// Groups are ordered by descending real part, then by ascending |Im|,
/// with the +Im member of a conjugate pair listed before its partner.
struct SpectralData {
  std::vector<EigenGroup> groups;
  double conditionT = 0.0;  // condition number of the assembled eigenvector matrix

  int dimension() const {
    int n = 0;
    for (const auto& g : groups) n += g.multiplicity;
    return n;
  }

  Eigen::MatrixXcd eigenvectorMatrix() const;
};

/// Default clustering width for merging nearby computed eigenvalues into one
/// distinct-eigenvalue group: 1e6 * eps * ||A||_inf.
double default_cluster_tolerance(const Eigen::Ref<const Eigen::MatrixXd>& a);

/// Eigen-decomposes a real matrix assumed diagonalizable. Eigenvalues closer
/// than `clusterTol` (0 = default width) are merged into one group. Throws
/// NotDiagonalizableError when the assembled eigenvector matrix is rank
/// deficient under `policy`; callers must then fall back to rank-based tests.
SpectralData eigendecompose_diagonalizable(const Eigen::Ref<const Eigen::MatrixXd>& a,
                                           const RankPolicy& policy = {},
                                           double clusterTol = 0.0);

/// One diagonal block of a real Jordan form of a diagonalizable matrix:
/// columns [start, start+size) of the basis. A conjugate-pair block of a
/// group with eigenvalue a+bi (b > 0, multiplicity d) has size 2d and block
/// matrix diag(D, ..., D) with D = [[a, b], [-b, a]]; a real-eigenvalue
/// block has size d and block matrix lambda * I.
struct RealJordanBlock {
  Complex eigenvalue;  // a + bi with b > 0 for pair blocks, real otherwise
  Eigen::Index start = 0;
  Eigen::Index size = 0;
  bool conjugatePair = false;
};

struct RealJordanForm {
  Eigen::MatrixXd basis;  // n x n invertible
  Eigen::MatrixXd form;   // block diagonal, basis^{-1} A basis
  std::vector<RealJordanBlock> blocks;
};

/// Assembles the real Jordan form of the decomposed matrix. A conjugate
/// eigenvector t of a non-real eigenvalue contributes the real column pair
/// [Re t, Im t]. Throws std::invalid_argument on an unpaired non-real group.
RealJordanForm real_jordan_form(const SpectralData& spec);

/// The basis matrix of real_jordan_form alone.
Eigen::MatrixXd real_jordan_basis(const SpectralData& spec);

/// Closed-right-half-plane membership used everywhere a mode is classified
/// as unstable: Re(lambda) >= -margin - tie, where the tie width
/// 100 * eps * max(1, scale) conservatively pushes boundary eigenvalues to
/// the unstable side.
bool is_unstable_eigenvalue(Complex lambda, double margin, double scale);

/// Orthonormal real basis of the invariant subspace of M spanned by modes
/// with Re(lambda) >= -margin (ties resolved unstable). Computed from a
/// Schur decomposition with the unstable cluster reordered to the front,
/// so it is valid for defective M as well.
Eigen::MatrixXd unstable_invariant_subspace(const Eigen::Ref<const Eigen::MatrixXd>& m,
                                            double stabilityMargin = 0.0);

}  // namespace funcobs
