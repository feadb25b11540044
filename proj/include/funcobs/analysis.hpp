#pragma once

#include <optional>
#include <span>
#include <tuple>
#include <vector>

#include <Eigen/Dense>

#include "funcobs/spectral.hpp"
#include "funcobs/types.hpp"

namespace funcobs {

enum class Method { RankIdentity, Modal, Decomposition };

const char* method_name(Method m);

struct ModalRow {
  Complex eigenvalue;
  int multiplicity = 0;
  bool modalFunctionallyObservable = false;
  bool unstable = false;
};

/// Outcome of a functional observability/detectability analysis. The modal
/// table is present only when the state matrix is diagonalizable (or Jordan
/// data was supplied); when present, functional observability equals the
/// conjunction of its rows and detectability the conjunction over unstable
/// rows.
struct FunctionalReport {
  bool functionallyObservable = false;
  bool functionallyDetectable = false;
  int rankObs = 0;    // rank O(A, C)
  int rankObsF = 0;   // rank [O(A, C); F]
  std::optional<std::vector<ModalRow>> modalTable;
  Method foMethod = Method::RankIdentity;
  Method fdMethod = Method::Decomposition;
};

/// Orthonormal split of R^n into the observable subspace of (A, C), its
/// complement (which is A-invariant), and the unstable part of the latter.
struct ObservabilityDecomposition {
  Eigen::MatrixXd observableBasis;           // n x l, l = rank O(A, C)
  Eigen::MatrixXd unobservableBasis;         // n x (n - l)
  Eigen::MatrixXd unobservableRestriction;   // (n-l) x (n-l)
  Eigen::MatrixXd unstableUnobservableBasis; // n x l_u
};

ObservabilityDecomposition observability_decomposition(const Eigen::Ref<const Eigen::MatrixXd>& a,
                                                       const Eigen::Ref<const Eigen::MatrixXd>& c,
                                                       const RankPolicy& policy = {},
                                                       double margin = 0.0);

/// Rank-identity test: (A, C, F) is functionally observable iff stacking F
/// under the observability matrix does not raise its rank. Returns the
/// verdict together with rank O(A,C) and rank [O(A,C); F].
std::tuple<bool, int, int> is_functionally_observable(const SystemTriple& sys,
                                                      const RankPolicy& policy = {});

/// Detectability via the observability decomposition: the functional must
/// vanish on the unstable part of the unobservable subspace.
bool is_functionally_detectable(const SystemTriple& sys, const RankPolicy& policy = {},
                                double margin = 0.0);

/// User-supplied Jordan block of A: A * T = T * J must hold columnwise.
struct JordanBlockData {
  Complex eigenvalue;
  Eigen::MatrixXcd J;  // d x d
  Eigen::MatrixXcd T;  // n x d generalized eigenvectors
};

/// Per-distinct-eigenvalue functional observability for a diagonalizable
/// matrix: with J_i = lambda_i I the block test collapses to
/// rank [C T_i; F T_i] = rank (C T_i).
std::vector<std::pair<Complex, bool>> modal_functional_observability(
    const SystemTriple& sys, const SpectralData& spec, const RankPolicy& policy = {});

/// General block test rank [O(J_i, C T_i); F T_i] = rank O(J_i, C T_i) on
/// caller-provided Jordan data; the only route offered for defective A.
std::vector<std::pair<Complex, bool>> modal_functional_observability(
    const SystemTriple& sys, std::span<const JordanBlockData> blocks,
    const RankPolicy& policy = {});

/// Rank test  rank [A - lambda I; C; F] = rank [A - lambda I; C].
/// Necessary for functional observability at every eigenvalue; sufficient
/// over all eigenvalues only when A is diagonalizable.
bool pbh_functional_check(const SystemTriple& sys, Complex lambda,
                          const RankPolicy& policy = {});

/// Full analysis: rank-identity observability, decomposition-based
/// detectability, and (when A is diagonalizable) the modal table, which is
/// cross-checked against the other two routes.
FunctionalReport analyze(const SystemTriple& sys, const RankPolicy& policy = {},
                         double margin = 0.0);

/// Variant that takes caller-provided Jordan data for the modal table.
FunctionalReport analyze(const SystemTriple& sys, std::span<const JordanBlockData> blocks,
                         const RankPolicy& policy = {}, double margin = 0.0);

}  // namespace funcobs
