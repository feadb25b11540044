#pragma once

#include <optional>
#include <span>
#include <vector>

#include "funcobs/analysis.hpp"
#include "funcobs/pattern.hpp"
#include "funcobs/types.hpp"

namespace funcobs {

enum class PlacementKind { NumericFo, StructuralSfo, NumericFd };

/// Minimal sensor-selection instance: pick the fewest rows of C (or Cbar)
/// so the resulting triple is functionally observable (NumericFo), SFO
/// (StructuralSfo), or functionally detectable (NumericFd, diagonalizable A
/// only).
struct PlacementProblem {
  PlacementKind kind = PlacementKind::NumericFo;
  std::optional<SystemTriple> system;    // numeric kinds
  std::optional<PatternTriple> pattern;  // structural kind
  std::vector<int> candidates;           // 0-based candidate row indices
  RankPolicy policy{};
  double margin = 0.0;  // stability boundary for NumericFd

  void validate() const;
};

struct GainStep {
  int sensor = 0;  // 0-based candidate index
  int gain = 0;    // objective decrease; zero on a plateau step
};

struct BoundCertificate {
  int optimumSize = 0;
  double boundValue = 0.0;  // (1 + ln(objective at empty set)) * optimum
};

struct PlacementResult {
  std::vector<int> selected;  // greedy order
  std::vector<GainStep> gainTrace;
  int residual = 0;
  bool feasible = false;
  std::optional<BoundCertificate> boundCertificate;
};

/// f(S) = rank [O(A, C_S); F] - rank O(A, C_S); zero iff (A, C_S, F) is
/// functionally observable. Supermodular and monotone decreasing in S.
int objective_f(const SystemTriple& sys, std::span<const int> sensors,
                const RankPolicy& policy = {});

/// fbar(S) = rank O(A, [C_S; F]) - rank O(A, C_S); same zero set as f.
int objective_fbar(const SystemTriple& sys, std::span<const int> sensors,
                   const RankPolicy& policy = {});

/// gbar(S) = grank O(Abar, [Cbar_S; Fbar]) - grank O(Abar, Cbar_S), computed
/// as two maximum-linking calls; zero iff (Abar, Cbar_S, Fbar) is SFO.
int objective_gbar(const PatternTriple& triple, std::span<const int> sensors);

/// f_d(S): sum over unstable eigenvalue groups of
/// rank [C_S T_i; F T_i] - rank (C_S T_i); zero iff (A, C_S, F) is
/// functionally detectable. Requires diagonalizable A.
int objective_fd(const SystemTriple& sys, const SpectralData& spec, std::span<const int> sensors,
                 const RankPolicy& policy = {}, double margin = 0.0);

/// Greedy minimization of the problem's objective: repeatedly add the
/// candidate with the largest gain (ties to the smallest index) until the
/// objective reaches zero. Zero-gain steps are taken when no candidate
/// improves alone (sensors whose value only appears jointly). When even the
/// full candidate set fails, reports feasible = false with the full set as
/// diagnostic.
PlacementResult greedy_place(const PlacementProblem& problem);

/// Exhaustive minimum over all candidate subsets (std::nullopt when
/// infeasible). Refuses more than maxP candidates.
std::optional<int> brute_force_optimum(const PlacementProblem& problem, int maxP = 14);

/// Objective value whose logarithm enters the greedy approximation bound:
/// rank F, grank O(Abar, Fbar), or the unstable-group rank sum.
int bound_log_argument(const PlacementProblem& problem);

/// Brute-force certificate (1 + ln(bound_log_argument)) * optimum for the
/// greedy solution; std::nullopt when the instance is infeasible.
std::optional<BoundCertificate> make_bound_certificate(const PlacementProblem& problem,
                                                       int maxP = 14);

/// Minimum number of sensor rows that can make (A, *, F) functionally
/// observable when A is diagonalizable: max_i rank(F T_i) over the distinct
/// eigenvalue groups.
int min_sensor_count_diagonalizable(const Eigen::Ref<const Eigen::MatrixXd>& a,
                                    const Eigen::Ref<const Eigen::MatrixXd>& f,
                                    const RankPolicy& policy = {});

/// Constructs a real C with min_sensor_count_diagonalizable(A, F) rows that
/// achieves functional observability, by per-real-Jordan-block greedy row
/// selection from F expressed in the real Jordan basis. The result is
/// verified; numerical failure raises NumericalDegeneracyError.
Eigen::MatrixXd construct_min_C(const Eigen::Ref<const Eigen::MatrixXd>& a,
                                const Eigen::Ref<const Eigen::MatrixXd>& f,
                                const RankPolicy& policy = {});

}  // namespace funcobs
