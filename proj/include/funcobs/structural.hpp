#pragma once

#include <optional>
#include <span>
#include <vector>

#include "funcobs/pattern.hpp"

namespace funcobs {

/// System digraph of a structured pair: state vertices x_1..x_n, output
/// vertices y_1..y_q, an edge x_i -> x_j iff Abar(j,i) is free and
/// x_i -> y_k iff Cbar(k,i) is free.
struct SystemDigraph {
  int stateCount = 0;
  int outputCount = 0;
  std::vector<std::vector<int>> stateSuccessors;   // x_i -> x_j
  std::vector<std::vector<int>> outputSuccessors;  // x_i -> y_k

  static SystemDigraph fromPair(const PatternMatrix& abar, const PatternMatrix& cbar);
};

/// 0-based indices of states with a path to some output vertex.
std::vector<int> output_reachable_set(const PatternMatrix& abar, const PatternMatrix& cbar);

/// Layered acyclic expansion of the system digraph: state copies x_j^t for
/// t = 0..n-1, output copies y_k^t for t = 1..n, and (optionally) the
/// functional sink copies y_(q+j)^1 fed from layer 0. A linking is a set of
/// vertex-disjoint paths from the layer-0 state copies to output copies; its
/// maximum size is computed as a unit-vertex-capacity max flow.
class DynamicGraph {
 public:
  DynamicGraph(PatternMatrix abar, PatternMatrix cbar);
  /// Variant with extra sinks at layer 1, one per row of fbar.
  DynamicGraph(PatternMatrix abar, PatternMatrix cbar, PatternMatrix fbar);

  int stateCount() const { return n_; }

  /// Maximum linking size, optionally with some layer-0 state copies removed
  /// from the source set (0-based state indices).
  int maxLinking(std::span<const int> excludedSources = {}) const;

 private:
  int n_ = 0;
  PatternMatrix a_;
  PatternMatrix c_;
  PatternMatrix f_;
  bool hasFunctionalSinks_ = false;
};

int max_linking_size(const DynamicGraph& g, std::span<const int> excludedSources = {});

/// Generic rank of the observability matrix of (Abar, Cbar): the maximum
/// linking size of the pair's dynamic graph.
int generic_obs_rank(const PatternMatrix& abar, const PatternMatrix& cbar);

bool is_structurally_observable(const PatternMatrix& abar, const PatternMatrix& cbar);

struct SfoStateRow {
  int stateIndex = 0;  // 0-based
  bool reachedByEveryMaxFamily = false;
  bool outputReachable = false;
};

struct SfoReport {
  bool sfo = false;
  int genericRankO = 0;   // d_o = grank O(Abar, Cbar)
  int genericRankOF = 0;  // grank O(Abar, [Cbar; Fbar])
  std::vector<SfoStateRow> perFunctionalState;
  bool fastPathUsed = false;
};

/// Structural functional observability, decided by two independent routes
/// that must agree: the generic-rank identity on the stacked pair, and the
/// per-functional-state test that excluding x_i from the source layer drops
/// the maximum linking below d_o. Disagreement throws std::logic_error.
SfoReport is_sfo(const PatternTriple& triple);

bool has_full_selfloop_diagonal(const PatternMatrix& abar);

/// When every state has a self-loop, SFO reduces to output reachability of
/// the functional states; returns std::nullopt when the precondition fails.
std::optional<bool> sfo_selfloop_fastpath(const PatternTriple& triple);

/// Structural target controllability of a target set with |S| = n-1, decided
/// in polynomial time by duality: on the transposed pair, the maximum linking
/// of the dynamic graph augmented with a sink for the one non-target state
/// must reach n. Other cardinalities throw UnsupportedError.
bool target_controllable_nminus1(const PatternMatrix& abar, const PatternMatrix& bbar,
                                 std::span<const int> targets);

/// Diagnostic for |S| <= n-2: the generic rank of the target rows of the
/// controllability matrix can only be bracketed, except when no single
/// non-target column raises the generic rank, in which case it is exact.
struct TargetControllabilityBracket {
  int grankCtrb = 0;  // grank C(Abar, Bbar)
  int lo = 0;
  int hi = 0;
  std::optional<bool> verdict;  // set when lo == hi
};

TargetControllabilityBracket target_controllability_bracket(const PatternMatrix& abar,
                                                            const PatternMatrix& bbar,
                                                            std::span<const int> targets);

}  // namespace funcobs
