#include "funcobs/placement.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "funcobs/rank.hpp"
#include "funcobs/structural.hpp"

namespace funcobs {

namespace {

Eigen::MatrixXd select_rows(const Eigen::MatrixXd& m, std::span<const int> rows) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), m.cols());
  for (std::size_t k = 0; k < rows.size(); ++k) {
    if (rows[k] < 0 || rows[k] >= m.rows())
      throw std::invalid_argument("sensor index out of bounds");
    out.row(static_cast<Eigen::Index>(k)) = m.row(rows[k]);
  }
  return out;
}

std::vector<int> sorted_union(std::span<const int> s, int extra) {
  std::vector<int> out(s.begin(), s.end());
  out.push_back(extra);
  std::sort(out.begin(), out.end());
  return out;
}

// Objective evaluator for one problem; holds whatever precomputation the
// problem kind needs.
struct Objective {
  std::function<int(std::span<const int>)> eval;
};

Objective make_objective(const PlacementProblem& problem) {
  switch (problem.kind) {
    case PlacementKind::NumericFo: {
      const SystemTriple sys = *problem.system;
      const RankPolicy policy = problem.policy;
      return {[sys, policy](std::span<const int> s) { return objective_f(sys, s, policy); }};
    }
    case PlacementKind::StructuralSfo: {
      const PatternTriple triple = *problem.pattern;
      return {[triple](std::span<const int> s) { return objective_gbar(triple, s); }};
    }
    case PlacementKind::NumericFd: {
      const SystemTriple sys = *problem.system;
      const RankPolicy policy = problem.policy;
      const double margin = problem.margin;
      SpectralData spec;
      try {
        spec = eigendecompose_diagonalizable(sys.A, policy);
      } catch (const NotDiagonalizableError&) {
        throw UnsupportedError(
            "detectability placement requires a diagonalizable state matrix");
      }
      return {[sys, policy, margin, spec](std::span<const int> s) {
        return objective_fd(sys, spec, s, policy, margin);
      }};
    }
  }
  throw std::logic_error("unknown placement kind");
}

}  // namespace

void PlacementProblem::validate() const {
  if (kind == PlacementKind::StructuralSfo) {
    if (!pattern) throw std::invalid_argument("structural placement requires a pattern triple");
    pattern->validate();
  } else {
    if (!system) throw std::invalid_argument("numeric placement requires a system triple");
    system->validate();
  }
  const int p = kind == PlacementKind::StructuralSfo ? pattern->p()
                                                     : static_cast<int>(system->p());
  if (candidates.empty()) throw std::invalid_argument("candidate sensor set must be nonempty");
  std::vector<bool> seen(p, false);
  for (int c : candidates) {
    if (c < 0 || c >= p) throw std::invalid_argument("candidate sensor index out of bounds");
    if (seen[c]) throw std::invalid_argument("duplicate candidate sensor index");
    seen[c] = true;
  }
}

int objective_f(const SystemTriple& sys, std::span<const int> sensors, const RankPolicy& policy) {
  sys.validate();
  const Eigen::MatrixXd cs = select_rows(sys.C, sensors);
  const Eigen::MatrixXd obs = observability_matrix(sys.A, cs);
  return rank(vstack<double>(obs, sys.F), policy) - rank(obs, policy);
}

int objective_fbar(const SystemTriple& sys, std::span<const int> sensors,
                   const RankPolicy& policy) {
  sys.validate();
  const Eigen::MatrixXd cs = select_rows(sys.C, sensors);
  const Eigen::MatrixXd stacked = vstack<double>(cs, sys.F);
  return rank(observability_matrix(sys.A, stacked), policy) -
         rank(observability_matrix(sys.A, cs), policy);
}

int objective_gbar(const PatternTriple& triple, std::span<const int> sensors) {
  triple.validate();
  const PatternMatrix cs = triple.C.selectRows(sensors);
  const int with_f =
      DynamicGraph(triple.A, PatternMatrix::vstack(cs, triple.F)).maxLinking();
  const int without_f = DynamicGraph(triple.A, cs).maxLinking();
  return with_f - without_f;
}

int objective_fd(const SystemTriple& sys, const SpectralData& spec, std::span<const int> sensors,
                 const RankPolicy& policy, double margin) {
  sys.validate();
  if (spec.dimension() != sys.n())
    throw std::invalid_argument("objective_fd: spectral data dimension mismatch");
  const Eigen::MatrixXcd cs = select_rows(sys.C, sensors).cast<Complex>();
  const Eigen::MatrixXcd f = sys.F.cast<Complex>();
  const double scale = sys.A.rows() == 0 ? 1.0 : sys.A.cwiseAbs().rowwise().sum().maxCoeff();
  int total = 0;
  for (const auto& group : spec.groups) {
    if (!is_unstable_eigenvalue(group.eigenvalue, margin, std::max(1.0, scale))) continue;
    const Eigen::MatrixXcd ci = cs * group.eigenvectors;
    const Eigen::MatrixXcd fi = f * group.eigenvectors;
    total += rank(vstack<Complex>(ci, fi), policy) - rank(ci, policy);
  }
  return total;
}

PlacementResult greedy_place(const PlacementProblem& problem) {
  problem.validate();
  const Objective objective = make_objective(problem);
  PlacementResult result;

  std::vector<int> all = problem.candidates;
  std::sort(all.begin(), all.end());
  const int fullValue = objective.eval(all);
  if (fullValue != 0) {
    result.selected = all;
    result.residual = fullValue;
    result.feasible = false;
    return result;
  }
  result.feasible = true;

  std::vector<int> chosen;  // kept sorted for evaluation
  int current = objective.eval(chosen);
  while (current > 0) {
    int best = -1;
    int bestGain = -1;
    for (int candidate : all) {
      if (std::binary_search(chosen.begin(), chosen.end(), candidate)) continue;
      const int gain = current - objective.eval(sorted_union(chosen, candidate));
      if (gain > bestGain) {
        bestGain = gain;
        best = candidate;
      }
    }
    // Zero-gain plateaus do occur: some sensor groups only pay off jointly.
    // The argmax then degenerates to the smallest unused index, and the
    // iteration still terminates because the full set reaches zero.
    chosen = sorted_union(chosen, best);
    current -= bestGain;
    result.selected.push_back(best);
    result.gainTrace.push_back({best, bestGain});
  }
  result.residual = 0;
  return result;
}

std::optional<int> brute_force_optimum(const PlacementProblem& problem, int maxP) {
  problem.validate();
  const int p = static_cast<int>(problem.candidates.size());
  if (p > maxP)
    throw std::invalid_argument("brute_force_optimum: refusing more than maxP candidates");
  const Objective objective = make_objective(problem);
  std::vector<int> sorted = problem.candidates;
  std::sort(sorted.begin(), sorted.end());
  std::optional<int> best;
  for (std::uint32_t mask = 0; mask < (1u << p); ++mask) {
    const int size = __builtin_popcount(mask);
    if (best && size >= *best) continue;
    std::vector<int> subset;
    for (int i = 0; i < p; ++i)
      if (mask & (1u << i)) subset.push_back(sorted[i]);
    if (objective.eval(subset) == 0) best = size;
  }
  return best;
}

int bound_log_argument(const PlacementProblem& problem) {
  switch (problem.kind) {
    case PlacementKind::NumericFo:
      return rank(problem.system->F, problem.policy);
    case PlacementKind::StructuralSfo:
      return DynamicGraph(problem.pattern->A, problem.pattern->F).maxLinking();
    case PlacementKind::NumericFd: {
      const SpectralData spec = eigendecompose_diagonalizable(problem.system->A, problem.policy);
      std::vector<int> empty;
      return objective_fd(*problem.system, spec, empty, problem.policy, problem.margin);
    }
  }
  throw std::logic_error("unknown placement kind");
}

std::optional<BoundCertificate> make_bound_certificate(const PlacementProblem& problem,
                                                       int maxP) {
  const std::optional<int> optimum = brute_force_optimum(problem, maxP);
  if (!optimum) return std::nullopt;
  const int logArg = bound_log_argument(problem);
  BoundCertificate cert;
  cert.optimumSize = *optimum;
  cert.boundValue = logArg > 0 ? (1.0 + std::log(static_cast<double>(logArg))) * *optimum : 0.0;
  return cert;
}

int min_sensor_count_diagonalizable(const Eigen::Ref<const Eigen::MatrixXd>& a,
                                    const Eigen::Ref<const Eigen::MatrixXd>& f,
                                    const RankPolicy& policy) {
  if (f.cols() != a.rows())
    throw std::invalid_argument("min_sensor_count_diagonalizable: F column count mismatch");
  const SpectralData spec = eigendecompose_diagonalizable(a, policy);
  const Eigen::MatrixXcd fc = f.cast<Complex>();
  int best = 0;
  for (const auto& group : spec.groups)
    best = std::max(best, rank(Eigen::MatrixXcd(fc * group.eigenvectors), policy));
  return best;
}

Eigen::MatrixXd construct_min_C(const Eigen::Ref<const Eigen::MatrixXd>& a,
                                const Eigen::Ref<const Eigen::MatrixXd>& f,
                                const RankPolicy& policy) {
  if (f.cols() != a.rows())
    throw std::invalid_argument("construct_min_C: F column count mismatch");
  const Eigen::Index n = a.rows();
  const Eigen::Index r = f.rows();
  const SpectralData spec = eigendecompose_diagonalizable(a, policy);
  const RealJordanForm jordan = real_jordan_form(spec);
  const Eigen::MatrixXd fTilde = f * jordan.basis;

  // Per block, greedily pick rows of F (in the Jordan basis) that raise the
  // rank of [Jblock - lambda I; picked rows] until it matches the rank with
  // all of F stacked. Row picks are in ascending index order.
  struct BlockPick {
    Eigen::Index start;
    Eigen::Index size;
    std::vector<Eigen::Index> rows;
  };
  std::vector<BlockPick> picks;
  int pStar = 0;
  for (const auto& block : jordan.blocks) {
    const Eigen::MatrixXcd jBlock =
        jordan.form.block(block.start, block.start, block.size, block.size).cast<Complex>();
    const Eigen::MatrixXcd shifted =
        jBlock - block.eigenvalue * Eigen::MatrixXcd::Identity(block.size, block.size);
    const Eigen::MatrixXcd fBlock =
        fTilde.middleCols(block.start, block.size).cast<Complex>();
    const int base = rank(shifted, policy);
    const int target = rank(vstack<Complex>(shifted, fBlock), policy);
    BlockPick pick{block.start, block.size, {}};
    Eigen::MatrixXcd stacked = shifted;
    int current = base;
    for (Eigen::Index row = 0; row < r && current < target; ++row) {
      const Eigen::MatrixXcd candidate =
          vstack<Complex>(stacked, Eigen::MatrixXcd(fBlock.row(row)));
      const int candidateRank = rank(candidate, policy);
      if (candidateRank > current) {
        stacked = candidate;
        current = candidateRank;
        pick.rows.push_back(row);
      }
    }
    pStar = std::max(pStar, static_cast<int>(pick.rows.size()));
    picks.push_back(std::move(pick));
  }

  Eigen::MatrixXd cTilde = Eigen::MatrixXd::Zero(pStar, n);
  for (const auto& pick : picks)
    for (std::size_t k = 0; k < pick.rows.size(); ++k)
      cTilde.block(static_cast<Eigen::Index>(k), pick.start, 1, pick.size) =
          fTilde.block(pick.rows[k], pick.start, 1, pick.size);

  Eigen::MatrixXd c = cTilde * jordan.basis.inverse();
  if (r == 0) return c;  // empty functional, vacuously observable
  SystemTriple designed{Eigen::MatrixXd(a), c, Eigen::MatrixXd(f)};
  if (!std::get<0>(is_functionally_observable(designed, policy)))
    throw NumericalDegeneracyError(
        "constructed C failed the functional observability check; cond(T) = " +
        std::to_string(spec.conditionT));
  return c;
}

}  // namespace funcobs
