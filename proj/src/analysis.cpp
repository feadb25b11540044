#include "funcobs/analysis.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/SVD>

#include "funcobs/rank.hpp"

namespace funcobs {

namespace {

double inf_norm(const Eigen::MatrixXd& m) {
  if (m.rows() == 0 || m.cols() == 0) return 0.0;
  return m.cwiseAbs().rowwise().sum().maxCoeff();
}

// Absolute threshold under which F restricted to a subspace counts as zero.
double functional_zero_threshold(const Eigen::MatrixXd& f, const RankPolicy& policy) {
  const double scale = std::max(1.0, inf_norm(f));
  if (policy.tolerance > 0.0 && policy.mode == RankPolicy::Mode::SvdAbsolute)
    return policy.tolerance;
  if (policy.tolerance > 0.0) return policy.tolerance * scale;
  return 1e-8 * scale;
}

bool eq5_block_test(const Eigen::MatrixXcd& j, const Eigen::MatrixXcd& ci,
                    const Eigen::MatrixXcd& fi, const RankPolicy& policy) {
  const Eigen::MatrixXcd obs = observability_matrix(j, ci);
  return rank(vstack<Complex>(obs, fi), policy) == rank(obs, policy);
}

std::vector<ModalRow> make_modal_table(const std::vector<std::pair<Complex, bool>>& verdicts,
                                       const std::vector<int>& multiplicities, double margin,
                                       double scale) {
  std::vector<ModalRow> table;
  for (std::size_t i = 0; i < verdicts.size(); ++i) {
    ModalRow row;
    row.eigenvalue = verdicts[i].first;
    row.multiplicity = multiplicities[i];
    row.modalFunctionallyObservable = verdicts[i].second;
    row.unstable = is_unstable_eigenvalue(verdicts[i].first, margin, scale);
    table.push_back(row);
  }
  return table;
}

void cross_check_modal(const FunctionalReport& report) {
  if (!report.modalTable) return;
  bool allModal = true;
  bool unstableModal = true;
  for (const auto& row : *report.modalTable) {
    allModal = allModal && row.modalFunctionallyObservable;
    if (row.unstable) unstableModal = unstableModal && row.modalFunctionallyObservable;
  }
  if (allModal != report.functionallyObservable)
    throw std::logic_error("modal table disagrees with the rank-identity observability verdict");
  if (unstableModal != report.functionallyDetectable)
    throw std::logic_error("modal table disagrees with the decomposition detectability verdict");
}

}  // namespace

const char* method_name(Method m) {
  switch (m) {
    case Method::RankIdentity: return "rank-identity";
    case Method::Modal: return "modal";
    case Method::Decomposition: return "decomposition";
  }
  return "unknown";
}

ObservabilityDecomposition observability_decomposition(const Eigen::Ref<const Eigen::MatrixXd>& a,
                                                       const Eigen::Ref<const Eigen::MatrixXd>& c,
                                                       const RankPolicy& policy, double margin) {
  if (a.rows() != a.cols())
    throw std::invalid_argument("observability_decomposition: A must be square");
  if (c.cols() != a.rows() && c.rows() != 0)
    throw std::invalid_argument("observability_decomposition: C column count mismatch");
  const Eigen::Index n = a.rows();
  const Eigen::MatrixXd obs = observability_matrix(a, Eigen::MatrixXd(c));
  ObservabilityDecomposition dec;
  if (obs.rows() == 0) {
    dec.observableBasis = Eigen::MatrixXd(n, 0);
    dec.unobservableBasis = Eigen::MatrixXd::Identity(n, n);
  } else {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(obs, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double sigma_max = sv.size() > 0 ? sv(0) : 0.0;
    const double threshold = rank_threshold(policy, sigma_max, obs.rows(), obs.cols());
    int l = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
      if (sv(i) > threshold) ++l;
    dec.observableBasis = svd.matrixV().leftCols(l);
    dec.unobservableBasis = svd.matrixV().rightCols(n - l);
  }
  dec.unobservableRestriction =
      dec.unobservableBasis.transpose() * a * dec.unobservableBasis;
  dec.unstableUnobservableBasis =
      dec.unobservableBasis * unstable_invariant_subspace(dec.unobservableRestriction, margin);
  return dec;
}

std::tuple<bool, int, int> is_functionally_observable(const SystemTriple& sys,
                                                      const RankPolicy& policy) {
  sys.validate();
  const Eigen::MatrixXd obs = observability_matrix(sys.A, sys.C);
  const int rankObs = rank(obs, policy);
  const int rankObsF = rank(vstack<double>(obs, sys.F), policy);
  return {rankObsF == rankObs, rankObs, rankObsF};
}

bool is_functionally_detectable(const SystemTriple& sys, const RankPolicy& policy,
                                double margin) {
  sys.validate();
  const ObservabilityDecomposition dec =
      observability_decomposition(sys.A, sys.C, policy, margin);
  if (dec.unstableUnobservableBasis.cols() == 0) return true;
  const double residual =
      (sys.F * dec.unstableUnobservableBasis).cwiseAbs().maxCoeff();
  return residual <= functional_zero_threshold(sys.F, policy);
}

std::vector<std::pair<Complex, bool>> modal_functional_observability(const SystemTriple& sys,
                                                                     const SpectralData& spec,
                                                                     const RankPolicy& policy) {
  sys.validate();
  if (spec.dimension() != sys.n())
    throw std::invalid_argument("modal_functional_observability: spectral data dimension mismatch");
  const double scale = std::max(1.0, inf_norm(sys.A));
  std::vector<std::pair<Complex, bool>> out;
  const Eigen::MatrixXcd c = sys.C.cast<Complex>();
  const Eigen::MatrixXcd f = sys.F.cast<Complex>();
  for (const auto& group : spec.groups) {
    const Eigen::MatrixXcd residual =
        sys.A.cast<Complex>() * group.eigenvectors - group.eigenvectors * group.eigenvalue;
    if (residual.cwiseAbs().maxCoeff() > 1e-6 * scale)
      throw std::invalid_argument(
          "modal_functional_observability: spectral data inconsistent with A");
    const Eigen::MatrixXcd ci = c * group.eigenvectors;
    const Eigen::MatrixXcd fi = f * group.eigenvectors;
    // Diagonalizable block: O(lambda I, C_i) has the row space of C_i.
    out.emplace_back(group.eigenvalue,
                     rank(vstack<Complex>(ci, fi), policy) == rank(ci, policy));
  }
  return out;
}

std::vector<std::pair<Complex, bool>> modal_functional_observability(
    const SystemTriple& sys, std::span<const JordanBlockData> blocks, const RankPolicy& policy) {
  sys.validate();
  const double scale = std::max(1.0, inf_norm(sys.A));
  Eigen::Index total = 0;
  std::vector<std::pair<Complex, bool>> out;
  const Eigen::MatrixXcd c = sys.C.cast<Complex>();
  const Eigen::MatrixXcd f = sys.F.cast<Complex>();
  for (const auto& block : blocks) {
    if (block.J.rows() != block.J.cols() || block.T.cols() != block.J.rows() ||
        block.T.rows() != sys.n())
      throw std::invalid_argument("modal_functional_observability: malformed Jordan block");
    const Eigen::MatrixXcd residual = sys.A.cast<Complex>() * block.T - block.T * block.J;
    if (residual.cwiseAbs().maxCoeff() > 1e-6 * scale)
      throw std::invalid_argument(
          "modal_functional_observability: Jordan data inconsistent with A");
    total += block.J.rows();
    out.emplace_back(block.eigenvalue, eq5_block_test(block.J, c * block.T, f * block.T, policy));
  }
  if (total != sys.n())
    throw std::invalid_argument("modal_functional_observability: Jordan blocks do not span R^n");
  Eigen::MatrixXcd basis(sys.n(), sys.n());
  Eigen::Index col = 0;
  for (const auto& block : blocks) {
    basis.middleCols(col, block.T.cols()) = block.T;
    col += block.T.cols();
  }
  if (rank(basis, policy) != sys.n())
    throw std::invalid_argument("modal_functional_observability: Jordan basis is singular");
  return out;
}

bool pbh_functional_check(const SystemTriple& sys, Complex lambda, const RankPolicy& policy) {
  sys.validate();
  const Eigen::Index n = sys.n();
  const Eigen::MatrixXcd shifted =
      sys.A.cast<Complex>() - lambda * Eigen::MatrixXcd::Identity(n, n);
  const Eigen::MatrixXcd base = vstack<Complex>(shifted, sys.C.cast<Complex>());
  return rank(vstack<Complex>(base, sys.F.cast<Complex>()), policy) == rank(base, policy);
}

FunctionalReport analyze(const SystemTriple& sys, const RankPolicy& policy, double margin) {
  sys.validate();
  FunctionalReport report;
  auto [fo, rankObs, rankObsF] = is_functionally_observable(sys, policy);
  report.functionallyObservable = fo;
  report.rankObs = rankObs;
  report.rankObsF = rankObsF;
  report.functionallyDetectable = fo || is_functionally_detectable(sys, policy, margin);
  report.foMethod = Method::RankIdentity;
  report.fdMethod = Method::Decomposition;
  try {
    const SpectralData spec = eigendecompose_diagonalizable(sys.A, policy);
    const auto verdicts = modal_functional_observability(sys, spec, policy);
    std::vector<int> multiplicities;
    for (const auto& g : spec.groups) multiplicities.push_back(g.multiplicity);
    report.modalTable =
        make_modal_table(verdicts, multiplicities, margin, std::max(1.0, inf_norm(sys.A)));
  } catch (const NotDiagonalizableError&) {
    // Defective A: the modal route needs caller-provided Jordan data.
  } catch (const std::invalid_argument&) {
    // Near-defective A: residuals too large for a trustworthy modal table.
  }
  cross_check_modal(report);
  return report;
}

FunctionalReport analyze(const SystemTriple& sys, std::span<const JordanBlockData> blocks,
                         const RankPolicy& policy, double margin) {
  sys.validate();
  FunctionalReport report;
  auto [fo, rankObs, rankObsF] = is_functionally_observable(sys, policy);
  report.functionallyObservable = fo;
  report.rankObs = rankObs;
  report.rankObsF = rankObsF;
  report.functionallyDetectable = fo || is_functionally_detectable(sys, policy, margin);
  report.foMethod = Method::RankIdentity;
  report.fdMethod = Method::Decomposition;
  const auto verdicts = modal_functional_observability(sys, blocks, policy);
  std::vector<int> multiplicities;
  for (const auto& block : blocks) multiplicities.push_back(static_cast<int>(block.J.rows()));
  report.modalTable =
      make_modal_table(verdicts, multiplicities, margin, std::max(1.0, inf_norm(sys.A)));
  cross_check_modal(report);
  return report;
}

}  // namespace funcobs
