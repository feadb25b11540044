#include "funcobs/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "funcobs/rank.hpp"

namespace funcobs {

namespace {

double inf_norm(const Eigen::Ref<const Eigen::MatrixXd>& m) {
  if (m.rows() == 0 || m.cols() == 0) return 0.0;
  return m.cwiseAbs().rowwise().sum().maxCoeff();
}

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

// Replaces a nominally real eigenvector block that carries imaginary parts
// (a merged near-real conjugate cluster) by a real orthonormal basis of the
// same subspace.
Eigen::MatrixXcd realify_block(const Eigen::MatrixXcd& block) {
  const Eigen::Index n = block.rows();
  const Eigen::Index d = block.cols();
  Eigen::MatrixXd wide(n, 2 * d);
  wide << block.real(), block.imag();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(wide, Eigen::ComputeThinU);
  return svd.matrixU().leftCols(d).cast<Complex>();
}

}  // namespace

Eigen::MatrixXcd SpectralData::eigenvectorMatrix() const {
  const int n = dimension();
  Eigen::MatrixXcd t(n, n);
  Eigen::Index col = 0;
  for (const auto& g : groups) {
    t.middleCols(col, g.multiplicity) = g.eigenvectors;
    col += g.multiplicity;
  }
  return t;
}

double default_cluster_tolerance(const Eigen::Ref<const Eigen::MatrixXd>& a) {
  return 1e6 * kMachineEpsilon * inf_norm(a);
}

SpectralData eigendecompose_diagonalizable(const Eigen::Ref<const Eigen::MatrixXd>& a,
                                           const RankPolicy& policy, double clusterTol) {
  if (a.rows() != a.cols())
    throw std::invalid_argument("eigendecompose_diagonalizable: matrix must be square");
  if (!a.allFinite())
    throw std::invalid_argument("eigendecompose_diagonalizable: non-finite entries");
  const Eigen::Index n = a.rows();
  SpectralData spec;
  if (n == 0) {
    spec.conditionT = 1.0;
    return spec;
  }
  if (clusterTol <= 0.0) clusterTol = default_cluster_tolerance(a);

  Eigen::EigenSolver<Eigen::MatrixXd> solver(a);
  if (solver.info() != Eigen::Success)
    throw NotDiagonalizableError("eigendecomposition did not converge");
  const Eigen::VectorXcd values = solver.eigenvalues();
  const Eigen::MatrixXcd vectors = solver.eigenvectors();

  UnionFind uf(static_cast<int>(n));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (std::abs(values(i) - values(j)) <= clusterTol) uf.unite(i, j);

  std::vector<std::vector<int>> members(n);
  for (int i = 0; i < n; ++i) members[uf.find(i)].push_back(i);

  for (int root = 0; root < n; ++root) {
    if (members[root].empty()) continue;
    EigenGroup g;
    Complex sum{0.0, 0.0};
    for (int idx : members[root]) sum += values(idx);
    g.eigenvalue = sum / static_cast<double>(members[root].size());
    g.multiplicity = static_cast<int>(members[root].size());
    g.eigenvectors.resize(n, g.multiplicity);
    for (int k = 0; k < g.multiplicity; ++k) g.eigenvectors.col(k) = vectors.col(members[root][k]);
    spec.groups.push_back(std::move(g));
  }

  std::sort(spec.groups.begin(), spec.groups.end(), [](const EigenGroup& x, const EigenGroup& y) {
    if (x.eigenvalue.real() != y.eigenvalue.real()) return x.eigenvalue.real() > y.eigenvalue.real();
    const double ax = std::abs(x.eigenvalue.imag());
    const double ay = std::abs(y.eigenvalue.imag());
    if (ax != ay) return ax < ay;
    return x.eigenvalue.imag() > y.eigenvalue.imag();
  });

  // Pair conjugate groups and canonicalize the -Im member as the exact
  // conjugate of its partner. A real matrix always yields such pairs.
  for (std::size_t i = 0; i < spec.groups.size(); ++i) {
    EigenGroup& g = spec.groups[i];
    if (g.eigenvalue.imag() <= 0.0) continue;
    const Complex conj = std::conj(g.eigenvalue);
    int partner = -1;
    double best = clusterTol;
    for (std::size_t j = 0; j < spec.groups.size(); ++j) {
      if (j == i || spec.groups[j].eigenvalue.imag() >= 0.0) continue;
      const double dist = std::abs(spec.groups[j].eigenvalue - conj);
      if (dist <= best) {
        best = dist;
        partner = static_cast<int>(j);
      }
    }
    if (partner < 0 || spec.groups[partner].multiplicity != g.multiplicity)
      throw NotDiagonalizableError("eigenvalue clusters do not form conjugate pairs");
    g.conjugatePartner = partner;
    spec.groups[partner].conjugatePartner = static_cast<int>(i);
    spec.groups[partner].eigenvalue = conj;
    spec.groups[partner].eigenvectors = g.eigenvectors.conjugate();
  }

  // A merged near-real cluster can leave imaginary residue in a real group's
  // block; replace it by a real basis of the same span.
  for (auto& g : spec.groups) {
    if (!g.isReal()) continue;
    const double scale = g.eigenvectors.cwiseAbs().maxCoeff();
    if (g.eigenvectors.imag().cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, scale))
      g.eigenvectors = realify_block(g.eigenvectors);
  }

  const Eigen::MatrixXcd t = spec.eigenvectorMatrix();
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(t);
  const auto& sv = svd.singularValues();
  const double sigma_max = sv(0);
  const double sigma_min = sv(sv.size() - 1);
  const double threshold = rank_threshold(policy, sigma_max, n, n);
  if (sigma_min <= threshold)
    throw NotDiagonalizableError(
        "matrix is not diagonalizable under the rank policy (eigenvector matrix is singular)");
  spec.conditionT = sigma_max / sigma_min;
  return spec;
}

RealJordanForm real_jordan_form(const SpectralData& spec) {
  const int n = spec.dimension();
  RealJordanForm out;
  out.basis.resize(n, n);
  out.form = Eigen::MatrixXd::Zero(n, n);
  Eigen::Index col = 0;
  for (const auto& g : spec.groups) {
    if (g.eigenvalue.imag() < 0.0) {
      if (g.conjugatePartner < 0)
        throw std::invalid_argument("real_jordan_form: unpaired non-real eigenvalue group");
      continue;  // handled with the +Im partner
    }
    if (g.eigenvalue.imag() > 0.0) {
      if (g.conjugatePartner < 0)
        throw std::invalid_argument("real_jordan_form: unpaired non-real eigenvalue group");
      const double re = g.eigenvalue.real();
      const double im = g.eigenvalue.imag();
      RealJordanBlock block{g.eigenvalue, col, 2 * g.multiplicity, true};
      for (int k = 0; k < g.multiplicity; ++k) {
        out.basis.col(col) = g.eigenvectors.col(k).real();
        out.basis.col(col + 1) = g.eigenvectors.col(k).imag();
        out.form(col, col) = re;
        out.form(col, col + 1) = im;
        out.form(col + 1, col) = -im;
        out.form(col + 1, col + 1) = re;
        col += 2;
      }
      out.blocks.push_back(block);
    } else {
      RealJordanBlock block{g.eigenvalue, col, g.multiplicity, false};
      for (int k = 0; k < g.multiplicity; ++k) {
        out.basis.col(col) = g.eigenvectors.col(k).real();
        out.form(col, col) = g.eigenvalue.real();
        ++col;
      }
      out.blocks.push_back(block);
    }
  }
  if (col != n) throw std::invalid_argument("real_jordan_form: inconsistent spectral data");
  return out;
}

Eigen::MatrixXd real_jordan_basis(const SpectralData& spec) { return real_jordan_form(spec).basis; }

bool is_unstable_eigenvalue(Complex lambda, double margin, double scale) {
  const double tie = 100.0 * kMachineEpsilon * std::max(1.0, scale);
  return lambda.real() >= -margin - tie;
}

Eigen::MatrixXd unstable_invariant_subspace(const Eigen::Ref<const Eigen::MatrixXd>& m,
                                            double stabilityMargin) {
  if (m.rows() != m.cols())
    throw std::invalid_argument("unstable_invariant_subspace: matrix must be square");
  const Eigen::Index n = m.rows();
  if (n == 0) return Eigen::MatrixXd(0, 0);
  if (!m.allFinite())
    throw std::invalid_argument("unstable_invariant_subspace: non-finite entries");
  const double scale = inf_norm(m);

  Eigen::ComplexSchur<Eigen::MatrixXcd> schur(m.cast<Complex>());
  if (schur.info() != Eigen::Success)
    throw NumericalDegeneracyError("Schur decomposition did not converge");
  Eigen::MatrixXcd t = schur.matrixT();
  Eigen::MatrixXcd u = schur.matrixU();

  std::vector<bool> unstable(n);
  for (Eigen::Index i = 0; i < n; ++i)
    unstable[i] = is_unstable_eigenvalue(t(i, i), stabilityMargin, scale);

  // Reorder the triangular factor so the unstable cluster leads. Each
  // adjacent swap is a unitary rotation built from the trailing eigenvalue's
  // eigenvector of the 2x2 diagonal block.
  auto swap_adjacent = [&](Eigen::Index k) {
    const Complex t11 = t(k, k);
    const Complex t12 = t(k, k + 1);
    const Complex t22 = t(k + 1, k + 1);
    Eigen::Vector2cd x(t12, t22 - t11);
    const double norm = x.norm();
    if (norm > 0.0) {
      x /= norm;
      Eigen::Matrix2cd rot;
      rot << x(0), -std::conj(x(1)), x(1), std::conj(x(0));
      t.middleCols(k, 2) = t.middleCols(k, 2) * rot;
      t.middleRows(k, 2) = rot.adjoint() * t.middleRows(k, 2);
      u.middleCols(k, 2) = u.middleCols(k, 2) * rot;
      t(k + 1, k) = Complex(0.0, 0.0);
    }
    std::swap(unstable[k], unstable[k + 1]);
  };

  Eigen::Index front = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!unstable[i]) continue;
    for (Eigen::Index k = i; k > front; --k) swap_adjacent(k - 1);
    ++front;
  }
  const Eigen::Index count = front;
  if (count == 0) return Eigen::MatrixXd(n, 0);

  // The leading complex Schur vectors span the complexification of a real
  // invariant subspace (the selected eigenvalue set is conjugation closed);
  // recover a real orthonormal basis from their real and imaginary parts.
  Eigen::MatrixXd wide(n, 2 * count);
  wide << u.leftCols(count).real(), u.leftCols(count).imag();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(wide, Eigen::ComputeThinU);
  if (svd.singularValues()(count - 1) < 1e-8)
    throw NumericalDegeneracyError("unstable invariant subspace is numerically degenerate");
  return svd.matrixU().leftCols(count);
}

}  // namespace funcobs
