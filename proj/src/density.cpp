#include "qcert/density.hpp"

#include <cmath>

#include <unsupported/Eigen/KroneckerProduct>

#include "qcert/rng.hpp"

namespace qcert {

DensityMatrix::DensityMatrix() : layout_(), m_(Matrix::Identity(1, 1)) {}

DensityMatrix::DensityMatrix(SystemLayout layout, Matrix m)
    : layout_(std::move(layout)), m_(std::move(m)) {
  if (m_.rows() != m_.cols() || m_.rows() != layout_.total_dim())
    throw ShapeError("density: matrix is " + std::to_string(m_.rows()) + "x" +
                     std::to_string(m_.cols()) + " but layout dimension is " +
                     std::to_string(layout_.total_dim()));
}

DensityMatrix DensityMatrix::validated(SystemLayout layout, Matrix m, const Tolerances& tol) {
  DensityMatrix out(std::move(layout), std::move(m));
  const Matrix& a = out.matrix();
  double herm_dev = (a - a.adjoint()).cwiseAbs().maxCoeff();
  if (herm_dev > tol.herm)
    throw ValidationError("density: not Hermitian, max deviation " + std::to_string(herm_dev));
  double tr_dev = std::abs(a.trace() - Complex(1.0));
  if (tr_dev > tol.trace)
    throw ValidationError("density: trace deviates from 1 by " + std::to_string(tr_dev));
  Eigen::SelfAdjointEigenSolver<Matrix> es(a, Eigen::EigenvaluesOnly);
  double min_eig = es.eigenvalues().minCoeff();
  if (min_eig < -tol.psd)
    throw ValidationError("density: negative eigenvalue " + std::to_string(min_eig));
  return out;
}

StateVector::StateVector(SystemLayout layout, CVector v)
    : layout_(std::move(layout)), v_(std::move(v)) {
  if (v_.size() != layout_.total_dim())
    throw ShapeError("state vector: size " + std::to_string(v_.size()) +
                     " but layout dimension is " + std::to_string(layout_.total_dim()));
}

StateVector StateVector::validated(SystemLayout layout, CVector v, double norm_tol) {
  StateVector out(std::move(layout), std::move(v));
  double dev = std::abs(out.vector().norm() - 1.0);
  if (dev > norm_tol)
    throw ValidationError("state vector: norm deviates from 1 by " + std::to_string(dev));
  return out;
}

DensityMatrix to_density(const StateVector& psi) {
  return DensityMatrix(psi.layout(), psi.vector() * psi.vector().adjoint());
}

std::vector<long> subsystem_offsets(const SystemLayout& layout, const Region& region) {
  region.require_within(layout);
  const auto strides = layout.strides();
  std::vector<long> offs{0};
  for (long site : region.sites()) {
    std::vector<long> next;
    next.reserve(offs.size() * static_cast<size_t>(layout.dim(site)));
    for (long base : offs)
      for (long d = 0; d < layout.dim(site); ++d) next.push_back(base + d * strides[site]);
    offs = std::move(next);
  }
  return offs;
}

DensityMatrix partial_trace(const DensityMatrix& state, const Region& keep) {
  const SystemLayout& layout = state.layout();
  keep.require_within(layout);
  if (layout.total_dim() > kMaxTotalDim)
    throw CapacityError("partial_trace: state dimension exceeds " + std::to_string(kMaxTotalDim));
  const Region traced = keep.complement(layout.size());
  const auto keep_offs = subsystem_offsets(layout, keep);
  const auto traced_offs = subsystem_offsets(layout, traced);
  const long dk = static_cast<long>(keep_offs.size());
  Matrix out = Matrix::Zero(dk, dk);
  const Matrix& m = state.matrix();
  for (long t : traced_offs)
    for (long a = 0; a < dk; ++a)
      for (long b = 0; b < dk; ++b) out(a, b) += m(keep_offs[a] + t, keep_offs[b] + t);
  return DensityMatrix(layout.restricted(keep), std::move(out));
}

double trace_norm_hermitian(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().sum();
}

double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
  if (a.layout() != b.layout())
    throw ShapeError("trace_distance: layouts differ");
  return trace_norm_hermitian(a.matrix() - b.matrix());
}

DensityMatrix tensor_product(const DensityMatrix& a, const DensityMatrix& b) {
  for (const auto& sa : a.layout().sites())
    for (const auto& sb : b.layout().sites())
      if (sa.label == sb.label)
        throw RegionError("tensor_product: both factors contain site '" + sa.label + "'");
  std::vector<Site> sites = a.layout().sites();
  sites.insert(sites.end(), b.layout().sites().begin(), b.layout().sites().end());
  SystemLayout layout = SystemLayout::make(std::move(sites));
  Matrix m = Eigen::kroneckerProduct(a.matrix(), b.matrix()).eval();
  return DensityMatrix(std::move(layout), std::move(m));
}

DensityMatrix random_mixed_state(const SystemLayout& layout, long rank, std::uint64_t seed) {
  const long d = layout.total_dim();
  if (rank < 1 || rank > d)
    throw DomainError("random_mixed_state: rank " + std::to_string(rank) +
                      " outside [1, " + std::to_string(d) + "]");
  GaussianSampler g(seed);
  Matrix ginibre(d, rank);
  for (long i = 0; i < d; ++i)
    for (long j = 0; j < rank; ++j) ginibre(i, j) = Complex(g.next(), g.next()) / std::sqrt(2.0);
  Matrix rho = ginibre * ginibre.adjoint();
  rho /= rho.trace().real();
  return DensityMatrix(layout, std::move(rho));
}

Matrix random_unitary(long dim, std::uint64_t seed) {
  if (dim < 1) throw DomainError("random_unitary: dimension must be positive");
  GaussianSampler g(seed);
  Matrix ginibre(dim, dim);
  for (long i = 0; i < dim; ++i)
    for (long j = 0; j < dim; ++j) ginibre(i, j) = Complex(g.next(), g.next()) / std::sqrt(2.0);
  Eigen::HouseholderQR<Matrix> qr(ginibre);
  Matrix q = qr.householderQ();
  Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Fix the phase ambiguity so the distribution is Haar.
  for (long i = 0; i < dim; ++i) {
    Complex rii = r(i, i);
    double mag = std::abs(rii);
    q.col(i) *= (mag > 0) ? rii / mag : Complex(1.0);
  }
  return q;
}

DensityMatrix project_to_density(const SystemLayout& layout, const Matrix& m) {
  if (m.rows() != m.cols() || m.rows() != layout.total_dim())
    throw ShapeError("project_to_density: matrix does not match layout");
  Matrix h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  Eigen::VectorXd vals = es.eigenvalues().cwiseMax(0.0);
  double total = vals.sum();
  if (!(total > 0.0))
    throw DegenerateError("project_to_density: no positive spectrum remains");
  vals /= total;
  Matrix out = es.eigenvectors() * vals.asDiagonal() * es.eigenvectors().adjoint();
  return DensityMatrix(layout, std::move(out));
}

DensityMatrix diagonal_state(const SystemLayout& layout, const Eigen::VectorXd& probs,
                             double tol) {
  if (probs.size() != layout.total_dim())
    throw ShapeError("diagonal_state: probability vector does not match layout");
  if (probs.minCoeff() < -tol)
    throw ValidationError("diagonal_state: negative probability");
  if (std::abs(probs.sum() - 1.0) > tol)
    throw ValidationError("diagonal_state: probabilities sum to " + std::to_string(probs.sum()));
  Matrix m = probs.cwiseMax(0.0).cast<Complex>().asDiagonal();
  return DensityMatrix(layout, std::move(m));
}

long hermitian_rank(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
  long rank = 0;
  for (long i = 0; i < es.eigenvalues().size(); ++i)
    if (std::abs(es.eigenvalues()[i]) >= kEigenvalueFloor) ++rank;
  return rank;
}

StateVector ghz_state(long n_qubits) {
  if (n_qubits < 2) throw DomainError("ghz_state: need at least 2 qubits");
  SystemLayout layout = SystemLayout::qubits(n_qubits);
  CVector v = CVector::Zero(layout.total_dim());
  const double amp = 1.0 / std::sqrt(2.0);
  v(0) = amp;
  v(layout.total_dim() - 1) = amp;
  return StateVector(std::move(layout), std::move(v));
}

StateVector bell_pair() { return ghz_state(2); }

Matrix embed_operator(const Matrix& op, const Region& support, const SystemLayout& layout) {
  support.require_within(layout);
  const SystemLayout sub = layout.restricted(support);
  if (op.rows() != op.cols() || op.rows() != sub.total_dim())
    throw ShapeError("embed_operator: operator does not match support dimension");
  const auto sup_offs = subsystem_offsets(layout, support);
  const auto rest_offs = subsystem_offsets(layout, support.complement(layout.size()));
  Matrix out = Matrix::Zero(layout.total_dim(), layout.total_dim());
  const long ds = static_cast<long>(sup_offs.size());
  for (long r : rest_offs)
    for (long a = 0; a < ds; ++a)
      for (long b = 0; b < ds; ++b) out(sup_offs[a] + r, sup_offs[b] + r) = op(a, b);
  return out;
}

}  // namespace qcert
