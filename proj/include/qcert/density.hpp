#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "qcert/layout.hpp"

namespace qcert {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

struct Tolerances {
  double herm = 1e-9;   // max |M - M^dag| entry
  double trace = 1e-9;  // |tr M - 1|
  double psd = 1e-8;    // most negative eigenvalue allowed
};

// Eigenvalues with magnitude below this are treated as exactly zero for rank
// and entropy purposes.
inline constexpr double kEigenvalueFloor = 1e-12;

// Density matrix tied to a SystemLayout. The checked constructor path is
// `validated`; internal operations that produce valid states by construction
// use the unchecked constructor.
class DensityMatrix {
 public:
  DensityMatrix();  // the trivial state on the empty layout

  // Unchecked beyond a size/layout consistency check (ShapeError).
  DensityMatrix(SystemLayout layout, Matrix m);

  // Full validation: Hermitian, unit trace, PSD within tolerances.
  static DensityMatrix validated(SystemLayout layout, Matrix m, const Tolerances& tol = {});

  const SystemLayout& layout() const { return layout_; }
  const Matrix& matrix() const { return m_; }
  long dim() const { return m_.rows(); }

 private:
  SystemLayout layout_;
  Matrix m_;
};

// Normalized pure state tied to a SystemLayout.
class StateVector {
 public:
  StateVector(SystemLayout layout, CVector v);  // size check only
  static StateVector validated(SystemLayout layout, CVector v, double norm_tol = 1e-9);

  const SystemLayout& layout() const { return layout_; }
  const CVector& vector() const { return v_; }
  long dim() const { return v_.size(); }

 private:
  SystemLayout layout_;
  CVector v_;
};

DensityMatrix to_density(const StateVector& psi);

// Global index offsets of a sub-register: one offset per basis state of the
// region's sites (row-major over the region, in increasing site order).
std::vector<long> subsystem_offsets(const SystemLayout& layout, const Region& region);

// Reduce to `keep`, tracing out everything else. Keeping the empty region
// yields the 1x1 matrix [tr rho].
DensityMatrix partial_trace(const DensityMatrix& state, const Region& keep);

// Sum of |eigenvalue| of a Hermitian matrix.
double trace_norm_hermitian(const Matrix& m);

// |a - b|_1. Ranges over [0, 2]; throws ShapeError when layouts differ.
double trace_distance(const DensityMatrix& a, const DensityMatrix& b);

// Kronecker product; site labels must be disjoint (RegionError otherwise).
DensityMatrix tensor_product(const DensityMatrix& a, const DensityMatrix& b);

// Ginibre construction: G G^dag / tr with G of shape (total_dim x rank).
// Deterministic for a fixed seed across platforms.
DensityMatrix random_mixed_state(const SystemLayout& layout, long rank, std::uint64_t seed);

// Haar-distributed unitary, deterministic for a fixed seed.
Matrix random_unitary(long dim, std::uint64_t seed);

// Nearest-density repair: hermitize, clip negative eigenvalues to zero,
// renormalize the trace. Throws DegenerateError if nothing remains.
DensityMatrix project_to_density(const SystemLayout& layout, const Matrix& m);

// Classical state: diag(probs). Probabilities must be nonnegative and sum to
// one within tolerance.
DensityMatrix diagonal_state(const SystemLayout& layout, const Eigen::VectorXd& probs,
                             double tol = 1e-9);

// Rank with eigenvalues below kEigenvalueFloor counted as zero. Hermitian input.
long hermitian_rank(const Matrix& m);

// (|0...0> + |1...1>)/sqrt(2) on n qubits, n >= 2.
StateVector ghz_state(long n_qubits);
StateVector bell_pair();

// Embed an operator supported on `support` into the layout, acting as the
// identity elsewhere.
Matrix embed_operator(const Matrix& op, const Region& support, const SystemLayout& layout);

}  // namespace qcert
