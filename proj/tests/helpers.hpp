#pragma once

// Test-side oracles, deliberately implemented independently of the library
// code paths they check (different index arithmetic, classical formulas).

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "qcert/density.hpp"
#include "qcert/rng.hpp"

namespace oracle {

using qcert::Complex;
using qcert::Matrix;

inline std::vector<long> index_digits(long index, const std::vector<long>& dims) {
  std::vector<long> digits(dims.size());
  for (size_t i = dims.size(); i-- > 0;) {
    digits[i] = index % dims[i];
    index /= dims[i];
  }
  return digits;
}

// Partial trace by explicit digit decomposition of every matrix entry.
inline Matrix naive_partial_trace(const Matrix& m, const std::vector<long>& dims,
                                  const std::vector<long>& keep) {
  long keep_dim = 1;
  for (long k : keep) keep_dim *= dims[static_cast<size_t>(k)];
  Matrix out = Matrix::Zero(keep_dim, keep_dim);
  const long total = m.rows();
  auto kept_index = [&](const std::vector<long>& digits) {
    long idx = 0;
    for (long k : keep) idx = idx * dims[static_cast<size_t>(k)] + digits[static_cast<size_t>(k)];
    return idx;
  };
  for (long r = 0; r < total; ++r) {
    auto rd = index_digits(r, dims);
    for (long c = 0; c < total; ++c) {
      auto cd = index_digits(c, dims);
      bool traced_match = true;
      for (size_t s = 0; s < dims.size(); ++s) {
        bool kept = std::find(keep.begin(), keep.end(), static_cast<long>(s)) != keep.end();
        if (!kept && rd[s] != cd[s]) traced_match = false;
      }
      if (traced_match) out(kept_index(rd), kept_index(cd)) += m(r, c);
    }
  }
  return out;
}

inline double shannon(const std::vector<double>& p) {
  double s = 0;
  for (double x : p)
    if (x > 1e-15) s -= x * std::log(x);
  return s;
}

inline std::vector<double> random_simplex(std::mt19937_64& rng, size_t n) {
  std::vector<double> p(n);
  double total = 0;
  for (auto& x : p) {
    x = -std::log(1.0 - qcert::uniform01(rng));  // exponential weights
    total += x;
  }
  for (auto& x : p) x /= total;
  return p;
}

// Joint distribution of a classical binary Markov chain x_0 -> ... -> x_{n-1},
// indexed with site 0 as the most significant bit. Transition rows stay away
// from 0/1 so every configuration keeps positive probability.
inline std::vector<double> classical_chain_probs(long n, std::mt19937_64& rng) {
  std::vector<double> p0 = random_simplex(rng, 2);
  std::vector<std::array<double, 2>> trans(static_cast<size_t>(n - 1));
  for (auto& t : trans) {
    t[0] = 0.05 + 0.9 * qcert::uniform01(rng);  // P(next=0 | prev=0)
    t[1] = 0.05 + 0.9 * qcert::uniform01(rng);  // P(next=0 | prev=1)
  }
  std::vector<double> probs(1u << n, 0.0);
  for (long x = 0; x < (1L << n); ++x) {
    double pr = p0[static_cast<size_t>((x >> (n - 1)) & 1)];
    for (long k = 0; k + 1 < n; ++k) {
      long prev = (x >> (n - 1 - k)) & 1;
      long next = (x >> (n - 2 - k)) & 1;
      double p_zero = trans[static_cast<size_t>(k)][static_cast<size_t>(prev)];
      pr *= (next == 0) ? p_zero : 1.0 - p_zero;
    }
    probs[static_cast<size_t>(x)] = pr;
  }
  return probs;
}

inline qcert::DensityMatrix depolarize(const qcert::DensityMatrix& state, double p) {
  const long d = state.dim();
  Matrix m = (1.0 - p) * state.matrix() + (p / static_cast<double>(d)) * Matrix::Identity(d, d);
  return qcert::DensityMatrix(state.layout(), std::move(m));
}

// Purification |psi> = sum_i sqrt(lambda_i) |v_i> (x) |i>, purifier appended
// as one site of the state's full dimension.
inline qcert::StateVector purify(const qcert::DensityMatrix& rho,
                                 const std::string& purifier_label = "env") {
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho.matrix());
  const long d = rho.dim();
  qcert::CVector psi = qcert::CVector::Zero(d * d);
  for (long i = 0; i < d; ++i) {
    double lam = std::max(es.eigenvalues()[i], 0.0);
    if (lam <= 0) continue;
    for (long r = 0; r < d; ++r) psi[r * d + i] += std::sqrt(lam) * es.eigenvectors()(r, i);
  }
  std::vector<qcert::Site> sites = rho.layout().sites();
  sites.push_back({purifier_label, d});
  return qcert::StateVector(qcert::SystemLayout::make(std::move(sites)), std::move(psi));
}

// Product of independent single-qubit mixed states.
inline qcert::DensityMatrix random_product_chain(long n, std::uint64_t seed) {
  qcert::DensityMatrix out = qcert::random_mixed_state(qcert::SystemLayout::qubits(1), 2, seed);
  for (long k = 1; k < n; ++k) {
    qcert::SystemLayout one = qcert::SystemLayout::make({{"q" + std::to_string(k), 2}});
    out = qcert::tensor_product(
        out, qcert::random_mixed_state(one, 2, qcert::mix_seed(seed, static_cast<std::uint64_t>(k))));
  }
  return out;
}

// Product of independent single-qubit pure states (Haar angles).
inline qcert::DensityMatrix random_pure_product(long n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  qcert::CVector psi = qcert::CVector::Ones(1);
  for (long k = 0; k < n; ++k) {
    double theta = std::acos(1.0 - 2.0 * qcert::uniform01(rng));
    double phi = 2.0 * std::numbers::pi * qcert::uniform01(rng);
    qcert::CVector q(2);
    q << std::cos(theta / 2.0), std::polar(std::sin(theta / 2.0), phi);
    qcert::CVector next(psi.size() * 2);
    for (long i = 0; i < psi.size(); ++i) {
      next[2 * i] = psi[i] * q[0];
      next[2 * i + 1] = psi[i] * q[1];
    }
    psi = std::move(next);
  }
  qcert::StateVector sv(qcert::SystemLayout::qubits(n), std::move(psi));
  return qcert::to_density(sv);
}

}  // namespace oracle
