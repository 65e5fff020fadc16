#pragma once

#include <span>
#include <string>
#include <vector>

#include "qcert/density.hpp"

namespace qcert {

// All entropic quantities are in nats.

// Von Neumann entropy. Eigenvalues below kEigenvalueFloor contribute zero;
// an eigenvalue below -psd tolerance is a ValidationError.
double entropy(const DensityMatrix& state, double psd_tol = Tolerances{}.psd);

// S(A|B) = S(AB) - S(B). Regions must be disjoint; B may be empty, giving S(A).
double conditional_entropy(const DensityMatrix& state, const Region& a, const Region& b);

// I(A:C|B) = S(A|B) - S(A|BC). Nonnegative by strong subadditivity, up to
// numerical noise of order 1e-10.
double cmi(const DensityMatrix& state, const Region& a, const Region& b, const Region& c);

// S(A|B) + S(A|C). Nonnegative by weak monotonicity.
double weak_monotonicity(const DensityMatrix& state, const Region& a, const Region& b,
                         const Region& c);

// -x ln x - (1-x) ln(1-x), zero at the endpoints. DomainError outside [0, 1].
double binary_entropy(double x);

// Sum over sites of 4 eps_k ln d_k + 2 H(eps_k): the price (in the bound's
// radicand) of evaluating shield terms on marginals that are only eps-close
// in trace distance. Each eps must lie in [0, 1].
double continuity_correction(std::span<const double> epsilons, std::span<const long> dims);
double continuity_correction(double epsilon, std::span<const long> dims);

// S(c rho + (1-c) sigma) - c S(rho) - (1-c) S(sigma). Requires matching
// layouts and c in (0, 1). Nonnegative; at least c(1-c)/2 |rho-sigma|_1^2.
double concavity_gap(const DensityMatrix& rho, const DensityMatrix& sigma, double c);

// Round values within tol below zero up to exactly zero; larger negatives
// pass through untouched.
double clamp_small_negative(double value, double tol = 1e-9);

struct EntropyReport {
  struct RegionEntropy {
    Region region;
    double entropy_nats = 0;
  };
  struct Quantity {
    std::string kind;  // "conditional", "cmi" or "weak_monotonicity"
    Region a, b, c;
    double value = 0;  // clamped
    double raw = 0;    // as computed
  };
  std::vector<RegionEntropy> regions;
  std::vector<Quantity> quantities;
};

}  // namespace qcert
