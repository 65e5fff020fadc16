#pragma once

#include <vector>

#include "qcert/bundle.hpp"
#include "qcert/entropy.hpp"
#include "qcert/plan.hpp"

namespace qcert {

// Sum over the ordering of S(k | M_k): the entropy the state would have if it
// were an exact Markov network for the plan's shields.
double markov_entropy(const DensityMatrix& state, const ShieldPlan& plan);

// markov_entropy - entropy. Nonnegative up to numerics (each term exceeds the
// chain-rule conditional entropy by strong subadditivity).
double med_gap(const DensityMatrix& state, const ShieldPlan& plan);

// One locally evaluable term s_k = S(k|M_k) + S(k|M_k'), computed from the
// reduced state on k, M_k and M_k' alone.
struct ShieldTerm {
  long site = -1;
  double cond_m = 0;        // S(k|M_k)
  double cond_m_prime = 0;  // S(k|M_k')
  double term = 0;          // their sum
};
ShieldTerm shield_term(const RdmBundle& bundle, const ShieldPlan& plan, long position);

// Sum of shield terms. Upper-bounds med_gap by weak monotonicity, yet needs
// only the local marginals. The DensityMatrix overload extracts exact
// marginals first and exists for cross-checks against the gap.
double med_gap_upper_bound(const RdmBundle& bundle, const ShieldPlan& plan);
double med_gap_upper_bound(const DensityMatrix& state, const ShieldPlan& plan);

// (1/4)|rho - sigma|_1^2 <= I(A:C|B)_rho + I(A:C|B)_sigma, valid when the
// states share their AB and BC marginals. ConsistencyError when the shared
// marginals differ by more than marginal_tol.
struct Theorem1Result {
  double lhs = 0;
  double rhs = 0;
  double cmi_rho = 0;
  double cmi_sigma = 0;
  double dist_ab = 0;  // marginal agreement actually observed
  double dist_bc = 0;
  bool holds = false;
};
Theorem1Result theorem1_bound(const DensityMatrix& rho, const DensityMatrix& sigma,
                              const Region& a, const Region& b, const Region& c,
                              double marginal_tol = 1e-8);

// Same inequality with med gaps in place of the conditional mutual
// informations, preconditioned on agreement of every k u M_k marginal.
struct Theorem2Result {
  double lhs = 0;
  double rhs = 0;
  double gap_rho = 0;
  double gap_sigma = 0;
  std::vector<double> marginal_distances;  // per ordering position
  bool holds = false;
};
Theorem2Result theorem2_bound(const DensityMatrix& rho, const DensityMatrix& sigma,
                              const ShieldPlan& plan, double marginal_tol = 1e-8);

// The trace-distance certificate computed purely from local marginals.
// Any two states that reproduce the bundle's marginals on every shield
// support within the stated epsilons are closer than bound_capped in trace
// distance. Per-site corrections use 4 eps ln d_k + 2 H(eps); for eps > 1
// (trace distances range up to 2) the binary-entropy part is continued by 0,
// which only enlarges the bound.
struct CertificateReport {
  struct SiteTerm {
    long site = -1;
    double cond_m = 0;
    double cond_m_prime = 0;
    double term = 0;
    bool negative_term = false;  // term < 0 beyond noise; kept as computed
    double epsilon = 0;
    double correction = 0;
  };
  std::vector<SiteTerm> sites;
  double term_sum = 0;
  double correction_sum = 0;
  double radicand = 0;  // term_sum + correction_sum, clamped at 0
  bool radicand_clamped = false;
  double bound_raw = 0;     // 2^(3/2) sqrt(radicand)
  double bound_capped = 0;  // min(bound_raw, 2)
  bool nontrivial = false;  // bound_raw < 2
};
CertificateReport certificate(const RdmBundle& bundle, const ShieldPlan& plan,
                              const std::vector<double>& epsilons = {});

// |S(full) - sum_k S(k | earlier)| along the ordering; zero in exact
// arithmetic for any ordering.
double chain_rule_check(const DensityMatrix& state, const std::vector<long>& ordering);

}  // namespace qcert
