#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qcert/bundle.hpp"
#include "qcert/markov.hpp"
#include "qcert/plan.hpp"

namespace qcert {

// Which regions to measure, with what budget. Schemes:
//   "pauli"       per-site Pauli bases, 3^n settings, shots split evenly
//                 (at least one shot per setting), multinomial outcome noise
//   "pauli-exact" the same linear-inversion path fed with exact outcome
//                 frequencies (the infinite-shot limit)
//   "exact"       the true marginal, any site dimensions
struct MeasurementPlan {
  std::vector<Region> regions;
  long shots = 1;
  std::string scheme = "pauli";
  std::uint64_t seed = 0;
};

// Estimate the marginal on `region` from simulated measurements of
// `true_state`. Deterministic for a fixed seed. SchemeError for non-qubit
// sites under the Pauli schemes or an unknown scheme name.
DensityMatrix simulate_region_tomography(const DensityMatrix& true_state, const Region& region,
                                         long shots, const std::string& scheme,
                                         std::uint64_t seed);

// One estimated RDM per plan region, with per-region seeds derived from
// plan.seed by stable hashing, so entries are independent streams and the
// result does not depend on evaluation order.
RdmBundle simulate_bundle(const DensityMatrix& true_state, const MeasurementPlan& plan);

// Trace distance of an estimate from the known target marginal; this is the
// epsilon that feeds the certificate's continuity correction.
double epsilon_against_target(const DensityMatrix& estimated, const DensityMatrix& target_rdm);

// CoverageError unless every shield support of `plan` is covered by some
// measurement region.
void require_plan_coverage(const MeasurementPlan& mplan, const ShieldPlan& plan);

struct VerificationVerdict {
  struct RegionEpsilon {
    long site = -1;
    Region region;  // the shield support that was compared
    double epsilon = 0;
  };
  std::vector<RegionEpsilon> epsilons;
  CertificateReport certificate;  // terms from the target, corrections from the epsilons
  double bound = 2;               // capped certificate bound
  bool certified = false;         // all regions compared and bound < 2
  std::string reason;             // empty when certified
};

// Compare measured marginals against the target's exact ones on every shield
// support, then price the disagreement into the certificate. The verdict
// never claims closeness beyond the bound.
VerificationVerdict verify(const RdmBundle& measured, const RdmBundle& target,
                           const ShieldPlan& plan);

// Heuristic alternating-projection search for a global state matching the
// bundle (the exact problem is QMA-complete; no completeness claimed).
// Non-convergence is a result, not an exception.
struct ConsistentStateResult {
  bool converged = false;
  DensityMatrix state;            // best iterate seen
  std::vector<double> residuals;  // per bundle entry, for `state`
  double max_residual = 0;
  long iterations = 0;
};
ConsistentStateResult find_consistent_state(const RdmBundle& rdms, long max_iters = 2000,
                                            double tol = 1e-6);

}  // namespace qcert
