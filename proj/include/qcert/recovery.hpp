#pragma once

#include <optional>

#include "qcert/bundle.hpp"
#include "qcert/plan.hpp"

namespace qcert {

// Eigenvalues at or below this are treated as outside the support when
// inverting. Values between kEigenvalueFloor and this are counted as
// borderline: the result is still returned but the caller should distrust
// tight tolerances.
inline constexpr double kPinvRankTol = 1e-10;

// Reconstruction gives up once a single Petz step needs a PSD repair of this
// size; the inputs are then too inconsistent for the output to mean anything.
inline constexpr double kRepairAbortTol = 1e-4;

// Principal square root of a PSD matrix. Eigenvalues below -psd_tol raise
// ValidationError; small negatives are clipped.
Matrix matrix_sqrt(const Matrix& m, double psd_tol = Tolerances{}.psd);

// Moore-Penrose m^{-1/2} on the support of m.
Matrix pinv_sqrt(const Matrix& m, double rank_tol = kPinvRankTol,
                 double psd_tol = Tolerances{}.psd, long* borderline = nullptr);

struct PetzResult {
  DensityMatrix state;
  double repair = 0;     // trace distance between the raw composition and its PSD repair
  long borderline = 0;   // near-cutoff eigenvalues met while inverting
};

// rho_AB^{1/2} rho_B^{-1/2} rho_BC rho_B^{-1/2} rho_AB^{1/2}, embedded on
// A u B u C of `global`. Exact when I(A:C|B) = 0. B may be empty (the result
// is then the tensor product). The B marginals of both inputs must agree
// within b_marginal_tol (ConsistencyError). A zero-support B marginal raises
// DegenerateError. The output is passed through project_to_density; the
// repair size is reported and is at numerical-noise scale for true Markov
// inputs.
PetzResult petz_recover(const SystemLayout& global, const Region& a, const Region& b,
                        const Region& c, const DensityMatrix& rho_ab,
                        const DensityMatrix& rho_bc, double b_marginal_tol = 1e-8);

// Grow a reconstructed prefix by one site: A = prefix \ M_k, B = M_k,
// C = {site}. local_rdm must live on a region containing M_k u {site} and is
// traced down as needed.
PetzResult petz_extend(const SystemLayout& global, const DensityMatrix& prefix,
                       const Region& prefix_region, long site, const Region& m_k,
                       const DensityMatrix& local_rdm, double b_marginal_tol = 1e-8);

struct ReconstructionTrace {
  struct Step {
    long site = -1;
    Region region;  // sites reconstructed so far
    double repair = 0;
    long borderline = 0;
    // s_k when the bundle also covers M_k'; absent otherwise.
    std::optional<double> term;
    // Distance of the prefix to the reference's marginal, when a reference
    // state was supplied.
    std::optional<double> reference_distance;
  };
  std::vector<Step> steps;
  DensityMatrix final_state;
  std::optional<double> final_reference_distance;
  // Capped certificate bound from the same bundle, when it covers every
  // shield support. The final reference distance can never exceed it.
  std::optional<double> certificate_bound;
  bool bound_holds = true;
};

// Rebuild a global state from the bundle by extending site by site along the
// plan. Preconditions: the plan is valid, the bundle covers every k u M_k,
// and pairwise overlapping entries agree within overlap_tol
// (ConsistencyError). A repair larger than repair_abort aborts with
// NonConvergenceError.
ReconstructionTrace reconstruct(const RdmBundle& rdms, const ShieldPlan& plan,
                                const std::optional<DensityMatrix>& reference = std::nullopt,
                                double overlap_tol = 1e-6,
                                double repair_abort = kRepairAbortTol);

}  // namespace qcert
