#include "qcert/recovery.hpp"

#include <cmath>
#include <unordered_map>

#include "qcert/markov.hpp"

namespace qcert {

namespace {

void require_hermitian(const Matrix& m, const char* who) {
  if (m.rows() != m.cols())
    throw ShapeError(std::string(who) + ": matrix is not square");
  double dev = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (dev > 1e-9)
    throw ValidationError(std::string(who) + ": not Hermitian, max deviation " +
                          std::to_string(dev));
}

// Region of `global` that a restricted layout corresponds to, recovered
// through the (unique) site labels.
Region region_of_layout(const SystemLayout& local, const SystemLayout& global) {
  std::unordered_map<std::string, long> index;
  for (long i = 0; i < global.size(); ++i) index[global.label(i)] = i;
  std::vector<long> sites;
  long prev = -1;
  for (long i = 0; i < local.size(); ++i) {
    auto it = index.find(local.label(i));
    if (it == index.end())
      throw ShapeError("recovery: site '" + local.label(i) + "' not in the global layout");
    if (global.dim(it->second) != local.dim(i))
      throw ShapeError("recovery: site '" + local.label(i) + "' dimension mismatch");
    if (it->second <= prev)
      throw ShapeError("recovery: local layout does not follow the global site order");
    prev = it->second;
    sites.push_back(it->second);
  }
  return Region::of(std::move(sites));
}

}  // namespace

Matrix matrix_sqrt(const Matrix& m, double psd_tol) {
  require_hermitian(m, "matrix_sqrt");
  Eigen::SelfAdjointEigenSolver<Matrix> es(m);
  if (es.eigenvalues().minCoeff() < -psd_tol)
    throw ValidationError("matrix_sqrt: negative eigenvalue " +
                          std::to_string(es.eigenvalues().minCoeff()));
  Eigen::VectorXd vals = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * vals.asDiagonal() * es.eigenvectors().adjoint();
}

Matrix pinv_sqrt(const Matrix& m, double rank_tol, double psd_tol, long* borderline) {
  require_hermitian(m, "pinv_sqrt");
  Eigen::SelfAdjointEigenSolver<Matrix> es(m);
  if (es.eigenvalues().minCoeff() < -psd_tol)
    throw ValidationError("pinv_sqrt: negative eigenvalue " +
                          std::to_string(es.eigenvalues().minCoeff()));
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(es.eigenvalues().size());
  long near_cutoff = 0;
  for (long i = 0; i < inv.size(); ++i) {
    double v = es.eigenvalues()[i];
    if (v > rank_tol)
      inv[i] = 1.0 / std::sqrt(v);
    else if (v > kEigenvalueFloor)
      ++near_cutoff;  // treated as zero, but too close to the cutoff to trust
  }
  if (borderline) *borderline = near_cutoff;
  return es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().adjoint();
}

PetzResult petz_recover(const SystemLayout& global, const Region& a, const Region& b,
                        const Region& c, const DensityMatrix& rho_ab,
                        const DensityMatrix& rho_bc, double b_marginal_tol) {
  if (!a.disjoint_from(b) || !a.disjoint_from(c) || !b.disjoint_from(c))
    throw RegionError("petz_recover: regions must be pairwise disjoint");
  const Region ab = a.unioned(b);
  const Region bc = b.unioned(c);
  const Region abc = ab.unioned(c);
  abc.require_within(global);
  if (rho_ab.layout() != global.restricted(ab))
    throw ShapeError("petz_recover: rho_AB does not live on A u B of the global layout");
  if (rho_bc.layout() != global.restricted(bc))
    throw ShapeError("petz_recover: rho_BC does not live on B u C of the global layout");

  DensityMatrix b_from_ab = partial_trace(rho_ab, b.positions_in(ab));
  DensityMatrix b_from_bc = partial_trace(rho_bc, b.positions_in(bc));
  double b_dist = trace_distance(b_from_ab, b_from_bc);
  if (b_dist > b_marginal_tol)
    throw ConsistencyError("petz_recover: B marginals differ by " + std::to_string(b_dist));
  {
    Eigen::SelfAdjointEigenSolver<Matrix> es(b_from_ab.matrix(), Eigen::EigenvaluesOnly);
    if (es.eigenvalues().maxCoeff() <= kPinvRankTol)
      throw DegenerateError("petz_recover: B marginal has no support");
  }

  const SystemLayout out_layout = global.restricted(abc);
  long borderline = 0;
  Matrix e_ab = embed_operator(matrix_sqrt(rho_ab.matrix()), ab.positions_in(abc), out_layout);
  Matrix e_b = embed_operator(pinv_sqrt(b_from_ab.matrix(), kPinvRankTol, Tolerances{}.psd,
                                        &borderline),
                              b.positions_in(abc), out_layout);
  Matrix e_bc = embed_operator(rho_bc.matrix(), bc.positions_in(abc), out_layout);

  Matrix raw = e_ab * e_b * e_bc * e_b * e_ab;
  Matrix herm = 0.5 * (raw + raw.adjoint());
  double tr = herm.trace().real();
  if (tr <= kEigenvalueFloor)
    throw DegenerateError("petz_recover: composition has vanishing trace");
  herm /= tr;

  PetzResult out{project_to_density(out_layout, herm), 0.0, borderline};
  out.repair = trace_norm_hermitian(out.state.matrix() - herm);
  return out;
}

PetzResult petz_extend(const SystemLayout& global, const DensityMatrix& prefix,
                       const Region& prefix_region, long site, const Region& m_k,
                       const DensityMatrix& local_rdm, double b_marginal_tol) {
  if (!m_k.subset_of(prefix_region))
    throw PlanError("petz_extend: shield " + m_k.to_string() + " is not inside the prefix " +
                    prefix_region.to_string());
  if (prefix_region.contains(site))
    throw PlanError("petz_extend: site " + std::to_string(site) + " already reconstructed");
  if (prefix.layout() != global.restricted(prefix_region))
    throw ShapeError("petz_extend: prefix does not live on its region");

  const Region a = prefix_region.difference(m_k);
  const Region c = Region::single(site);
  const Region bc = m_k.unioned(c);
  const Region local_region = region_of_layout(local_rdm.layout(), global);
  if (!bc.subset_of(local_region))
    throw CoverageError("petz_extend: local marginal on " + local_region.to_string() +
                        " does not cover " + bc.to_string());
  DensityMatrix rho_bc = (local_region == bc)
                             ? local_rdm
                             : partial_trace(local_rdm, bc.positions_in(local_region));
  return petz_recover(global, a, m_k, c, prefix, rho_bc, b_marginal_tol);
}

ReconstructionTrace reconstruct(const RdmBundle& rdms, const ShieldPlan& plan,
                                const std::optional<DensityMatrix>& reference,
                                double overlap_tol, double repair_abort) {
  const SystemLayout& layout = rdms.layout;
  require_valid_plan(plan, layout.size());
  rdms.require_consistent_layouts();
  if (reference && reference->layout() != layout)
    throw ShapeError("reconstruct: reference state does not match the bundle layout");

  for (long i = 0; i < plan.n_sites(); ++i) {
    Region needed = Region::single(plan.ordering[i]).unioned(plan.shields[i].m);
    if (!rdms.find_covering(needed))
      throw CoverageError("reconstruct: no bundle entry covers " + needed.to_string() +
                          " needed at step " + std::to_string(i));
  }
  double inconsistency = max_overlap_inconsistency(rdms);
  if (inconsistency > overlap_tol)
    throw ConsistencyError("reconstruct: bundle overlaps disagree by " +
                           std::to_string(inconsistency));

  ReconstructionTrace trace;
  bool all_supports_covered = true;
  for (long i = 0; i < plan.n_sites(); ++i)
    if (!rdms.find_covering(plan.support(i))) all_supports_covered = false;
  if (all_supports_covered)
    trace.certificate_bound = certificate(rdms, plan).bound_capped;

  auto term_if_available = [&](long position) -> std::optional<double> {
    if (!rdms.find_covering(plan.support(position))) return std::nullopt;
    return shield_term(rdms, plan, position).term;
  };

  Region region = Region::single(plan.ordering[0]);
  DensityMatrix prefix = rdms.rdm_on(region);
  {
    ReconstructionTrace::Step step;
    step.site = plan.ordering[0];
    step.region = region;
    step.term = term_if_available(0);
    if (reference) step.reference_distance = trace_distance(prefix, partial_trace(*reference, region));
    trace.steps.push_back(std::move(step));
  }

  for (long i = 1; i < plan.n_sites(); ++i) {
    const long k = plan.ordering[i];
    const Region& m = plan.shields[i].m;
    DensityMatrix local = rdms.rdm_on(m.unioned(Region::single(k)));
    PetzResult res = petz_extend(layout, prefix, region, k, m, local);
    if (res.repair > repair_abort)
      throw NonConvergenceError("reconstruct: step " + std::to_string(i) + " (site " +
                                std::to_string(k) + ") needed a PSD repair of " +
                                std::to_string(res.repair) +
                                "; the marginals are too inconsistent");
    region = region.unioned(Region::single(k));
    prefix = std::move(res.state);

    ReconstructionTrace::Step step;
    step.site = k;
    step.region = region;
    step.repair = res.repair;
    step.borderline = res.borderline;
    step.term = term_if_available(i);
    if (reference) step.reference_distance = trace_distance(prefix, partial_trace(*reference, region));
    trace.steps.push_back(std::move(step));
  }

  trace.final_state = std::move(prefix);
  if (reference) {
    trace.final_reference_distance = trace_distance(trace.final_state, *reference);
    if (trace.certificate_bound)
      trace.bound_holds = *trace.final_reference_distance <= *trace.certificate_bound + 1e-9;
  }
  return trace;
}

}  // namespace qcert
