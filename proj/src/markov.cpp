#include "qcert/markov.hpp"

#include <cmath>
#include <sstream>

namespace qcert {

namespace {

// Continuation of the per-site correction beyond eps = 1. Trace distances
// reach 2, and dropping the binary-entropy part there keeps the correction
// monotone, so the certificate only grows.
double correction_term(double eps, long dim) {
  if (eps < 0.0 || eps > 2.0)
    throw DomainError("certificate: epsilon " + std::to_string(eps) + " outside [0, 2]");
  double h = (eps <= 1.0) ? binary_entropy(eps) : 0.0;
  return 4.0 * eps * std::log(static_cast<double>(dim)) + 2.0 * h;
}

double bound_from_radicand(double radicand) {
  return std::pow(2.0, 1.5) * std::sqrt(radicand);
}

}  // namespace

double markov_entropy(const DensityMatrix& state, const ShieldPlan& plan) {
  require_valid_plan(plan, state.layout().size());
  double total = 0.0;
  for (long i = 0; i < plan.n_sites(); ++i)
    total += conditional_entropy(state, Region::single(plan.ordering[i]), plan.shields[i].m);
  return total;
}

double med_gap(const DensityMatrix& state, const ShieldPlan& plan) {
  return markov_entropy(state, plan) - entropy(state);
}

ShieldTerm shield_term(const RdmBundle& bundle, const ShieldPlan& plan, long position) {
  const long k = plan.ordering[position];
  const auto& shield = plan.shields[position];
  const Region support = plan.support(position);
  DensityMatrix local = bundle.rdm_on(support);
  const Region k_pos = Region::single(k).positions_in(support);
  ShieldTerm out;
  out.site = k;
  out.cond_m = conditional_entropy(local, k_pos, shield.m.positions_in(support));
  out.cond_m_prime = conditional_entropy(local, k_pos, shield.m_prime.positions_in(support));
  out.term = out.cond_m + out.cond_m_prime;
  return out;
}

double med_gap_upper_bound(const RdmBundle& bundle, const ShieldPlan& plan) {
  require_valid_plan(plan, bundle.layout.size());
  double total = 0.0;
  for (long i = 0; i < plan.n_sites(); ++i) total += shield_term(bundle, plan, i).term;
  return total;
}

double med_gap_upper_bound(const DensityMatrix& state, const ShieldPlan& plan) {
  require_valid_plan(plan, state.layout().size());
  std::vector<Region> supports;
  for (long i = 0; i < plan.n_sites(); ++i) supports.push_back(plan.support(i));
  return med_gap_upper_bound(exact_bundle(state, supports), plan);
}

Theorem1Result theorem1_bound(const DensityMatrix& rho, const DensityMatrix& sigma,
                              const Region& a, const Region& b, const Region& c,
                              double marginal_tol) {
  if (rho.layout() != sigma.layout())
    throw ShapeError("theorem1_bound: layouts differ");
  if (!a.disjoint_from(b) || !a.disjoint_from(c) || !b.disjoint_from(c))
    throw RegionError("theorem1_bound: regions must be pairwise disjoint");
  Theorem1Result out;
  out.dist_ab =
      trace_distance(partial_trace(rho, a.unioned(b)), partial_trace(sigma, a.unioned(b)));
  out.dist_bc =
      trace_distance(partial_trace(rho, b.unioned(c)), partial_trace(sigma, b.unioned(c)));
  if (out.dist_ab > marginal_tol || out.dist_bc > marginal_tol)
    throw ConsistencyError("theorem1_bound: shared marginals differ (AB " +
                           std::to_string(out.dist_ab) + ", BC " + std::to_string(out.dist_bc) +
                           ", tolerance " + std::to_string(marginal_tol) + ")");
  double d = trace_distance(rho, sigma);
  out.lhs = 0.25 * d * d;
  out.cmi_rho = cmi(rho, a, b, c);
  out.cmi_sigma = cmi(sigma, a, b, c);
  out.rhs = out.cmi_rho + out.cmi_sigma;
  out.holds = out.lhs <= out.rhs + 1e-9;
  return out;
}

Theorem2Result theorem2_bound(const DensityMatrix& rho, const DensityMatrix& sigma,
                              const ShieldPlan& plan, double marginal_tol) {
  if (rho.layout() != sigma.layout())
    throw ShapeError("theorem2_bound: layouts differ");
  require_valid_plan(plan, rho.layout().size());
  Theorem2Result out;
  double worst = 0.0;
  for (long i = 0; i < plan.n_sites(); ++i) {
    Region r = Region::single(plan.ordering[i]).unioned(plan.shields[i].m);
    double d = trace_distance(partial_trace(rho, r), partial_trace(sigma, r));
    out.marginal_distances.push_back(d);
    worst = std::max(worst, d);
  }
  if (worst > marginal_tol) {
    std::ostringstream os;
    os << "theorem2_bound: k u M_k marginals differ beyond " << marginal_tol << ":";
    for (long i = 0; i < plan.n_sites(); ++i)
      if (out.marginal_distances[i] > marginal_tol)
        os << " site " << plan.ordering[i] << " (" << out.marginal_distances[i] << ")";
    throw ConsistencyError(os.str());
  }
  double d = trace_distance(rho, sigma);
  out.lhs = 0.25 * d * d;
  out.gap_rho = med_gap(rho, plan);
  out.gap_sigma = med_gap(sigma, plan);
  out.rhs = out.gap_rho + out.gap_sigma;
  out.holds = out.lhs <= out.rhs + 1e-9;
  return out;
}

CertificateReport certificate(const RdmBundle& bundle, const ShieldPlan& plan,
                              const std::vector<double>& epsilons) {
  require_valid_plan(plan, bundle.layout.size());
  bundle.require_consistent_layouts();
  const long n = plan.n_sites();
  if (!epsilons.empty() && static_cast<long>(epsilons.size()) != n)
    throw ShapeError("certificate: got " + std::to_string(epsilons.size()) + " epsilons for " +
                     std::to_string(n) + " sites");
  CertificateReport report;
  for (long i = 0; i < n; ++i) {
    ShieldTerm st = shield_term(bundle, plan, i);
    CertificateReport::SiteTerm site;
    site.site = st.site;
    site.cond_m = st.cond_m;
    site.cond_m_prime = st.cond_m_prime;
    site.term = st.term;
    site.negative_term = st.term < -1e-9;
    site.epsilon = epsilons.empty() ? 0.0 : epsilons[i];
    site.correction = correction_term(site.epsilon, bundle.layout.dim(st.site));
    report.term_sum += site.term;
    report.correction_sum += site.correction;
    report.sites.push_back(site);
  }
  double raw = report.term_sum + report.correction_sum;
  report.radicand_clamped = raw < 0.0;
  report.radicand = std::max(raw, 0.0);
  report.bound_raw = bound_from_radicand(report.radicand);
  report.bound_capped = std::min(report.bound_raw, 2.0);
  report.nontrivial = report.bound_raw < 2.0;
  return report;
}

double chain_rule_check(const DensityMatrix& state, const std::vector<long>& ordering) {
  ShieldPlan skeleton;
  skeleton.ordering = ordering;
  skeleton.shields.resize(ordering.size());
  require_valid_plan(skeleton, state.layout().size());  // permutation check
  double total = 0.0;
  Region visited;
  for (long k : ordering) {
    total += conditional_entropy(state, Region::single(k), visited);
    visited = visited.unioned(Region::single(k));
  }
  return std::abs(total - entropy(state));
}

}  // namespace qcert
