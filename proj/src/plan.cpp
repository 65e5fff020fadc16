#include "qcert/plan.hpp"

#include <algorithm>
#include <sstream>

namespace qcert {

long ShieldPlan::position_of(long site) const {
  for (long i = 0; i < n_sites(); ++i)
    if (ordering[i] == site) return i;
  throw PlanError("plan: site " + std::to_string(site) + " not in ordering");
}

Region ShieldPlan::visited_before(long position) const {
  return Region::of({ordering.begin(), ordering.begin() + position});
}

Region ShieldPlan::support(long position) const {
  const Shield& s = shields[position];
  return Region::single(ordering[position]).unioned(s.m).unioned(s.m_prime);
}

ShieldPlan ShieldPlan::chain(long n_sites) {
  ShieldPlan plan;
  for (long k = 0; k < n_sites; ++k) {
    plan.ordering.push_back(k);
    Shield s;
    if (k > 0) s.m = Region::single(k - 1);
    if (k + 1 < n_sites) s.m_prime = Region::single(k + 1);
    plan.shields.push_back(std::move(s));
  }
  return plan;
}

std::vector<PlanViolation> validate_plan(const ShieldPlan& plan, long n_sites) {
  std::vector<PlanViolation> out;
  if (plan.n_sites() != n_sites) {
    out.push_back({-1, "ordering visits " + std::to_string(plan.n_sites()) + " sites, layout has " +
                           std::to_string(n_sites)});
    return out;
  }
  if (plan.shields.size() != plan.ordering.size()) {
    out.push_back({-1, "plan has " + std::to_string(plan.shields.size()) + " shields for " +
                           std::to_string(plan.ordering.size()) + " ordered sites"});
    return out;
  }
  std::vector<long> sorted = plan.ordering;
  std::sort(sorted.begin(), sorted.end());
  for (long i = 0; i < n_sites; ++i)
    if (sorted[static_cast<size_t>(i)] != i) {
      out.push_back({-1, "ordering is not a permutation of 0.." + std::to_string(n_sites - 1)});
      return out;
    }

  std::vector<long> visited;  // kept sorted
  for (long i = 0; i < plan.n_sites(); ++i) {
    const long k = plan.ordering[i];
    const auto& s = plan.shields[i];
    if (s.m.contains(k) || s.m_prime.contains(k))
      out.push_back({k, "shield contains the site itself"});
    if (!s.m.disjoint_from(s.m_prime))
      out.push_back({k, "visited and unvisited shields overlap"});
    for (long v : s.m.sites()) {
      if (v < 0 || v >= n_sites)
        out.push_back({k, "shield site " + std::to_string(v) + " out of range"});
      else if (!std::binary_search(visited.begin(), visited.end(), v))
        out.push_back({k, "visited shield uses site " + std::to_string(v) +
                              " which comes later in the ordering"});
    }
    for (long v : s.m_prime.sites()) {
      if (v < 0 || v >= n_sites)
        out.push_back({k, "shield site " + std::to_string(v) + " out of range"});
      else if (std::binary_search(visited.begin(), visited.end(), v))
        out.push_back({k, "unvisited shield uses site " + std::to_string(v) +
                              " which comes earlier in the ordering"});
    }
    visited.insert(std::upper_bound(visited.begin(), visited.end(), k), k);
  }
  return out;
}

void require_valid_plan(const ShieldPlan& plan, long n_sites) {
  auto violations = validate_plan(plan, n_sites);
  if (violations.empty()) return;
  std::ostringstream os;
  os << "invalid shield plan:";
  for (const auto& v : violations) {
    os << "\n  ";
    if (v.site >= 0) os << "site " << v.site << ": ";
    os << v.what;
  }
  throw PlanError(os.str());
}

}  // namespace qcert
