#pragma once

#include <string>
#include <vector>

#include "qcert/layout.hpp"

namespace qcert {

// A visiting order over all sites plus, for each site k, the shield regions
// M_k (already visited neighbours) and M_k' (not yet visited). shields[i]
// belongs to site ordering[i]. A valid plan draws M_k only from sites earlier
// in the ordering and M_k' only from later ones.
struct ShieldPlan {
  std::vector<long> ordering;
  struct Shield {
    Region m;
    Region m_prime;
  };
  std::vector<Shield> shields;

  long n_sites() const { return static_cast<long>(ordering.size()); }
  long site_at(long position) const { return ordering[position]; }
  long position_of(long site) const;  // PlanError if absent

  // Sites strictly before `position` in the ordering, as a Region.
  Region visited_before(long position) const;

  // {k} plus both shields: everything the term at `position` touches.
  Region support(long position) const;

  // 1D convenience: visit 0..n-1 left to right with M_k = {k-1}, M_k' = {k+1}.
  static ShieldPlan chain(long n_sites);
};

struct PlanViolation {
  long site = -1;  // -1 for plan-global problems
  std::string what;
};

// Structural checks: ordering is a permutation of [0, n), shield list length
// matches, shields avoid k itself, M_k is drawn from visited sites and M_k'
// from unvisited ones.
std::vector<PlanViolation> validate_plan(const ShieldPlan& plan, long n_sites);

// Throws PlanError listing every violation.
void require_valid_plan(const ShieldPlan& plan, long n_sites);

}  // namespace qcert
