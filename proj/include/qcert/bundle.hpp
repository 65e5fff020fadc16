#pragma once

#include <vector>

#include "qcert/density.hpp"

namespace qcert {

// Reduced density matrices over regions of a common layout. This is the
// locally checkable interface: consumers ask for the marginal on a region and
// any entry whose region covers it can serve the request (after tracing down).
struct RdmBundle {
  SystemLayout layout;
  struct Entry {
    Region region;
    DensityMatrix state;
  };
  std::vector<Entry> entries;

  // First entry whose region contains r, or nullptr.
  const Entry* find_covering(const Region& r) const;

  // Marginal on r, traced down from a covering entry. CoverageError if none.
  DensityMatrix rdm_on(const Region& r) const;

  // Every entry's state must live on layout.restricted(region).
  void require_consistent_layouts() const;  // ValidationError
};

// Extract exact marginals of a global state.
RdmBundle exact_bundle(const DensityMatrix& state, const std::vector<Region>& regions);

// Largest trace distance between two entries' reductions onto a shared
// overlap. Zero when no two entries overlap.
double max_overlap_inconsistency(const RdmBundle& bundle);

}  // namespace qcert
