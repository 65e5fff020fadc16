#include "qcert/bundle.hpp"

#include <algorithm>

namespace qcert {

const RdmBundle::Entry* RdmBundle::find_covering(const Region& r) const {
  for (const auto& e : entries)
    if (r.subset_of(e.region)) return &e;
  return nullptr;
}

DensityMatrix RdmBundle::rdm_on(const Region& r) const {
  const Entry* e = find_covering(r);
  if (!e)
    throw CoverageError("bundle: no entry covers region " + r.to_string());
  if (e->region == r) return e->state;
  return partial_trace(e->state, r.positions_in(e->region));
}

void RdmBundle::require_consistent_layouts() const {
  for (const auto& e : entries) {
    e.region.require_within(layout);
    if (e.state.layout() != layout.restricted(e.region))
      throw ValidationError("bundle: entry on " + e.region.to_string() +
                            " does not match the global layout");
  }
}

RdmBundle exact_bundle(const DensityMatrix& state, const std::vector<Region>& regions) {
  RdmBundle out;
  out.layout = state.layout();
  out.entries.reserve(regions.size());
  for (const auto& r : regions) out.entries.push_back({r, partial_trace(state, r)});
  return out;
}

double max_overlap_inconsistency(const RdmBundle& bundle) {
  double worst = 0.0;
  for (size_t i = 0; i < bundle.entries.size(); ++i) {
    for (size_t j = i + 1; j < bundle.entries.size(); ++j) {
      const auto& a = bundle.entries[i];
      const auto& b = bundle.entries[j];
      Region shared = a.region.intersected(b.region);
      if (shared.empty()) continue;
      DensityMatrix ra = partial_trace(a.state, shared.positions_in(a.region));
      DensityMatrix rb = partial_trace(b.state, shared.positions_in(b.region));
      worst = std::max(worst, trace_distance(ra, rb));
    }
  }
  return worst;
}

}  // namespace qcert
