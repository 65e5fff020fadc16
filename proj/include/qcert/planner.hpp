#pragma once

#include <utility>
#include <vector>

#include "qcert/plan.hpp"

namespace qcert {

// 2D square grid. Site index of (x, y) is y*width + x.
struct GridLayout {
  long width = 0;
  long height = 0;
  bool periodic = false;

  long num_sites() const { return width * height; }
  long index(long x, long y) const { return y * width + x; }
  std::pair<long, long> coords(long site) const { return {site % width, site / width}; }
  bool in_bounds(long x, long y) const { return x >= 0 && x < width && y >= 0 && y < height; }
  void require_valid() const;  // GeometryError on nonpositive extents
};

// Area-law model in nats: S(A) = alpha * boundary_length - gamma * boundary
// components, with a per-evaluation slack half-width standing in for the
// o(1) term.
struct EntropyModel {
  double alpha = 0;
  double gamma = 0;
  double slack = 0;
  void require_valid() const;  // DomainError on negative parameters
};

// Set of grid cells, stored as sorted indices.
class GridRegion {
 public:
  GridRegion() = default;
  static GridRegion of(std::vector<long> cells);  // sorts, rejects duplicates
  static GridRegion from_region(const Region& r) { return of(r.sites()); }

  const std::vector<long>& cells() const { return cells_; }
  long size() const { return static_cast<long>(cells_.size()); }
  bool empty() const { return cells_.empty(); }
  bool contains(long cell) const;
  GridRegion unioned(const GridRegion& other) const;
  bool disjoint_from(const GridRegion& other) const;
  Region to_region() const { return Region::of(cells_); }

 private:
  std::vector<long> cells_;
};

struct BoundaryMetrics {
  long length = 0;      // unit edges between the region and its complement
  long components = 0;  // maximal connected boundary curves
  long holes = 0;       // complement components enclosed by the region
};

// Flood-fill boundary analysis. Off-grid counts as complement on open grids.
// DomainError for an empty region, RegionError for cells outside the grid.
BoundaryMetrics boundary_metrics(const GridRegion& region, const GridLayout& grid);

// alpha * length - gamma * components. The slack half-width is carried by the
// callers as an interval, not folded into the value.
double model_entropy(const GridRegion& region, const EntropyModel& model, const GridLayout& grid);

struct ShieldScore {
  double value = 0;
  double slack_width = 0;  // 4 * model.slack: four model evaluations per score
};

// Model value of S(k|M_k) + S(k|M_k'). Empty shields contribute
// model_entropy({k}) for their bracket.
ShieldScore model_shield_score(long k, const GridRegion& m, const GridRegion& m_prime,
                               const EntropyModel& model, const GridLayout& grid);

// Boustrophedon sweep with Chebyshev-ball neighbourhoods: row-major ordering
// with alternating row direction; M_k = ball cells already visited, M_k' =
// ball cells not yet visited. On periodic grids the sweep's patch argument
// breaks where the visited set reaches a cell through the periodic
// identification; those sites are reported as uncertifiable rather than
// silently included. Open grids always report an empty remainder.
struct PlanResult {
  ShieldPlan plan;
  std::vector<long> uncertifiable;  // sorted site indices
};
PlanResult generate_plan(const GridLayout& grid, long neighborhood_radius);

// Structural plan validation against the grid's site count.
std::vector<PlanViolation> validate_plan(const ShieldPlan& plan, const GridLayout& grid);

// 2^{3/2} sqrt(max(sum of scores, 0)) with the accumulated slack interval
// pushed through the square root.
struct PredictedBound {
  double score_sum = 0;
  double slack_width = 0;  // total, i.e. 4 * slack * n_sites
  double value = 0;
  double lower = 0;  // bound evaluated at score_sum - slack_width
  double upper = 0;  // bound evaluated at score_sum + slack_width
};
PredictedBound predict_bound(const ShieldPlan& plan, const EntropyModel& model,
                             const GridLayout& grid);

}  // namespace qcert
