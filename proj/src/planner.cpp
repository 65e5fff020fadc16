#include "qcert/planner.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <optional>

namespace qcert {

namespace {

constexpr long kDx[4] = {1, -1, 0, 0};
constexpr long kDy[4] = {0, 0, 1, -1};

// 4-neighbour of (x, y), wrapped on periodic grids, nullopt when it falls off
// an open grid.
std::optional<long> step(const GridLayout& g, long x, long y, int dir) {
  long nx = x + kDx[dir];
  long ny = y + kDy[dir];
  if (g.periodic) {
    nx = (nx + g.width) % g.width;
    ny = (ny + g.height) % g.height;
    return g.index(nx, ny);
  }
  if (!g.in_bounds(nx, ny)) return std::nullopt;
  return g.index(nx, ny);
}

// Connected components among the cells where mask is true (4-connectivity).
// Returns component count; fills `component` with ids, -1 elsewhere.
long label_components(const GridLayout& g, const std::vector<char>& mask,
                      std::vector<long>& component) {
  component.assign(mask.size(), -1);
  long count = 0;
  for (long s = 0; s < g.num_sites(); ++s) {
    if (!mask[s] || component[s] >= 0) continue;
    std::deque<long> queue{s};
    component[s] = count;
    while (!queue.empty()) {
      long cur = queue.front();
      queue.pop_front();
      auto [x, y] = g.coords(cur);
      for (int d = 0; d < 4; ++d) {
        auto n = step(g, x, y, d);
        if (n && mask[*n] && component[*n] < 0) {
          component[*n] = count;
          queue.push_back(*n);
        }
      }
    }
    ++count;
  }
  return count;
}

}  // namespace

void GridLayout::require_valid() const {
  if (width < 1 || height < 1)
    throw GeometryError("grid: extents must be positive, got " + std::to_string(width) + "x" +
                        std::to_string(height));
  if (num_sites() > kMaxTotalDim)  // reuse the global cap; plans beyond it are unusable anyway
    throw CapacityError("grid: too many sites");
}

void EntropyModel::require_valid() const {
  if (alpha < 0 || gamma < 0 || slack < 0)
    throw DomainError("entropy model: alpha, gamma and slack must be nonnegative");
}

GridRegion GridRegion::of(std::vector<long> cells) {
  std::sort(cells.begin(), cells.end());
  for (size_t i = 0; i < cells.size(); ++i) {
    if (cells[i] < 0) throw RegionError("grid region: negative cell index");
    if (i > 0 && cells[i] == cells[i - 1])
      throw RegionError("grid region: duplicate cell " + std::to_string(cells[i]));
  }
  GridRegion r;
  r.cells_ = std::move(cells);
  return r;
}

bool GridRegion::contains(long cell) const {
  return std::binary_search(cells_.begin(), cells_.end(), cell);
}

GridRegion GridRegion::unioned(const GridRegion& other) const {
  std::vector<long> out;
  std::set_union(cells_.begin(), cells_.end(), other.cells_.begin(), other.cells_.end(),
                 std::back_inserter(out));
  GridRegion r;
  r.cells_ = std::move(out);
  return r;
}

bool GridRegion::disjoint_from(const GridRegion& other) const {
  std::vector<long> shared;
  std::set_intersection(cells_.begin(), cells_.end(), other.cells_.begin(), other.cells_.end(),
                        std::back_inserter(shared));
  return shared.empty();
}

BoundaryMetrics boundary_metrics(const GridRegion& region, const GridLayout& grid) {
  grid.require_valid();
  if (region.empty()) throw DomainError("boundary_metrics: empty region");
  if (region.cells().back() >= grid.num_sites())
    throw RegionError("boundary_metrics: cell outside the grid");

  std::vector<char> in_region(grid.num_sites(), 0);
  for (long c : region.cells()) in_region[c] = 1;

  BoundaryMetrics out;
  for (long c : region.cells()) {
    auto [x, y] = grid.coords(c);
    for (int d = 0; d < 4; ++d) {
      auto n = step(grid, x, y, d);
      if (!n || !in_region[*n]) ++out.length;  // off-grid counts as complement
    }
  }

  std::vector<long> component;
  long region_components = label_components(grid, in_region, component);

  std::vector<char> in_complement(grid.num_sites(), 0);
  for (long s = 0; s < grid.num_sites(); ++s) in_complement[s] = !in_region[s];
  long complement_components = label_components(grid, in_complement, component);

  long holes = 0;
  if (grid.periodic) {
    // No outside; every complement component beyond the first is enclosed.
    holes = std::max<long>(0, complement_components - 1);
  } else {
    // A complement component is a hole unless it touches the grid border,
    // where it merges with the outside.
    std::vector<char> touches_border(complement_components, 0);
    for (long s = 0; s < grid.num_sites(); ++s) {
      if (in_region[s]) continue;
      auto [x, y] = grid.coords(s);
      if (x == 0 || x == grid.width - 1 || y == 0 || y == grid.height - 1)
        touches_border[component[s]] = 1;
    }
    for (long i = 0; i < complement_components; ++i)
      if (!touches_border[i]) ++holes;
  }

  // One closed curve around each region component, one around each hole.
  out.components = region_components + holes;
  out.holes = holes;
  return out;
}

double model_entropy(const GridRegion& region, const EntropyModel& model, const GridLayout& grid) {
  model.require_valid();
  BoundaryMetrics m = boundary_metrics(region, grid);
  return model.alpha * static_cast<double>(m.length) -
         model.gamma * static_cast<double>(m.components);
}

ShieldScore model_shield_score(long k, const GridRegion& m, const GridRegion& m_prime,
                               const EntropyModel& model, const GridLayout& grid) {
  if (m.contains(k) || m_prime.contains(k))
    throw RegionError("model_shield_score: shield contains the site itself");
  if (!m.disjoint_from(m_prime))
    throw RegionError("model_shield_score: shields overlap");
  GridRegion just_k = GridRegion::of({k});
  auto bracket = [&](const GridRegion& shield) {
    if (shield.empty()) return model_entropy(just_k, model, grid);
    return model_entropy(just_k.unioned(shield), model, grid) -
           model_entropy(shield, model, grid);
  };
  return {bracket(m) + bracket(m_prime), 4.0 * model.slack};
}

PlanResult generate_plan(const GridLayout& grid, long neighborhood_radius) {
  grid.require_valid();
  const long r = neighborhood_radius;
  if (r < 1) throw GeometryError("generate_plan: radius must be positive");
  // Each axis must fit the ball (degenerate length-1 axes are allowed on open
  // grids; on a torus they would make the ball wrap onto itself).
  auto axis_ok = [&](long len) { return grid.periodic ? len >= 2 * r + 1 : (len == 1 || len >= 2 * r + 1); };
  if (!axis_ok(grid.width) || !axis_ok(grid.height))
    throw GeometryError("generate_plan: radius " + std::to_string(r) + " too large for " +
                        std::to_string(grid.width) + "x" + std::to_string(grid.height) + " grid");

  PlanResult out;
  std::vector<long>& ordering = out.plan.ordering;
  ordering.reserve(grid.num_sites());
  for (long y = 0; y < grid.height; ++y) {
    if (y % 2 == 0)
      for (long x = 0; x < grid.width; ++x) ordering.push_back(grid.index(x, y));
    else
      for (long x = grid.width - 1; x >= 0; --x) ordering.push_back(grid.index(x, y));
  }

  std::vector<long> position(grid.num_sites());
  for (long i = 0; i < grid.num_sites(); ++i) position[ordering[i]] = i;

  for (long i = 0; i < grid.num_sites(); ++i) {
    const auto [x, y] = grid.coords(ordering[i]);
    std::vector<long> visited_ball, unvisited_ball;
    bool wrapped_into_visited = false;
    for (long dy = -r; dy <= r; ++dy) {
      for (long dx = -r; dx <= r; ++dx) {
        if (dx == 0 && dy == 0) continue;
        long nx = x + dx, ny = y + dy;
        bool wrapped = !grid.in_bounds(nx, ny);
        if (wrapped) {
          if (!grid.periodic) continue;
          nx = (nx + grid.width) % grid.width;
          ny = (ny + grid.height) % grid.height;
        }
        long n = grid.index(nx, ny);
        if (position[n] < i) {
          visited_ball.push_back(n);
          // A visited cell reached only through the periodic identification
          // means the sweep front has closed around the torus here; the
          // patch picture behind the shields no longer holds.
          if (wrapped) wrapped_into_visited = true;
        } else {
          unvisited_ball.push_back(n);
        }
      }
    }
    out.plan.shields.push_back({Region::of(std::move(visited_ball)),
                                Region::of(std::move(unvisited_ball))});
    if (wrapped_into_visited) out.uncertifiable.push_back(ordering[i]);
  }
  std::sort(out.uncertifiable.begin(), out.uncertifiable.end());
  return out;
}

std::vector<PlanViolation> validate_plan(const ShieldPlan& plan, const GridLayout& grid) {
  grid.require_valid();
  return validate_plan(plan, grid.num_sites());
}

PredictedBound predict_bound(const ShieldPlan& plan, const EntropyModel& model,
                             const GridLayout& grid) {
  require_valid_plan(plan, grid.num_sites());
  PredictedBound out;
  for (long i = 0; i < plan.n_sites(); ++i) {
    ShieldScore s = model_shield_score(plan.ordering[i],
                                       GridRegion::from_region(plan.shields[i].m),
                                       GridRegion::from_region(plan.shields[i].m_prime),
                                       model, grid);
    out.score_sum += s.value;
    out.slack_width += s.slack_width;
  }
  auto bound = [](double radicand) {
    return std::pow(2.0, 1.5) * std::sqrt(std::max(radicand, 0.0));
  };
  out.value = bound(out.score_sum);
  out.lower = bound(out.score_sum - out.slack_width);
  out.upper = bound(out.score_sum + out.slack_width);
  return out;
}

}  // namespace qcert
