// Acceptance suite: one line per criterion, nonzero exit if any fails.
// Frozen expected values come from analytic derivations or the independent
// oracles in helpers.hpp / boundary_oracle.hpp, never from the library code
// under test.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "boundary_oracle.hpp"
#include "helpers.hpp"
#include "qcert/entropy.hpp"
#include "qcert/io.hpp"
#include "qcert/markov.hpp"
#include "qcert/planner.hpp"
#include "qcert/recovery.hpp"
#include "qcert/rng.hpp"
#include "qcert/tomo.hpp"

using namespace qcert;

namespace {

constexpr double kLn2 = 0.6931471805599453;

struct Outcome {
  bool pass = false;
  std::string detail;
};

DensityMatrix dephased_ghz(long n) {
  const long d = 1L << n;
  Eigen::VectorXd probs = Eigen::VectorXd::Zero(d);
  probs[0] = 0.5;
  probs[d - 1] = 0.5;
  return diagonal_state(SystemLayout::qubits(n), probs);
}

DensityMatrix classical_chain_state(long n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto probs = oracle::classical_chain_probs(n, rng);
  Eigen::VectorXd p = Eigen::Map<Eigen::VectorXd>(probs.data(), 1L << n);
  return diagonal_state(SystemLayout::qubits(n), p);
}

RdmBundle support_bundle(const DensityMatrix& state, const ShieldPlan& plan) {
  std::vector<Region> regions;
  for (long i = 0; i < plan.n_sites(); ++i) regions.push_back(plan.support(i));
  return exact_bundle(state, regions);
}

ShieldPlan full_history_plan(long n) {
  ShieldPlan plan;
  for (long k = 0; k < n; ++k) {
    plan.ordering.push_back(k);
    plan.shields.push_back({Region::range(0, k), Region::range(k + 1, n)});
  }
  return plan;
}

ShieldPlan empty_shield_plan(long n) {
  ShieldPlan plan;
  for (long k = 0; k < n; ++k) {
    plan.ordering.push_back(k);
    plan.shields.push_back({Region{}, Region{}});
  }
  return plan;
}

// A random valid plan: shuffled ordering, shields drawn from the
// visited/unvisited sides with random membership.
ShieldPlan random_plan(long n, std::mt19937_64& rng) {
  ShieldPlan plan;
  std::vector<long> order(static_cast<size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  for (long i = n - 1; i > 0; --i)
    std::swap(order[static_cast<size_t>(i)], order[static_cast<size_t>(rng() % (i + 1))]);
  plan.ordering = order;
  for (long i = 0; i < n; ++i) {
    std::vector<long> m, mp;
    for (long j = 0; j < n; ++j) {
      if (order[static_cast<size_t>(j)] == order[static_cast<size_t>(i)]) continue;
      bool visited = j < i;
      if (uniform01(rng) < 0.5) {
        if (visited)
          m.push_back(order[static_cast<size_t>(j)]);
        else
          mp.push_back(order[static_cast<size_t>(j)]);
      }
    }
    plan.shields.push_back({Region::of(m), Region::of(mp)});
  }
  return plan;
}

Outcome entropy_inequalities() {
  long violations = 0, samples = 0;
  for (int pattern = 0; pattern < 2; ++pattern) {
    auto layout = pattern == 0 ? SystemLayout::qubits(3)
                               : SystemLayout::make({{"a", 2}, {"b", 3}, {"c", 2}});
    for (std::uint64_t i = 0; i < 250; ++i) {
      long rank = 1 + static_cast<long>(i % static_cast<std::uint64_t>(layout.total_dim()));
      auto state = random_mixed_state(layout, rank, mix_seed(0xA11CE, i * 2 + pattern));
      double c = cmi(state, Region::single(0), Region::single(1), Region::single(2));
      double w = weak_monotonicity(state, Region::single(0), Region::single(1), Region::single(2));
      if (c < -1e-9 || w < -1e-9) ++violations;
      ++samples;
    }
  }
  std::ostringstream os;
  os << samples << " random tripartite states, cmi and weak monotonicity >= -1e-9, " << violations
     << " violations";
  return {violations == 0, os.str()};
}

Outcome concavity_strengthened() {
  auto layout = SystemLayout::qubits(3);
  long violations = 0, samples = 0;
  for (std::uint64_t i = 0; i < 500; ++i) {
    auto rho = random_mixed_state(layout, 1 + static_cast<long>(i % 8), mix_seed(0xC0C0A, 2 * i));
    auto sigma =
        random_mixed_state(layout, 8 - static_cast<long>(i % 8), mix_seed(0xC0C0A, 2 * i + 1));
    double dist = trace_distance(rho, sigma);
    for (double c : {0.1, 0.5, 0.9}) {
      double gap = concavity_gap(rho, sigma, c);
      if (gap < 0.5 * c * (1 - c) * dist * dist - 1e-9) ++violations;
      ++samples;
    }
  }
  std::ostringstream os;
  os << samples << " mixing-gap checks against c(1-c)/2 * dist^2, " << violations << " violations";
  return {violations == 0, os.str()};
}

Outcome ghz_dephased_bound() {
  auto ghz = to_density(ghz_state(3));
  auto deph = dephased_ghz(3);
  auto res = theorem1_bound(ghz, deph, Region::single(0), Region::single(1), Region::single(2));
  bool marginals_tight = res.dist_ab <= 1e-12 && res.dist_bc <= 1e-12;
  bool lhs_ok = std::abs(res.lhs - 0.25) <= 1e-9;
  // The dephased state is a classical Markov chain, so only the GHZ side
  // contributes ln 2 to the right side.
  bool rhs_ok = std::abs(res.rhs - kLn2) <= 1e-9;
  std::ostringstream os;
  os << "lhs " << res.lhs << ", rhs " << res.rhs << " (ln 2 from the GHZ side alone), marginal "
     << "distances " << res.dist_ab << "/" << res.dist_bc;
  return {marginals_tight && lhs_ok && rhs_ok && res.holds, os.str()};
}

Outcome markov_entropy_dominance() {
  long violations = 0, combos = 0;
  std::mt19937_64 plan_rng(0xFEED);
  for (std::uint64_t i = 0; i < 200; ++i) {
    long n = 3 + static_cast<long>(i % 2);
    auto layout = SystemLayout::qubits(n);
    auto state =
        random_mixed_state(layout, 1 + static_cast<long>(i % layout.total_dim()),
                           mix_seed(0xD011, i));
    ShieldPlan plan;
    switch (i % 4) {
      case 0: plan = ShieldPlan::chain(n); break;
      case 1: plan = full_history_plan(n); break;
      case 2: plan = empty_shield_plan(n); break;
      default: plan = random_plan(n, plan_rng); break;
    }
    double gap = med_gap(state, plan);
    double ub = med_gap_upper_bound(state, plan);
    if (gap < -1e-9 || ub < gap - 1e-9) ++violations;
    ++combos;
  }
  std::ostringstream os;
  os << combos << " state/plan combos: markov entropy >= entropy and local bound >= gap, "
     << violations << " violations";
  return {violations == 0, os.str()};
}

Outcome petz_exactness() {
  long failures = 0, instances = 0;

  // Product across the middle: rho_{A B1} (x) rho_{B2 C}.
  for (std::uint64_t i = 0; i < 25; ++i) {
    auto left = random_mixed_state(SystemLayout::make({{"a", 2}, {"b1", 2}}), 4,
                                   mix_seed(0xB0B0, 2 * i));
    auto right = random_mixed_state(SystemLayout::make({{"b2", 2}, {"c", 2}}), 4,
                                    mix_seed(0xB0B0, 2 * i + 1));
    auto state = tensor_product(left, right);
    Region a = Region::single(0), b = Region::of({1, 2}), c = Region::single(3);
    double markov_cmi = std::abs(cmi(state, a, b, c));
    auto rec = petz_recover(state.layout(), a, b, c, partial_trace(state, a.unioned(b)),
                            partial_trace(state, b.unioned(c)));
    if (markov_cmi > 1e-10 || trace_distance(rec.state, state) > 1e-6) ++failures;
    ++instances;
  }

  // Classical Markov chains, three and four sites.
  for (std::uint64_t i = 0; i < 25; ++i) {
    long n = 3 + static_cast<long>(i % 2);
    auto state = classical_chain_state(n, mix_seed(0xCAFE, i));
    Region a = Region::single(0);
    Region b = (n == 3) ? Region::single(1) : Region::of({1, 2});
    Region c = Region::single(n - 1);
    double markov_cmi = std::abs(cmi(state, a, b, c));
    auto rec = petz_recover(state.layout(), a, b, c, partial_trace(state, a.unioned(b)),
                            partial_trace(state, b.unioned(c)));
    if (markov_cmi > 1e-10 || trace_distance(rec.state, state) > 1e-6) ++failures;
    ++instances;
  }

  auto ghz = to_density(ghz_state(3));
  auto rec = petz_recover(ghz.layout(), Region::single(0), Region::single(1), Region::single(2),
                          partial_trace(ghz, Region::of({0, 1})),
                          partial_trace(ghz, Region::of({1, 2})));
  double to_dephased = trace_distance(rec.state, dephased_ghz(3));
  double to_ghz = trace_distance(rec.state, ghz);
  bool ghz_ok = to_dephased <= 1e-8 && std::abs(to_ghz - 1.0) <= 1e-6;

  std::ostringstream os;
  os << instances << " quantum Markov instances recovered exactly (" << failures
     << " failures); GHZ marginals land " << to_dephased << " from the dephased state and "
     << to_ghz << " from GHZ";
  return {failures == 0 && ghz_ok, os.str()};
}

Outcome certificate_soundness() {
  long violations = 0, comparisons = 0;

  // The bound only speaks about states that agree with the certified one on
  // every shield support, so candidate partners are screened against the
  // supports first (under a full-history plan the support is the whole
  // system and only the state itself survives the screen).
  auto check = [&](const DensityMatrix& state, const ShieldPlan& plan,
                   const std::vector<DensityMatrix>& partners) {
    auto report = certificate(support_bundle(state, plan), plan);
    for (const auto& partner : partners) {
      double marginal_gap = 0;
      for (long i = 0; i < plan.n_sites(); ++i) {
        auto support = plan.support(i);
        marginal_gap = std::max(marginal_gap,
                                trace_distance(partial_trace(state, support),
                                               partial_trace(partner, support)));
      }
      if (marginal_gap > 1e-9) continue;
      double dist = trace_distance(state, partner);
      if (dist > report.bound_capped + 1e-9) ++violations;
      ++comparisons;
    }
  };

  for (long n : {4L, 6L}) {
    auto product = oracle::random_pure_product(n, 0x9D + static_cast<std::uint64_t>(n));
    check(product, ShieldPlan::chain(n), {product});
    check(product, full_history_plan(n), {product});
  }

  for (std::uint64_t i = 0; i < 3; ++i) {
    auto chain = classical_chain_state(6, mix_seed(0x6A1, i));
    auto rebuilt = reconstruct(support_bundle(chain, ShieldPlan::chain(6)), ShieldPlan::chain(6))
                       .final_state;
    check(chain, ShieldPlan::chain(6), {chain, rebuilt});
  }

  for (long n : {3L, 4L, 5L, 6L}) {
    auto ghz = to_density(ghz_state(n));
    auto deph = dephased_ghz(n);
    DensityMatrix quarter(ghz.layout(), 0.25 * ghz.matrix() + 0.75 * deph.matrix());
    DensityMatrix half(ghz.layout(), 0.5 * ghz.matrix() + 0.5 * deph.matrix());
    std::vector<DensityMatrix> partners{ghz, deph, quarter, half};
    check(ghz, ShieldPlan::chain(n), partners);
    if (n <= 4) check(ghz, full_history_plan(n), partners);
  }

  std::ostringstream os;
  os << comparisons << " marginal-matched partner comparisons across product, classical-chain "
     << "and GHZ fixtures, " << violations << " bound violations";
  return {violations == 0 && comparisons >= 20, os.str()};
}

Outcome area_law_model() {
  GridLayout grid{5, 5, false};
  const long cx = 2, cy = 2;
  const long k = grid.index(cx, cy);
  auto cell = [&](long dx, long dy) { return grid.index(cx + dx, cy + dy); };

  std::vector<long> ring_cells;
  for (long dy = -1; dy <= 1; ++dy)
    for (long dx = -1; dx <= 1; ++dx)
      if (dx != 0 || dy != 0) ring_cells.push_back(cell(dx, dy));
  GridRegion full_ring = GridRegion::of(ring_cells);
  GridRegion upper = GridRegion::of({cell(-1, -1), cell(0, -1), cell(1, -1), cell(-1, 0)});
  GridRegion lower = GridRegion::of({cell(1, 0), cell(-1, 1), cell(0, 1), cell(1, 1)});
  GridRegion left_pair = GridRegion::of({cell(-1, -1), cell(-1, 0)});
  GridRegion rest_six = GridRegion::of(
      {cell(0, -1), cell(1, -1), cell(1, 0), cell(-1, 1), cell(0, 1), cell(1, 1)});

  double worst_score = 0;
  std::mt19937_64 rng(0xA2EA);
  for (int trial = 0; trial < 20; ++trial) {
    EntropyModel model{0.2 + 2.0 * uniform01(rng), 0.1 + 1.5 * uniform01(rng), 0.0};
    for (const auto& [m, mp] :
         {std::pair{full_ring, GridRegion{}}, std::pair{GridRegion{}, full_ring},
          std::pair{upper, lower}, std::pair{left_pair, rest_six}}) {
      double score = model_shield_score(k, m, mp, model, grid).value;
      worst_score = std::max(worst_score, std::abs(score));
    }
  }

  long metric_mismatches = 0;
  std::mt19937_64 region_rng(0xB0A2D);
  for (bool periodic : {false, true}) {
    GridLayout g{10, 10, periodic};
    for (int trial = 0; trial < 100; ++trial) {
      std::vector<long> cells;
      double density = 0.15 + 0.6 * uniform01(region_rng);
      for (long s = 0; s < g.num_sites(); ++s)
        if (uniform01(region_rng) < density) cells.push_back(s);
      if (cells.empty()) cells.push_back(static_cast<long>(region_rng() % 100));
      auto region = GridRegion::of(cells);
      auto got = boundary_metrics(region, g);
      auto want = oracle::boundary_metrics(region, g);
      if (got.length != want.length || got.components != want.components ||
          got.holes != want.holes)
        ++metric_mismatches;
    }
  }

  std::ostringstream os;
  os << "sweep shield topologies score <= " << worst_score << " across 20 parameter draws; "
     << "boundary metrics matched the union-find oracle on 200 regions with "
     << metric_mismatches << " mismatches";
  return {worst_score <= 1e-12 && metric_mismatches == 0, os.str()};
}

Outcome chain_reconstruction() {
  auto state = classical_chain_state(6, 0x51C);
  auto plan = ShieldPlan::chain(6);
  auto trace = reconstruct(support_bundle(state, plan), plan, state);
  bool has_values = trace.final_reference_distance.has_value() &&
                    trace.certificate_bound.has_value();
  double final_dist = has_values ? *trace.final_reference_distance : 2.0;
  double bound = has_values ? *trace.certificate_bound : 0.0;
  std::ostringstream os;
  os << "6-site chain rebuilt to distance " << final_dist << ", certified radius " << bound;
  return {has_values && final_dist <= 1e-6 && bound >= final_dist && trace.bound_holds, os.str()};
}

Outcome tomography_statistics() {
  auto start = std::chrono::steady_clock::now();

  // Error scaling: 16x the shots should cut the trace-distance error 4x.
  auto bell = to_density(bell_pair());
  Region whole = Region::of({0, 1});
  auto truth = partial_trace(bell, whole);
  std::vector<double> ratios;
  for (std::uint64_t trial = 0; trial < 50; ++trial) {
    auto coarse = simulate_region_tomography(bell, whole, 900, "pauli", mix_seed(0x7E57, trial));
    auto fine =
        simulate_region_tomography(bell, whole, 14400, "pauli", mix_seed(0x7E58, trial));
    ratios.push_back(epsilon_against_target(coarse, truth) /
                     epsilon_against_target(fine, truth));
  }
  std::sort(ratios.begin(), ratios.end());
  double median = ratios[25];
  bool scaling_ok = median >= 3.0 && median <= 5.0;

  // Soundness under depolarizing noise of known strength: for a pure target
  // the true global distance is 1.875 p.
  auto target = oracle::random_pure_product(4, 0x4444);
  const double p = 0.002;
  auto noisy = oracle::depolarize(target, p);
  const double true_distance = 1.875 * p;
  auto plan = ShieldPlan::chain(4);
  auto target_bundle = support_bundle(target, plan);
  MeasurementPlan mplan;
  for (long i = 0; i < plan.n_sites(); ++i) mplan.regions.push_back(plan.support(i));
  mplan.shots = 100000;
  mplan.scheme = "pauli";
  long sound = 0;
  double last_bound = 0;
  for (std::uint64_t trial = 0; trial < 100; ++trial) {
    mplan.seed = mix_seed(0x9999, trial);
    auto measured = simulate_bundle(noisy, mplan);
    auto verdict = verify(measured, target_bundle, plan);
    last_bound = verdict.bound;
    if (verdict.bound >= true_distance) ++sound;
  }
  auto seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  std::ostringstream os;
  os << "median error ratio " << median << " for 16x shots; bound >= true distance "
     << true_distance << " in " << sound << "/100 noisy trials (typical bound " << last_bound
     << "); " << seconds << " s";
  return {scaling_ok && sound >= 99 && seconds < 600.0, os.str()};
}

Outcome degenerate_inputs() {
  // Rank-deficient conditioning marginal: the support-projector identity and
  // exact recovery must both hold.
  Matrix u = random_unitary(4, 0xF00D);
  Eigen::VectorXd evals(4);
  evals << 1.4, 0.6, 0.0, 0.0;
  Matrix m = u * evals.asDiagonal() * u.adjoint();
  Matrix inv_root = pinv_sqrt(m);
  Matrix projector = u * Eigen::Vector4d(1, 1, 0, 0).asDiagonal() * u.adjoint();
  double projector_dev = (inv_root * m * inv_root - projector).cwiseAbs().maxCoeff();

  auto a_state = random_mixed_state(SystemLayout::make({{"a", 2}}), 2, 0xAB);
  Eigen::VectorXd pinned(2);
  pinned << 1.0, 0.0;
  auto b_state = diagonal_state(SystemLayout::make({{"b", 2}}), pinned);
  auto c_state = random_mixed_state(SystemLayout::make({{"c", 2}}), 2, 0xAC);
  auto pinned_state = tensor_product(tensor_product(a_state, b_state), c_state);
  auto rec = petz_recover(pinned_state.layout(), Region::single(0), Region::single(1),
                          Region::single(2), partial_trace(pinned_state, Region::of({0, 1})),
                          partial_trace(pinned_state, Region::of({1, 2})));
  double pinned_err = trace_distance(rec.state, pinned_state);

  // Inconsistent bundles must fail loudly, one way or another.
  bool overlap_refused = false;
  {
    auto chain = classical_chain_state(4, 0xDD);
    auto bundle = support_bundle(chain, ShieldPlan::chain(4));
    bundle.entries[1].state =
        partial_trace(classical_chain_state(4, 0xDE), ShieldPlan::chain(4).support(1));
    try {
      reconstruct(bundle, ShieldPlan::chain(4));
    } catch (const ConsistencyError&) {
      overlap_refused = true;
    }
  }
  bool coverage_refused = false;
  {
    auto ghz = to_density(ghz_state(3));
    auto thin = exact_bundle(ghz, {Region::of({0, 1})});
    try {
      certificate(thin, ShieldPlan::chain(3));
    } catch (const CoverageError&) {
      coverage_refused = true;
    }
  }
  bool monogamy_reported = false;
  {
    auto layout = SystemLayout::qubits(3);
    auto bell = to_density(bell_pair());
    RdmBundle impossible;
    impossible.layout = layout;
    impossible.entries.push_back(
        {Region::of({0, 1}),
         DensityMatrix(layout.restricted(Region::of({0, 1})), bell.matrix())});
    impossible.entries.push_back(
        {Region::of({1, 2}),
         DensityMatrix(layout.restricted(Region::of({1, 2})), bell.matrix())});
    auto result = find_consistent_state(impossible, 300);
    monogamy_reported = !result.converged && result.max_residual > 0.1;
  }

  std::ostringstream os;
  os << "support projector deviation " << projector_dev << ", rank-deficient recovery error "
     << pinned_err << "; overlap/coverage/monogamy failures reported: " << overlap_refused << "/"
     << coverage_refused << "/" << monogamy_reported;
  return {projector_dev <= 1e-9 && pinned_err <= 1e-9 && overlap_refused && coverage_refused &&
              monogamy_reported,
          os.str()};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {"entropy-inequality-positivity", entropy_inequalities},
      {"strengthened-concavity", concavity_strengthened},
      {"ghz-dephased-distance-bound", ghz_dephased_bound},
      {"markov-entropy-dominance", markov_entropy_dominance},
      {"petz-exactness", petz_exactness},
      {"certificate-soundness", certificate_soundness},
      {"area-law-shield-model", area_law_model},
      {"chain-reconstruction", chain_reconstruction},
      {"tomography-statistics", tomography_statistics},
      {"degenerate-input-handling", degenerate_inputs},
  };

  int failures = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    Outcome outcome;
    try {
      outcome = criteria[i].run();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    if (!outcome.pass) ++failures;
    std::printf("[%s] %2zu %-32s %s\n", outcome.pass ? "PASS" : "FAIL", i + 1, criteria[i].name,
                outcome.detail.c_str());
  }
  if (failures > 0) std::printf("%d of %zu criteria failed\n", failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
