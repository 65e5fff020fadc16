#include <doctest.h>

#include <cmath>
#include <random>

#include "helpers.hpp"
#include "qcert/entropy.hpp"
#include "qcert/markov.hpp"
#include "qcert/recovery.hpp"
#include "qcert/rng.hpp"

using namespace qcert;

namespace {

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

RdmBundle triple_bundle(const DensityMatrix& state, long n) {
  std::vector<Region> regions;
  for (long k = 0; k + 2 < n; ++k) regions.push_back(Region::range(k, k + 3));
  if (n == 2) regions.push_back(Region::range(0, 2));
  return exact_bundle(state, regions);
}

}  // namespace

TEST_CASE("matrix square roots") {
  Matrix g = random_unitary(4, 3) * Matrix::Random(4, 4);
  Matrix psd = g * g.adjoint();
  Matrix root = matrix_sqrt(psd);
  CHECK((root * root - psd).cwiseAbs().maxCoeff() < 1e-10);
  CHECK((root - root.adjoint()).cwiseAbs().maxCoeff() < 1e-12);

  Matrix indefinite = Matrix::Identity(4, 4);
  indefinite(2, 2) = -0.5;
  CHECK_THROWS_AS(matrix_sqrt(indefinite), ValidationError);
}

TEST_CASE("pseudo-inverse square root acts on the support only") {
  // Rank-2 PSD matrix with eigenvalues 2 and 0.5.
  Matrix u = random_unitary(4, 17);
  Eigen::VectorXd evals(4);
  evals << 2.0, 0.5, 0.0, 0.0;
  Matrix m = u * evals.asDiagonal() * u.adjoint();
  long borderline = 0;
  Matrix inv_root = pinv_sqrt(m, kPinvRankTol, Tolerances{}.psd, &borderline);
  CHECK(borderline == 0);
  // inv_root^2 * m should be the projector onto the support.
  Matrix projector = u * Eigen::Vector4d(1, 1, 0, 0).asDiagonal() * u.adjoint();
  CHECK((inv_root * inv_root * m - projector).cwiseAbs().maxCoeff() < 1e-10);

  // An eigenvalue inside (kEigenvalueFloor, kPinvRankTol] is counted.
  evals << 2.0, 0.5, 5e-11, 0.0;
  m = u * evals.asDiagonal() * u.adjoint();
  pinv_sqrt(m, kPinvRankTol, Tolerances{}.psd, &borderline);
  CHECK(borderline == 1);
}

TEST_CASE("petz recovery is exact when the middle system decouples") {
  // rho = rho_{A B1} (x) rho_{B2 C}: conditioned on B = B1 B2 the ends are
  // independent, so I(A:C|B) = 0 and recovery is exact.
  auto left = random_mixed_state(SystemLayout::make({{"a", 2}, {"b1", 2}}), 4, 21);
  auto right = random_mixed_state(SystemLayout::make({{"b2", 2}, {"c", 2}}), 4, 22);
  auto state = tensor_product(left, right);
  Region a = Region::single(0), b = Region::of({1, 2}), c = Region::single(3);
  CHECK(std::abs(cmi(state, a, b, c)) < 1e-10);

  auto rho_ab = partial_trace(state, a.unioned(b));
  auto rho_bc = partial_trace(state, b.unioned(c));
  auto result = petz_recover(state.layout(), a, b, c, rho_ab, rho_bc);
  CHECK(trace_distance(result.state, state) < 1e-10);
  CHECK(result.repair < 1e-10);
}

TEST_CASE("petz recovery is exact for classical Markov chains") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    auto state = classical_chain_state(3, mix_seed(600, seed));
    Region a = Region::single(0), b = Region::single(1), c = Region::single(2);
    REQUIRE(std::abs(cmi(state, a, b, c)) < 1e-10);
    auto result = petz_recover(state.layout(), a, b, c, partial_trace(state, Region::of({0, 1})),
                               partial_trace(state, Region::of({1, 2})));
    CHECK(trace_distance(result.state, state) < 1e-8);
  }
}

TEST_CASE("petz recovery handles a rank-deficient conditioning system") {
  // B pinned to |0>: rho_B has rank 1, so the inverse square root must act on
  // the support only.
  auto a_state = random_mixed_state(SystemLayout::make({{"a", 2}}), 2, 31);
  Eigen::VectorXd pinned(2);
  pinned << 1.0, 0.0;
  auto b_state = diagonal_state(SystemLayout::make({{"b", 2}}), pinned);
  auto c_state = random_mixed_state(SystemLayout::make({{"c", 2}}), 2, 32);
  auto state = tensor_product(tensor_product(a_state, b_state), c_state);
  Region a = Region::single(0), b = Region::single(1), c = Region::single(2);
  auto result = petz_recover(state.layout(), a, b, c, partial_trace(state, Region::of({0, 1})),
                             partial_trace(state, Region::of({1, 2})));
  CHECK(trace_distance(result.state, state) < 1e-9);
}

TEST_CASE("petz recovery from GHZ marginals returns the dephased state") {
  auto ghz = to_density(ghz_state(3));
  Region a = Region::single(0), b = Region::single(1), c = Region::single(2);
  auto result = petz_recover(ghz.layout(), a, b, c, partial_trace(ghz, Region::of({0, 1})),
                             partial_trace(ghz, Region::of({1, 2})));
  CHECK(trace_distance(result.state, dephased_ghz(3)) < 1e-8);
  CHECK(trace_distance(result.state, ghz) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("petz output preserves the AB marginal") {
  // Holds for any inputs with matching B marginals, Markov or not, because
  // the composition acts inside the support of rho_AB.
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    auto state = random_mixed_state(SystemLayout::qubits(3), 8, mix_seed(700, seed));
    Region a = Region::single(0), b = Region::single(1), c = Region::single(2);
    auto rho_ab = partial_trace(state, Region::of({0, 1}));
    auto result = petz_recover(state.layout(), a, b, c, rho_ab,
                               partial_trace(state, Region::of({1, 2})));
    auto recovered_ab = partial_trace(result.state, Region::of({0, 1}));
    CHECK(trace_distance(recovered_ab, rho_ab) < 1e-8);
  }
}

TEST_CASE("petz recovery with an empty middle region is the tensor product") {
  auto a_state = random_mixed_state(SystemLayout::make({{"a", 2}}), 2, 41);
  auto c_state = random_mixed_state(SystemLayout::make({{"c", 2}}), 2, 42);
  auto joint = tensor_product(a_state, c_state);
  auto result = petz_recover(joint.layout(), Region::single(0), Region{}, Region::single(1),
                             partial_trace(joint, Region::single(0)),
                             partial_trace(joint, Region::single(1)));
  CHECK(trace_distance(result.state, joint) < 1e-12);
}

TEST_CASE("petz recovery rejects mismatched B marginals") {
  auto ghz = to_density(ghz_state(3));
  Region a = Region::single(0), b = Region::single(1), c = Region::single(2);
  auto rho_ab = partial_trace(ghz, Region::of({0, 1}));
  // A BC part whose B marginal is pure |0> instead of maximally mixed.
  Eigen::VectorXd p(4);
  p << 1.0, 0.0, 0.0, 0.0;
  auto bad_bc = diagonal_state(ghz.layout().restricted(Region::of({1, 2})), p);
  CHECK_THROWS_AS(petz_recover(ghz.layout(), a, b, c, rho_ab, bad_bc), ConsistencyError);
  CHECK_THROWS_AS(petz_recover(ghz.layout(), a, a, c, rho_ab, rho_ab), RegionError);
}

TEST_CASE("petz_extend grows a prefix using a local window") {
  auto state = classical_chain_state(4, 9001);
  // Prefix {0,1} is exact; extend by site 2 with M = {1} using the window
  // {1,2,3}, which must be traced down to {1,2} internally.
  auto prefix = partial_trace(state, Region::of({0, 1}));
  auto window = partial_trace(state, Region::of({1, 2, 3}));
  auto result = petz_extend(state.layout(), prefix, Region::of({0, 1}), 2, Region::single(1),
                            window);
  auto expected = partial_trace(state, Region::of({0, 1, 2}));
  CHECK(trace_distance(result.state, expected) < 1e-8);

  CHECK_THROWS_AS(petz_extend(state.layout(), prefix, Region::of({0, 1}), 2, Region::single(3),
                              window),
                  PlanError);
  CHECK_THROWS_AS(petz_extend(state.layout(), prefix, Region::of({0, 1}), 1, Region::single(1),
                              window),
                  PlanError);
}

TEST_CASE("reconstruction of classical Markov chains is exact") {
  for (long n : {5L, 6L}) {
    auto state = classical_chain_state(n, 100 + static_cast<std::uint64_t>(n));
    auto plan = ShieldPlan::chain(n);
    auto trace = reconstruct(triple_bundle(state, n), plan, state);
    REQUIRE(trace.steps.size() == static_cast<size_t>(n));
    REQUIRE(trace.final_reference_distance.has_value());
    CHECK(*trace.final_reference_distance < 1e-6);
    REQUIRE(trace.certificate_bound.has_value());
    CHECK(*trace.certificate_bound >= *trace.final_reference_distance);
    CHECK(trace.bound_holds);
    for (const auto& step : trace.steps) {
      CHECK(step.repair < 1e-8);
      if (step.reference_distance) CHECK(*step.reference_distance < 1e-6);
    }
  }
}

TEST_CASE("reconstruction from GHZ marginals lands on the dephased state") {
  auto ghz = to_density(ghz_state(5));
  auto plan = ShieldPlan::chain(5);
  auto trace = reconstruct(triple_bundle(ghz, 5), plan, ghz);
  // The certified radius is trivial (capped at 2) and the true distance is 1:
  // the reconstruction picks the dephased representative of the marginals.
  CHECK(trace_distance(trace.final_state, dephased_ghz(5)) < 1e-7);
  REQUIRE(trace.final_reference_distance.has_value());
  CHECK(*trace.final_reference_distance == doctest::Approx(1.0).epsilon(1e-6));
  REQUIRE(trace.certificate_bound.has_value());
  CHECK(*trace.certificate_bound == 2.0);
  CHECK(trace.bound_holds);
  // Middle steps carry their shield terms; they vanish inside a GHZ chain.
  REQUIRE(trace.steps[2].term.has_value());
  CHECK(*trace.steps[2].term == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("reconstruction validates coverage and overlap consistency") {
  auto state = classical_chain_state(4, 77);
  auto plan = ShieldPlan::chain(4);

  // Missing the window that covers {2,3}.
  auto partial = exact_bundle(state, {Region::of({0, 1, 2})});
  CHECK_THROWS_AS(reconstruct(partial, plan), CoverageError);

  // Entries overlap on {1,2} but disagree there.
  auto bundle = triple_bundle(state, 4);
  auto other = classical_chain_state(4, 78);
  bundle.entries[1].state = partial_trace(other, Region::range(1, 4));
  CHECK_THROWS_AS(reconstruct(bundle, plan), ConsistencyError);
}

TEST_CASE("reconstruction aborts when a step needs too much repair") {
  auto state = classical_chain_state(4, 55);
  auto plan = ShieldPlan::chain(4);
  // An impossible repair budget trips the abort on the first Petz step.
  CHECK_THROWS_AS(reconstruct(triple_bundle(state, 4), plan, std::nullopt, 1e-6, -1.0),
                  NonConvergenceError);
}
