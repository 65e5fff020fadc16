#include "qcert/entropy.hpp"

#include <cmath>

namespace qcert {

double entropy(const DensityMatrix& state, double psd_tol) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(state.matrix(), Eigen::EigenvaluesOnly);
  const auto& vals = es.eigenvalues();
  if (vals.minCoeff() < -psd_tol)
    throw ValidationError("entropy: negative eigenvalue " + std::to_string(vals.minCoeff()));
  double s = 0.0;
  for (long i = 0; i < vals.size(); ++i) {
    double p = vals[i];
    if (p > kEigenvalueFloor) s -= p * std::log(p);
  }
  return s;
}

double conditional_entropy(const DensityMatrix& state, const Region& a, const Region& b) {
  if (!a.disjoint_from(b))
    throw RegionError("conditional_entropy: regions " + a.to_string() + " and " + b.to_string() +
                      " overlap");
  a.require_within(state.layout());
  b.require_within(state.layout());
  double s_ab = entropy(partial_trace(state, a.unioned(b)));
  double s_b = b.empty() ? 0.0 : entropy(partial_trace(state, b));
  return s_ab - s_b;
}

double cmi(const DensityMatrix& state, const Region& a, const Region& b, const Region& c) {
  if (!a.disjoint_from(b) || !a.disjoint_from(c) || !b.disjoint_from(c))
    throw RegionError("cmi: regions must be pairwise disjoint");
  return conditional_entropy(state, a, b) - conditional_entropy(state, a, b.unioned(c));
}

double weak_monotonicity(const DensityMatrix& state, const Region& a, const Region& b,
                         const Region& c) {
  if (!a.disjoint_from(b) || !a.disjoint_from(c) || !b.disjoint_from(c))
    throw RegionError("weak_monotonicity: regions must be pairwise disjoint");
  return conditional_entropy(state, a, b) + conditional_entropy(state, a, c);
}

double binary_entropy(double x) {
  if (!(x >= 0.0 && x <= 1.0))
    throw DomainError("binary_entropy: argument " + std::to_string(x) + " outside [0, 1]");
  if (x == 0.0 || x == 1.0) return 0.0;
  return -x * std::log(x) - (1.0 - x) * std::log(1.0 - x);
}

double continuity_correction(std::span<const double> epsilons, std::span<const long> dims) {
  if (epsilons.size() != dims.size())
    throw ShapeError("continuity_correction: got " + std::to_string(epsilons.size()) +
                     " epsilons for " + std::to_string(dims.size()) + " dimensions");
  double total = 0.0;
  for (size_t k = 0; k < dims.size(); ++k) {
    if (dims[k] < 2)
      throw DomainError("continuity_correction: site dimension must be at least 2");
    total += 4.0 * epsilons[k] * std::log(static_cast<double>(dims[k])) +
             2.0 * binary_entropy(epsilons[k]);
  }
  return total;
}

double continuity_correction(double epsilon, std::span<const long> dims) {
  std::vector<double> eps(dims.size(), epsilon);
  return continuity_correction(std::span<const double>(eps), dims);
}

double concavity_gap(const DensityMatrix& rho, const DensityMatrix& sigma, double c) {
  if (!(c > 0.0 && c < 1.0))
    throw DomainError("concavity_gap: weight " + std::to_string(c) + " outside (0, 1)");
  if (rho.layout() != sigma.layout())
    throw ShapeError("concavity_gap: layouts differ");
  DensityMatrix mix(rho.layout(), c * rho.matrix() + (1.0 - c) * sigma.matrix());
  return entropy(mix) - c * entropy(rho) - (1.0 - c) * entropy(sigma);
}

double clamp_small_negative(double value, double tol) {
  return (value < 0.0 && value >= -tol) ? 0.0 : value;
}

}  // namespace qcert
