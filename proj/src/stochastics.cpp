#include "scl/stochastics.hpp"

#include <cmath>
#include <stdexcept>

namespace scl {

BrownianBatch::BrownianBatch(const TimeGrid& grid, int dim, long paths, std::uint64_t seed)
    : grid_(grid), dim_(dim), paths_(paths), seed_(seed), sqrt_dt_(std::sqrt(grid.dt())) {
  if (dim < 1) throw std::invalid_argument("BrownianBatch: dim must be >= 1");
  if (dim > static_cast<int>(CounterRng::kLanesPerStep)) {
    throw std::invalid_argument("BrownianBatch: dim exceeds lane budget");
  }
  if (paths < 1) throw std::invalid_argument("BrownianBatch: paths must be >= 1");
}

void BrownianBatch::step_increment(const CounterRng& rng, int step,
                                   Eigen::Ref<Eigen::VectorXd> out) const {
  rng.fill_normals(step, out);
  out *= sqrt_dt_;
}

void BrownianBatch::path_increments(long path, Eigen::Ref<Eigen::MatrixXd> out) const {
  const CounterRng rng = path_rng(path);
  for (int k = 0; k < grid_.steps; ++k) step_increment(rng, k, out.col(k));
}

BrownianBatch sample_brownian(const TimeGrid& grid, int dim, long paths, std::uint64_t seed) {
  return BrownianBatch(grid, dim, paths, seed);
}

double cameron_martin_energy(const DriftRealization& d) { return d.energy(); }

double log_girsanov_weight(const DriftRealization& d, const Eigen::MatrixXd& increments) {
  if (increments.rows() != d.rates.rows() || increments.cols() != d.rates.cols()) {
    throw std::invalid_argument("girsanov_weight: drift and increments disagree on the grid");
  }
  const double cross = (d.rates.array() * increments.array()).sum();
  return -cross - 0.5 * d.rates.squaredNorm() * d.grid.dt();
}

double girsanov_weight(const DriftRealization& d, const Eigen::MatrixXd& increments) {
  return std::exp(log_girsanov_weight(d, increments));
}

EuclideanPolicy zero_euclidean_policy() { return {}; }

EuclideanPolicy constant_euclidean_policy(Eigen::VectorXd a) {
  EuclideanPolicy p;
  p.name = "constant";
  p.rate = [a = std::move(a)](double, const Eigen::VectorXd&, Eigen::Ref<Eigen::VectorXd> u) { u = a; };
  return p;
}

SpherePolicy zero_sphere_policy() { return {}; }

SpherePolicy constant_sphere_policy(Eigen::VectorXd a) {
  SpherePolicy p;
  p.name = "constant";
  p.rate = [a = std::move(a)](double, const SphereFrame&, Eigen::Ref<Eigen::VectorXd> u) { u = a; };
  return p;
}

ScalarPolicy zero_scalar_policy() { return {}; }

ScalarPolicy constant_scalar_policy(double a) {
  ScalarPolicy p;
  p.name = "constant";
  p.rate = [a](double, double) { return a; };
  return p;
}

MeanEstimate mean_and_se(const std::vector<double>& values) {
  MeanEstimate e;
  e.count = static_cast<long>(values.size());
  if (e.count == 0) return e;
  // compensated summation keeps million-term reductions at working
  // precision (fixed order, so still bit-reproducible)
  double sum = 0.0, carry = 0.0;
  for (double v : values) {
    const double y = v - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
  e.mean = sum / static_cast<double>(e.count);
  if (e.count < 2) return e;
  double ss = 0.0, ss_carry = 0.0;
  for (double v : values) {
    const double d = v - e.mean;
    const double y = d * d - ss_carry;
    const double t = ss + y;
    ss_carry = (t - ss) - y;
    ss = t;
  }
  const double var = ss / static_cast<double>(e.count - 1);
  e.std_error = std::sqrt(var / static_cast<double>(e.count));
  return e;
}

}  // namespace scl
