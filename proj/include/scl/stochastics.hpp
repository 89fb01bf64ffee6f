#ifndef SCL_STOCHASTICS_HPP
#define SCL_STOCHASTICS_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "scl/geometry.hpp"
#include "scl/grid.hpp"
#include "scl/rng.hpp"

namespace scl {

// Seeded batch of Brownian increments on a uniform grid. Increments are
// produced on demand from the counter generator, never stored: the batch
// is a handle, cheap to copy, and identical batches are bitwise equal.
class BrownianBatch {
 public:
  BrownianBatch(const TimeGrid& grid, int dim, long paths, std::uint64_t seed);

  const TimeGrid& grid() const noexcept { return grid_; }
  int dim() const noexcept { return dim_; }
  long paths() const noexcept { return paths_; }
  std::uint64_t seed() const noexcept { return seed_; }

  CounterRng path_rng(long path) const { return CounterRng(seed_, streams::kBrownian, static_cast<std::uint64_t>(path)); }

  // Column k ~ N(0, dt I_dim).
  void step_increment(const CounterRng& rng, int step, Eigen::Ref<Eigen::VectorXd> out) const;
  void path_increments(long path, Eigen::Ref<Eigen::MatrixXd> out) const;  // dim x steps

 private:
  TimeGrid grid_;
  int dim_;
  long paths_;
  std::uint64_t seed_;
  double sqrt_dt_;
};

BrownianBatch sample_brownian(const TimeGrid& grid, int dim, long paths, std::uint64_t seed);

// Realized control: rates column k is the constant derivative on
// [t_k, t_{k+1}), so the squared Cameron-Martin norm is sum |u_k|^2 dt.
struct DriftRealization {
  TimeGrid grid;
  Eigen::MatrixXd rates;  // dim x steps

  double h_norm_squared() const { return rates.squaredNorm() * grid.dt(); }
  double energy() const { return 0.5 * h_norm_squared(); }
};

double cameron_martin_energy(const DriftRealization& d);

// exp(-sum <u_k, dB_k> - 1/2 sum |u_k|^2 dt) for one path's increments.
double log_girsanov_weight(const DriftRealization& d, const Eigen::MatrixXd& increments);
double girsanov_weight(const DriftRealization& d, const Eigen::MatrixXd& increments);

// Feedback controls evaluated at the left grid point. A null callback is
// the zero policy; simulators skip the control term entirely for it.
struct EuclideanPolicy {
  std::string name = "zero";
  std::function<void(double t, const Eigen::VectorXd& x, Eigen::Ref<Eigen::VectorXd> u)> rate;
};

struct SpherePolicy {
  std::string name = "zero";
  // u is expressed in frame coordinates (R^n); the stepper maps it to the
  // tangent space through the current frame.
  std::function<void(double t, const SphereFrame& frame, Eigen::Ref<Eigen::VectorXd> u)> rate;
};

struct ScalarPolicy {
  std::string name = "zero";
  std::function<double(double t, double x)> rate;
};

EuclideanPolicy zero_euclidean_policy();
EuclideanPolicy constant_euclidean_policy(Eigen::VectorXd a);
SpherePolicy zero_sphere_policy();
SpherePolicy constant_sphere_policy(Eigen::VectorXd a);
ScalarPolicy zero_scalar_policy();
ScalarPolicy constant_scalar_policy(double a);

struct MeanEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  long count = 0;
};

// Fixed-order reduction; results do not depend on the worker count.
MeanEstimate mean_and_se(const std::vector<double>& values);

}  // namespace scl

#endif  // SCL_STOCHASTICS_HPP
