#ifndef SCL_CONTROL_HPP
#define SCL_CONTROL_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "scl/simulate.hpp"
#include "scl/spectral.hpp"

namespace scl {

struct EstimatorOptions {
  int workers = 0;
  // Subtracting the (exactly mean-zero) control/noise cross term removes
  // almost all variance at the optimal policy, where the controlled payoff
  // is the stochastic integral plus a constant.
  bool control_variate = true;
  double max_abort_fraction = 1e-3;
};

struct ControlValueEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  long paths = 0;
  long aborted = 0;
  std::uint64_t seed = 0;
  std::string policy;
  TimeGrid grid;
};

using TerminalFunction = std::function<double(const Eigen::VectorXd&)>;

// Monte Carlo estimate of E[f(X_T^U) - 1/2 ||U||_H^2] for the matching
// simulator. Aborted paths are excluded and counted; more than
// max_abort_fraction of them fails the run.
ControlValueEstimate estimate_control_value_euclidean(
    const EuclideanModel& model, const TerminalFunction& f, const EuclideanPolicy& policy,
    const TimeGrid& grid, const Eigen::VectorXd& x0, long paths, std::uint64_t seed,
    const EstimatorOptions& opts = {});

ControlValueEstimate estimate_control_value_sphere(
    const SphereFrame& frame0, const TerminalFunction& f, const SpherePolicy& policy,
    const TimeGrid& grid, long paths, std::uint64_t seed, const EstimatorOptions& opts = {});

ControlValueEstimate estimate_control_value_jacobi(
    int n, const ZonalFunction& f, const ScalarPolicy& policy, const TimeGrid& grid, double x0,
    long paths, std::uint64_t seed, const EstimatorOptions& opts = {});

// log E exp(a B_T) for the standard Brownian motion: a^2 T / 2.
double log_partition_gaussian_linear(double a, double T);

struct McLogPartition {
  double value = 0.0;
  double rel_std_error = 0.0;  // of E[e^f], before the log
  long paths = 0;
};

// Plain-simulation log E[e^{f(X_T)}]; fails when the relative standard
// error of the exponential mean exceeds max_rel_se.
McLogPartition log_partition_mc_euclidean(const EuclideanModel& model, const TerminalFunction& f,
                                          const TimeGrid& grid, const Eigen::VectorXd& x0,
                                          long paths, std::uint64_t seed,
                                          const EstimatorOptions& opts = {},
                                          double max_rel_se = 0.05);
McLogPartition log_partition_mc_sphere(const SphereFrame& frame0, const TerminalFunction& f,
                                       const TimeGrid& grid, long paths, std::uint64_t seed,
                                       const EstimatorOptions& opts = {}, double max_rel_se = 0.05);
McLogPartition log_partition_mc_jacobi(int n, const ZonalFunction& f, const TimeGrid& grid,
                                       double x0, long paths, std::uint64_t seed,
                                       const EstimatorOptions& opts = {}, double max_rel_se = 0.05);

// log Q_T(e^f)(x) through the spectral expansion.
double log_partition_spectral(const SpectralSemigroup& S, const ZonalFunction& f, double T,
                              double x);

// Optimal feedback controls u_t = (pullback of) grad log P_{T-t}(e^f).
// The remaining time is clamped to at least one step.

// f(x) = a x on R: the drift is identically a.
EuclideanPolicy h_transform_gaussian_linear(double a);

// One-dimensional Euclidean f via Gauss-Hermite evaluation of P_tau(e^f).
EuclideanPolicy h_transform_euclidean_1d(const std::function<double(double)>& f, double T,
                                         const TimeGrid& grid, int quad_order = 96);

// Zonal f on S^n: u = (d/dx log Q_tau(e^f))(y_1) * (first basis row),
// which is the frame pullback of the tangent gradient.
SpherePolicy h_transform_sphere_zonal(const SpectralSemigroup& S, const ZonalFunction& f, double T,
                                      const TimeGrid& grid);

ScalarPolicy h_transform_jacobi(const SpectralSemigroup& S, const ZonalFunction& f, double T,
                                const TimeGrid& grid);

struct VariationalGap {
  double lhs = 0.0;
  ControlValueEstimate rhs;
  double gap = 0.0;    // lhs - rhs.mean
  double slack = 0.0;  // tolerance multiplier * std error
  bool lower_bound_ok = false;
};

VariationalGap make_gap(double lhs, ControlValueEstimate rhs, double tol_multiplier = 3.0);

// Runs every policy on the same increments (common random numbers) and
// checks lhs - value >= -slack for each.
std::vector<VariationalGap> verify_variational_sphere(
    double lhs, const SphereFrame& frame0, const TerminalFunction& f,
    const std::vector<SpherePolicy>& policies, const TimeGrid& grid, long paths,
    std::uint64_t seed, const EstimatorOptions& opts = {}, double tol_multiplier = 3.0);

std::vector<VariationalGap> verify_variational_euclidean(
    double lhs, const EuclideanModel& model, const Eigen::VectorXd& x0, const TerminalFunction& f,
    const std::vector<EuclideanPolicy>& policies, const TimeGrid& grid, long paths,
    std::uint64_t seed, const EstimatorOptions& opts = {}, double tol_multiplier = 3.0);

// Functional of a recorded trajectory (columns are states on the grid).
using PathFunctional = std::function<double(const Eigen::MatrixXd& states, const TimeGrid& grid)>;

struct PairedEstimate {
  MeanEstimate tilted;  // E[D_T H(B + U)]
  MeanEstimate plain;   // E[H(B)] from an independent batch
  double difference = 0.0;
  double combined_se = 0.0;
};

// Girsanov reweighting check: the tilted estimate and the plain one agree
// for any bounded policy. Also exposes E[D_T] via H == 1.
PairedEstimate girsanov_identity_check(const EuclideanPolicy& policy, const PathFunctional& H,
                                       const TimeGrid& grid, int dim, long paths,
                                       std::uint64_t seed_tilted, std::uint64_t seed_plain,
                                       const EstimatorOptions& opts = {});

MeanEstimate girsanov_weight_mean(const EuclideanPolicy& policy, const TimeGrid& grid, int dim,
                                  long paths, std::uint64_t seed, const EstimatorOptions& opts = {});

}  // namespace scl

#endif  // SCL_CONTROL_HPP
