#ifndef SCL_INEQUALITIES_HPP
#define SCL_INEQUALITIES_HPP

#include <cstdint>
#include <vector>

#include "scl/simulate.hpp"
#include "scl/spectral.hpp"

namespace scl {

// Product-of-coordinates integrand on S^n: one function per coordinate,
// each non-negative and bounded away from zero (enforce with a floor).
struct BLInstance {
  int n = 2;
  std::vector<ZonalFunction> g;  // n + 1 entries

  void validate() const;
};

BLInstance exponential_tilt_instance(int n, const Eigen::VectorXd& tilts);

// Bump concentrated where |t| matches the diagonal coordinate value
// 1/sqrt(n+1); products of such bumps put uniform-measure mass near the
// diagonal points while the one-dimensional marginal masses stay small.
BLInstance diagonal_bump_instance(int n, double sharpness, double floor = 1e-6);

// Normalized-Gaussian sampler for the uniform measure; columns are points.
Eigen::MatrixXd sample_uniform_sphere(int n, long count, std::uint64_t seed);

struct BLReport {
  double lhs = 0.0;
  double lhs_se = 0.0;
  double rhs = 0.0;       // product of L2 marginal norms
  double l1_rhs = 0.0;    // product of L1 marginal masses
  double ratio = 0.0;     // lhs / rhs
  bool pass = false;      // lhs <= rhs within MC slack
  bool l1_violated = false;  // lhs exceeds the L1 product beyond MC slack
  long samples = 0;
};

// Monte Carlo product mean over uniform samples.
MeanEstimate bl_lhs(const BLInstance& instance, const Eigen::MatrixXd& samples);
MeanEstimate bl_lhs(const BLInstance& instance, long count, std::uint64_t seed);

double bl_rhs(const BLInstance& instance, const NuMeasure& nu);
double bl_l1_rhs(const BLInstance& instance, const NuMeasure& nu);

BLReport bl_verify(const BLInstance& instance, long count, std::uint64_t seed, const NuMeasure& nu,
                   double tol_multiplier = 3.0);
BLReport bl_verify(const BLInstance& instance, const Eigen::MatrixXd& samples, const NuMeasure& nu,
                   double tol_multiplier = 3.0);

// Projections of the realized ambient controls onto the unit coordinate
// gradients along the path. The summed one-dimensional Cameron-Martin
// norms stay within twice the driving norm, path by path.
struct DriftDecomposition {
  Eigen::MatrixXd coordinate_rates;  // (n+1) x steps
  Eigen::VectorXd coordinate_h2;     // per-coordinate squared H-norms
  double total_h2 = 0.0;             // squared H-norm of the driving control
  bool bound_ok = false;             // sum <= 2 * total + 1e-10
};

// path must carry recorded states and ambient controls.
DriftDecomposition drift_coordinate_decomposition(const SpherePathResult& path,
                                                  const TimeGrid& grid);

}  // namespace scl

#endif  // SCL_INEQUALITIES_HPP
