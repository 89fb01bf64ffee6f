#ifndef SCL_ENTROPY_HPP
#define SCL_ENTROPY_HPP

#include <memory>
#include <string>
#include <vector>

#include "scl/control.hpp"
#include "scl/simulate.hpp"
#include "scl/spectral.hpp"

namespace scl {

// Target on R with density f = dmu/dgamma given by a mixture of unit
// variance Gaussians: f(x) = sum w_j exp(m_j x - m_j^2/2). The heat
// semigroup applied to f and its log-gradient stay in closed form.
class GaussianMixtureTarget {
 public:
  GaussianMixtureTarget(Eigen::VectorXd weights, Eigen::VectorXd means);
  static GaussianMixtureTarget shift(double m) {
    return GaussianMixtureTarget(Eigen::VectorXd::Ones(1), Eigen::VectorXd::Constant(1, m));
  }

  double density_ratio(double x) const;      // f
  double log_density_ratio(double x) const;  // log f
  double semigroup(double tau, double x) const;           // P_tau f (x)
  double grad_log_semigroup(double tau, double x) const;  // d/dx log P_tau f
  double cdf(double x) const;

  double relative_entropy(int quad_order = 128) const;    // H(mu | gamma_1)
  double fisher_information(int quad_order = 128) const;  // I(mu | gamma_1)

 private:
  Eigen::VectorXd weights_, means_;
};

// Drift of the entropy-minimal bridge to the target at time 1; the
// remaining time is clamped to one step near the terminal.
EuclideanPolicy follmer_policy(const GaussianMixtureTarget& target, const TimeGrid& grid);

struct EntropyReport {
  double entropy = 0.0;  // quadrature oracle H(mu | reference)
  double drift_energy = 0.0;
  double drift_energy_se = 0.0;
  double sample_entropy = 0.0;  // E[log f(Y_T)]
  double sample_entropy_se = 0.0;
  double fisher = 0.0;  // quadrature oracle I(mu | reference)
  double ks_statistic = 0.0;
  long paths = 0;
  long aborted = 0;
};

// Simulates dX = dB + grad log P_{1-t} f(X) dt from 0; the terminal law is
// the target and the mean drift energy is its relative entropy.
EntropyReport follmer_sample_euclidean(const GaussianMixtureTarget& target, const TimeGrid& grid,
                                       long paths, std::uint64_t seed,
                                       const EstimatorOptions& opts = {},
                                       std::vector<double>* terminal_out = nullptr);

// Zonal target on S^n: density profile relative to the time-T heat kernel
// from the start point, normalized so Q_T profile(x1) = 1.
struct ZonalTarget {
  double T = 1.0;
  double x1 = 0.0;
  double normalization = 1.0;                  // raw profile divided by this
  ZonalFunction profile;                       // normalized density profile
  ZonalFunction log_profile;
  ZonalFunction dlog_profile;                  // d/dt log profile
  std::shared_ptr<ZonalProfile> spectral;      // cached coefficients of profile
};

// profile proportional to exp(a t).
ZonalTarget make_exponential_zonal_target(const SpectralSemigroup& S, double a, double T,
                                          double x1);

SpherePolicy follmer_policy_sphere(const ZonalTarget& target, const TimeGrid& grid);

// H(mu | delta_x P_T) = integral of f log f against the kernel measure.
double relative_entropy_vs_kernel(const SpectralSemigroup& S, const ZonalTarget& target);

// I(mu | delta_x P_T) = integral of (1-t^2) (d log f)^2 f against it.
double fisher_information_vs_kernel(const SpectralSemigroup& S, const ZonalTarget& target);

// Moment integral t^k of the terminal law (kernel measure tilted by f).
double target_terminal_moment(const SpectralSemigroup& S, const ZonalTarget& target, int order);

// Entropy and Fisher information of a zonal density rho (relative to the
// uniform measure, profile normalized against nu_n).
double relative_entropy_zonal(const NuMeasure& nu, const ZonalFunction& rho);
double fisher_information_zonal(const NuMeasure& nu, const ZonalFunction& rho,
                                const ZonalFunction& dlog_rho);

EntropyReport follmer_sample_sphere(const SpectralSemigroup& S, const ZonalTarget& target,
                                    const SphereFrame& frame0, const TimeGrid& grid, long paths,
                                    std::uint64_t seed, const EstimatorOptions& opts = {},
                                    std::vector<double>* terminal_first_coordinate = nullptr);

// Bridge-law identity: E[H(Y)] over optimally driven paths against
// E[H(X) f(X_T)] over plain Brownian paths from an independent seed.
PairedEstimate bridge_law_check_sphere(const SpectralSemigroup& S, const ZonalTarget& target,
                                       const SphereFrame& frame0, const PathFunctional& H,
                                       const TimeGrid& grid, long paths,
                                       std::uint64_t seed_bridge, std::uint64_t seed_plain,
                                       const EstimatorOptions& opts = {});

PairedEstimate bridge_law_check_euclidean(const GaussianMixtureTarget& target,
                                          const PathFunctional& H, const TimeGrid& grid,
                                          long paths, std::uint64_t seed_bridge,
                                          std::uint64_t seed_plain,
                                          const EstimatorOptions& opts = {});

struct LogSobRow {
  int n = 0;
  double kappa = 0.0;
  double tilt = 0.0;
  double entropy = 0.0;
  double fisher = 0.0;
  double rhs_dimensional = 0.0;  // (n/2) log(1 + I/(n kappa))
  double rhs_classical = 0.0;    // I / kappa
  bool dimensional_ok = false;
  bool classical_ok = false;
  bool ordering_ok = false;  // rhs_dimensional <= rhs_classical
};

// Exponential-tilt targets against the uniform measure; both inequality
// forms checked by quadrature with arithmetic tolerance.
std::vector<LogSobRow> logsob_table(int n, double kappa, const std::vector<double>& tilts,
                                    int quad_order = 192, double arithmetic_tol = 1e-10);

struct AlphaTrajectory {
  Eigen::VectorXd times;
  Eigen::VectorXd alpha;  // E |grad log P_{T-t} f|^2 at grid times
  double integral = 0.0;  // left-rectangle integral over [0, T]
  double integral_se = 0.0;
  double entropy = 0.0;  // H(mu | delta_x P_T), quadrature
  double alpha_terminal = 0.0;
  double alpha_terminal_se = 0.0;
  double C_T = 0.0;      // Laplacian of P_T f at the start point, spectral
  double kappa_T = 0.0;  // kappa - 2 C_T / n
  bool curvature_ok = false;  // n kappa - 2 C_T > 0
  double integrated_rhs = 0.0;
  bool integrated_ok = false;
  long paths = 0;
};

// Estimates alpha(t) along optimally driven paths, checks that its time
// integral reproduces twice the relative entropy and that the integrated
// one-sided bound holds with the measured terminal value.
AlphaTrajectory alpha_trajectory(const SpectralSemigroup& S, const ZonalTarget& target,
                                 const SphereFrame& frame0, const TimeGrid& grid, long paths,
                                 std::uint64_t seed, double kappa,
                                 const EstimatorOptions& opts = {});

// Dual lower bound: for any g, integral of g dmu - log Q_T(e^g)(x1) is at
// most the relative entropy, with equality at g = log f.
double entropy_variational_bound(const SpectralSemigroup& S, const ZonalTarget& target,
                                 const ZonalFunction& g);

// Empirical CDF sup-distance against a reference CDF.
double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf);

}  // namespace scl

#endif  // SCL_ENTROPY_HPP
