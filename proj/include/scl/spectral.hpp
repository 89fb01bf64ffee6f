#ifndef SCL_SPECTRAL_HPP
#define SCL_SPECTRAL_HPP

#include <functional>
#include <stdexcept>

#include <Eigen/Dense>

namespace scl {

using ZonalFunction = std::function<double(double)>;

struct QuadratureRule {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;  // sum to 1 (probability measure)
};

// Golub-Welsch rules. The sphere-marginal rule integrates against the
// probability measure with density proportional to (1-t^2)^(n/2-1) on
// [-1,1]; the Hermite rule against the standard Gaussian on R.
QuadratureRule gauss_jacobi_rule(int n, int order);
QuadratureRule gauss_hermite_rule(int order);

// One-coordinate marginal of the uniform measure on S^n. The
// normalization constant comes from quadrature of the unnormalized
// density, so density and integrals share one source of truth.
class NuMeasure {
 public:
  explicit NuMeasure(int n, int quad_order = 128);

  int n() const noexcept { return n_; }
  const QuadratureRule& rule() const noexcept { return rule_; }
  double normalization() const noexcept { return c_n_; }
  double density(double t) const;

  // Integral against the probability measure. Non-finite integrand
  // evaluations are reported with the offending node.
  double integrate(const ZonalFunction& g) const;

 private:
  int n_;
  QuadratureRule rule_;
  double c_n_;
};

// Heat semigroup of the sphere-coordinate diffusion, expanded in the
// orthonormal polynomial eigenbasis under nu_n. Eigenvalues follow the
// half-Laplacian convention: lambda_k = k (k + n - 1) / 2.
class SpectralSemigroup {
 public:
  explicit SpectralSemigroup(int n, int truncation = 64, int quad_order = 0);

  int n() const noexcept { return measure_.n(); }
  int truncation() const noexcept { return K_; }
  const NuMeasure& measure() const noexcept { return measure_; }
  double eigenvalue(int k) const noexcept { return 0.5 * k * (k + measure_.n() - 1); }
  const Eigen::VectorXd& recurrence() const noexcept { return sqrt_b_; }

  // p_0..p_K at x (orthonormal under nu_n), optionally with derivatives.
  void basis_eval(double x, Eigen::Ref<Eigen::VectorXd> p) const;
  void basis_eval(double x, Eigen::Ref<Eigen::VectorXd> p, Eigen::Ref<Eigen::VectorXd> dp) const;
  void basis_eval(double x, Eigen::Ref<Eigen::VectorXd> p, Eigen::Ref<Eigen::VectorXd> dp,
                  Eigen::Ref<Eigen::VectorXd> d2p) const;

  Eigen::VectorXd coefficients(const ZonalFunction& g) const;

  // Q_T g (x) = sum_k exp(-lambda_k T) g_k p_k(x), truncated at the first
  // index whose tail bound drops below `tail_tol`.
  double apply(double T, const ZonalFunction& g, double x) const;
  double apply_coefficients(double T, const Eigen::VectorXd& c, double x) const;
  int effective_truncation(double T, const Eigen::VectorXd& c) const;
  bool tail_converged(double T, const Eigen::VectorXd& c) const;

  // Transition density of Q_T with respect to nu_n.
  double heat_kernel(double T, double x, double t) const;

  // d/dx log Q_tau(e^f)(x); throws if the truncated Q_tau(e^f) loses
  // positivity (raise the truncation order in that case).
  double log_semigroup_gradient(double tau, const ZonalFunction& f, double x) const;

  // max over an evaluation grid of |L p_k + lambda_k p_k| with
  // L = (1-x^2)/2 d^2/dx^2 - (n/2) x d/dx, via the derivative recurrences.
  double generator_residual(int k, int grid_points = 201) const;

  // max over a grid of |L t + (n/2) t| with L applied spectrally to the
  // coordinate function; exercises quadrature, basis and eigenvalues.
  double coordinate_eigen_residual(int grid_points = 201) const;

  static constexpr double tail_tol = 1e-10;

 private:
  NuMeasure measure_;
  int K_;
  Eigen::VectorXd sqrt_b_;  // sqrt of monic recurrence b_1..b_K
};

// Q_tau applied to a fixed profile, with spectral coefficients cached at
// construction. Snapshots freeze the time-damped coefficients of one tau
// for repeated evaluation in simulation hot loops.
class ZonalProfile {
 public:
  ZonalProfile(const SpectralSemigroup& S, const ZonalFunction& g);

  struct Snapshot {
    Eigen::VectorXd damped;  // exp(-lambda_k tau) g_k, trimmed
  };

  Snapshot at_time(double tau) const;
  double value(const Snapshot& s, double x) const;
  double derivative(const Snapshot& s, double x) const;
  // (d/dx Q_tau g) / (Q_tau g); throws on positivity loss.
  double log_gradient(const Snapshot& s, double x) const;

  double value(double tau, double x) const { return value(at_time(tau), x); }
  double derivative(double tau, double x) const { return derivative(at_time(tau), x); }
  double log_gradient(double tau, double x) const { return log_gradient(at_time(tau), x); }

  const Eigen::VectorXd& coefficients() const noexcept { return coeffs_; }
  int n() const noexcept { return n_; }

 private:
  int n_;
  Eigen::VectorXd coeffs_;
  Eigen::VectorXd sqrt_b_;
  Eigen::VectorXd lambda_;
};

}  // namespace scl

#endif  // SCL_SPECTRAL_HPP
