#include "scl/spectral.hpp"

#include <cmath>
#include <sstream>

namespace scl {
namespace {

// Monic three-term recurrence coefficients b_k for the symmetric Jacobi
// weight (1-t^2)^a, a = n/2 - 1 (the diagonal terms vanish by symmetry).
Eigen::VectorXd symmetric_jacobi_b(int n, int count) {
  const double a = 0.5 * n - 1.0;
  Eigen::VectorXd b(count);
  if (count > 0) b[0] = 1.0 / (3.0 + 2.0 * a);
  for (int k = 2; k <= count; ++k) {
    b[k - 1] = k * (k + 2.0 * a) / ((2.0 * k + 2.0 * a + 1.0) * (2.0 * k + 2.0 * a - 1.0));
  }
  return b;
}

QuadratureRule golub_welsch(const Eigen::VectorXd& diag, const Eigen::VectorXd& b) {
  const int m = static_cast<int>(diag.size());
  Eigen::VectorXd sub(std::max(m - 1, 0));
  for (int k = 0; k + 1 < m; ++k) sub[k] = std::sqrt(b[k]);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) throw std::runtime_error("golub_welsch: eigensolve failed");
  QuadratureRule rule;
  rule.nodes = solver.eigenvalues();
  rule.weights = solver.eigenvectors().row(0).transpose().array().square();
  return rule;
}

}  // namespace

QuadratureRule gauss_jacobi_rule(int n, int order) {
  if (n < 1) throw std::invalid_argument("gauss_jacobi_rule: n must be >= 1");
  if (order < 1) throw std::invalid_argument("gauss_jacobi_rule: order must be >= 1");
  return golub_welsch(Eigen::VectorXd::Zero(order), symmetric_jacobi_b(n, order));
}

QuadratureRule gauss_hermite_rule(int order) {
  if (order < 1) throw std::invalid_argument("gauss_hermite_rule: order must be >= 1");
  Eigen::VectorXd b(order);
  for (int k = 1; k <= order; ++k) b[k - 1] = static_cast<double>(k);
  return golub_welsch(Eigen::VectorXd::Zero(order), b);
}

NuMeasure::NuMeasure(int n, int quad_order) : n_(n), rule_(gauss_jacobi_rule(n, quad_order)) {
  // mass of (1-t^2)^(n/2-1) via t = sin(theta): integral of cos(theta)^(n-1),
  // smooth for n >= 1, evaluated with a Legendre rule (the n = 2 case).
  const QuadratureRule legendre = gauss_jacobi_rule(2, quad_order);
  double mass = 0.0;
  for (int i = 0; i < legendre.nodes.size(); ++i) {
    const double theta = 0.5 * M_PI * legendre.nodes[i];
    mass += legendre.weights[i] * std::pow(std::cos(theta), n - 1);
  }
  mass *= M_PI;
  c_n_ = 1.0 / mass;
}

double NuMeasure::density(double t) const {
  if (t <= -1.0 || t >= 1.0) return 0.0;
  return c_n_ * std::pow(1.0 - t * t, 0.5 * n_ - 1.0);
}

double NuMeasure::integrate(const ZonalFunction& g) const {
  double sum = 0.0;
  for (int i = 0; i < rule_.nodes.size(); ++i) {
    const double v = g(rule_.nodes[i]);
    if (!std::isfinite(v)) {
      std::ostringstream msg;
      msg << "NuMeasure::integrate: non-finite integrand at node t = " << rule_.nodes[i];
      throw std::runtime_error(msg.str());
    }
    sum += rule_.weights[i] * v;
  }
  return sum;
}

SpectralSemigroup::SpectralSemigroup(int n, int truncation, int quad_order)
    : measure_(n, quad_order > 0 ? quad_order : std::max(128, truncation + 1)), K_(truncation) {
  if (truncation < 1) throw std::invalid_argument("SpectralSemigroup: truncation must be >= 1");
  if (measure_.rule().nodes.size() < K_ + 1) {
    throw std::invalid_argument("SpectralSemigroup: quadrature order must be >= truncation + 1");
  }
  sqrt_b_ = symmetric_jacobi_b(n, K_).cwiseSqrt();
}

// Orthonormal recurrence: sqrt(b_{k+1}) p_{k+1} = x p_k - sqrt(b_k) p_{k-1}.
void SpectralSemigroup::basis_eval(double x, Eigen::Ref<Eigen::VectorXd> p) const {
  p[0] = 1.0;
  if (K_ >= 1) p[1] = x / sqrt_b_[0];
  for (int k = 1; k < K_; ++k) {
    p[k + 1] = (x * p[k] - sqrt_b_[k - 1] * p[k - 1]) / sqrt_b_[k];
  }
}

void SpectralSemigroup::basis_eval(double x, Eigen::Ref<Eigen::VectorXd> p,
                                   Eigen::Ref<Eigen::VectorXd> dp) const {
  p[0] = 1.0;
  dp[0] = 0.0;
  if (K_ >= 1) {
    p[1] = x / sqrt_b_[0];
    dp[1] = 1.0 / sqrt_b_[0];
  }
  for (int k = 1; k < K_; ++k) {
    p[k + 1] = (x * p[k] - sqrt_b_[k - 1] * p[k - 1]) / sqrt_b_[k];
    dp[k + 1] = (p[k] + x * dp[k] - sqrt_b_[k - 1] * dp[k - 1]) / sqrt_b_[k];
  }
}

void SpectralSemigroup::basis_eval(double x, Eigen::Ref<Eigen::VectorXd> p,
                                   Eigen::Ref<Eigen::VectorXd> dp,
                                   Eigen::Ref<Eigen::VectorXd> d2p) const {
  p[0] = 1.0;
  dp[0] = 0.0;
  d2p[0] = 0.0;
  if (K_ >= 1) {
    p[1] = x / sqrt_b_[0];
    dp[1] = 1.0 / sqrt_b_[0];
    d2p[1] = 0.0;
  }
  for (int k = 1; k < K_; ++k) {
    p[k + 1] = (x * p[k] - sqrt_b_[k - 1] * p[k - 1]) / sqrt_b_[k];
    dp[k + 1] = (p[k] + x * dp[k] - sqrt_b_[k - 1] * dp[k - 1]) / sqrt_b_[k];
    d2p[k + 1] = (2.0 * dp[k] + x * d2p[k] - sqrt_b_[k - 1] * d2p[k - 1]) / sqrt_b_[k];
  }
}

Eigen::VectorXd SpectralSemigroup::coefficients(const ZonalFunction& g) const {
  const QuadratureRule& rule = measure_.rule();
  Eigen::VectorXd c = Eigen::VectorXd::Zero(K_ + 1);
  Eigen::VectorXd p(K_ + 1);
  for (int i = 0; i < rule.nodes.size(); ++i) {
    const double v = g(rule.nodes[i]);
    if (!std::isfinite(v)) {
      std::ostringstream msg;
      msg << "SpectralSemigroup::coefficients: non-finite value at node t = " << rule.nodes[i];
      throw std::runtime_error(msg.str());
    }
    basis_eval(rule.nodes[i], p);
    c += (rule.weights[i] * v) * p;
  }
  return c;
}

int SpectralSemigroup::effective_truncation(double T, const Eigen::VectorXd& c) const {
  for (int k = 0; k <= K_; ++k) {
    if (std::exp(-eigenvalue(k) * T) * std::abs(c[k]) < tail_tol) {
      bool rest_small = true;
      for (int j = k + 1; j <= K_; ++j) {
        if (std::exp(-eigenvalue(j) * T) * std::abs(c[j]) >= tail_tol) {
          rest_small = false;
          break;
        }
      }
      if (rest_small) return k;
    }
  }
  return K_;
}

bool SpectralSemigroup::tail_converged(double T, const Eigen::VectorXd& c) const {
  return std::exp(-eigenvalue(K_) * T) * std::abs(c[K_]) < tail_tol;
}

double SpectralSemigroup::apply_coefficients(double T, const Eigen::VectorXd& c, double x) const {
  const int K = effective_truncation(T, c);
  Eigen::VectorXd p(K_ + 1);
  basis_eval(x, p);
  double sum = 0.0;
  for (int k = 0; k <= K; ++k) sum += std::exp(-eigenvalue(k) * T) * c[k] * p[k];
  return sum;
}

double SpectralSemigroup::apply(double T, const ZonalFunction& g, double x) const {
  if (T < 0.0) throw std::invalid_argument("SpectralSemigroup::apply: T must be >= 0");
  return apply_coefficients(T, coefficients(g), x);
}

double SpectralSemigroup::heat_kernel(double T, double x, double t) const {
  Eigen::VectorXd px(K_ + 1), pt(K_ + 1);
  basis_eval(x, px);
  basis_eval(t, pt);
  double sum = 0.0;
  for (int k = 0; k <= K_; ++k) sum += std::exp(-eigenvalue(k) * T) * px[k] * pt[k];
  return sum;
}

double SpectralSemigroup::log_semigroup_gradient(double tau, const ZonalFunction& f, double x) const {
  const ZonalProfile profile(*this, [&f](double t) { return std::exp(f(t)); });
  return profile.log_gradient(tau, x);
}

double SpectralSemigroup::generator_residual(int k, int grid_points) const {
  if (k < 0 || k > K_) throw std::out_of_range("generator_residual: order");
  Eigen::VectorXd p(K_ + 1), dp(K_ + 1), d2p(K_ + 1);
  double worst = 0.0;
  for (int i = 0; i < grid_points; ++i) {
    const double x = -1.0 + 2.0 * i / (grid_points - 1.0);
    basis_eval(x, p, dp, d2p);
    const double lp = 0.5 * (1.0 - x * x) * d2p[k] - 0.5 * n() * x * dp[k];
    worst = std::max(worst, std::abs(lp + eigenvalue(k) * p[k]));
  }
  return worst;
}

double SpectralSemigroup::coordinate_eigen_residual(int grid_points) const {
  const Eigen::VectorXd c = coefficients([](double t) { return t; });
  Eigen::VectorXd p(K_ + 1);
  double worst = 0.0;
  for (int i = 0; i < grid_points; ++i) {
    const double x = -1.0 + 2.0 * i / (grid_points - 1.0);
    basis_eval(x, p);
    double lg = 0.0;
    for (int k = 0; k <= K_; ++k) lg += -eigenvalue(k) * c[k] * p[k];
    worst = std::max(worst, std::abs(lg + 0.5 * n() * x));
  }
  return worst;
}

ZonalProfile::ZonalProfile(const SpectralSemigroup& S, const ZonalFunction& g)
    : n_(S.n()), coeffs_(S.coefficients(g)), sqrt_b_(S.recurrence()), lambda_(coeffs_.size()) {
  for (int k = 0; k < lambda_.size(); ++k) lambda_[k] = S.eigenvalue(k);
}

ZonalProfile::Snapshot ZonalProfile::at_time(double tau) const {
  if (tau < 0.0) throw std::invalid_argument("ZonalProfile::at_time: tau must be >= 0");
  const int K = static_cast<int>(coeffs_.size()) - 1;
  Eigen::VectorXd damped(K + 1);
  double scale = 0.0;
  for (int k = 0; k <= K; ++k) {
    damped[k] = std::exp(-lambda_[k] * tau) * coeffs_[k];
    scale = std::max(scale, std::abs(damped[k]));
  }
  // trim the negligible tail so hot-loop evaluations stay short
  int keep = K;
  const double cut = 1e-15 * (scale + 1.0);
  while (keep > 0 && std::abs(damped[keep]) < cut) --keep;
  Snapshot s;
  s.damped = damped.head(keep + 1);
  return s;
}

double ZonalProfile::value(const Snapshot& s, double x) const {
  const int K = static_cast<int>(s.damped.size()) - 1;
  double pm1 = 0.0, p0 = 1.0;
  double sum = s.damped[0];
  for (int k = 0; k < K; ++k) {
    const double p1 = (k == 0) ? x * p0 / sqrt_b_[0]
                               : (x * p0 - sqrt_b_[k - 1] * pm1) / sqrt_b_[k];
    sum += s.damped[k + 1] * p1;
    pm1 = p0;
    p0 = p1;
  }
  return sum;
}

double ZonalProfile::derivative(const Snapshot& s, double x) const {
  const int K = static_cast<int>(s.damped.size()) - 1;
  double pm1 = 0.0, p0 = 1.0, dm1 = 0.0, d0 = 0.0;
  double sum = 0.0;
  for (int k = 0; k < K; ++k) {
    double p1, d1;
    if (k == 0) {
      p1 = x * p0 / sqrt_b_[0];
      d1 = p0 / sqrt_b_[0];
    } else {
      p1 = (x * p0 - sqrt_b_[k - 1] * pm1) / sqrt_b_[k];
      d1 = (p0 + x * d0 - sqrt_b_[k - 1] * dm1) / sqrt_b_[k];
    }
    sum += s.damped[k + 1] * d1;
    pm1 = p0;
    p0 = p1;
    dm1 = d0;
    d0 = d1;
  }
  return sum;
}

double ZonalProfile::log_gradient(const Snapshot& s, double x) const {
  const double v = value(s, x);
  if (!(v > 0.0)) {
    std::ostringstream msg;
    msg << "ZonalProfile::log_gradient: truncated semigroup lost positivity at x = " << x
        << " (value " << v << "); increase the truncation order";
    throw std::runtime_error(msg.str());
  }
  return derivative(s, x) / v;
}

}  // namespace scl
