#include "scl/inequalities.hpp"

#include <cmath>
#include <stdexcept>

#include "scl/parallel.hpp"
#include "scl/rng.hpp"

namespace scl {

void BLInstance::validate() const {
  if (n < 1) throw std::invalid_argument("BLInstance: n must be >= 1");
  if (static_cast<int>(g.size()) != n + 1) {
    throw std::invalid_argument("BLInstance: expected n + 1 coordinate functions");
  }
  for (const auto& gi : g) {
    if (!gi) throw std::invalid_argument("BLInstance: missing coordinate function");
    for (int j = 0; j <= 16; ++j) {
      const double t = -1.0 + 2.0 * j / 16.0;
      const double v = gi(t);
      if (!(v > 0.0) || !std::isfinite(v)) {
        throw std::invalid_argument("BLInstance: functions must be positive and finite");
      }
    }
  }
}

BLInstance exponential_tilt_instance(int n, const Eigen::VectorXd& tilts) {
  if (tilts.size() != n + 1) {
    throw std::invalid_argument("exponential_tilt_instance: need n+1 tilts");
  }
  BLInstance inst;
  inst.n = n;
  for (int i = 0; i <= n; ++i) {
    const double a = tilts[i];
    inst.g.push_back([a](double t) { return std::exp(a * t); });
  }
  return inst;
}

BLInstance diagonal_bump_instance(int n, double sharpness, double floor) {
  BLInstance inst;
  inst.n = n;
  const double c = 1.0 / (n + 1.0);
  for (int i = 0; i <= n; ++i) {
    inst.g.push_back([sharpness, c, floor](double t) {
      const double d = t * t - c;
      return std::exp(-sharpness * d * d) + floor;
    });
  }
  return inst;
}

Eigen::MatrixXd sample_uniform_sphere(int n, long count, std::uint64_t seed) {
  if (count < 1) throw std::invalid_argument("sample_uniform_sphere: count must be >= 1");
  const int ambient = n + 1;
  Eigen::MatrixXd points(ambient, count);
  parallel_chunks(0L, count, 0, [&](long lo, long hi) {
    Eigen::VectorXd z(ambient);
    for (long p = lo; p < hi; ++p) {
      const CounterRng rng(seed, streams::kUniformSphere, static_cast<std::uint64_t>(p));
      std::int64_t attempt = 0;
      double norm2 = 0.0;
      do {
        rng.fill_normals(attempt++, z);
        norm2 = z.squaredNorm();
      } while (!(norm2 > 0.0));  // probability-zero guard
      points.col(p) = z / std::sqrt(norm2);
    }
  });
  return points;
}

MeanEstimate bl_lhs(const BLInstance& instance, const Eigen::MatrixXd& samples) {
  instance.validate();
  if (samples.rows() != instance.n + 1) throw std::invalid_argument("bl_lhs: sample dimension");
  std::vector<double> products(samples.cols());
  for (long p = 0; p < samples.cols(); ++p) {
    double prod = 1.0;
    for (int i = 0; i <= instance.n; ++i) prod *= instance.g[i](samples(i, p));
    products[p] = prod;
  }
  return mean_and_se(products);
}

MeanEstimate bl_lhs(const BLInstance& instance, long count, std::uint64_t seed) {
  return bl_lhs(instance, sample_uniform_sphere(instance.n, count, seed));
}

double bl_rhs(const BLInstance& instance, const NuMeasure& nu) {
  instance.validate();
  double prod = 1.0;
  for (int i = 0; i <= instance.n; ++i) {
    const auto& gi = instance.g[i];
    prod *= std::sqrt(nu.integrate([&gi](double t) {
      const double v = gi(t);
      return v * v;
    }));
  }
  return prod;
}

double bl_l1_rhs(const BLInstance& instance, const NuMeasure& nu) {
  instance.validate();
  double prod = 1.0;
  for (int i = 0; i <= instance.n; ++i) prod *= nu.integrate(instance.g[i]);
  return prod;
}

BLReport bl_verify(const BLInstance& instance, const Eigen::MatrixXd& samples,
                   const NuMeasure& nu, double tol_multiplier) {
  const MeanEstimate lhs = bl_lhs(instance, samples);
  BLReport report;
  report.lhs = lhs.mean;
  report.lhs_se = lhs.std_error;
  report.rhs = bl_rhs(instance, nu);
  report.l1_rhs = bl_l1_rhs(instance, nu);
  report.ratio = lhs.mean / report.rhs;
  report.samples = lhs.count;
  report.pass = lhs.mean <= report.rhs + tol_multiplier * lhs.std_error;
  report.l1_violated = lhs.mean - tol_multiplier * lhs.std_error > report.l1_rhs;
  return report;
}

BLReport bl_verify(const BLInstance& instance, long count, std::uint64_t seed,
                   const NuMeasure& nu, double tol_multiplier) {
  return bl_verify(instance, sample_uniform_sphere(instance.n, count, seed), nu, tol_multiplier);
}

DriftDecomposition drift_coordinate_decomposition(const SpherePathResult& path,
                                                  const TimeGrid& grid) {
  if (path.base.size() == 0 || path.ambient_controls.size() == 0) {
    throw std::invalid_argument(
        "drift_coordinate_decomposition: path needs recorded states and ambient controls");
  }
  const int ambient = static_cast<int>(path.base.rows());
  const int N = static_cast<int>(path.ambient_controls.cols());
  if (path.base.cols() != N + 1) {
    throw std::invalid_argument("drift_coordinate_decomposition: path and controls disagree");
  }
  const double dt = grid.dt();

  DriftDecomposition out;
  out.coordinate_rates.resize(ambient, N);
  out.coordinate_h2 = Eigen::VectorXd::Zero(ambient);
  double total = 0.0;

  // Fallback for degenerate coordinate gradients: a unit tangent built
  // from a coordinate direction. The ambient control is tangent, so the
  // bound is insensitive to this choice.
  Eigen::VectorXd fallback(ambient);
  for (int k = 0; k < N; ++k) {
    const Eigen::VectorXd x = path.base.col(k);
    const Eigen::VectorXd u = path.ambient_controls.col(k);
    total += u.squaredNorm() * dt;
    int skip = 0;
    x.cwiseAbs().maxCoeff(&skip);
    fallback.setZero();
    fallback[(skip + 1) % ambient] = 1.0;
    fallback -= fallback.dot(x) * x;
    fallback.normalize();
    const SpherePoint xp{x};
    const Eigen::MatrixXd theta = frame_theta(xp, fallback);
    for (int i = 0; i < ambient; ++i) {
      const double ui = theta.col(i).dot(u);
      out.coordinate_rates(i, k) = ui;
      out.coordinate_h2[i] += ui * ui * dt;
    }
  }
  out.total_h2 = total;
  out.bound_ok = out.coordinate_h2.sum() <= 2.0 * total + 1e-10;
  return out;
}

}  // namespace scl
