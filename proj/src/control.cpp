#include "scl/control.hpp"

#include <cmath>
#include <memory>
#include <stdexcept>

namespace scl {
namespace {

MeanEstimate reduce_values(const std::vector<double>& values, const std::vector<char>& aborted,
                           long paths, double max_abort_fraction, const char* what) {
  std::vector<double> kept;
  kept.reserve(values.size());
  long bad = 0;
  for (long p = 0; p < paths; ++p) {
    if (aborted[p]) {
      ++bad;
    } else {
      kept.push_back(values[p]);
    }
  }
  if (bad > max_abort_fraction * static_cast<double>(paths)) {
    throw std::runtime_error(std::string(what) + ": aborted path fraction exceeds limit");
  }
  return mean_and_se(kept);
}

int step_index(const TimeGrid& grid, double t) {
  const int k = static_cast<int>(std::llround(t / grid.dt()));
  return std::min(std::max(k, 0), grid.steps - 1);
}

}  // namespace

ControlValueEstimate estimate_control_value_euclidean(const EuclideanModel& model,
                                                      const TerminalFunction& f,
                                                      const EuclideanPolicy& policy,
                                                      const TimeGrid& grid,
                                                      const Eigen::VectorXd& x0, long paths,
                                                      std::uint64_t seed,
                                                      const EstimatorOptions& opts) {
  const BrownianBatch batch(grid, model.dim, paths, seed);
  std::vector<double> values(paths, 0.0);
  std::vector<char> aborted(paths, 0);
  SimOptions sim;
  sim.workers = opts.workers;
  simulate_controlled_euclidean(model, policy, grid, x0, batch, sim,
                                [&](long p, const EuclideanPathResult& r) {
                                  double v = f(r.terminal) - r.energy();
                                  if (opts.control_variate) v -= r.control_noise_cross;
                                  values[p] = v;
                                  aborted[p] = r.aborted ? 1 : 0;
                                });
  const MeanEstimate m =
      reduce_values(values, aborted, paths, opts.max_abort_fraction, "estimate_control_value");
  ControlValueEstimate e;
  e.mean = m.mean;
  e.std_error = m.std_error;
  e.paths = m.count;
  e.aborted = paths - m.count;
  e.seed = seed;
  e.policy = policy.name;
  e.grid = grid;
  return e;
}

ControlValueEstimate estimate_control_value_sphere(const SphereFrame& frame0,
                                                   const TerminalFunction& f,
                                                   const SpherePolicy& policy,
                                                   const TimeGrid& grid, long paths,
                                                   std::uint64_t seed,
                                                   const EstimatorOptions& opts) {
  const BrownianBatch batch(grid, frame0.dim(), paths, seed);
  std::vector<double> values(paths, 0.0);
  std::vector<char> aborted(paths, 0);
  SimOptions sim;
  sim.workers = opts.workers;
  simulate_horizontal(frame0, policy, grid, batch, sim, [&](long p, const SpherePathResult& r) {
    double v = f(r.terminal) - r.energy();
    if (opts.control_variate) v -= r.control_noise_cross;
    values[p] = v;
    aborted[p] = r.aborted ? 1 : 0;
  });
  const MeanEstimate m =
      reduce_values(values, aborted, paths, opts.max_abort_fraction, "estimate_control_value");
  ControlValueEstimate e;
  e.mean = m.mean;
  e.std_error = m.std_error;
  e.paths = m.count;
  e.aborted = paths - m.count;
  e.seed = seed;
  e.policy = policy.name;
  e.grid = grid;
  return e;
}

ControlValueEstimate estimate_control_value_jacobi(int n, const ZonalFunction& f,
                                                   const ScalarPolicy& policy,
                                                   const TimeGrid& grid, double x0, long paths,
                                                   std::uint64_t seed,
                                                   const EstimatorOptions& opts) {
  const BrownianBatch batch(grid, 1, paths, seed);
  std::vector<double> values(paths, 0.0);
  SimOptions sim;
  sim.workers = opts.workers;
  simulate_jacobi(n, policy, grid, x0, batch, sim, [&](long p, const JacobiPathResult& r) {
    double v = f(r.terminal) - r.energy();
    if (opts.control_variate) v -= r.control_noise_cross;
    values[p] = v;
  });
  const MeanEstimate m = mean_and_se(values);
  ControlValueEstimate e;
  e.mean = m.mean;
  e.std_error = m.std_error;
  e.paths = m.count;
  e.seed = seed;
  e.policy = policy.name;
  e.grid = grid;
  return e;
}

double log_partition_gaussian_linear(double a, double T) { return 0.5 * a * a * T; }

namespace {

McLogPartition finish_log_partition(const MeanEstimate& m, double max_rel_se, const char* what) {
  if (!(m.mean > 0.0)) throw std::runtime_error(std::string(what) + ": mean of e^f not positive");
  McLogPartition lp;
  lp.rel_std_error = m.std_error / m.mean;
  if (lp.rel_std_error > max_rel_se) {
    throw std::runtime_error(std::string(what) +
                             ": relative standard error of E[e^f] exceeds bound");
  }
  lp.value = std::log(m.mean);
  lp.paths = m.count;
  return lp;
}

}  // namespace

McLogPartition log_partition_mc_euclidean(const EuclideanModel& model, const TerminalFunction& f,
                                          const TimeGrid& grid, const Eigen::VectorXd& x0,
                                          long paths, std::uint64_t seed,
                                          const EstimatorOptions& opts, double max_rel_se) {
  const BrownianBatch batch(grid, model.dim, paths, seed);
  std::vector<double> values(paths, 0.0);
  std::vector<char> aborted(paths, 0);
  SimOptions sim;
  sim.workers = opts.workers;
  simulate_controlled_euclidean(model, zero_euclidean_policy(), grid, x0, batch, sim,
                                [&](long p, const EuclideanPathResult& r) {
                                  values[p] = std::exp(f(r.terminal));
                                  aborted[p] = r.aborted ? 1 : 0;
                                });
  const MeanEstimate m =
      reduce_values(values, aborted, paths, opts.max_abort_fraction, "log_partition_mc");
  return finish_log_partition(m, max_rel_se, "log_partition_mc");
}

McLogPartition log_partition_mc_sphere(const SphereFrame& frame0, const TerminalFunction& f,
                                       const TimeGrid& grid, long paths, std::uint64_t seed,
                                       const EstimatorOptions& opts, double max_rel_se) {
  const BrownianBatch batch(grid, frame0.dim(), paths, seed);
  std::vector<double> values(paths, 0.0);
  SimOptions sim;
  sim.workers = opts.workers;
  simulate_horizontal(frame0, zero_sphere_policy(), grid, batch, sim,
                      [&](long p, const SpherePathResult& r) { values[p] = std::exp(f(r.terminal)); });
  return finish_log_partition(mean_and_se(values), max_rel_se, "log_partition_mc");
}

McLogPartition log_partition_mc_jacobi(int n, const ZonalFunction& f, const TimeGrid& grid,
                                       double x0, long paths, std::uint64_t seed,
                                       const EstimatorOptions& opts, double max_rel_se) {
  const BrownianBatch batch(grid, 1, paths, seed);
  std::vector<double> values(paths, 0.0);
  SimOptions sim;
  sim.workers = opts.workers;
  simulate_jacobi(n, zero_scalar_policy(), grid, x0, batch, sim,
                  [&](long p, const JacobiPathResult& r) { values[p] = std::exp(f(r.terminal)); });
  return finish_log_partition(mean_and_se(values), max_rel_se, "log_partition_mc");
}

double log_partition_spectral(const SpectralSemigroup& S, const ZonalFunction& f, double T,
                              double x) {
  const double v = S.apply(T, [&f](double t) { return std::exp(f(t)); }, x);
  if (!(v > 0.0)) throw std::runtime_error("log_partition_spectral: Q_T(e^f) not positive");
  return std::log(v);
}

EuclideanPolicy h_transform_gaussian_linear(double a) {
  EuclideanPolicy p;
  p.name = "h-transform-linear";
  p.rate = [a](double, const Eigen::VectorXd&, Eigen::Ref<Eigen::VectorXd> u) { u.setConstant(a); };
  return p;
}

EuclideanPolicy h_transform_euclidean_1d(const std::function<double(double)>& f, double T,
                                         const TimeGrid& grid, int quad_order) {
  const QuadratureRule rule = gauss_hermite_rule(quad_order);
  const double dt = grid.dt();
  EuclideanPolicy p;
  p.name = "h-transform";
  p.rate = [f, T, rule, dt](double t, const Eigen::VectorXd& x, Eigen::Ref<Eigen::VectorXd> u) {
    const double tau = std::max(T - t, dt);
    const double s = std::sqrt(tau);
    double num = 0.0, den = 0.0;
    for (int i = 0; i < rule.nodes.size(); ++i) {
      const double e = rule.weights[i] * std::exp(f(x[0] + s * rule.nodes[i]));
      den += e;
      num += e * rule.nodes[i];
    }
    if (!(den > 0.0)) throw std::runtime_error("h_transform_euclidean_1d: P_tau(e^f) not positive");
    u[0] = num / (s * den);
  };
  return p;
}

SpherePolicy h_transform_sphere_zonal(const SpectralSemigroup& S, const ZonalFunction& f, double T,
                                      const TimeGrid& grid) {
  auto profile = std::make_shared<ZonalProfile>(S, [&f](double t) { return std::exp(f(t)); });
  auto snapshots = std::make_shared<std::vector<ZonalProfile::Snapshot>>();
  snapshots->reserve(grid.steps);
  const double dt = grid.dt();
  for (int k = 0; k < grid.steps; ++k) {
    snapshots->push_back(profile->at_time(std::max(T - grid.time(k), dt)));
  }
  SpherePolicy p;
  p.name = "h-transform";
  p.rate = [profile, snapshots, grid](double t, const SphereFrame& frame,
                                      Eigen::Ref<Eigen::VectorXd> u) {
    const int k = step_index(grid, t);
    const double g = profile->log_gradient((*snapshots)[k], frame.base.coords[0]);
    // frame pullback of g * (e_1 - y_1 y): the basis columns are orthogonal
    // to y, so only the e_1 component survives
    u = g * frame.basis.row(0).transpose();
  };
  return p;
}

ScalarPolicy h_transform_jacobi(const SpectralSemigroup& S, const ZonalFunction& f, double T,
                                const TimeGrid& grid) {
  auto profile = std::make_shared<ZonalProfile>(S, [&f](double t) { return std::exp(f(t)); });
  auto snapshots = std::make_shared<std::vector<ZonalProfile::Snapshot>>();
  snapshots->reserve(grid.steps);
  const double dt = grid.dt();
  for (int k = 0; k < grid.steps; ++k) {
    snapshots->push_back(profile->at_time(std::max(T - grid.time(k), dt)));
  }
  ScalarPolicy p;
  p.name = "h-transform";
  p.rate = [profile, snapshots, grid](double t, double x) {
    const int k = step_index(grid, t);
    const double diffusion = std::sqrt(std::max(0.0, 1.0 - x * x));
    return diffusion * profile->log_gradient((*snapshots)[k], x);
  };
  return p;
}

VariationalGap make_gap(double lhs, ControlValueEstimate rhs, double tol_multiplier) {
  VariationalGap g;
  g.lhs = lhs;
  g.gap = lhs - rhs.mean;
  g.slack = tol_multiplier * rhs.std_error;
  g.lower_bound_ok = g.gap >= -g.slack;
  g.rhs = std::move(rhs);
  return g;
}

std::vector<VariationalGap> verify_variational_sphere(double lhs, const SphereFrame& frame0,
                                                      const TerminalFunction& f,
                                                      const std::vector<SpherePolicy>& policies,
                                                      const TimeGrid& grid, long paths,
                                                      std::uint64_t seed,
                                                      const EstimatorOptions& opts,
                                                      double tol_multiplier) {
  std::vector<VariationalGap> gaps;
  gaps.reserve(policies.size());
  for (const auto& policy : policies) {
    gaps.push_back(make_gap(
        lhs, estimate_control_value_sphere(frame0, f, policy, grid, paths, seed, opts),
        tol_multiplier));
  }
  return gaps;
}

std::vector<VariationalGap> verify_variational_euclidean(
    double lhs, const EuclideanModel& model, const Eigen::VectorXd& x0, const TerminalFunction& f,
    const std::vector<EuclideanPolicy>& policies, const TimeGrid& grid, long paths,
    std::uint64_t seed, const EstimatorOptions& opts, double tol_multiplier) {
  std::vector<VariationalGap> gaps;
  gaps.reserve(policies.size());
  for (const auto& policy : policies) {
    gaps.push_back(make_gap(
        lhs, estimate_control_value_euclidean(model, f, policy, grid, x0, paths, seed, opts),
        tol_multiplier));
  }
  return gaps;
}

PairedEstimate girsanov_identity_check(const EuclideanPolicy& policy, const PathFunctional& H,
                                       const TimeGrid& grid, int dim, long paths,
                                       std::uint64_t seed_tilted, std::uint64_t seed_plain,
                                       const EstimatorOptions& opts) {
  EuclideanModel model;
  model.dim = dim;  // identity diffusion: the recorded path is B + U
  const Eigen::VectorXd x0 = Eigen::VectorXd::Zero(dim);
  SimOptions sim;
  sim.workers = opts.workers;
  sim.record_states = true;

  std::vector<double> tilted(paths, 0.0);
  {
    const BrownianBatch batch(grid, dim, paths, seed_tilted);
    simulate_controlled_euclidean(model, policy, grid, x0, batch, sim,
                                  [&](long p, const EuclideanPathResult& r) {
                                    tilted[p] = std::exp(r.log_girsanov()) * H(r.states, grid);
                                  });
  }
  std::vector<double> plain(paths, 0.0);
  {
    const BrownianBatch batch(grid, dim, paths, seed_plain);
    simulate_controlled_euclidean(model, zero_euclidean_policy(), grid, x0, batch, sim,
                                  [&](long p, const EuclideanPathResult& r) {
                                    plain[p] = H(r.states, grid);
                                  });
  }
  PairedEstimate pe;
  pe.tilted = mean_and_se(tilted);
  pe.plain = mean_and_se(plain);
  pe.difference = pe.tilted.mean - pe.plain.mean;
  pe.combined_se = std::sqrt(pe.tilted.std_error * pe.tilted.std_error +
                             pe.plain.std_error * pe.plain.std_error);
  return pe;
}

MeanEstimate girsanov_weight_mean(const EuclideanPolicy& policy, const TimeGrid& grid, int dim,
                                  long paths, std::uint64_t seed, const EstimatorOptions& opts) {
  EuclideanModel model;
  model.dim = dim;
  const Eigen::VectorXd x0 = Eigen::VectorXd::Zero(dim);
  SimOptions sim;
  sim.workers = opts.workers;
  std::vector<double> weights(paths, 0.0);
  const BrownianBatch batch(grid, dim, paths, seed);
  simulate_controlled_euclidean(model, policy, grid, x0, batch, sim,
                                [&](long p, const EuclideanPathResult& r) {
                                  weights[p] = std::exp(r.log_girsanov());
                                });
  return mean_and_se(weights);
}

}  // namespace scl
