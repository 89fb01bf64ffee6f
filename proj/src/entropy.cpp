#include "scl/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace scl {
namespace {

constexpr double kEntropyNegativeTol = -1e-10;

double checked_entropy(double h, const char* what) {
  if (h < kEntropyNegativeTol) {
    throw std::runtime_error(std::string(what) + ": negative relative entropy");
  }
  return h;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x * M_SQRT1_2); }

}  // namespace

GaussianMixtureTarget::GaussianMixtureTarget(Eigen::VectorXd weights, Eigen::VectorXd means)
    : weights_(std::move(weights)), means_(std::move(means)) {
  if (weights_.size() != means_.size() || weights_.size() == 0) {
    throw std::invalid_argument("GaussianMixtureTarget: weights/means size mismatch");
  }
  if ((weights_.array() <= 0.0).any()) {
    throw std::invalid_argument("GaussianMixtureTarget: weights must be positive");
  }
  weights_ /= weights_.sum();
}

double GaussianMixtureTarget::density_ratio(double x) const {
  double f = 0.0;
  for (int j = 0; j < weights_.size(); ++j) {
    f += weights_[j] * std::exp(means_[j] * x - 0.5 * means_[j] * means_[j]);
  }
  return f;
}

double GaussianMixtureTarget::log_density_ratio(double x) const {
  return std::log(density_ratio(x));
}

double GaussianMixtureTarget::semigroup(double tau, double x) const {
  double v = 0.0;
  for (int j = 0; j < weights_.size(); ++j) {
    v += weights_[j] * std::exp(means_[j] * x + 0.5 * means_[j] * means_[j] * (tau - 1.0));
  }
  return v;
}

double GaussianMixtureTarget::grad_log_semigroup(double tau, double x) const {
  double num = 0.0, den = 0.0;
  for (int j = 0; j < weights_.size(); ++j) {
    const double e =
        weights_[j] * std::exp(means_[j] * x + 0.5 * means_[j] * means_[j] * (tau - 1.0));
    den += e;
    num += means_[j] * e;
  }
  if (!(den > 0.0)) throw std::runtime_error("GaussianMixtureTarget: semigroup lost positivity");
  return num / den;
}

double GaussianMixtureTarget::cdf(double x) const {
  double c = 0.0;
  for (int j = 0; j < weights_.size(); ++j) c += weights_[j] * normal_cdf(x - means_[j]);
  return c;
}

double GaussianMixtureTarget::relative_entropy(int quad_order) const {
  const QuadratureRule rule = gauss_hermite_rule(quad_order);
  double h = 0.0;
  for (int i = 0; i < rule.nodes.size(); ++i) {
    const double f = density_ratio(rule.nodes[i]);
    h += rule.weights[i] * f * std::log(f);
  }
  return checked_entropy(h, "GaussianMixtureTarget::relative_entropy");
}

double GaussianMixtureTarget::fisher_information(int quad_order) const {
  const QuadratureRule rule = gauss_hermite_rule(quad_order);
  double fi = 0.0;
  for (int i = 0; i < rule.nodes.size(); ++i) {
    const double g = grad_log_semigroup(1.0, rule.nodes[i]);  // tau = 1 gives d/dx log f
    fi += rule.weights[i] * density_ratio(rule.nodes[i]) * g * g;
  }
  return fi;
}

EuclideanPolicy follmer_policy(const GaussianMixtureTarget& target, const TimeGrid& grid) {
  const double dt = grid.dt();
  const double T = grid.horizon;
  EuclideanPolicy p;
  p.name = "follmer";
  p.rate = [target, dt, T](double t, const Eigen::VectorXd& x, Eigen::Ref<Eigen::VectorXd> u) {
    u[0] = target.grad_log_semigroup(std::max(T - t, dt), x[0]);
  };
  return p;
}

double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf) {
  if (samples.empty()) return 0.0;
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double F = cdf(samples[i]);
    d = std::max(d,
                 std::max(F - static_cast<double>(i) / n, (static_cast<double>(i) + 1.0) / n - F));
  }
  return d;
}

EntropyReport follmer_sample_euclidean(const GaussianMixtureTarget& target, const TimeGrid& grid,
                                       long paths, std::uint64_t seed,
                                       const EstimatorOptions& opts,
                                       std::vector<double>* terminal_out) {
  if (std::abs(grid.horizon - 1.0) > 1e-12) {
    throw std::invalid_argument("follmer_sample_euclidean: the reference is the time-1 Gaussian");
  }
  EuclideanModel model;
  model.dim = 1;
  const Eigen::VectorXd x0 = Eigen::VectorXd::Zero(1);
  const EuclideanPolicy policy = follmer_policy(target, grid);
  const BrownianBatch batch(grid, 1, paths, seed);
  SimOptions sim;
  sim.workers = opts.workers;

  std::vector<double> energy(paths, 0.0), logf(paths, 0.0), terminal(paths, 0.0);
  std::vector<char> aborted(paths, 0);
  simulate_controlled_euclidean(model, policy, grid, x0, batch, sim,
                                [&](long p, const EuclideanPathResult& r) {
                                  energy[p] = r.energy();
                                  terminal[p] = r.terminal[0];
                                  logf[p] = target.log_density_ratio(r.terminal[0]);
                                  aborted[p] = r.aborted ? 1 : 0;
                                });
  long bad = 0;
  std::vector<double> energy_kept, logf_kept, term_kept;
  energy_kept.reserve(paths);
  logf_kept.reserve(paths);
  term_kept.reserve(paths);
  for (long p = 0; p < paths; ++p) {
    if (aborted[p]) {
      ++bad;
      continue;
    }
    energy_kept.push_back(energy[p]);
    logf_kept.push_back(logf[p]);
    term_kept.push_back(terminal[p]);
  }
  if (bad > opts.max_abort_fraction * static_cast<double>(paths)) {
    throw std::runtime_error("follmer_sample_euclidean: aborted path fraction exceeds limit");
  }

  EntropyReport report;
  report.entropy = target.relative_entropy();
  const MeanEstimate me = mean_and_se(energy_kept);
  report.drift_energy = me.mean;
  report.drift_energy_se = me.std_error;
  const MeanEstimate se = mean_and_se(logf_kept);
  report.sample_entropy = se.mean;
  report.sample_entropy_se = se.std_error;
  report.fisher = target.fisher_information();
  report.ks_statistic = ks_statistic(term_kept, [&target](double x) { return target.cdf(x); });
  report.paths = static_cast<long>(energy_kept.size());
  report.aborted = bad;
  if (terminal_out) *terminal_out = std::move(term_kept);
  return report;
}

ZonalTarget make_exponential_zonal_target(const SpectralSemigroup& S, double a, double T,
                                          double x1) {
  const double Z = S.apply(T, [a](double t) { return std::exp(a * t); }, x1);
  if (!(Z > 0.0)) {
    throw std::runtime_error("make_exponential_zonal_target: normalization not positive");
  }
  ZonalTarget target;
  target.T = T;
  target.x1 = x1;
  target.normalization = Z;
  const double logZ = std::log(Z);
  target.profile = [a, Z](double t) { return std::exp(a * t) / Z; };
  target.log_profile = [a, logZ](double t) { return a * t - logZ; };
  target.dlog_profile = [a](double) { return a; };
  target.spectral = std::make_shared<ZonalProfile>(S, target.profile);
  return target;
}

SpherePolicy follmer_policy_sphere(const ZonalTarget& target, const TimeGrid& grid) {
  auto snapshots = std::make_shared<std::vector<ZonalProfile::Snapshot>>();
  snapshots->reserve(grid.steps);
  const double dt = grid.dt();
  for (int k = 0; k < grid.steps; ++k) {
    snapshots->push_back(target.spectral->at_time(std::max(target.T - grid.time(k), dt)));
  }
  auto profile = target.spectral;
  SpherePolicy p;
  p.name = "follmer";
  p.rate = [profile, snapshots, grid](double t, const SphereFrame& frame,
                                      Eigen::Ref<Eigen::VectorXd> u) {
    const int k =
        std::min(std::max(static_cast<int>(std::llround(t / grid.dt())), 0), grid.steps - 1);
    const double g = profile->log_gradient((*snapshots)[k], frame.base.coords[0]);
    u = g * frame.basis.row(0).transpose();
  };
  return p;
}

double relative_entropy_vs_kernel(const SpectralSemigroup& S, const ZonalTarget& target) {
  const auto& rule = S.measure().rule();
  double h = 0.0;
  for (int i = 0; i < rule.nodes.size(); ++i) {
    const double q = S.heat_kernel(target.T, target.x1, rule.nodes[i]);
    const double f = target.profile(rule.nodes[i]);
    if (f > 0.0) h += rule.weights[i] * q * f * std::log(f);
  }
  return checked_entropy(h, "relative_entropy_vs_kernel");
}

double fisher_information_vs_kernel(const SpectralSemigroup& S, const ZonalTarget& target) {
  const auto& rule = S.measure().rule();
  double fi = 0.0;
  for (int i = 0; i < rule.nodes.size(); ++i) {
    const double t = rule.nodes[i];
    const double q = S.heat_kernel(target.T, target.x1, t);
    const double g = target.dlog_profile(t);
    fi += rule.weights[i] * q * target.profile(t) * (1.0 - t * t) * g * g;
  }
  return fi;
}

double target_terminal_moment(const SpectralSemigroup& S, const ZonalTarget& target, int order) {
  const auto& rule = S.measure().rule();
  double m = 0.0;
  for (int i = 0; i < rule.nodes.size(); ++i) {
    const double q = S.heat_kernel(target.T, target.x1, rule.nodes[i]);
    m += rule.weights[i] * q * target.profile(rule.nodes[i]) * std::pow(rule.nodes[i], order);
  }
  return m;
}

double relative_entropy_zonal(const NuMeasure& nu, const ZonalFunction& rho) {
  const double mass = nu.integrate(rho);
  if (std::abs(mass - 1.0) > 1e-8) {
    throw std::invalid_argument("relative_entropy_zonal: density does not integrate to 1");
  }
  const double h = nu.integrate([&rho](double t) {
    const double r = rho(t);
    return r > 0.0 ? r * std::log(r) : 0.0;
  });
  return checked_entropy(h, "relative_entropy_zonal");
}

double fisher_information_zonal(const NuMeasure& nu, const ZonalFunction& rho,
                                const ZonalFunction& dlog_rho) {
  const double mass = nu.integrate(rho);
  if (std::abs(mass - 1.0) > 1e-8) {
    throw std::invalid_argument("fisher_information_zonal: density does not integrate to 1");
  }
  return nu.integrate([&](double t) {
    const double g = dlog_rho(t);
    return (1.0 - t * t) * g * g * rho(t);
  });
}

namespace {

// Terminal CDF of the first coordinate under the tilted kernel measure,
// from a dense trapezoid table of f(t) q_T(x1, t) against the nu density.
class ZonalTerminalCdf {
 public:
  ZonalTerminalCdf(const SpectralSemigroup& S, const ZonalTarget& target, int points = 4001)
      : lo_(-1.0), hi_(1.0), table_(points) {
    const double dt = (hi_ - lo_) / (points - 1);
    std::vector<double> density(points);
    for (int i = 0; i < points; ++i) {
      const double t = lo_ + i * dt;
      density[i] =
          target.profile(t) * S.heat_kernel(target.T, target.x1, t) * S.measure().density(t);
    }
    table_[0] = 0.0;
    for (int i = 1; i < points; ++i) {
      table_[i] = table_[i - 1] + 0.5 * (density[i - 1] + density[i]) * dt;
    }
    const double total = table_.back();
    if (!(total > 0.0)) throw std::runtime_error("ZonalTerminalCdf: degenerate terminal density");
    for (double& v : table_) v /= total;
  }

  double operator()(double t) const {
    if (t <= lo_) return 0.0;
    if (t >= hi_) return 1.0;
    const double pos = (t - lo_) / (hi_ - lo_) * (table_.size() - 1);
    const int i = std::min(static_cast<int>(pos), static_cast<int>(table_.size()) - 2);
    const double frac = pos - i;
    return table_[i] * (1.0 - frac) + table_[i + 1] * frac;
  }

 private:
  double lo_, hi_;
  std::vector<double> table_;
};

}  // namespace

EntropyReport follmer_sample_sphere(const SpectralSemigroup& S, const ZonalTarget& target,
                                    const SphereFrame& frame0, const TimeGrid& grid, long paths,
                                    std::uint64_t seed, const EstimatorOptions& opts,
                                    std::vector<double>* terminal_first_coordinate) {
  if (std::abs(frame0.base.coords[0] - target.x1) > 1e-12) {
    throw std::invalid_argument("follmer_sample_sphere: frame base does not match the target start");
  }
  if (std::abs(grid.horizon - target.T) > 1e-12) {
    throw std::invalid_argument("follmer_sample_sphere: grid horizon does not match the target");
  }
  const SpherePolicy policy = follmer_policy_sphere(target, grid);
  const BrownianBatch batch(grid, frame0.dim(), paths, seed);
  SimOptions sim;
  sim.workers = opts.workers;

  std::vector<double> energy(paths, 0.0), logf(paths, 0.0), terminal(paths, 0.0);
  std::vector<char> aborted(paths, 0);
  simulate_horizontal(frame0, policy, grid, batch, sim, [&](long p, const SpherePathResult& r) {
    energy[p] = r.energy();
    terminal[p] = r.terminal[0];
    logf[p] = target.log_profile(r.terminal[0]);
    aborted[p] = r.aborted ? 1 : 0;
  });
  long bad = 0;
  std::vector<double> energy_kept, logf_kept, term_kept;
  energy_kept.reserve(paths);
  logf_kept.reserve(paths);
  term_kept.reserve(paths);
  for (long p = 0; p < paths; ++p) {
    if (aborted[p]) {
      ++bad;
      continue;
    }
    energy_kept.push_back(energy[p]);
    logf_kept.push_back(logf[p]);
    term_kept.push_back(terminal[p]);
  }
  if (bad > opts.max_abort_fraction * static_cast<double>(paths)) {
    throw std::runtime_error("follmer_sample_sphere: aborted path fraction exceeds limit");
  }

  EntropyReport report;
  report.entropy = relative_entropy_vs_kernel(S, target);
  const MeanEstimate me = mean_and_se(energy_kept);
  report.drift_energy = me.mean;
  report.drift_energy_se = me.std_error;
  const MeanEstimate se = mean_and_se(logf_kept);
  report.sample_entropy = se.mean;
  report.sample_entropy_se = se.std_error;
  report.fisher = fisher_information_vs_kernel(S, target);
  const ZonalTerminalCdf cdf(S, target);
  report.ks_statistic = ks_statistic(term_kept, [&cdf](double t) { return cdf(t); });
  report.paths = static_cast<long>(energy_kept.size());
  report.aborted = bad;
  if (terminal_first_coordinate) *terminal_first_coordinate = std::move(term_kept);
  return report;
}

PairedEstimate bridge_law_check_sphere(const SpectralSemigroup& S, const ZonalTarget& target,
                                       const SphereFrame& frame0, const PathFunctional& H,
                                       const TimeGrid& grid, long paths,
                                       std::uint64_t seed_bridge, std::uint64_t seed_plain,
                                       const EstimatorOptions& opts) {
  (void)S;
  SimOptions sim;
  sim.workers = opts.workers;
  sim.record_states = true;

  std::vector<double> bridge(paths, 0.0);
  {
    const SpherePolicy policy = follmer_policy_sphere(target, grid);
    const BrownianBatch batch(grid, frame0.dim(), paths, seed_bridge);
    simulate_horizontal(frame0, policy, grid, batch, sim,
                        [&](long p, const SpherePathResult& r) { bridge[p] = H(r.base, grid); });
  }
  std::vector<double> plain(paths, 0.0);
  {
    const BrownianBatch batch(grid, frame0.dim(), paths, seed_plain);
    simulate_horizontal(frame0, zero_sphere_policy(), grid, batch, sim,
                        [&](long p, const SpherePathResult& r) {
                          plain[p] = H(r.base, grid) * target.profile(r.terminal[0]);
                        });
  }
  PairedEstimate pe;
  pe.tilted = mean_and_se(bridge);
  pe.plain = mean_and_se(plain);
  pe.difference = pe.tilted.mean - pe.plain.mean;
  pe.combined_se = std::sqrt(pe.tilted.std_error * pe.tilted.std_error +
                             pe.plain.std_error * pe.plain.std_error);
  return pe;
}

PairedEstimate bridge_law_check_euclidean(const GaussianMixtureTarget& target,
                                          const PathFunctional& H, const TimeGrid& grid,
                                          long paths, std::uint64_t seed_bridge,
                                          std::uint64_t seed_plain, const EstimatorOptions& opts) {
  EuclideanModel model;
  model.dim = 1;
  const Eigen::VectorXd x0 = Eigen::VectorXd::Zero(1);
  SimOptions sim;
  sim.workers = opts.workers;
  sim.record_states = true;

  std::vector<double> bridge(paths, 0.0);
  {
    const EuclideanPolicy policy = follmer_policy(target, grid);
    const BrownianBatch batch(grid, 1, paths, seed_bridge);
    simulate_controlled_euclidean(
        model, policy, grid, x0, batch, sim,
        [&](long p, const EuclideanPathResult& r) { bridge[p] = H(r.states, grid); });
  }
  std::vector<double> plain(paths, 0.0);
  {
    const BrownianBatch batch(grid, 1, paths, seed_plain);
    simulate_controlled_euclidean(model, zero_euclidean_policy(), grid, x0, batch, sim,
                                  [&](long p, const EuclideanPathResult& r) {
                                    plain[p] =
                                        H(r.states, grid) * target.density_ratio(r.terminal[0]);
                                  });
  }
  PairedEstimate pe;
  pe.tilted = mean_and_se(bridge);
  pe.plain = mean_and_se(plain);
  pe.difference = pe.tilted.mean - pe.plain.mean;
  pe.combined_se = std::sqrt(pe.tilted.std_error * pe.tilted.std_error +
                             pe.plain.std_error * pe.plain.std_error);
  return pe;
}

std::vector<LogSobRow> logsob_table(int n, double kappa, const std::vector<double>& tilts,
                                    int quad_order, double arithmetic_tol) {
  if (!(kappa > 0.0)) throw std::invalid_argument("logsob_table: kappa must be positive");
  const NuMeasure nu(n, quad_order);
  std::vector<LogSobRow> rows;
  rows.reserve(tilts.size());
  for (const double a : tilts) {
    const double Z = nu.integrate([a](double t) { return std::exp(a * t); });
    const ZonalFunction rho = [a, Z](double t) { return std::exp(a * t) / Z; };
    LogSobRow row;
    row.n = n;
    row.kappa = kappa;
    row.tilt = a;
    row.entropy = relative_entropy_zonal(nu, rho);
    row.fisher = fisher_information_zonal(nu, rho, [a](double) { return a; });
    row.rhs_dimensional = 0.5 * n * std::log1p(row.fisher / (n * kappa));
    row.rhs_classical = row.fisher / kappa;
    row.dimensional_ok = row.entropy <= row.rhs_dimensional + arithmetic_tol;
    row.classical_ok = row.entropy <= row.rhs_classical + arithmetic_tol;
    row.ordering_ok = row.rhs_dimensional <= row.rhs_classical + arithmetic_tol;
    rows.push_back(row);
  }
  return rows;
}

AlphaTrajectory alpha_trajectory(const SpectralSemigroup& S, const ZonalTarget& target,
                                 const SphereFrame& frame0, const TimeGrid& grid, long paths,
                                 std::uint64_t seed, double kappa, const EstimatorOptions& opts) {
  if (std::abs(grid.horizon - target.T) > 1e-12) {
    throw std::invalid_argument("alpha_trajectory: grid horizon does not match the target");
  }
  const int n = frame0.dim();
  const int N = grid.steps;
  const double dt = grid.dt();

  // snapshots shared by the drift policy and the alpha evaluation
  std::vector<ZonalProfile::Snapshot> snapshots;
  snapshots.reserve(N);
  for (int k = 0; k < N; ++k) {
    snapshots.push_back(target.spectral->at_time(std::max(target.T - grid.time(k), dt)));
  }
  const SpherePolicy policy = follmer_policy_sphere(target, grid);
  const BrownianBatch batch(grid, n, paths, seed);
  SimOptions sim;
  sim.record_states = true;

  // fixed path blocks keep the per-time accumulation independent of the
  // worker count
  constexpr long kBlock = 4096;
  const long blocks = (paths + kBlock - 1) / kBlock;
  std::vector<Eigen::VectorXd> block_alpha(blocks, Eigen::VectorXd::Zero(N + 1));
  std::vector<double> path_integral(paths, 0.0), path_alpha_T(paths, 0.0);
  std::vector<char> aborted(paths, 0);

  parallel_for(0, blocks, opts.workers, [&](long blk) {
    const long lo = blk * kBlock;
    const long hi = std::min(paths, lo + kBlock);
    detail::SphereWorkspace ws(n + 1, n);
    SpherePathResult res;
    Eigen::VectorXd& acc = block_alpha[blk];
    for (long p = lo; p < hi; ++p) {
      detail::run_sphere_path(frame0, policy, grid, batch, p, sim, nullptr, ws, res);
      if (res.aborted) {
        aborted[p] = 1;
        continue;
      }
      double integral = 0.0;
      for (int k = 0; k < N; ++k) {
        const double y = res.base(0, k);
        const double g = target.spectral->log_gradient(snapshots[k], y);
        const double a_k = (1.0 - y * y) * g * g;
        acc[k] += a_k;
        integral += a_k * dt;
      }
      const double yT = res.base(0, N);
      const double gT = target.dlog_profile(yT);
      const double a_T = (1.0 - yT * yT) * gT * gT;
      acc[N] += a_T;
      path_integral[p] = integral;
      path_alpha_T[p] = a_T;
    }
  });

  std::vector<double> integ_kept, alphaT_kept;
  integ_kept.reserve(paths);
  alphaT_kept.reserve(paths);
  for (long p = 0; p < paths; ++p) {
    if (aborted[p]) continue;
    integ_kept.push_back(path_integral[p]);
    alphaT_kept.push_back(path_alpha_T[p]);
  }
  const long kept = static_cast<long>(integ_kept.size());
  if (paths - kept > opts.max_abort_fraction * static_cast<double>(paths)) {
    throw std::runtime_error("alpha_trajectory: aborted path fraction exceeds limit");
  }

  AlphaTrajectory out;
  out.times.resize(N + 1);
  for (int k = 0; k <= N; ++k) out.times[k] = grid.time(k);
  out.alpha = Eigen::VectorXd::Zero(N + 1);
  for (long blk = 0; blk < blocks; ++blk) out.alpha += block_alpha[blk];
  out.alpha /= static_cast<double>(kept);

  const MeanEstimate integ = mean_and_se(integ_kept);
  out.integral = integ.mean;
  out.integral_se = integ.std_error;
  const MeanEstimate aT = mean_and_se(alphaT_kept);
  out.alpha_terminal = aT.mean;
  out.alpha_terminal_se = aT.std_error;
  out.entropy = relative_entropy_vs_kernel(S, target);
  out.paths = kept;

  // Laplacian of Q_T f at the start point from the eigenexpansion:
  // each basis term contributes -2 lambda_k
  const Eigen::VectorXd& c = target.spectral->coefficients();
  Eigen::VectorXd p_x(S.truncation() + 1);
  S.basis_eval(target.x1, p_x);
  double C_T = 0.0;
  for (int k = 0; k < c.size(); ++k) {
    C_T += -2.0 * S.eigenvalue(k) * std::exp(-S.eigenvalue(k) * target.T) * c[k] * p_x[k];
  }
  out.C_T = C_T;
  out.kappa_T = kappa - 2.0 * C_T / n;
  out.curvature_ok = n * kappa - 2.0 * C_T > 0.0;
  if (out.curvature_ok) {
    out.integrated_rhs =
        n * std::log1p(out.alpha_terminal * (1.0 - std::exp(-out.kappa_T * target.T)) /
                       (n * out.kappa_T));
    out.integrated_ok = out.integral <= out.integrated_rhs + 3.0 * out.integral_se;
  }
  return out;
}

double entropy_variational_bound(const SpectralSemigroup& S, const ZonalTarget& target,
                                 const ZonalFunction& g) {
  const auto& rule = S.measure().rule();
  double mean_g = 0.0;
  for (int i = 0; i < rule.nodes.size(); ++i) {
    mean_g += rule.weights[i] * S.heat_kernel(target.T, target.x1, rule.nodes[i]) *
              target.profile(rule.nodes[i]) * g(rule.nodes[i]);
  }
  const double logZ = log_partition_spectral(S, g, target.T, target.x1);
  return mean_g - logZ;
}

}  // namespace scl
