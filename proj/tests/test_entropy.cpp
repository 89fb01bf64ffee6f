#include <doctest.h>

#include <cmath>

#include "scl/entropy.hpp"

using namespace scl;

namespace {

SphereFrame frame_at(double x1) {
  Eigen::VectorXd x(3);
  x << x1, std::sqrt(1.0 - x1 * x1), 0.0;
  return orthonormal_frame(SpherePoint{x});
}

// Simpson-rule oracle on [-8, 8], independent of the Hermite machinery
double simpson_vs_gaussian(const std::function<double(double)>& g) {
  const int m = 4000;
  const double lo = -8.0, hi = 8.0, h = (hi - lo) / m;
  double sum = 0.0;
  for (int i = 0; i <= m; ++i) {
    const double x = lo + i * h;
    const double w = (i == 0 || i == m) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    sum += w * g(x) * std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI);
  }
  return sum * h / 3.0;
}

}  // namespace

TEST_CASE("gaussian shift target: closed-form entropy and fisher information") {
  const auto target = GaussianMixtureTarget::shift(1.0);
  CHECK(target.relative_entropy() == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(target.fisher_information() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(target.density_ratio(0.3) == doctest::Approx(std::exp(0.3 - 0.5)).epsilon(1e-14));
  // P_tau f in closed form: exp(m x + m^2 (tau - 1) / 2)
  CHECK(target.semigroup(0.25, 0.4) == doctest::Approx(std::exp(0.4 - 0.375)).epsilon(1e-14));
  CHECK(target.grad_log_semigroup(0.25, -1.0) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("mixture target: density normalization and quadrature oracles") {
  Eigen::VectorXd w(2), m(2);
  w << 0.5, 0.5;
  m << -1.0, 1.0;
  const GaussianMixtureTarget target(w, m);

  // density ratio integrates to one against the reference
  CHECK(simpson_vs_gaussian([&](double x) { return target.density_ratio(x); }) ==
        doctest::Approx(1.0).epsilon(1e-10));
  // the Hermite relative entropy matches an independent Simpson evaluation
  const double simpson_H = simpson_vs_gaussian(
      [&](double x) { return target.density_ratio(x) * target.log_density_ratio(x); });
  CHECK(target.relative_entropy() == doctest::Approx(simpson_H).epsilon(1e-9));
  // cdf is a proper distribution function
  CHECK(target.cdf(-10.0) < 1e-10);
  CHECK(target.cdf(10.0) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(target.cdf(0.0) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("follmer sampler hits the gaussian shift exactly in energy") {
  const TimeGrid grid(1.0, 400);
  const auto target = GaussianMixtureTarget::shift(1.0);
  const EntropyReport rep = follmer_sample_euclidean(target, grid, 5000, 31, {});
  // the optimal drift is constant: its energy is deterministic
  CHECK(rep.drift_energy == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(rep.drift_energy_se < 1e-15);
  CHECK(std::abs(rep.sample_entropy - 0.5) < 3.0 * rep.sample_entropy_se + 1e-3);
  CHECK(rep.entropy == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(rep.ks_statistic < 1.62762 / std::sqrt(5000.0) + 2e-3);
  CHECK_THROWS_AS(follmer_sample_euclidean(target, TimeGrid(2.0, 100), 10, 1, {}),
                  std::invalid_argument);
}

TEST_CASE("deterministic-rate drifts reach the shift target with at least its entropy") {
  // any deterministic rate r with integral m produces N(m, 1) at time 1;
  // its energy is at least m^2/2 with equality only for the constant rate
  const TimeGrid grid(1.0, 500);
  const double m = 1.0;
  EuclideanModel model;
  model.dim = 1;
  const auto target = GaussianMixtureTarget::shift(m);
  const double H = target.relative_entropy();

  const auto run_rate = [&](const std::function<double(double)>& rate) {
    EuclideanPolicy policy;
    policy.name = "deterministic";
    policy.rate = [rate](double t, const Eigen::VectorXd&, Eigen::Ref<Eigen::VectorXd> u) {
      u[0] = rate(t);
    };
    const BrownianBatch batch(grid, 1, 20000, 37);
    std::vector<double> term(20000), energy(20000);
    simulate_controlled_euclidean(model, policy, grid, Eigen::VectorXd::Zero(1), batch, {},
                                  [&](long p, const EuclideanPathResult& r) {
                                    term[p] = r.terminal[0];
                                    energy[p] = r.energy();
                                  });
    const MeanEstimate mt = mean_and_se(term);
    CHECK(std::abs(mt.mean - m) < 3.0 * mt.std_error);
    return mean_and_se(energy).mean;
  };

  const double e_const = run_rate([m](double) { return m; });
  CHECK(e_const == doctest::Approx(H).epsilon(1e-12));
  const double e_tilted = run_rate([m](double t) { return m * 2.0 * t; });
  const double e_burst = run_rate([m](double t) { return t < 0.5 ? 2.0 * m : 0.0; });
  CHECK(e_tilted > H + 0.1);  // 2 m^2 / 3 * ... strictly above
  CHECK(e_burst > H + 0.4);   // front-loaded rate doubles the energy
}

TEST_CASE("bridge identity on the line") {
  Eigen::VectorXd w(2), m(2);
  w << 0.3, 0.7;
  m << -0.5, 1.0;
  const GaussianMixtureTarget target(w, m);
  const TimeGrid grid(1.0, 400);
  const PathFunctional positive_end = [](const Eigen::MatrixXd& s, const TimeGrid&) {
    return s(0, s.cols() - 1) > 0.0 ? 1.0 : 0.0;
  };
  const auto pe = bridge_law_check_euclidean(target, positive_end, grid, 30000, 41, 42, {});
  CHECK(std::abs(pe.difference) < 3.0 * pe.combined_se + 2e-3);

  const PathFunctional mid = [](const Eigen::MatrixXd& s, const TimeGrid&) {
    return s(0, (s.cols() - 1) / 2);
  };
  const auto pm = bridge_law_check_euclidean(target, mid, grid, 30000, 43, 44, {});
  CHECK(std::abs(pm.difference) < 3.0 * pm.combined_se + 2e-3);
}

TEST_CASE("zonal target bookkeeping") {
  const SpectralSemigroup S(2);
  const double a = 1.0, T = 2.0, x1 = 0.0;
  const ZonalTarget target = make_exponential_zonal_target(S, a, T, x1);

  // normalized against the kernel measure
  const auto& rule = S.measure().rule();
  double mass = 0.0;
  for (int i = 0; i < rule.nodes.size(); ++i) {
    mass += rule.weights[i] * S.heat_kernel(T, x1, rule.nodes[i]) * target.profile(rule.nodes[i]);
  }
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-10));

  const double H = relative_entropy_vs_kernel(S, target);
  CHECK(H >= 0.0);
  const double I = fisher_information_vs_kernel(S, target);
  CHECK(I >= 0.0);

  // at long horizons the kernel flattens to nu and both quantities approach
  // the uniform-reference values
  const ZonalTarget flat = make_exponential_zonal_target(S, a, 50.0, x1);
  const NuMeasure& nu = S.measure();
  const double Z = nu.integrate([a](double t) { return std::exp(a * t); });
  const ZonalFunction rho = [a, Z](double t) { return std::exp(a * t) / Z; };
  CHECK(relative_entropy_vs_kernel(S, flat) ==
        doctest::Approx(relative_entropy_zonal(nu, rho)).epsilon(1e-8));
  CHECK(fisher_information_vs_kernel(S, flat) ==
        doctest::Approx(fisher_information_zonal(nu, rho, [a](double) { return a; }))
            .epsilon(1e-8));

  CHECK_THROWS_AS(relative_entropy_zonal(nu, [](double) { return 2.0; }), std::invalid_argument);
}

TEST_CASE("logsob table rows against frozen closed forms") {
  // for the uniform marginal (n = 2): Z = sinh(a)/a, E t = coth a - 1/a,
  // H = a E t - log Z, I = a^2 (1 - E t^2)
  const auto rows = logsob_table(2, 1.0, {1.0});
  const double a = 1.0;
  const double Z = std::sinh(a) / a;
  const double Et = 1.0 / std::tanh(a) - 1.0 / a;
  const double Et2 = 1.0 - 2.0 * Et / a;  // from integrating t^2 e^{at} by parts
  const double H = a * Et - std::log(Z);
  const double I = a * a * (1.0 - Et2);
  CHECK(rows[0].entropy == doctest::Approx(H).epsilon(1e-12));
  CHECK(rows[0].fisher == doctest::Approx(I).epsilon(1e-12));
  CHECK(rows[0].rhs_dimensional == doctest::Approx(std::log1p(I / 2.0)).epsilon(1e-12));
  CHECK(rows[0].dimensional_ok);
  CHECK(rows[0].classical_ok);
  CHECK(rows[0].ordering_ok);
}

TEST_CASE("entropy variational bound: dominated by the entropy, tight at log f") {
  const SpectralSemigroup S(2);
  const ZonalTarget target = make_exponential_zonal_target(S, 0.8, 2.0, 0.0);
  const double H = relative_entropy_vs_kernel(S, target);
  const ZonalFunction zoo[] = {
      [](double t) { return 0.5 * t; },
      [](double t) { return t * t; },
      [](double t) { return -0.3 * t + 0.2 * t * t; },
  };
  for (const auto& g : zoo) {
    CHECK(entropy_variational_bound(S, target, g) <= H + 1e-10);
  }
  CHECK(entropy_variational_bound(S, target, target.log_profile) ==
        doctest::Approx(H).epsilon(1e-9));
}

TEST_CASE("small sphere sampler run: energy tracks the kernel entropy") {
  const SpectralSemigroup S(2);
  const double T = 1.0;
  const ZonalTarget target = make_exponential_zonal_target(S, 1.0, T, 0.0);
  const TimeGrid grid(T, 500);
  const EntropyReport rep = follmer_sample_sphere(S, target, frame_at(0.0), grid, 4000, 51, {});
  CHECK(std::abs(rep.drift_energy - rep.entropy) < 3.0 * rep.drift_energy_se + 4e-3);
  CHECK(std::abs(rep.sample_entropy - rep.entropy) < 3.0 * rep.sample_entropy_se + 4e-3);
  CHECK(rep.aborted == 0);

  // wiring mistakes are rejected
  CHECK_THROWS_AS(follmer_sample_sphere(S, target, frame_at(0.5), grid, 10, 1, {}),
                  std::invalid_argument);
  CHECK_THROWS_AS(follmer_sample_sphere(S, target, frame_at(0.0), TimeGrid(2.0, 100), 10, 1, {}),
                  std::invalid_argument);
}

TEST_CASE("alpha trajectory on a short horizon") {
  const SpectralSemigroup S(2);
  const double T = 1.0;
  const ZonalTarget target = make_exponential_zonal_target(S, 1.0, T, 0.0);
  const TimeGrid grid(T, 500);
  const AlphaTrajectory traj = alpha_trajectory(S, target, frame_at(0.0), grid, 4000, 61, 1.0, {});
  CHECK(traj.curvature_ok);
  CHECK(std::abs(traj.integral - 2.0 * traj.entropy) < 3.0 * traj.integral_se + 5e-3);
  CHECK(traj.alpha.minCoeff() >= 0.0);
  CHECK(traj.integrated_ok);
  // alpha(T) estimates the fisher information under the kernel reference
  CHECK(std::abs(traj.alpha_terminal - fisher_information_vs_kernel(S, target)) <
        3.0 * traj.alpha_terminal_se + 5e-3);
}

TEST_CASE("ks statistic on exact uniforms") {
  std::vector<double> u(1000);
  for (int i = 0; i < 1000; ++i) u[i] = (i + 0.5) / 1000.0;
  CHECK(ks_statistic(u, [](double x) { return std::min(std::max(x, 0.0), 1.0); }) ==
        doctest::Approx(0.0005).epsilon(1e-10));
}
