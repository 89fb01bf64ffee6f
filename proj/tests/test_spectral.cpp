#include <doctest.h>

#include <cmath>

#include "scl/spectral.hpp"

using namespace scl;

TEST_CASE("marginal measure: normalization and moments") {
  for (int n : {2, 3, 5}) {
    const NuMeasure nu(n);
    CHECK(nu.integrate([](double) { return 1.0; }) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(nu.integrate([](double t) { return t * t; }) ==
          doctest::Approx(1.0 / (n + 1)).epsilon(1e-12));
    CHECK(nu.integrate([](double t) { return t; }) == doctest::Approx(0.0).epsilon(1e-14));
  }
  // n = 2 is the uniform density 1/2: fourth moment 1/5, c_2 = 1/2
  const NuMeasure nu2(2);
  CHECK(nu2.integrate([](double t) { return std::pow(t, 4); }) ==
        doctest::Approx(0.2).epsilon(1e-13));
  CHECK(nu2.normalization() == doctest::Approx(0.5).epsilon(1e-13));
  CHECK(nu2.density(0.3) == doctest::Approx(0.5).epsilon(1e-13));

  CHECK_THROWS_WITH_AS(nu2.integrate([](double t) { return 1.0 / (t - t); }),
                       doctest::Contains("non-finite"), std::runtime_error);
}

TEST_CASE("orthonormality under the quadrature rule") {
  for (int n : {2, 3, 5}) {
    const SpectralSemigroup S(n, 64);
    const auto& rule = S.measure().rule();
    const int K = S.truncation();
    Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(K + 1, K + 1);
    Eigen::VectorXd p(K + 1);
    for (int i = 0; i < rule.nodes.size(); ++i) {
      S.basis_eval(rule.nodes[i], p);
      gram += rule.weights[i] * p * p.transpose();
    }
    gram.diagonal().array() -= 1.0;
    CHECK(gram.cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("coordinate function is the first eigenfunction") {
  for (int n : {2, 3, 5}) {
    const SpectralSemigroup S(n);
    CHECK(S.eigenvalue(0) == 0.0);
    CHECK(S.eigenvalue(1) == doctest::Approx(0.5 * n));
    CHECK(S.eigenvalue(2) == doctest::Approx(n + 1.0));
    for (double T : {0.3, 1.0, 5.0}) {
      for (double x : {-0.9, 0.0, 0.7}) {
        const double got = S.apply(T, [](double t) { return t; }, x);
        CHECK(std::abs(got - x * std::exp(-0.5 * n * T)) < 1e-10);
      }
    }
  }
}

TEST_CASE("semigroup property, stationarity, ergodic limit") {
  const SpectralSemigroup S(3);
  const ZonalFunction g = [](double t) { return std::exp(0.7 * t) + 0.2 * t * t; };
  const auto& rule = S.measure().rule();

  // Q_s Q_t = Q_{s+t} at the quadrature nodes
  double worst = 0.0;
  for (int i = 0; i < rule.nodes.size(); i += 16) {
    const double x = rule.nodes[i];
    const double two_step = S.apply(0.6, [&](double t) { return S.apply(0.5, g, t); }, x);
    worst = std::max(worst, std::abs(two_step - S.apply(1.1, g, x)));
  }
  CHECK(worst < 1e-9);

  // stationarity of nu under Q_T
  const double direct = S.measure().integrate(g);
  const double pushed = S.measure().integrate([&](double t) { return S.apply(0.8, g, t); });
  CHECK(std::abs(direct - pushed) < 1e-10);

  // long-time limit collapses to the stationary integral
  CHECK(std::abs(S.apply(50.0, g, 0.4) - direct) < 1e-10);

  // positivity for bounded-below g at moderate times
  for (int i = 0; i < rule.nodes.size(); i += 8) {
    CHECK(S.apply(0.1, [](double t) { return 0.05 + t * t; }, rule.nodes[i]) > 0.0);
  }
}

TEST_CASE("heat kernel integrates to one and reproduces the semigroup") {
  const SpectralSemigroup S(2);
  const auto& rule = S.measure().rule();
  const double T = 0.7;
  const double x = 0.3;
  double mass = 0.0, value = 0.0;
  const ZonalFunction g = [](double t) { return std::exp(0.5 * t); };
  for (int i = 0; i < rule.nodes.size(); ++i) {
    const double q = S.heat_kernel(T, x, rule.nodes[i]);
    mass += rule.weights[i] * q;
    value += rule.weights[i] * q * g(rule.nodes[i]);
  }
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(value == doctest::Approx(S.apply(T, g, x)).epsilon(1e-10));
}

TEST_CASE("generator residuals") {
  for (int n : {2, 5}) {
    const SpectralSemigroup S(n);
    // exact differential identity for the low modes
    CHECK(S.generator_residual(1) < 1e-12);
    CHECK(S.generator_residual(2) < 1e-10);
    CHECK(S.generator_residual(5) < 1e-9);
    // spectral route for the coordinate function
    CHECK(S.coordinate_eigen_residual() < 1e-7);
  }
}

TEST_CASE("log-gradient of the tilted semigroup against finite differences") {
  const SpectralSemigroup S(2);
  const ZonalFunction f = [](double t) { return 1.0 * t; };
  const double tau = 1.0;
  const double got = S.log_semigroup_gradient(tau, f, 0.0);
  const double h = 1e-5;
  const auto logq = [&](double x) {
    return std::log(S.apply(tau, [&](double t) { return std::exp(f(t)); }, x));
  };
  CHECK(std::abs(got - (logq(h) - logq(-h)) / (2.0 * h)) < 1e-6);

  // constant profile: gradient identically zero; ergodic limit flattens
  CHECK(std::abs(S.log_semigroup_gradient(0.4, [](double) { return 0.0; }, 0.2)) < 1e-12);
  CHECK(std::abs(S.log_semigroup_gradient(40.0, f, 0.2)) < 1e-9);
}

TEST_CASE("profile snapshots match direct evaluation and trim tails") {
  const SpectralSemigroup S(3);
  const ZonalFunction g = [](double t) { return std::exp(0.9 * t); };
  const ZonalProfile profile(S, g);
  for (double tau : {0.05, 0.5, 3.0}) {
    const auto snap = profile.at_time(tau);
    for (double x : {-0.8, 0.1, 0.6}) {
      CHECK(profile.value(snap, x) == doctest::Approx(S.apply(tau, g, x)).epsilon(1e-12));
    }
  }
  // longer horizons damp the expansion harder, so snapshots shrink
  CHECK(profile.at_time(5.0).damped.size() <= profile.at_time(0.05).damped.size());

  // positivity loss is reported, not silently returned
  const ZonalProfile monomial(S, [](double t) { return t; });  // negative on half the interval
  CHECK_THROWS_WITH_AS(monomial.log_gradient(0.1, -0.9), doctest::Contains("positivity"),
                       std::runtime_error);
}

TEST_CASE("hermite rule integrates Gaussian moments") {
  const QuadratureRule rule = gauss_hermite_rule(64);
  double m0 = 0, m2 = 0, m4 = 0, m6 = 0;
  for (int i = 0; i < rule.nodes.size(); ++i) {
    const double x = rule.nodes[i], w = rule.weights[i];
    m0 += w;
    m2 += w * x * x;
    m4 += w * std::pow(x, 4);
    m6 += w * std::pow(x, 6);
  }
  CHECK(m0 == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(m2 == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(m4 == doctest::Approx(3.0).epsilon(1e-13));
  CHECK(m6 == doctest::Approx(15.0).epsilon(1e-12));
}

TEST_CASE("effective truncation honors the tail rule") {
  const SpectralSemigroup S(2, 64);
  const Eigen::VectorXd c = S.coefficients([](double t) { return std::exp(2.0 * t); });
  CHECK(S.tail_converged(0.5, c));
  const int K_long = S.effective_truncation(5.0, c);
  const int K_short = S.effective_truncation(0.01, c);
  CHECK(K_long <= K_short);
  CHECK(std::exp(-S.eigenvalue(K_long) * 5.0) * std::abs(c[K_long]) < 1e-10);
}
