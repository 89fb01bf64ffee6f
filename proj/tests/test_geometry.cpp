#include <doctest.h>

#include <cmath>

#include "scl/geometry.hpp"
#include "scl/rng.hpp"

using namespace scl;

namespace {

Eigen::VectorXd unit(std::initializer_list<double> v) {
  Eigen::VectorXd x(static_cast<long>(v.size()));
  int i = 0;
  for (double c : v) x[i++] = c;
  return x / x.norm();
}

SpherePoint random_point(int n, const CounterRng& rng, int step) {
  Eigen::VectorXd z(n + 1);
  rng.fill_normals(step, z);
  return SpherePoint::from_ambient(z);
}

}  // namespace

TEST_CASE("tangent projection") {
  const int m = 4;
  SpherePoint e1{Eigen::VectorXd::Unit(m, 0)};

  // radial direction projects to zero
  auto t0 = project_tangent(e1, Eigen::VectorXd::Unit(m, 0));
  CHECK(t0.vec.norm() == doctest::Approx(0.0).epsilon(1e-15));

  // already tangent
  auto t1 = project_tangent(e1, Eigen::VectorXd::Unit(m, 1));
  CHECK((t1.vec - Eigen::VectorXd::Unit(m, 1)).norm() == doctest::Approx(0.0));

  // hand check: x = (e1+e2)/sqrt2, v = e1 -> (1/2, -1/2, 0, 0)
  SpherePoint x{unit({1, 1, 0, 0})};
  auto t2 = project_tangent(x, Eigen::VectorXd::Unit(m, 0));
  CHECK(t2.vec[0] == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(t2.vec[1] == doctest::Approx(-0.5).epsilon(1e-14));
  CHECK(std::abs(t2.vec[2]) < 1e-15);
  CHECK(std::abs(x.coords.dot(t2.vec)) < 1e-12);
}

TEST_CASE("coordinate gradient and its norm identity") {
  const int m = 4;
  SpherePoint e1{Eigen::VectorXd::Unit(m, 0)};
  CHECK(coordinate_gradient(e1, 0).vec.norm() == doctest::Approx(0.0));
  CHECK((coordinate_gradient(e1, 1).vec - Eigen::VectorXd::Unit(m, 1)).norm() ==
        doctest::Approx(0.0));

  const CounterRng rng(2024, 9, 0);
  for (int trial = 0; trial < 200; ++trial) {
    SpherePoint x = random_point(3, rng, trial);
    for (int i = 0; i < 4; ++i) {
      const auto g = coordinate_gradient(x, i);
      const double expected = std::sqrt(1.0 - x.coords[i] * x.coords[i]);
      CHECK(g.vec.norm() == doctest::Approx(expected).epsilon(1e-12));
      CHECK(std::abs(x.coords.dot(g.vec)) < 1e-12);
    }
  }
}

TEST_CASE("geodesic exponential") {
  const int m = 3;
  SpherePoint e1{Eigen::VectorXd::Unit(m, 0)};
  const Eigen::VectorXd e2 = Eigen::VectorXd::Unit(m, 1);

  auto quarter = sphere_exp(e1, {e1, 0.5 * M_PI * e2});
  CHECK((quarter.coords - e2).norm() < 1e-12);

  auto same = sphere_exp(e1, {e1, Eigen::VectorXd::Zero(m)});
  CHECK((same.coords - e1.coords).norm() == 0.0);

  auto antipode = sphere_exp(e1, {e1, M_PI * e2});
  CHECK((antipode.coords + e1.coords).norm() < 1e-12);

  // stays on the sphere for any |v| <= pi
  const CounterRng rng(2024, 10, 0);
  for (int trial = 0; trial < 500; ++trial) {
    SpherePoint x = random_point(4, rng, 2 * trial);
    Eigen::VectorXd raw(5);
    rng.fill_normals(2 * trial + 1, raw);
    auto v = project_tangent(x, raw);
    const double norm = v.vec.norm();
    if (norm > M_PI) v.vec *= M_PI / norm;
    const auto y = sphere_exp(x, v);
    CHECK(std::abs(y.coords.norm() - 1.0) < 1e-12);
  }
}

TEST_CASE("parallel transport preserves Gram matrices") {
  const int m = 3;
  SpherePoint e1{Eigen::VectorXd::Unit(m, 0)};
  const Eigen::VectorXd e2 = Eigen::VectorXd::Unit(m, 1);
  const Eigen::VectorXd e3 = Eigen::VectorXd::Unit(m, 2);

  // rotation in the travel plane: e2 at e1 -> -e1 at e2
  auto moved = parallel_transport(e1, {e1, 0.5 * M_PI * e2}, {e1, e2});
  CHECK((moved.at.coords - e2).norm() < 1e-12);
  CHECK((moved.vec + e1.coords).norm() < 1e-12);

  // orthogonal complement of the travel plane is fixed
  auto fixed = parallel_transport(e1, {e1, 0.77 * e2}, {e1, e3});
  CHECK((fixed.vec - e3).norm() < 1e-13);

  const CounterRng rng(2024, 11, 0);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 4;
    SpherePoint x = random_point(n, rng, 4 * trial);
    SphereFrame frame = orthonormal_frame(x);
    Eigen::VectorXd raw(n + 1);
    rng.fill_normals(4 * trial + 1, raw);
    auto v = project_tangent(x, raw);
    Eigen::MatrixXd before = frame.basis.transpose() * frame.basis;
    Eigen::MatrixXd after(n, n);
    std::vector<Eigen::VectorXd> cols;
    for (int j = 0; j < n; ++j) {
      cols.push_back(parallel_transport(x, v, {x, frame.basis.col(j)}).vec);
    }
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) after(i, j) = cols[i].dot(cols[j]);
    }
    CHECK((before - after).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("theta directions: pole case and the two-norm bound") {
  const int m = 3;
  SpherePoint e1{Eigen::VectorXd::Unit(m, 0)};
  const Eigen::VectorXd fallback = Eigen::VectorXd::Unit(m, 1);
  const Eigen::MatrixXd theta = frame_theta(e1, fallback);
  CHECK((theta.col(0) - fallback).norm() == 0.0);  // degenerate gradient at the pole
  CHECK((theta.col(1) - Eigen::VectorXd::Unit(m, 1)).norm() < 1e-15);
  CHECK((theta.col(2) - Eigen::VectorXd::Unit(m, 2)).norm() < 1e-15);

  // sum_i <theta_i, y>^2 <= 2 |y|^2 over random points and tangents
  for (int n : {2, 3, 5, 10}) {
    const CounterRng rng(515, 12, n);
    for (int trial = 0; trial < 20000; ++trial) {
      SpherePoint x = random_point(n, rng, 2 * trial);
      Eigen::VectorXd raw(n + 1);
      rng.fill_normals(2 * trial + 1, raw);
      const auto y = project_tangent(x, raw);
      Eigen::VectorXd fb = orthonormal_frame(x).basis.col(0);
      const Eigen::MatrixXd th = frame_theta(x, fb);
      const double lhs = (th.transpose() * y.vec).squaredNorm();
      REQUIRE(lhs <= 2.0 * y.vec.squaredNorm() + 1e-10);
    }
  }
}

TEST_CASE("frames: construction, re-orthonormalization, stepper") {
  const CounterRng rng(77, 13, 0);
  for (int trial = 0; trial < 50; ++trial) {
    SpherePoint x = random_point(5, rng, trial);
    SphereFrame f = orthonormal_frame(x);
    CHECK(frame_orthonormality_error(f) < 1e-12);
  }

  // perturb then re-orthonormalize
  SpherePoint x = random_point(3, rng, 1000);
  SphereFrame f = orthonormal_frame(x);
  f.basis.array() += 1e-4;
  reorthonormalize(f);
  CHECK(frame_orthonormality_error(f) < 1e-12);

  // many small steps keep the frame orthonormal
  FrameStepper<double> stepper(4, 3);
  Eigen::VectorXd base = x.coords;
  Eigen::MatrixXd basis = orthonormal_frame(x).basis;
  Eigen::VectorXd w(3);
  for (int k = 0; k < 10000; ++k) {
    rng.fill_normals(2000 + k, w);
    stepper.step(base, basis, 0.03 * w);
  }
  SphereFrame moved{SpherePoint{base}, basis};
  CHECK(frame_orthonormality_error(moved) < 1e-8);
}
