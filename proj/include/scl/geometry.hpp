#ifndef SCL_GEOMETRY_HPP
#define SCL_GEOMETRY_HPP

#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

// Exact unit-sphere geometry in extrinsic coordinates: points are unit
// vectors of R^{n+1}, frames are (n+1) x n matrices with orthonormal
// columns spanning the tangent space. Geodesics, parallel transport and
// coordinate gradients all have closed forms, so no charts are needed.

namespace scl {

template <typename Scalar>
using VectorX = Eigen::Vector<Scalar, Eigen::Dynamic>;
template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
struct SpherePointT {
  VectorX<Scalar> coords;  // unit vector in R^{n+1}

  int dim() const { return static_cast<int>(coords.size()) - 1; }

  static SpherePointT from_ambient(VectorX<Scalar> v) {
    const Scalar norm = v.norm();
    if (!(norm > Scalar(0))) throw std::invalid_argument("SpherePoint: zero ambient vector");
    v /= norm;
    return SpherePointT{std::move(v)};
  }
};

template <typename Scalar>
struct TangentVectorT {
  SpherePointT<Scalar> at;
  VectorX<Scalar> vec;  // ambient vector with <at.coords, vec> = 0
};

template <typename Scalar>
struct SphereFrameT {
  SpherePointT<Scalar> base;
  MatrixX<Scalar> basis;  // (n+1) x n, orthonormal columns, each ⟂ base

  int dim() const { return static_cast<int>(basis.cols()); }
};

using SpherePoint = SpherePointT<double>;
using TangentVector = TangentVectorT<double>;
using SphereFrame = SphereFrameT<double>;

// v - <x,v> x as a plain expression over ambient vectors.
template <class DX, class DV>
auto tangent_projection(const Eigen::MatrixBase<DX>& x, const Eigen::MatrixBase<DV>& v) {
  return (v - x.dot(v) * x).eval();
}

template <typename Scalar, typename Derived>
TangentVectorT<Scalar> project_tangent(const SpherePointT<Scalar>& x,
                                       const Eigen::MatrixBase<Derived>& v) {
  return {x, tangent_projection(x.coords, v)};
}

// Gradient of the i-th coordinate function: e_i - x_i x (i zero-based).
// Its squared norm is 1 - x_i^2.
template <typename Scalar>
TangentVectorT<Scalar> coordinate_gradient(const SpherePointT<Scalar>& x, int i) {
  const int m = static_cast<int>(x.coords.size());
  if (i < 0 || i >= m) throw std::out_of_range("coordinate_gradient: index");
  VectorX<Scalar> g = -x.coords[i] * x.coords;
  g[i] += Scalar(1);
  return {x, std::move(g)};
}

// Geodesic exponential: cos(|v|) x + sin(|v|) v/|v|, renormalized.
template <typename Scalar>
SpherePointT<Scalar> sphere_exp(const SpherePointT<Scalar>& x, const TangentVectorT<Scalar>& v) {
  const Scalar s = v.vec.norm();
  if (s < Scalar(1e-14)) return x;
  VectorX<Scalar> y = std::cos(s) * x.coords + (std::sin(s) / s) * v.vec;
  y.normalize();
  return SpherePointT<Scalar>{std::move(y)};
}

// Parallel transport of w along the geodesic leaving x with velocity v.
// Only the component of w in the (x, v) plane rotates; the rest is fixed.
template <typename Scalar>
TangentVectorT<Scalar> parallel_transport(const SpherePointT<Scalar>& x,
                                          const TangentVectorT<Scalar>& v,
                                          const TangentVectorT<Scalar>& w) {
  const Scalar s = v.vec.norm();
  if (s < Scalar(1e-14)) return w;
  const VectorX<Scalar> u = v.vec / s;
  const Scalar a = u.dot(w.vec);
  VectorX<Scalar> out = w.vec + a * ((std::cos(s) - Scalar(1)) * u - std::sin(s) * x.coords);
  return {sphere_exp(x, v), std::move(out)};
}

// Unit directions of the coordinate gradients; columns i with
// |grad P_i| <= threshold fall back to the supplied unit tangent vector.
template <typename Scalar>
MatrixX<Scalar> frame_theta(const SpherePointT<Scalar>& x, const VectorX<Scalar>& fallback,
                            Scalar degenerate_threshold = Scalar(1e-12)) {
  const int m = static_cast<int>(x.coords.size());
  MatrixX<Scalar> theta(m, m);
  for (int i = 0; i < m; ++i) {
    VectorX<Scalar> g = -x.coords[i] * x.coords;
    g[i] += Scalar(1);
    const Scalar norm = g.norm();
    if (norm > degenerate_threshold) {
      theta.col(i) = g / norm;
    } else {
      theta.col(i) = fallback;
    }
  }
  return theta;
}

// Modified Gram-Schmidt against the base point and previous columns.
template <typename Scalar>
void reorthonormalize(SphereFrameT<Scalar>& frame) {
  const int n = frame.dim();
  for (int j = 0; j < n; ++j) {
    auto col = frame.basis.col(j);
    col -= frame.base.coords.dot(col) * frame.base.coords;
    for (int i = 0; i < j; ++i) {
      col -= frame.basis.col(i).dot(col) * frame.basis.col(i);
    }
    const Scalar norm = col.norm();
    if (!(norm > Scalar(0))) throw std::runtime_error("reorthonormalize: degenerate frame");
    col /= norm;
  }
}

// Deterministic orthonormal frame over x: orthonormalizes the coordinate
// directions least aligned with x.
template <typename Scalar>
SphereFrameT<Scalar> orthonormal_frame(const SpherePointT<Scalar>& x) {
  const int m = static_cast<int>(x.coords.size());
  int skip = 0;
  x.coords.cwiseAbs().maxCoeff(&skip);
  SphereFrameT<Scalar> frame{x, MatrixX<Scalar>::Zero(m, m - 1)};
  int j = 0;
  for (int i = 0; i < m; ++i) {
    if (i == skip) continue;
    frame.basis(i, j++) = Scalar(1);
  }
  reorthonormalize(frame);
  return frame;
}

// max |<c_i, c_j> - delta_ij| over base + basis columns.
template <typename Scalar>
Scalar frame_orthonormality_error(const SphereFrameT<Scalar>& frame) {
  const int n = frame.dim();
  MatrixX<Scalar> all(frame.basis.rows(), n + 1);
  all.col(0) = frame.base.coords;
  all.rightCols(n) = frame.basis;
  MatrixX<Scalar> gram = all.transpose() * all;
  gram.diagonal().array() -= Scalar(1);
  return gram.cwiseAbs().maxCoeff();
}

// One rolling step of a moving frame: advance the base point along the
// tangent increment basis * w, transport the columns, renormalize.
// Buffers live in the stepper so per-step work allocates nothing.
template <typename Scalar>
class FrameStepper {
 public:
  FrameStepper(int ambient_dim, int frame_dim)
      : v_(ambient_dim), u_(ambient_dim), x_old_(ambient_dim), coef_(frame_dim) {}

  void step(VectorX<Scalar>& x, MatrixX<Scalar>& basis, const VectorX<Scalar>& w) {
    v_.noalias() = basis * w;
    const Scalar s = v_.norm();
    if (s >= Scalar(1e-14)) {
      u_ = v_ / s;
      x_old_ = x;
      const Scalar c = std::cos(s);
      const Scalar sn = std::sin(s);
      x = c * x_old_ + sn * u_;
      x.normalize();
      coef_.noalias() = u_.transpose() * basis;
      u_ = (c - Scalar(1)) * u_ - sn * x_old_;  // transport update direction
      basis.noalias() += u_ * coef_;
    }
    // MGS against the (new) base point and previous columns
    const int n = static_cast<int>(basis.cols());
    for (int j = 0; j < n; ++j) {
      auto col = basis.col(j);
      col -= x.dot(col) * x;
      for (int i = 0; i < j; ++i) col -= basis.col(i).dot(col) * basis.col(i);
      col /= col.norm();
    }
  }

 private:
  VectorX<Scalar> v_, u_, x_old_;
  Eigen::RowVector<Scalar, Eigen::Dynamic> coef_;
};

}  // namespace scl

#endif  // SCL_GEOMETRY_HPP
