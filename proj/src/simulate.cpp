#include "scl/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace scl {
namespace detail {

void run_euclidean_path(const EuclideanModel& model, const EuclideanPolicy& policy,
                        const TimeGrid& grid, const Eigen::VectorXd& x0,
                        const BrownianBatch& batch, long path, const SimOptions& opts,
                        EuclideanWorkspace& ws, EuclideanPathResult& out) {
  if (batch.dim() != model.dim) throw std::invalid_argument("simulate: batch dim != model dim");
  if (x0.size() != model.dim) throw std::invalid_argument("simulate: x0 dim != model dim");
  const int N = grid.steps;
  const double dt = grid.dt();
  const CounterRng rng = batch.path_rng(path);

  out.h_norm_squared = 0.0;
  out.control_noise_cross = 0.0;
  out.aborted = false;
  out.abort_step = -1;
  if (opts.record_states) out.states.resize(model.dim, N + 1);
  if (opts.record_controls) out.rates.setZero(model.dim, N);

  Eigen::VectorXd x = x0;
  if (opts.record_states) out.states.col(0) = x;

  for (int k = 0; k < N; ++k) {
    batch.step_increment(rng, k, ws.db);
    ws.w = ws.db;
    if (policy.rate) {
      policy.rate(grid.time(k), x, ws.u);
      out.h_norm_squared += ws.u.squaredNorm() * dt;
      out.control_noise_cross += ws.u.dot(ws.db);
      ws.w += dt * ws.u;
      if (opts.record_controls) out.rates.col(k) = ws.u;
    }
    if (model.drift) model.drift(x, ws.b);  // left-point evaluation
    if (model.sigma) {
      model.sigma(x, ws.sig);
      x.noalias() += ws.sig * ws.w;
    } else {
      x += ws.w;
    }
    if (model.drift) x += dt * ws.b;
    if (!x.allFinite()) {
      out.aborted = true;
      out.abort_step = k;
      break;
    }
    if (opts.record_states) out.states.col(k + 1) = x;
  }
  out.terminal = x;
  if (out.aborted && opts.record_states) {
    for (int k = out.abort_step + 1; k <= N; ++k) out.states.col(k) = x;
  }
}

void run_sphere_path(const SphereFrame& frame0, const SpherePolicy& policy, const TimeGrid& grid,
                     const BrownianBatch& batch, long path, const SimOptions& opts,
                     const Eigen::MatrixXd* driving, SphereWorkspace& ws, SpherePathResult& out) {
  const int n = frame0.dim();
  const int ambient = n + 1;
  if (!driving && batch.dim() != n) throw std::invalid_argument("simulate_horizontal: batch dim != sphere dim");
  const int N = grid.steps;
  const double dt = grid.dt();
  const CounterRng rng = batch.path_rng(path);

  out.h_norm_squared = 0.0;
  out.control_noise_cross = 0.0;
  out.aborted = false;
  out.abort_step = -1;
  if (opts.record_states) out.base.resize(ambient, N + 1);
  if (opts.record_controls) out.rates.setZero(n, N);
  if (opts.record_ambient_controls) out.ambient_controls.setZero(ambient, N);
  if (opts.record_frames) out.frames.assign(N + 1, Eigen::MatrixXd());

  ws.frame.base.coords = frame0.base.coords;
  ws.frame.basis = frame0.basis;
  Eigen::VectorXd& x = ws.frame.base.coords;
  Eigen::MatrixXd& basis = ws.frame.basis;
  if (opts.record_states) out.base.col(0) = x;
  if (opts.record_frames) out.frames[0] = basis;

  for (int k = 0; k < N; ++k) {
    if (driving) {
      ws.db = driving->col(k);
    } else {
      batch.step_increment(rng, k, ws.db);
    }
    ws.w = ws.db;
    if (policy.rate) {
      policy.rate(grid.time(k), ws.frame, ws.u);
      out.h_norm_squared += ws.u.squaredNorm() * dt;
      out.control_noise_cross += ws.u.dot(ws.db);
      ws.w += dt * ws.u;
      if (opts.record_controls) out.rates.col(k) = ws.u;
      if (opts.record_ambient_controls) out.ambient_controls.col(k).noalias() = basis * ws.u;
    }
    ws.stepper.step(x, basis, ws.w);
    if (!x.allFinite() || !basis.allFinite()) {
      out.aborted = true;
      out.abort_step = k;
      break;
    }
    if (opts.record_states) out.base.col(k + 1) = x;
    if (opts.record_frames) out.frames[k + 1] = basis;
  }
  out.terminal = x;
  out.terminal_frame = ws.frame;
  if (out.aborted) {
    if (opts.record_states) {
      for (int k = out.abort_step + 1; k <= N; ++k) out.base.col(k) = x;
    }
    if (opts.record_frames) {
      for (int k = out.abort_step + 1; k <= N; ++k) out.frames[k] = basis;
    }
  }
}

void run_jacobi_path(int n, const ScalarPolicy& policy, const TimeGrid& grid, double x0,
                     const BrownianBatch& batch, long path, const SimOptions& opts,
                     JacobiPathResult& out) {
  const int N = grid.steps;
  const double dt = grid.dt();
  const double sqrt_dt = std::sqrt(dt);
  const CounterRng rng = batch.path_rng(path);

  out.h_norm_squared = 0.0;
  out.control_noise_cross = 0.0;
  out.clamped_steps = 0;
  if (opts.record_states) out.values.resize(N + 1);
  if (opts.record_controls) out.rates.setZero(N);
  if (opts.record_driving) out.driving.resize(N);

  double x = x0;
  if (opts.record_states) out.values[0] = x;
  for (int k = 0; k < N; ++k) {
    const double dw = rng.normal(k, 0) * sqrt_dt;
    if (opts.record_driving) out.driving[k] = dw;
    double u = 0.0;
    if (policy.rate) {
      u = policy.rate(grid.time(k), x);
      out.h_norm_squared += u * u * dt;
      out.control_noise_cross += u * dw;
      if (opts.record_controls) out.rates[k] = u;
    }
    const double diffusion = std::sqrt(std::max(0.0, 1.0 - x * x));
    x += diffusion * (dw + u * dt) - 0.5 * n * x * dt;
    if (x > 1.0) {
      x = 1.0;
      ++out.clamped_steps;
    } else if (x < -1.0) {
      x = -1.0;
      ++out.clamped_steps;
    }
    if (opts.record_states) out.values[k + 1] = x;
  }
  out.terminal = x;
}

}  // namespace detail

EuclideanPathResult simulate_controlled_euclidean_path(const EuclideanModel& model,
                                                       const EuclideanPolicy& policy,
                                                       const TimeGrid& grid,
                                                       const Eigen::VectorXd& x0,
                                                       const BrownianBatch& batch, long path,
                                                       const SimOptions& opts) {
  detail::EuclideanWorkspace ws(model.dim);
  EuclideanPathResult res;
  detail::run_euclidean_path(model, policy, grid, x0, batch, path, opts, ws, res);
  return res;
}

SpherePathResult simulate_horizontal_path(const SphereFrame& frame0, const SpherePolicy& policy,
                                          const TimeGrid& grid, const BrownianBatch& batch,
                                          long path, const SimOptions& opts) {
  detail::SphereWorkspace ws(static_cast<int>(frame0.base.coords.size()), frame0.dim());
  SpherePathResult res;
  detail::run_sphere_path(frame0, policy, grid, batch, path, opts, nullptr, ws, res);
  return res;
}

SpherePathResult develop(const SphereFrame& frame0, const TimeGrid& grid,
                         const Eigen::MatrixXd& driving) {
  if (driving.rows() != frame0.dim() || driving.cols() != grid.steps) {
    throw std::invalid_argument("develop: driving must be n x steps");
  }
  if (!driving.allFinite()) throw std::invalid_argument("develop: driving must be finite");
  detail::SphereWorkspace ws(static_cast<int>(frame0.base.coords.size()), frame0.dim());
  SpherePathResult res;
  SimOptions opts;
  opts.record_states = true;
  opts.record_frames = true;
  // the batch is unused when driving is supplied
  BrownianBatch dummy(grid, frame0.dim(), 1, 0);
  detail::run_sphere_path(frame0, zero_sphere_policy(), grid, dummy, 0, opts, &driving, ws, res);
  return res;
}

JacobiPathResult simulate_jacobi_path(int n, const ScalarPolicy& policy, const TimeGrid& grid,
                                      double x0, const BrownianBatch& batch, long path,
                                      const SimOptions& opts) {
  JacobiPathResult res;
  detail::run_jacobi_path(n, policy, grid, x0, batch, path, opts, res);
  return res;
}

Eigen::VectorXd coordinate_series(const SpherePathResult& path, int i) {
  if (path.base.size() == 0) throw std::invalid_argument("coordinate_series: path has no recorded states");
  if (i < 0 || i >= path.base.rows()) throw std::out_of_range("coordinate_series: index");
  return path.base.row(i).transpose();
}

}  // namespace scl
