#ifndef SCL_SIMULATE_HPP
#define SCL_SIMULATE_HPP

#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "scl/geometry.hpp"
#include "scl/grid.hpp"
#include "scl/parallel.hpp"
#include "scl/stochastics.hpp"

namespace scl {

// dX = sigma(X) dB + b(X) dt. Null sigma means identity, null drift zero;
// the stepper skips the corresponding work.
struct EuclideanModel {
  int dim = 1;
  std::function<void(const Eigen::VectorXd& x, Eigen::Ref<Eigen::MatrixXd> sigma)> sigma;
  std::function<void(const Eigen::VectorXd& x, Eigen::Ref<Eigen::VectorXd> b)> drift;
};

struct SimOptions {
  int workers = 0;
  bool record_states = false;            // full trajectory
  bool record_controls = false;          // realized rates per step
  bool record_frames = false;            // sphere only
  bool record_ambient_controls = false;  // sphere only: Phi_k u_k
  bool record_driving = false;           // jacobi only: dW increments
};

// Per-path output. Result buffers are reused across paths within a worker;
// visitors must copy anything they keep. The Cameron-Martin norm and the
// control/noise cross term are always accumulated so Girsanov weights and
// control variates need no recorded trajectory.
struct EuclideanPathResult {
  Eigen::MatrixXd states;  // dim x (steps+1), iff record_states
  Eigen::VectorXd terminal;
  Eigen::MatrixXd rates;  // dim x steps, iff record_controls
  double h_norm_squared = 0.0;
  double control_noise_cross = 0.0;  // sum <u_k, dB_k>
  bool aborted = false;
  int abort_step = -1;

  double energy() const { return 0.5 * h_norm_squared; }
  double log_girsanov() const { return -control_noise_cross - 0.5 * h_norm_squared; }
};

struct SpherePathResult {
  Eigen::MatrixXd base;                 // (n+1) x (steps+1), iff record_states
  std::vector<Eigen::MatrixXd> frames;  // iff record_frames
  Eigen::VectorXd terminal;             // ambient coords of X_T
  SphereFrame terminal_frame;
  Eigen::MatrixXd rates;             // n x steps, iff record_controls
  Eigen::MatrixXd ambient_controls;  // (n+1) x steps, iff record_ambient_controls
  double h_norm_squared = 0.0;
  double control_noise_cross = 0.0;
  bool aborted = false;
  int abort_step = -1;

  double energy() const { return 0.5 * h_norm_squared; }
};

struct JacobiPathResult {
  Eigen::VectorXd values;  // steps+1, iff record_states
  double terminal = 0.0;
  Eigen::VectorXd rates;    // steps, iff record_controls
  Eigen::VectorXd driving;  // dW increments, iff record_driving
  double h_norm_squared = 0.0;
  double control_noise_cross = 0.0;
  long clamped_steps = 0;

  double energy() const { return 0.5 * h_norm_squared; }
};

namespace detail {

struct EuclideanWorkspace {
  explicit EuclideanWorkspace(int dim) : u(dim), db(dim), w(dim), b(dim), sig(dim, dim) {}
  Eigen::VectorXd u, db, w, b;
  Eigen::MatrixXd sig;
};

void run_euclidean_path(const EuclideanModel& model, const EuclideanPolicy& policy,
                        const TimeGrid& grid, const Eigen::VectorXd& x0,
                        const BrownianBatch& batch, long path, const SimOptions& opts,
                        EuclideanWorkspace& ws, EuclideanPathResult& out);

struct SphereWorkspace {
  SphereWorkspace(int ambient, int n)
      : stepper(ambient, n), u(n), db(n), w(n), frame{SpherePoint{Eigen::VectorXd::Zero(ambient)}, Eigen::MatrixXd::Zero(ambient, n)} {}
  FrameStepper<double> stepper;
  Eigen::VectorXd u, db, w;
  SphereFrame frame;
};

void run_sphere_path(const SphereFrame& frame0, const SpherePolicy& policy, const TimeGrid& grid,
                     const BrownianBatch& batch, long path, const SimOptions& opts,
                     const Eigen::MatrixXd* driving, SphereWorkspace& ws, SpherePathResult& out);

void run_jacobi_path(int n, const ScalarPolicy& policy, const TimeGrid& grid, double x0,
                     const BrownianBatch& batch, long path, const SimOptions& opts,
                     JacobiPathResult& out);

}  // namespace detail

// Euler-Maruyama for the controlled diffusion: per step
//   X_{k+1} = X_k + sigma(X_k) (dB_k + u_k dt) + b(X_k) dt,  u_k = policy(t_k, X_k).
// visit(path, result) runs once per path; concurrent calls touch distinct paths.
template <class Visit>
void simulate_controlled_euclidean(const EuclideanModel& model, const EuclideanPolicy& policy,
                                   const TimeGrid& grid, const Eigen::VectorXd& x0,
                                   const BrownianBatch& batch, const SimOptions& opts,
                                   Visit&& visit) {
  parallel_chunks(0L, batch.paths(), opts.workers, [&](long lo, long hi) {
    detail::EuclideanWorkspace ws(model.dim);
    EuclideanPathResult res;
    for (long p = lo; p < hi; ++p) {
      detail::run_euclidean_path(model, policy, grid, x0, batch, p, opts, ws, res);
      visit(p, res);
    }
  });
}

EuclideanPathResult simulate_controlled_euclidean_path(const EuclideanModel& model,
                                                       const EuclideanPolicy& policy,
                                                       const TimeGrid& grid,
                                                       const Eigen::VectorXd& x0,
                                                       const BrownianBatch& batch, long path,
                                                       const SimOptions& opts = {});

// Horizontal motion on the frame bundle of S^n: per step the tangent
// increment Phi_k (dB_k + u_k dt) moves the base point along a geodesic and
// parallel-transports the frame, which is re-orthonormalized every step.
template <class Visit>
void simulate_horizontal(const SphereFrame& frame0, const SpherePolicy& policy,
                         const TimeGrid& grid, const BrownianBatch& batch,
                         const SimOptions& opts, Visit&& visit) {
  const int ambient = static_cast<int>(frame0.base.coords.size());
  const int n = frame0.dim();
  parallel_chunks(0L, batch.paths(), opts.workers, [&](long lo, long hi) {
    detail::SphereWorkspace ws(ambient, n);
    SpherePathResult res;
    for (long p = lo; p < hi; ++p) {
      detail::run_sphere_path(frame0, policy, grid, batch, p, opts, nullptr, ws, res);
      visit(p, res);
    }
  });
}

SpherePathResult simulate_horizontal_path(const SphereFrame& frame0, const SpherePolicy& policy,
                                          const TimeGrid& grid, const BrownianBatch& batch,
                                          long path, const SimOptions& opts = {});

// Deterministic rolling of a driving path (columns are R^n increments).
SpherePathResult develop(const SphereFrame& frame0, const TimeGrid& grid,
                         const Eigen::MatrixXd& driving);

// Same Brownian paths run at dyadically coarsened grids: level j uses
// finest.steps >> j steps, with coarse increments formed by summing blocks
// of fine ones. Couples the levels for grid-refinement studies.
// visit(path, level, result); policies are rebuilt per level grid.
template <class Visit>
void simulate_horizontal_levels(const SphereFrame& frame0,
                                const std::function<SpherePolicy(const TimeGrid&)>& policy_for_grid,
                                const TimeGrid& finest, int levels, long paths, std::uint64_t seed,
                                const SimOptions& opts, Visit&& visit) {
  if (levels < 1) throw std::invalid_argument("simulate_horizontal_levels: levels >= 1");
  if (finest.steps % (1 << (levels - 1)) != 0) {
    throw std::invalid_argument("simulate_horizontal_levels: steps must divide by 2^(levels-1)");
  }
  const int ambient = static_cast<int>(frame0.base.coords.size());
  const int n = frame0.dim();
  const BrownianBatch batch(finest, n, paths, seed);
  std::vector<TimeGrid> grids;
  std::vector<SpherePolicy> policies;
  for (int j = 0; j < levels; ++j) {
    grids.emplace_back(finest.horizon, finest.steps >> j);
    policies.push_back(policy_for_grid(grids.back()));
  }
  parallel_chunks(0L, paths, opts.workers, [&](long lo, long hi) {
    detail::SphereWorkspace ws(ambient, n);
    SpherePathResult res;
    Eigen::MatrixXd fine(n, finest.steps);
    std::vector<Eigen::MatrixXd> coarse(levels);
    for (int j = 0; j < levels; ++j) coarse[j].resize(n, finest.steps >> j);
    for (long p = lo; p < hi; ++p) {
      batch.path_increments(p, fine);
      coarse[0] = fine;
      for (int j = 1; j < levels; ++j) {
        const int nc = finest.steps >> j;
        for (int k = 0; k < nc; ++k) {
          coarse[j].col(k) = coarse[j - 1].col(2 * k) + coarse[j - 1].col(2 * k + 1);
        }
      }
      for (int j = 0; j < levels; ++j) {
        detail::run_sphere_path(frame0, policies[j], grids[j], batch, p, opts, &coarse[j], ws, res);
        visit(p, j, res);
      }
    }
  });
}

// 1D coordinate diffusion on [-1,1]:
//   dX = sqrt(max(0, 1 - X^2)) (dW + u dt) - (n/2) X dt,
// clamped to [-1,1] after each step.
template <class Visit>
void simulate_jacobi(int n, const ScalarPolicy& policy, const TimeGrid& grid, double x0,
                     const BrownianBatch& batch, const SimOptions& opts, Visit&& visit) {
  if (batch.dim() != 1) throw std::invalid_argument("simulate_jacobi: batch must be 1-dimensional");
  if (!(x0 >= -1.0 && x0 <= 1.0)) throw std::invalid_argument("simulate_jacobi: |x0| <= 1 required");
  parallel_chunks(0L, batch.paths(), opts.workers, [&](long lo, long hi) {
    JacobiPathResult res;
    for (long p = lo; p < hi; ++p) {
      detail::run_jacobi_path(n, policy, grid, x0, batch, p, opts, res);
      visit(p, res);
    }
  });
}

JacobiPathResult simulate_jacobi_path(int n, const ScalarPolicy& policy, const TimeGrid& grid,
                                      double x0, const BrownianBatch& batch, long path,
                                      const SimOptions& opts = {});

// i-th coordinate of the recorded base path (zero-based index).
Eigen::VectorXd coordinate_series(const SpherePathResult& path, int i);

}  // namespace scl

#endif  // SCL_SIMULATE_HPP
