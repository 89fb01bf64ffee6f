#ifndef SCL_GRID_HPP
#define SCL_GRID_HPP

#include <stdexcept>

namespace scl {

// Uniform partition of [0, horizon] into `steps` intervals.
// The pair (horizon, steps) is the stored representation; dt is derived,
// so steps * dt reproduces the horizon by construction.
struct TimeGrid {
  double horizon = 1.0;
  int steps = 1;

  TimeGrid() = default;
  TimeGrid(double horizon_, int steps_) : horizon(horizon_), steps(steps_) {
    if (!(horizon > 0.0)) throw std::invalid_argument("TimeGrid: horizon must be > 0");
    if (steps < 1) throw std::invalid_argument("TimeGrid: steps must be >= 1");
  }

  double dt() const noexcept { return horizon / steps; }
  double time(int k) const noexcept { return horizon * (static_cast<double>(k) / steps); }

  bool operator==(const TimeGrid&) const = default;
};

}  // namespace scl

#endif  // SCL_GRID_HPP
