#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "nlbuffer/model.hpp"

namespace nlb {

/// Boundary and junction fluxes of one step, all per unit time.
struct StepReport {
  double dt = 0.0;
  /// Flux entering road 1 through its left boundary.
  double inflow_left = 0.0;
  /// Flux leaving road 2 through its right boundary.
  double outflow_right = 0.0;
  /// Road-1 outflow into the buffer.
  double buffer_in = 0.0;
  /// Buffer release onto road 2.
  double buffer_out = 0.0;
  /// True when the explicit Euler update of r had to be clamped.
  bool buffer_clamped = false;
};

/// Explicit one-step scheme on the two-road network.
class Solver {
 public:
  virtual ~Solver() = default;

  /// Largest admissible step for the current state.
  virtual double max_dt() const = 0;
  /// Advances by dt; throws CflViolation when dt exceeds max_dt().
  virtual StepReport step(double dt) = 0;

  const SimState& state() const noexcept { return state_; }
  const RoadGrid& grid() const noexcept { return grid_; }

  /// Overwrites the clock, used to land exactly on a horizon.
  void snap_time(double t) noexcept { state_.t = t; }

 protected:
  Solver(RoadGrid grid, SimState initial)
      : grid_(grid), state_(std::move(initial)) {}

  void check_dt(double dt) const;

  RoadGrid grid_;
  SimState state_;
};

struct Snapshot {
  double requested_t = 0.0;
  SimState state;
};

struct BufferSample {
  double t;
  double r;
};

struct Trajectory {
  std::vector<Snapshot> snapshots;
  /// (t, r) at t = 0 and after every step.
  std::vector<BufferSample> buffer;
  SimState final_state;
  std::size_t steps = 0;
};

/// Called after every completed step with the new state.
using StepObserver = std::function<void(const Solver&, const StepReport&)>;

struct RunControl {
  double horizon = 1.0;
  std::vector<double> snapshots;
  /// Fixed step; validated against max_dt() before the first step.
  std::optional<double> fixed_dt;
  StepObserver observer;
};

/// Steps until the horizon, shortening the last step to land on it exactly.
/// Each snapshot is the completed step nearest to the requested time.
Trajectory run(Solver& solver, const RunControl& control);

}  // namespace nlb
