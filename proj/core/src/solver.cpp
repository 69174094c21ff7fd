#include "nlbuffer/solver.hpp"

#include <algorithm>
#include <cmath>

#include "nlbuffer/errors.hpp"

namespace nlb {

void Solver::check_dt(double dt) const {
  const double bound = max_dt();
  if (!(dt > 0.0) || dt > bound * (1.0 + 1e-12)) {
    throw CflViolation(dt, bound);
  }
}

Trajectory run(Solver& solver, const RunControl& control) {
  Trajectory out;
  if (control.fixed_dt) {
    const double bound = solver.max_dt();
    if (*control.fixed_dt > bound * (1.0 + 1e-12)) {
      throw CflViolation(*control.fixed_dt, bound);
    }
  }

  std::vector<double> pending = control.snapshots;
  std::sort(pending.begin(), pending.end());
  std::size_t next = 0;
  out.snapshots.reserve(pending.size());

  auto take = [&](double requested, const SimState& s) {
    out.snapshots.push_back({requested, s});
  };
  while (next < pending.size() && pending[next] <= 0.0) {
    take(pending[next++], solver.state());
  }

  out.buffer.push_back({solver.state().t, solver.state().r});
  const double horizon = control.horizon;
  SimState previous = solver.state();

  while (solver.state().t < horizon) {
    const double t = solver.state().t;
    double dt = control.fixed_dt ? *control.fixed_dt : solver.max_dt();
    bool last = false;
    if (t + dt >= horizon) {
      dt = horizon - t;
      last = true;
    }
    if (next < pending.size()) previous = solver.state();
    const StepReport report = solver.step(dt);
    if (last) {
      // Remove accumulated rounding so the final time is exactly the horizon.
      solver.snap_time(horizon);
    }
    ++out.steps;
    out.buffer.push_back({solver.state().t, solver.state().r});
    if (control.observer) control.observer(solver, report);

    const double now = solver.state().t;
    while (next < pending.size() && pending[next] <= now) {
      const double want = pending[next++];
      const bool use_previous =
          std::abs(previous.t - want) < std::abs(now - want);
      take(want, use_previous ? previous : solver.state());
    }
  }
  while (next < pending.size()) take(pending[next++], solver.state());

  out.final_state = solver.state();
  return out;
}

}  // namespace nlb
