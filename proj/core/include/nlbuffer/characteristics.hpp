#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "nlbuffer/model.hpp"
#include "nlbuffer/nonlocal_solver.hpp"

namespace nlb {

enum class Road { one, two };

/// Characteristic speed at x. On road 1 it is V1 + V2 where the buffer supply
/// is not binding (rho1 V2 <= sB) and V1 otherwise; on road 2 it is V2.
/// Lookup is piecewise constant per cell. OutOfDomain if x is not on `road`.
double char_velocity(const SimState& state, const RoadGrid& grid,
                     const NonlocalFields& fields, double x, Road road);

/// Cellwise characteristic speeds of one time level.
struct CharSpeeds {
  std::vector<double> w1;
  std::vector<double> w2;
};

CharSpeeds char_speeds(const SimState& state, const NonlocalFields& fields);

/// Formal infinite-range limit: v_free where rho1 v_free <= mu, 0 inside the
/// over-capacity region; v_free everywhere on road 2.
CharSpeeds limit_char_speeds(const SimState& state, double v_free, double mu);

/// Speeds recorded along a run; frame k is valid on [times[k], times[k+1]).
class VelocityRecord {
 public:
  explicit VelocityRecord(RoadGrid grid) : grid_(grid) {}

  void append(double t, CharSpeeds speeds);

  const RoadGrid& grid() const noexcept { return grid_; }
  std::size_t size() const noexcept { return times_.size(); }
  bool empty() const noexcept { return times_.empty(); }
  double first_time() const { return times_.front(); }
  double last_time() const { return times_.back(); }

  /// Speed at (t, x) from the latest frame not after t.
  double speed(double t, double x, Road road) const;

 private:
  RoadGrid grid_;
  std::vector<double> times_;
  std::vector<CharSpeeds> frames_;
};

struct CharSeed {
  double t0 = 0.0;
  double x0 = 0.0;
  Road road = Road::one;
};

enum class Termination { reached_end, left_domain };

struct CharTrajectory {
  CharSeed seed;
  std::vector<double> t;
  std::vector<double> x;
  Termination reason = Termination::reached_end;
  /// Set when a road-1 curve passed the junction and continued on road 2.
  bool crossed_junction = false;
  double crossing_time = 0.0;
};

/// Explicit Euler x_{m+1} = x_m + dt W(t_m, x_m) from each seed until
/// t_end, or until the curve leaves road 2 on the right.
std::vector<CharTrajectory> trace_characteristics(
    const VelocityRecord& record, std::span<const CharSeed> seeds, double dt,
    double t_end);

}  // namespace nlb
