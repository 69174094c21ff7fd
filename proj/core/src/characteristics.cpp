#include "nlbuffer/characteristics.hpp"

#include <algorithm>
#include <cmath>

#include "nlbuffer/errors.hpp"

namespace nlb {

namespace {

std::size_t road1_cell(const RoadGrid& grid, std::size_t n1, double x) {
  if (x < -static_cast<double>(n1) * grid.dx - 1e-12 || x > 0.0) {
    throw OutOfDomain("x = " + std::to_string(x) + " is not on road 1");
  }
  const double offset = x / grid.dx + static_cast<double>(n1);
  const auto i = static_cast<std::ptrdiff_t>(std::floor(offset));
  return static_cast<std::size_t>(
      std::clamp<std::ptrdiff_t>(i, 0, static_cast<std::ptrdiff_t>(n1) - 1));
}

std::size_t road2_cell(const RoadGrid& grid, std::size_t n2, double x) {
  if (x < 0.0 || x > static_cast<double>(n2) * grid.dx + 1e-12) {
    throw OutOfDomain("x = " + std::to_string(x) + " is not on road 2");
  }
  const auto i = static_cast<std::ptrdiff_t>(std::floor(x / grid.dx));
  return static_cast<std::size_t>(
      std::clamp<std::ptrdiff_t>(i, 0, static_cast<std::ptrdiff_t>(n2) - 1));
}

double road1_speed(double rho, double V1, double V2, double sB) {
  return rho * V2 <= sB ? V1 + V2 : V1;
}

}  // namespace

double char_velocity(const SimState& state, const RoadGrid& grid,
                     const NonlocalFields& fields, double x, Road road) {
  if (road == Road::one) {
    const std::size_t i = road1_cell(grid, state.rho1.size(), x);
    return road1_speed(state.rho1[i], fields.V1[i], fields.V2_road1[i],
                       fields.sB[i]);
  }
  const std::size_t m = road2_cell(grid, state.rho2.size(), x);
  return fields.V2_road2[m];
}

CharSpeeds char_speeds(const SimState& state, const NonlocalFields& fields) {
  CharSpeeds out;
  out.w1.resize(state.rho1.size());
  for (std::size_t i = 0; i < out.w1.size(); ++i) {
    out.w1[i] = road1_speed(state.rho1[i], fields.V1[i], fields.V2_road1[i],
                            fields.sB[i]);
  }
  out.w2 = fields.V2_road2;
  return out;
}

CharSpeeds limit_char_speeds(const SimState& state, double v_free,
                             double mu) {
  CharSpeeds out;
  out.w1.resize(state.rho1.size());
  for (std::size_t i = 0; i < out.w1.size(); ++i) {
    out.w1[i] = state.rho1[i] * v_free <= mu ? v_free : 0.0;
  }
  out.w2.assign(state.rho2.size(), v_free);
  return out;
}

void VelocityRecord::append(double t, CharSpeeds speeds) {
  if (!times_.empty() && !(t > times_.back())) {
    throw Error("velocity record times must increase");
  }
  times_.push_back(t);
  frames_.push_back(std::move(speeds));
}

double VelocityRecord::speed(double t, double x, Road road) const {
  if (times_.empty()) throw Error("empty velocity record");
  auto it = std::upper_bound(times_.begin(), times_.end(), t);
  const std::size_t k =
      it == times_.begin() ? 0 : static_cast<std::size_t>(it - times_.begin()) - 1;
  const CharSpeeds& f = frames_[k];
  if (road == Road::one) return f.w1[road1_cell(grid_, f.w1.size(), x)];
  return f.w2[road2_cell(grid_, f.w2.size(), x)];
}

std::vector<CharTrajectory> trace_characteristics(
    const VelocityRecord& record, std::span<const CharSeed> seeds, double dt,
    double t_end) {
  if (!(dt > 0.0)) throw Error("tracer dt must be positive");
  const RoadGrid& grid = record.grid();
  const double x_right =
      static_cast<double>(grid.cells2()) * grid.dx;

  std::vector<CharTrajectory> out;
  out.reserve(seeds.size());
  for (const CharSeed& seed : seeds) {
    CharTrajectory traj;
    traj.seed = seed;
    Road road = seed.road;
    double t = seed.t0;
    double x = seed.x0;
    traj.t.push_back(t);
    traj.x.push_back(x);
    std::size_t steps = 0;
    while (t < t_end) {
      double h = std::min(dt, t_end - t);
      const double w = record.speed(t, x, road);
      x += h * w;
      ++steps;
      t = seed.t0 + static_cast<double>(steps) * dt;
      if (t > t_end || t_end - t < 1e-12 * dt) t = t_end;
      if (road == Road::one && x >= 0.0) {
        road = Road::two;
        traj.crossed_junction = true;
        traj.crossing_time = t;
      }
      traj.t.push_back(t);
      if (road == Road::two && x >= x_right) {
        traj.x.push_back(x_right);
        traj.reason = Termination::left_domain;
        break;
      }
      traj.x.push_back(x);
    }
    out.push_back(std::move(traj));
  }
  return out;
}

}  // namespace nlb
