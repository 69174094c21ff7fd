#include "nlbuffer/limit_infinity.hpp"

#include <algorithm>
#include <cmath>

#include "nlbuffer/errors.hpp"

namespace nlb {

LimitVelocities limit_velocity_fields(const VelocityFn& v2) noexcept {
  return {0.0, v2(0.0)};
}

double LimitCase::road1_cap(double r) const noexcept {
  if (classify_buffer(r, r_max) == BufferBranch::full) {
    return std::min(mu, road2_capacity);
  }
  return mu;
}

double LimitCase::outflow(double rho1_trace, double r) const noexcept {
  return std::min(rho1_trace * v_free, road1_cap(r));
}

double LimitCase::inflow(double rho1_trace, double r) const noexcept {
  const double dB = classify_buffer(r, r_max) == BufferBranch::empty
                        ? std::min(rho1_trace * v_free, mu)
                        : mu;
  return std::min(dB, road2_capacity);
}

LimitCase classify_limit(const VelocityFn& v2, const BufferSpec& buffer) {
  LimitCase c{};
  c.v_free = v2(0.0);
  c.road2_capacity = v2.rho_max * c.v_free;
  c.mu = buffer.mu;
  c.r_max = buffer.r_max;
  c.discriminant = buffer.mu <= c.road2_capacity ? LimitDiscriminant::case1
                                                 : LimitDiscriminant::case2;
  return c;
}

LimitInfinitySolver::LimitInfinitySolver(const LimitConfig& config,
                                         SimState initial)
    : Solver(config.grid, std::move(initial)),
      config_(config),
      case_(classify_limit(config.v2, config.buffer)),
      max_dt_(config.cfl_safety * config.grid.dx / case_.v_free) {
  if (state_.rho1.size() != grid_.cells1() ||
      state_.rho2.size() != grid_.cells2()) {
    throw GridMismatch("initial state does not match the grid");
  }
}

StepReport LimitInfinitySolver::step(double dt) {
  check_dt(dt);
  auto& rho1 = state_.rho1;
  auto& rho2 = state_.rho2;
  const std::size_t n1 = rho1.size();
  const std::size_t n2 = rho2.size();
  const double v = case_.v_free;
  const double cap = case_.road1_cap(state_.r);

  // The road-1 flux is non-decreasing, so the Godunov flux is the upwind one.
  std::vector<double> F1(n1);
  for (std::size_t i = 0; i + 1 < n1; ++i) F1[i] = std::min(rho1[i] * v, cap);
  F1[n1 - 1] = case_.outflow(rho1[n1 - 1], state_.r);
  const double F1_left = std::min(config_.left_boundary * v, cap);
  const double q2 = case_.inflow(rho1[n1 - 1], state_.r);

  std::vector<double> F2(n2);
  for (std::size_t m = 0; m < n2; ++m) F2[m] = rho2[m] * v;

  const double lambda = dt / grid_.dx;
  for (std::size_t i = 0; i < n1; ++i) {
    rho1[i] -= lambda * (F1[i] - (i == 0 ? F1_left : F1[i - 1]));
  }
  for (std::size_t m = 0; m < n2; ++m) {
    rho2[m] -= lambda * (F2[m] - (m == 0 ? q2 : F2[m - 1]));
  }

  StepReport report;
  report.dt = dt;
  report.inflow_left = F1_left;
  report.outflow_right = F2[n2 - 1];
  report.buffer_in = F1[n1 - 1];
  report.buffer_out = q2;
  const double r_new = state_.r + dt * (report.buffer_in - q2);
  state_.r = clamp_buffer(r_new, config_.buffer.r_max);
  report.buffer_clamped = state_.r != r_new;
  state_.t += dt;
  return report;
}

SupplyChainSolver::SupplyChainSolver(const SupplyChainConfig& config,
                                     SimState initial)
    : Solver(config.grid, std::move(initial)),
      config_(config),
      max_dt_(config.cfl_safety * config.grid.dx / config.processors.v) {
  if (state_.rho1.size() != grid_.cells1() ||
      state_.rho2.size() != grid_.cells2()) {
    throw GridMismatch("initial state does not match the grid");
  }
}

StepReport SupplyChainSolver::step(double dt) {
  check_dt(dt);
  auto& rho1 = state_.rho1;
  auto& rho2 = state_.rho2;
  const std::size_t n1 = rho1.size();
  const std::size_t n2 = rho2.size();
  const double v = config_.processors.v;
  const double mu1 = config_.processors.mu1;
  const double mu2 = config_.processors.mu2;
  const BufferBranch branch = classify_buffer(state_.r, config_.buffer.r_max);

  std::vector<double> F1(n1);
  for (std::size_t i = 0; i < n1; ++i) F1[i] = std::min(rho1[i] * v, mu1);
  // A full buffer only accepts what the second processor takes out.
  if (branch == BufferBranch::full) F1[n1 - 1] = std::min(F1[n1 - 1], mu2);
  const double F1_left = std::min(config_.left_boundary * v, mu1);
  const double q2 =
      branch == BufferBranch::empty ? std::min(F1[n1 - 1], mu2) : mu2;

  std::vector<double> F2(n2);
  for (std::size_t m = 0; m < n2; ++m) F2[m] = std::min(rho2[m] * v, mu2);

  const double lambda = dt / grid_.dx;
  for (std::size_t i = 0; i < n1; ++i) {
    rho1[i] -= lambda * (F1[i] - (i == 0 ? F1_left : F1[i - 1]));
  }
  for (std::size_t m = 0; m < n2; ++m) {
    rho2[m] -= lambda * (F2[m] - (m == 0 ? q2 : F2[m - 1]));
  }

  StepReport report;
  report.dt = dt;
  report.inflow_left = F1_left;
  report.outflow_right = F2[n2 - 1];
  report.buffer_in = F1[n1 - 1];
  report.buffer_out = q2;
  const double r_new = state_.r + dt * (report.buffer_in - q2);
  state_.r = clamp_buffer(r_new, config_.buffer.r_max);
  report.buffer_clamped = state_.r != r_new;
  state_.t += dt;
  return report;
}

ExactBoxSolution::ExactBoxSolution(const BoxParams& params) : p_(params) {
  if (!(p_.a < p_.b) || !(p_.b < 0.0)) {
    throw UnsupportedRegime("box datum needs a < b < 0");
  }
  if (!(p_.rho_box > 0.0) || !(p_.mu > 0.0) || !(p_.v_free > 0.0) ||
      !(p_.rho_max2 > 0.0)) {
    throw UnsupportedRegime("box parameters must be positive");
  }
  const bool case1 = p_.mu <= p_.rho_max2 * p_.v_free;
  const bool capped = p_.rho_box * p_.v_free > p_.mu;
  const bool fills = !case1 && p_.rho_box > p_.rho_max2;
  if (capped) {
    regime_ = case1 ? Regime::capped_rarefaction : Regime::rarefaction_fill;
  } else {
    regime_ = fills ? Regime::buffer_fill : Regime::translation;
  }
  t_valid_ = kInfinity;
}

ExactSnapshot ExactBoxSolution::evaluate(double t) const {
  const double a = p_.a;
  const double b = p_.b;
  const double rho = p_.rho_box;
  const double v = p_.v_free;
  const double road2_cap = p_.rho_max2 * v;
  const bool capped = regime_ == Regime::capped_rarefaction ||
                      regime_ == Regime::rarefaction_fill;

  std::vector<PiecewiseProfile::Piece> road1;
  auto add = [](std::vector<PiecewiseProfile::Piece>& out, double x0,
                double x1, double value) {
    if (x1 > x0 && value != 0.0) out.push_back({x0, x1, value});
  };

  // Junction outflow q1 is constant on [t_front, t_tail) and zero otherwise.
  double q1;
  double t_front = -b / v;
  double t_tail;
  if (capped) {
    const double plateau = p_.mu / v;
    const double t_exhaust = (b - a) * rho / p_.mu;
    if (t < t_exhaust) {
      add(road1, a + (p_.mu / rho) * t, b, rho);
      add(road1, b, std::min(b + v * t, 0.0), plateau);
    } else {
      add(road1, b + v * (t - t_exhaust), std::min(b + v * t, 0.0), plateau);
    }
    q1 = p_.mu;
    t_tail = t_exhaust + t_front;
  } else {
    add(road1, a + v * t, std::min(b + v * t, 0.0), rho);
    q1 = rho * v;
    t_tail = -a / v;
  }

  // Road 2 receives min{q1, road2_cap}; any excess is stored and released at
  // road2_cap once the supply from road 1 stops.
  const double release = std::min(q1, road2_cap);
  const double excess = q1 - release;
  double t_release_end = t_tail;
  ExactSnapshot out;
  if (excess > 0.0) {
    const double stored = excess * (t_tail - t_front);
    t_release_end = t_tail + stored / road2_cap;
    if (t <= t_front) {
      out.r = 0.0;
    } else if (t <= t_tail) {
      out.r = excess * (t - t_front);
    } else {
      out.r = std::max(0.0, stored - road2_cap * (t - t_tail));
    }
  }
  std::vector<PiecewiseProfile::Piece> road2;
  if (t > t_front) {
    add(road2, v * std::max(0.0, t - t_release_end), v * (t - t_front),
        release / v);
  }
  out.road1 = PiecewiseProfile(std::move(road1));
  out.road2 = PiecewiseProfile(std::move(road2));
  return out;
}

BoxParams box_params_from(const Scenario& s) {
  const auto& pieces = s.init1.pieces();
  if (pieces.size() != 1) {
    throw UnsupportedRegime("road-1 datum must be a single box");
  }
  for (const auto& p : s.init2.pieces()) {
    if (p.value != 0.0) throw UnsupportedRegime("road 2 must start empty");
  }
  if (s.buffer.r0 != 0.0 || std::isfinite(s.buffer.r_max)) {
    throw UnsupportedRegime("exact box solution needs r0 = 0, rmax = inf");
  }
  return {pieces[0].x0, pieces[0].x1, pieces[0].value,
          s.buffer.mu,  s.v2(0.0),    s.v2.rho_max};
}

SupplyChainRiemann::SupplyChainRiemann(const ProcessorSpec& processors,
                                       double rho_left, double rho_right)
    : p_(processors), rho_left_(rho_left), rho_right_(rho_right) {
  if (rho_left < 0.0 || rho_right < 0.0) {
    throw UnsupportedRegime("densities must be non-negative");
  }
  if (rho_right * p_.v > p_.mu2) {
    throw UnsupportedRegime("road-2 state above the second capacity");
  }
  q1_ = std::min(rho_left * p_.v, p_.mu1);
  q2_ = std::min(q1_, p_.mu2);
}

ExactSnapshot SupplyChainRiemann::evaluate(double t, double x_left,
                                           double x_right) const {
  ExactSnapshot out;
  out.road1 = PiecewiseProfile::constant(x_left, 0.0, rho_left_);
  const double front = std::min(p_.v * t, x_right);
  std::vector<PiecewiseProfile::Piece> road2;
  if (front > 0.0) road2.push_back({0.0, front, q2_ / p_.v});
  if (x_right > front) road2.push_back({front, x_right, rho_right_});
  out.road2 = PiecewiseProfile(std::move(road2));
  out.r = (q1_ - q2_) * t;
  return out;
}

}  // namespace nlb
