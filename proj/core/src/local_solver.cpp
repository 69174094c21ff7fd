#include "nlbuffer/local_solver.hpp"

#include <algorithm>

#include "nlbuffer/errors.hpp"

namespace nlb {

double godunov_flux(const VelocityFn& v, double rho_left, double rho_right) {
  return std::min(demand(v, rho_left), supply(v, rho_right));
}

JunctionFluxes junction_coupling_herty(const VelocityFn& v1,
                                       const VelocityFn& v2,
                                       double rho1_trace, double rho2_trace,
                                       const BufferState& buffer) {
  const double d1 = demand(v1, rho1_trace);
  const double s2 = supply(v2, rho2_trace);
  const BufferBranch branch = classify_buffer(buffer.r, buffer.r_max);
  const double sB =
      branch == BufferBranch::full ? std::min(s2, buffer.mu) : buffer.mu;
  const double dB =
      branch == BufferBranch::empty ? std::min(d1, buffer.mu) : buffer.mu;

  JunctionFluxes out;
  out.q1 = std::min(sB, d1);
  out.q2 = std::min(dB, s2);
  out.r_rate = out.q1 - out.q2;
  return out;
}

JunctionFluxes junction_coupling_limit0(const VelocityFn& /*v1*/,
                                        const VelocityFn& v2,
                                        double rho1_trace, double rho2_trace,
                                        const BufferState& buffer) {
  const double speed2 = v2(rho2_trace);
  const double arriving = rho1_trace * speed2;
  const double receivable = v2.rho_max * speed2;
  const BufferBranch branch = classify_buffer(buffer.r, buffer.r_max);
  const double sB =
      branch == BufferBranch::full ? std::min(receivable, buffer.mu) : buffer.mu;
  const double dB =
      branch == BufferBranch::empty ? std::min(arriving, buffer.mu) : buffer.mu;

  JunctionFluxes out;
  out.q1 = std::min(sB, arriving);
  out.q2 = std::min(dB, receivable);
  out.r_rate = out.q1 - out.q2;
  return out;
}

double local_cfl_max_dt(const VelocityFn& v1, const VelocityFn& v2, double dx,
                        double safety) {
  return safety * dx / std::max(v1.v_max, v2.v_max);
}

LocalSolver::LocalSolver(const LocalConfig& config, SimState initial)
    : Solver(config.grid, std::move(initial)),
      config_(config),
      max_dt_(local_cfl_max_dt(config.v1, config.v2, config.grid.dx,
                               config.cfl_safety)) {
  if (state_.rho1.size() != grid_.cells1() ||
      state_.rho2.size() != grid_.cells2()) {
    throw GridMismatch("initial state does not match the grid");
  }
}

JunctionFluxes LocalSolver::junction() const {
  const BufferState b{state_.r, config_.buffer.mu, config_.buffer.r_max};
  const double rho1 = state_.rho1.back();
  const double rho2 = state_.rho2.front();
  return config_.coupling == LocalCoupling::herty
             ? junction_coupling_herty(config_.v1, config_.v2, rho1, rho2, b)
             : junction_coupling_limit0(config_.v1, config_.v2, rho1, rho2, b);
}

StepReport LocalSolver::step(double dt) {
  check_dt(dt);
  const VelocityFn& v1 = config_.v1;
  const VelocityFn& v2 = config_.v2;
  auto& rho1 = state_.rho1;
  auto& rho2 = state_.rho2;
  const std::size_t n1 = rho1.size();
  const std::size_t n2 = rho2.size();

  const JunctionFluxes q = junction();

  // F1[i]: right interface of road-1 cell i; the last one is the junction.
  std::vector<double> F1(n1);
  for (std::size_t i = 0; i + 1 < n1; ++i) {
    F1[i] = godunov_flux(v1, rho1[i], rho1[i + 1]);
  }
  F1[n1 - 1] = q.q1;
  const double F1_left = godunov_flux(v1, config_.left_boundary, rho1[0]);

  std::vector<double> F2(n2);
  for (std::size_t m = 0; m + 1 < n2; ++m) {
    F2[m] = godunov_flux(v2, rho2[m], rho2[m + 1]);
  }
  const double ghost_right =
      config_.right_extension == RightExtension::zero ? 0.0 : rho2[n2 - 1];
  F2[n2 - 1] = godunov_flux(v2, rho2[n2 - 1], ghost_right);

  const double lambda = dt / grid_.dx;
  for (std::size_t i = 0; i < n1; ++i) {
    rho1[i] -= lambda * (F1[i] - (i == 0 ? F1_left : F1[i - 1]));
  }
  for (std::size_t m = 0; m < n2; ++m) {
    rho2[m] -= lambda * (F2[m] - (m == 0 ? q.q2 : F2[m - 1]));
  }

  StepReport report;
  report.dt = dt;
  report.inflow_left = F1_left;
  report.outflow_right = F2[n2 - 1];
  report.buffer_in = q.q1;
  report.buffer_out = q.q2;
  const double r_new = state_.r + dt * (q.q1 - q.q2);
  state_.r = clamp_buffer(r_new, config_.buffer.r_max);
  report.buffer_clamped = state_.r != r_new;
  state_.t += dt;
  return report;
}

}  // namespace nlb
