#include "nlbuffer/nonlocal_solver.hpp"

#include <algorithm>
#include <cmath>

#include "nlbuffer/errors.hpp"

namespace nlb {

namespace {

using Index = std::ptrdiff_t;

struct Stencil {
  std::span<const double> gamma;
  std::span<const double> tail;
  Index n_eta;
  std::span<const double> vel1;
  std::span<const double> vel2;
  double beyond;  // v2 value assumed past the right end of road 2

  Index n1() const { return static_cast<Index>(vel1.size()); }
  Index n2() const { return static_cast<Index>(vel2.size()); }

  // Road-1 cell at array index i (i = -1 is the ghost cell).
  double V1(Index i) const {
    const Index kmax = std::min(n1() - i - 2, n_eta - 1);
    double sum = 0.0;
    for (Index k = 0; k <= kmax; ++k) sum += gamma[k] * vel1[i + k + 1];
    return sum;
  }

  // Road-2 part of the velocity seen from road-1 cell with junction index j.
  double V2_from_road1(Index j) const {
    const Index k_first = -j - 1;
    if (k_first >= n_eta) return 0.0;
    const Index m_last = std::min(n2() - 1, n_eta + j);
    double sum = 0.0;
    for (Index m = 0; m <= m_last; ++m) sum += gamma[m - j - 1] * vel2[m];
    const Index k_tail = n2() - j - 1;
    if (k_tail < n_eta) sum += beyond * tail[k_tail];
    return sum;
  }

  double V2_from_road2(Index m) const {
    const Index kmax = std::min(n_eta - 1, n2() - m - 2);
    double sum = 0.0;
    for (Index k = 0; k <= kmax; ++k) sum += gamma[k] * vel2[m + k + 1];
    const Index k_tail = n2() - m - 1;
    if (k_tail < n_eta) sum += beyond * tail[k_tail];
    return sum;
  }
};

}  // namespace

NonlocalVelocities nonlocal_velocities(const SimState& state,
                                       const RoadGrid& grid,
                                       const DiscreteKernel& kernel,
                                       const VelocityFn& v1,
                                       const VelocityFn& v2,
                                       RightExtension ext) {
  if (std::abs(kernel.dx() - grid.dx) > 1e-12 * grid.dx) {
    throw GridMismatch("kernel cell width differs from grid dx");
  }
  const std::size_t n1 = state.rho1.size();
  const std::size_t n2 = state.rho2.size();
  if (n1 == 0 || n2 == 0) throw GridMismatch("both roads need cells");

  std::vector<double> vel1(n1);
  std::vector<double> vel2(n2);
  for (std::size_t i = 0; i < n1; ++i) vel1[i] = v1(state.rho1[i]);
  for (std::size_t m = 0; m < n2; ++m) vel2[m] = v2(state.rho2[m]);
  const double beyond =
      ext == RightExtension::zero ? v2(0.0) : vel2.back();

  const Stencil st{kernel.gamma(), kernel.tail(),
                   static_cast<Index>(kernel.n_eta()), vel1, vel2, beyond};

  NonlocalVelocities out;
  out.V1.resize(n1);
  out.V2_road1.resize(n1);
  out.V2_road2.resize(n2);
  const auto sn1 = static_cast<Index>(n1);
  for (Index i = 0; i < sn1; ++i) {
    out.V1[i] = st.V1(i);
    out.V2_road1[i] = st.V2_from_road1(i - sn1);
  }
  out.ghost_V1 = st.V1(-1);
  out.ghost_V2 = st.V2_from_road1(-sn1 - 1);
  for (Index m = 0; m < static_cast<Index>(n2); ++m) {
    out.V2_road2[m] = st.V2_from_road2(m);
  }
  return out;
}

double buffer_supply_at(const DiscreteKernel& kernel, double mu, double r,
                        double r_max, double rho_max2, double V2, long j) {
  const double capacity = mu * kernel.tail_from(-j - 1);
  if (classify_buffer(r, r_max) == BufferBranch::full) {
    return std::min(rho_max2 * V2, capacity);
  }
  return capacity;
}

std::vector<double> buffer_supply_profile(const DiscreteKernel& kernel,
                                          double mu, double r, double r_max,
                                          double rho_max2,
                                          const std::vector<double>& V2_road1) {
  const auto n1 = static_cast<long>(V2_road1.size());
  std::vector<double> sB(V2_road1.size());
  for (long i = 0; i < n1; ++i) {
    sB[i] = buffer_supply_at(kernel, mu, r, r_max, rho_max2, V2_road1[i],
                             i - n1);
  }
  return sB;
}

double buffer_demand(double r, double r_max, double mu, double rho1_junction,
                     double V2_junction) {
  if (classify_buffer(r, r_max) == BufferBranch::empty) {
    return std::min(rho1_junction * V2_junction, mu);
  }
  return mu;
}

NonlocalFields compute_fields(const SimState& state, const RoadGrid& grid,
                              const DiscreteKernel& kernel,
                              const VelocityFn& v1, const VelocityFn& v2,
                              const BufferSpec& buffer, RightExtension ext) {
  NonlocalVelocities vel =
      nonlocal_velocities(state, grid, kernel, v1, v2, ext);
  NonlocalFields f;
  f.sB = buffer_supply_profile(kernel, buffer.mu, state.r, buffer.r_max,
                               v2.rho_max, vel.V2_road1);
  const auto n1 = static_cast<long>(state.rho1.size());
  f.ghost_sB = buffer_supply_at(kernel, buffer.mu, state.r, buffer.r_max,
                                v2.rho_max, vel.ghost_V2, -n1 - 1);
  f.dB = buffer_demand(state.r, buffer.r_max, buffer.mu, state.rho1.back(),
                       vel.V2_road1.back());
  f.V1 = std::move(vel.V1);
  f.V2_road1 = std::move(vel.V2_road1);
  f.V2_road2 = std::move(vel.V2_road2);
  f.ghost_V1 = vel.ghost_V1;
  f.ghost_V2 = vel.ghost_V2;
  return f;
}

NonlocalFluxes numerical_fluxes(const SimState& state,
                                const NonlocalFields& fields,
                                double rho_max2, double left_boundary) {
  const std::size_t n1 = state.rho1.size();
  const std::size_t n2 = state.rho2.size();
  NonlocalFluxes out;
  out.F1.resize(n1);
  out.F2.resize(n2);
  auto road1 = [](double rho, double V1, double V2, double sB) {
    return rho * V1 + std::min(rho * V2, sB);
  };
  for (std::size_t i = 0; i < n1; ++i) {
    out.F1[i] = road1(state.rho1[i], fields.V1[i], fields.V2_road1[i],
                      fields.sB[i]);
  }
  out.F1_ghost = road1(left_boundary, fields.ghost_V1, fields.ghost_V2,
                       fields.ghost_sB);
  for (std::size_t m = 0; m < n2; ++m) {
    out.F2[m] = state.rho2[m] * fields.V2_road2[m];
  }
  out.junction_inflow =
      std::min(fields.dB, rho_max2 * fields.V2_junction());
  return out;
}

double cfl_max_dt(const DiscreteKernel& kernel, const VelocityFn& v1,
                  const VelocityFn& v2, double dx, double safety) {
  const double v_norm = std::max(v1.v_max, v2.v_max);
  const double slope_norm = std::max(v1.slope_norm(), v2.slope_norm());
  const double rho_norm = std::max(v1.rho_max, v2.rho_max);
  return safety * dx / (kernel.gamma(0) * slope_norm * rho_norm + 2.0 * v_norm);
}

NonlocalSolver::NonlocalSolver(const NonlocalConfig& config, SimState initial)
    : Solver(config.grid, std::move(initial)),
      config_(config),
      kernel_(config.kernel, config.grid.dx),
      max_dt_(cfl_max_dt(kernel_, config.v1, config.v2, config.grid.dx,
                         config.cfl_safety)) {
  if (state_.rho1.size() != grid_.cells1() ||
      state_.rho2.size() != grid_.cells2()) {
    throw GridMismatch("initial state does not match the grid");
  }
}

NonlocalFields NonlocalSolver::fields() const {
  return compute_fields(state_, grid_, kernel_, config_.v1, config_.v2,
                        config_.buffer, config_.right_extension);
}

StepReport NonlocalSolver::step(double dt) {
  check_dt(dt);
  const NonlocalFields f = fields();
  const NonlocalFluxes flux =
      numerical_fluxes(state_, f, config_.v2.rho_max, config_.left_boundary);

  const double lambda = dt / grid_.dx;
  auto& rho1 = state_.rho1;
  auto& rho2 = state_.rho2;
  for (std::size_t i = 0; i < rho1.size(); ++i) {
    const double left = i == 0 ? flux.F1_ghost : flux.F1[i - 1];
    rho1[i] -= lambda * (flux.F1[i] - left);
  }
  for (std::size_t m = 0; m < rho2.size(); ++m) {
    const double left = m == 0 ? flux.junction_inflow : flux.F2[m - 1];
    rho2[m] -= lambda * (flux.F2[m] - left);
  }

  StepReport report;
  report.dt = dt;
  report.inflow_left = flux.F1_ghost;
  report.outflow_right = flux.F2.back();
  report.buffer_in = flux.F1.back();
  report.buffer_out = flux.junction_inflow;
  const double r_new = state_.r + dt * (report.buffer_in - report.buffer_out);
  state_.r = clamp_buffer(r_new, config_.buffer.r_max);
  report.buffer_clamped = state_.r != r_new;
  state_.t += dt;
  return report;
}

}  // namespace nlb
