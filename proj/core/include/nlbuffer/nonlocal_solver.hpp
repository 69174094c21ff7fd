#pragma once

#include <cstddef>
#include <vector>

#include "nlbuffer/kernel.hpp"
#include "nlbuffer/model.hpp"
#include "nlbuffer/solver.hpp"

namespace nlb {

/// Non-local terms of the upwind scheme for one time level.
///
/// Road-1 arrays are indexed from the left end of road 1 (array index i is
/// the cell with junction-relative index j = i - n1, so the last entry is the
/// junction-adjacent cell j = -1). The `ghost_*` members belong to the
/// Dirichlet cell left of road 1.
struct NonlocalFields {
  std::vector<double> V1;        // road 1
  std::vector<double> V2_road1;  // road 1
  std::vector<double> V2_road2;  // road 2
  std::vector<double> sB;        // road 1
  double dB = 0.0;
  double ghost_V1 = 0.0;
  double ghost_V2 = 0.0;
  double ghost_sB = 0.0;

  /// V2 at the junction-adjacent road-1 cell.
  double V2_junction() const { return V2_road1.back(); }
};

struct NonlocalVelocities {
  std::vector<double> V1;
  std::vector<double> V2_road1;
  std::vector<double> V2_road2;
  double ghost_V1 = 0.0;
  double ghost_V2 = 0.0;
};

/// Discrete convolutions of the velocity laws. Sums run in ascending kernel
/// index; stencil cells past the right end of road 2 contribute through one
/// tail-sum term according to `ext`. GridMismatch if kernel.dx() is not the
/// grid width.
NonlocalVelocities nonlocal_velocities(const SimState& state,
                                       const RoadGrid& grid,
                                       const DiscreteKernel& kernel,
                                       const VelocityFn& v1,
                                       const VelocityFn& v2,
                                       RightExtension ext);

/// Buffer supply seen from every road-1 cell: mu times the kernel mass lying
/// beyond the junction, capped by rho_max2 * V2 when the buffer is full.
std::vector<double> buffer_supply_profile(const DiscreteKernel& kernel,
                                          double mu, double r, double r_max,
                                          double rho_max2,
                                          const std::vector<double>& V2_road1);

/// Supply at a single road-1 cell with junction-relative index j < 0.
double buffer_supply_at(const DiscreteKernel& kernel, double mu, double r,
                        double r_max, double rho_max2, double V2, long j);

/// mu while the buffer holds vehicles, otherwise limited by the arriving flow
/// rho1_junction * V2_junction.
double buffer_demand(double r, double r_max, double mu, double rho1_junction,
                     double V2_junction);

NonlocalFields compute_fields(const SimState& state, const RoadGrid& grid,
                              const DiscreteKernel& kernel,
                              const VelocityFn& v1, const VelocityFn& v2,
                              const BufferSpec& buffer, RightExtension ext);

struct NonlocalFluxes {
  /// F1[i] is the flux through the right interface of road-1 cell i.
  std::vector<double> F1;
  /// Flux through the left boundary, from the Dirichlet ghost cell.
  double F1_ghost = 0.0;
  /// F2[m] is the flux through the right interface of road-2 cell m.
  std::vector<double> F2;
  /// Inflow onto road 2 at the junction, min{dB, rho_max2 V2(-1)}.
  double junction_inflow = 0.0;
};

NonlocalFluxes numerical_fluxes(const SimState& state,
                                const NonlocalFields& fields,
                                double rho_max2, double left_boundary);

/// dt = safety * dx / (gamma_0 |v'| |rho| + 2 |v|) with the norms taken over
/// both roads.
double cfl_max_dt(const DiscreteKernel& kernel, const VelocityFn& v1,
                  const VelocityFn& v2, double dx, double safety);

struct NonlocalConfig {
  KernelSpec kernel;
  VelocityFn v1;
  VelocityFn v2;
  BufferSpec buffer;
  RoadGrid grid;
  double left_boundary = 0.0;
  RightExtension right_extension = RightExtension::constant_extrapolation;
  double cfl_safety = 1.0;
};

class NonlocalSolver final : public Solver {
 public:
  NonlocalSolver(const NonlocalConfig& config, SimState initial);

  double max_dt() const override { return max_dt_; }
  StepReport step(double dt) override;

  const DiscreteKernel& kernel() const noexcept { return kernel_; }
  const NonlocalConfig& config() const noexcept { return config_; }
  /// Fields evaluated on the current state.
  NonlocalFields fields() const;

 private:
  NonlocalConfig config_;
  DiscreteKernel kernel_;
  double max_dt_;
};

}  // namespace nlb
