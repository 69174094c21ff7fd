#pragma once

#include "nlbuffer/model.hpp"
#include "nlbuffer/solver.hpp"

namespace nlb {

struct JunctionFluxes {
  double q1 = 0.0;      // road-1 outflow into the buffer
  double q2 = 0.0;      // buffer release onto road 2
  double r_rate = 0.0;  // q1 - q2
};

struct BufferState {
  double r = 0.0;
  double mu = 1.0;
  double r_max = kInfinity;
};

/// min{demand(left), supply(right)}.
double godunov_flux(const VelocityFn& v, double rho_left, double rho_right);

/// Local buffer coupling through the supply and demand of both roads.
JunctionFluxes junction_coupling_herty(const VelocityFn& v1,
                                       const VelocityFn& v2,
                                       double rho1_trace, double rho2_trace,
                                       const BufferState& buffer);

/// Local coupling obtained from the non-local one by concentrating the kernel
/// at the junction: the non-local velocity V2 is replaced by v2(rho2_trace).
JunctionFluxes junction_coupling_limit0(const VelocityFn& v1,
                                        const VelocityFn& v2,
                                        double rho1_trace, double rho2_trace,
                                        const BufferState& buffer);

enum class LocalCoupling { herty, limit0 };

struct LocalConfig {
  LocalCoupling coupling = LocalCoupling::limit0;
  VelocityFn v1;
  VelocityFn v2;
  BufferSpec buffer;
  RoadGrid grid;
  double left_boundary = 0.0;
  RightExtension right_extension = RightExtension::constant_extrapolation;
  double cfl_safety = 0.9;
};

/// dt = safety * dx / max(v1.v_max, v2.v_max).
double local_cfl_max_dt(const VelocityFn& v1, const VelocityFn& v2, double dx,
                        double safety);

/// First-order Godunov scheme on both roads; the junction interface uses the
/// selected coupling with the adjacent cell averages as traces.
class LocalSolver final : public Solver {
 public:
  LocalSolver(const LocalConfig& config, SimState initial);

  double max_dt() const override { return max_dt_; }
  StepReport step(double dt) override;

  JunctionFluxes junction() const;

 private:
  LocalConfig config_;
  double max_dt_;
};

}  // namespace nlb
