#pragma once

#include "nlbuffer/model.hpp"
#include "nlbuffer/solver.hpp"

namespace nlb {

// Infinite look-ahead limit: V1 -> 0 and V2 -> v2(0), so traffic moves at
// the free speed of road 2 up to the capacities of the buffer and road 2.

struct LimitVelocities {
  double V1 = 0.0;
  double V2 = 0.0;
};

LimitVelocities limit_velocity_fields(const VelocityFn& v2) noexcept;

enum class LimitDiscriminant {
  case1,  // mu <= rho_max2 * v2(0): the buffer capacity binds first
  case2   // mu >  rho_max2 * v2(0): road 2 binds first, the buffer can fill
};

struct LimitCase {
  LimitDiscriminant discriminant;
  double v_free;
  /// Flux capacity of road 2 at the junction, rho_max2 * v2(0).
  double road2_capacity;
  double mu;
  double r_max;

  /// Cap of the road-1 flux min{rho v_free, cap} for the given load.
  double road1_cap(double r) const noexcept;
  /// Road-1 outflow and road-2 inflow at the junction.
  double outflow(double rho1_trace, double r) const noexcept;
  double inflow(double rho1_trace, double r) const noexcept;
};

LimitCase classify_limit(const VelocityFn& v2, const BufferSpec& buffer);

struct LimitConfig {
  VelocityFn v2;
  BufferSpec buffer;
  RoadGrid grid;
  double left_boundary = 0.0;
  double cfl_safety = 0.9;
};

/// Godunov scheme for the limit system. Road 1 carries the concave flux
/// min{rho v2(0), cap(r)} whose cap is re-evaluated each step, road 2 is pure
/// transport at v2(0).
class LimitInfinitySolver final : public Solver {
 public:
  LimitInfinitySolver(const LimitConfig& config, SimState initial);

  double max_dt() const override { return max_dt_; }
  StepReport step(double dt) override;

  const LimitCase& limit_case() const noexcept { return case_; }

 private:
  LimitConfig config_;
  LimitCase case_;
  double max_dt_;
};

struct SupplyChainConfig {
  ProcessorSpec processors;
  BufferSpec buffer;  // only r0 and r_max are used
  RoadGrid grid;
  double left_boundary = 0.0;
  double cfl_safety = 0.9;
};

/// Two processors with a buffer: fluxes min{rho v, mu1} and min{rho v, mu2}.
class SupplyChainSolver final : public Solver {
 public:
  SupplyChainSolver(const SupplyChainConfig& config, SimState initial);

  double max_dt() const override { return max_dt_; }
  StepReport step(double dt) override;

 private:
  SupplyChainConfig config_;
  double max_dt_;
};

struct ExactSnapshot {
  PiecewiseProfile road1;
  PiecewiseProfile road2;
  double r = 0.0;
};

/// Box datum rho_box on [a, b] (a < b < 0), empty road 2 and an empty,
/// unbounded buffer, evolved by the limit system.
struct BoxParams {
  double a;
  double b;
  double rho_box;
  double mu;
  double v_free;
  double rho_max2;
};

class ExactBoxSolution {
 public:
  enum class Regime {
    translation,          // sub-capacity: the box moves at v_free
    capped_rarefaction,   // case 1, rho_box > mu/v_free
    buffer_fill,          // case 2, rho_max2 < rho_box <= mu/v_free
    rarefaction_fill      // case 2, rho_box > mu/v_free
  };

  /// Throws UnsupportedRegime outside the enumerated cases.
  explicit ExactBoxSolution(const BoxParams& params);

  Regime regime() const noexcept { return regime_; }
  const BoxParams& params() const noexcept { return p_; }
  /// End of the validity interval (infinite for pure translation).
  double valid_until() const noexcept { return t_valid_; }

  /// road1 is restricted to (-inf, 0], road2 to [0, inf).
  ExactSnapshot evaluate(double t) const;

 private:
  BoxParams p_;
  Regime regime_;
  double t_valid_;
};

/// Box datum scenario -> parameters; UnsupportedRegime for other data.
BoxParams box_params_from(const Scenario& s);

/// Riemann data rho_left on road 1 and rho_right on road 2 for the
/// supply-chain model with an empty buffer. Requires rho_right <= mu2/v.
class SupplyChainRiemann {
 public:
  SupplyChainRiemann(const ProcessorSpec& processors, double rho_left,
                     double rho_right);

  ExactSnapshot evaluate(double t, double x_left, double x_right) const;
  double road1_outflow() const noexcept { return q1_; }
  double road2_inflow() const noexcept { return q2_; }

 private:
  ProcessorSpec p_;
  double rho_left_;
  double rho_right_;
  double q1_;
  double q2_;
};

}  // namespace nlb
