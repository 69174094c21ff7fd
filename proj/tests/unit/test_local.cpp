#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "nlbuffer/errors.hpp"
#include "nlbuffer/local_solver.hpp"
#include "support.hpp"

namespace {

using nlb::BufferState;
using nlb::KernelKind;
using nlb::VelocityFn;

const VelocityFn kUnit{1.0, 1.0};
const VelocityFn kNarrow{1.0, 0.6};

TEST(Godunov, FluxValues) {
  EXPECT_DOUBLE_EQ(nlb::godunov_flux(kUnit, 0.75, 0.5), 0.25);
  EXPECT_DOUBLE_EQ(nlb::godunov_flux(kUnit, 0.3, 0.7), 0.21);
  for (double rho : {0.0, 0.1, 0.5, 0.8, 1.0}) {
    EXPECT_DOUBLE_EQ(nlb::godunov_flux(kUnit, rho, rho), nlb::local_flux(kUnit, rho));
  }
  // Upwind expansion into vacuum through the sonic point.
  EXPECT_DOUBLE_EQ(nlb::godunov_flux(kUnit, 0.9, 0.0), 0.25);
}

TEST(HertyCoupling, PartialBuffer) {
  const auto q = nlb::junction_coupling_herty(kUnit, kNarrow, 0.75, 0.5,
                                              BufferState{0.01, 0.15, nlb::kInfinity});
  EXPECT_DOUBLE_EQ(q.q1, 0.15);
  EXPECT_NEAR(q.q2, 1.0 / 12.0, 1e-15);
  EXPECT_NEAR(q.r_rate, 0.15 - 1.0 / 12.0, 1e-15);
  EXPECT_EQ(q.r_rate, q.q1 - q.q2);
}

TEST(HertyCoupling, SameFluxCounterexample) {
  const auto q = nlb::junction_coupling_herty(kUnit, kUnit, 0.8, 0.7,
                                              BufferState{0.0, 0.3, nlb::kInfinity});
  EXPECT_DOUBLE_EQ(q.q1, 0.25);
  EXPECT_NEAR(q.q2, 0.21, 1e-15);
  EXPECT_NEAR(q.r_rate, 0.04, 1e-15);
}

TEST(HertyCoupling, FullBufferCannotGrow) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const double rho1 = u(rng);
    const double rho2 = 0.6 * u(rng);
    const double mu = 0.5 * u(rng) + 1e-3;
    const auto q =
        nlb::junction_coupling_herty(kUnit, kNarrow, rho1, rho2, BufferState{1.0, mu, 1.0});
    EXPECT_LE(q.q1, q.q2 + 1e-15);
    EXPECT_LE(q.q1, nlb::supply(kNarrow, rho2) + 1e-15);
    EXPECT_LE(q.q1, mu);
    EXPECT_LE(q.q1, nlb::demand(kUnit, rho1) + 1e-15);
  }
}

TEST(Limit0Coupling, InitialCongestedState) {
  const auto q = nlb::junction_coupling_limit0(kUnit, kNarrow, 0.75, 0.5,
                                               BufferState{0.0, 0.15, nlb::kInfinity});
  EXPECT_NEAR(q.q1, 0.125, 1e-15);
  EXPECT_NEAR(q.q2, 0.1, 1e-15);
  EXPECT_NEAR(q.r_rate, 0.025, 1e-15);
}

TEST(Limit0Coupling, QuasiSteadyStates) {
  const double rho1 = 31.0 / 36.0;  // 0.861111
  const double rho2 = 0.516667;
  const auto q = nlb::junction_coupling_limit0(kUnit, kNarrow, rho1, rho2,
                                               BufferState{0.02, 0.15, nlb::kInfinity});
  EXPECT_NEAR(q.q1, 0.119599, 1e-5);
  EXPECT_NEAR(q.q2, 0.083333, 1e-5);
  EXPECT_NEAR(q.r_rate, 0.036266, 1e-5);

  const double jam = 0.5 * (1.0 + std::sqrt(0.6));  // rho (1 - rho) = 0.1
  const auto low = nlb::junction_coupling_limit0(kUnit, kNarrow, jam, 31.0 / 60.0,
                                                 BufferState{0.02, 0.1, nlb::kInfinity});
  EXPECT_NEAR(low.q1, 0.1, 1e-15);
  EXPECT_NEAR(low.q2, 1.0 / 12.0, 1e-12);
  EXPECT_NEAR(low.r_rate, 1.0 / 60.0, 1e-12);
}

nlb::LocalConfig config_from(const nlb::Scenario& s) {
  return {s.model == nlb::ModelKind::local_herty ? nlb::LocalCoupling::herty
                                                 : nlb::LocalCoupling::limit0,
          s.v1,
          s.v2,
          s.buffer,
          s.grid,
          s.left_boundary,
          s.right_extension,
          nlb::resolved_cfl_safety(s)};
}

TEST(LocalSolver, CflBound) {
  EXPECT_DOUBLE_EQ(nlb::local_cfl_max_dt(kUnit, VelocityFn{2.0, 0.5}, 0.01, 0.9), 0.0045);
  const auto s = nlb::testing::congested_junction(0.15, KernelKind::linear, 0.5, 0.01,
                                                  nlb::ModelKind::local_herty);
  nlb::LocalSolver solver(config_from(s), nlb::initial_state(s));
  EXPECT_DOUBLE_EQ(solver.max_dt(), 0.009);
  EXPECT_THROW(solver.step(0.0091), nlb::CflViolation);
}

TEST(LocalSolver, HertyJunctionFluxesStayConstant) {
  const auto s = nlb::testing::congested_junction(0.15, KernelKind::linear, 0.5, 0.01,
                                                  nlb::ModelKind::local_herty);
  nlb::LocalSolver solver(config_from(s), nlb::initial_state(s));
  while (solver.state().t < 1.0 - 1e-12) {
    const double dt = std::min(solver.max_dt(), 1.0 - solver.state().t);
    const auto rep = solver.step(dt);
    ASSERT_DOUBLE_EQ(rep.buffer_in, 0.15);
    ASSERT_NEAR(rep.buffer_out, 1.0 / 12.0, 1e-15);
  }
  EXPECT_NEAR(solver.state().r, 0.15 - 1.0 / 12.0, 1e-12);
}

TEST(LocalSolver, Limit0PlateauMatchesJamDensity) {
  auto s = nlb::testing::congested_junction(0.1, KernelKind::linear, 0.5, 0.005,
                                            nlb::ModelKind::local_limit0);
  nlb::LocalSolver solver(config_from(s), nlb::initial_state(s));
  nlb::run(solver, {1.0, {}, std::nullopt, {}});
  const double jam = 0.5 * (1.0 + std::sqrt(0.6));
  // The plateau sits just upstream of the junction.
  const auto& rho1 = solver.state().rho1;
  EXPECT_NEAR(rho1[rho1.size() - 20], jam, 2e-3);
  EXPECT_NEAR(solver.state().r, 1.0 / 60.0, 1e-3);
}

TEST(LocalSolver, SameFluxCounterexampleFillsBuffer) {
  nlb::Scenario s = nlb::testing::congested_junction(0.3, KernelKind::linear, 0.5, 0.01,
                                                     nlb::ModelKind::local_herty);
  s.v2 = {1.0, 1.0};
  s.init1 = nlb::PiecewiseProfile::constant(-3.0, 0.0, 0.8);
  s.init2 = nlb::PiecewiseProfile::constant(0.0, 1.0, 0.7);
  s.left_boundary = 0.8;
  nlb::LocalSolver solver(config_from(s), nlb::initial_state(s));
  double prev = 0.0;
  nlb::run(solver, {1.0, {}, std::nullopt, [&](const nlb::Solver& sv, const nlb::StepReport&) {
                      EXPECT_GT(sv.state().r, prev);
                      prev = sv.state().r;
                    }});
  EXPECT_NEAR(solver.state().r, 0.04, 1e-3);
}

class LocalProperties : public ::testing::TestWithParam<nlb::ModelKind> {};

TEST_P(LocalProperties, BoundsAndMassBalance) {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 6; ++trial) {
    nlb::Scenario s = nlb::testing::congested_junction(0.05 + 0.3 * u(rng), KernelKind::linear,
                                                       0.5, 0.05, GetParam());
    s.init1 = nlb::PiecewiseProfile({{-3.0, -1.5, u(rng)}, {-1.5, 0.0, u(rng)}});
    s.init2 = nlb::PiecewiseProfile({{0.0, 0.5, 0.6 * u(rng)}, {0.5, 1.0, 0.6 * u(rng)}});
    s.left_boundary = u(rng);
    nlb::LocalSolver solver(config_from(s), nlb::initial_state(s));
    for (int n = 0; n < 300; ++n) {
      const double before = nlb::total_mass(solver.state(), s.grid);
      const auto rep = solver.step(solver.max_dt());
      const double after = nlb::total_mass(solver.state(), s.grid);
      EXPECT_NEAR(after - before, rep.dt * (rep.inflow_left - rep.outflow_right), 1e-12);
      for (double v : solver.state().rho1) {
        ASSERT_GE(v, -1e-12);
        ASSERT_LE(v, 1.0 + 1e-12);
      }
      for (double v : solver.state().rho2) {
        ASSERT_GE(v, -1e-12);
        ASSERT_LE(v, 0.6 + 1e-12);
      }
    }
  }
}

INSTANTIATE_TEST_SUITE_P(Couplings, LocalProperties,
                         ::testing::Values(nlb::ModelKind::local_herty,
                                           nlb::ModelKind::local_limit0),
                         [](const auto& info) { return std::string(nlb::to_string(info.param)); });

}  // namespace
