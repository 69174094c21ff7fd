#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "nlbuffer/errors.hpp"
#include "nlbuffer/limit_infinity.hpp"
#include "nlbuffer/studies.hpp"
#include "support.hpp"

namespace {

using nlb::BoxParams;
using nlb::ExactBoxSolution;
using nlb::PiecewiseProfile;

const BoxParams kBox{-5.0, -1.0 / 3.0, 1.0, 0.75, 1.0, 0.5};

double mass_of(const nlb::ExactSnapshot& s) {
  return s.road1.integral(-1e3, 0.0) + s.road2.integral(0.0, 1e3) + s.r;
}

TEST(LimitFields, FreeSpeedOnly) {
  const auto f = nlb::limit_velocity_fields({1.0, 0.5});
  EXPECT_EQ(f.V1, 0.0);
  EXPECT_EQ(f.V2, 1.0);
  EXPECT_EQ(nlb::limit_velocity_fields({1.0, 0.6}).V2, 1.0);
  EXPECT_EQ(nlb::limit_velocity_fields({2.5, 0.6}).V2, 2.5);
}

TEST(LimitCase, Discriminant) {
  const auto c2 = nlb::classify_limit({1.0, 0.5}, {0.75, 0.0, nlb::kInfinity});
  EXPECT_EQ(c2.discriminant, nlb::LimitDiscriminant::case2);
  EXPECT_EQ(c2.road2_capacity, 0.5);
  EXPECT_EQ(c2.road1_cap(0.3), 0.75);
  const auto c1 = nlb::classify_limit({1.0, 0.5}, {0.5, 0.0, nlb::kInfinity});
  EXPECT_EQ(c1.discriminant, nlb::LimitDiscriminant::case1);
  const auto full = nlb::classify_limit({1.0, 0.5}, {0.75, 0.15, 0.15});
  EXPECT_EQ(full.road1_cap(0.15), 0.5);
  EXPECT_EQ(full.inflow(1.0, 0.15), 0.5);
  EXPECT_EQ(full.inflow(0.2, 0.0), 0.2);
}

TEST(ExactBox, EarlyProfile) {
  const ExactBoxSolution exact(kBox);
  EXPECT_EQ(exact.regime(), ExactBoxSolution::Regime::rarefaction_fill);
  const auto s = exact.evaluate(1.0 / 6.0);
  ASSERT_EQ(s.road1.pieces().size(), 2u);
  EXPECT_NEAR(s.road1.pieces()[0].x0, -4.875, 1e-15);
  EXPECT_NEAR(s.road1.pieces()[0].x1, -1.0 / 3.0, 1e-15);
  EXPECT_EQ(s.road1.pieces()[0].value, 1.0);
  EXPECT_NEAR(s.road1.pieces()[1].x1, -1.0 / 6.0, 1e-15);
  EXPECT_EQ(s.road1.pieces()[1].value, 0.75);
  EXPECT_TRUE(s.road2.empty());
  EXPECT_EQ(s.r, 0.0);
}

TEST(ExactBox, BufferAtThree) {
  const auto s = ExactBoxSolution(kBox).evaluate(3.0);
  EXPECT_NEAR(s.r, 2.0 / 3.0, 1e-15);
  ASSERT_EQ(s.road2.pieces().size(), 1u);
  EXPECT_EQ(s.road2.pieces()[0].x0, 0.0);
  EXPECT_NEAR(s.road2.pieces()[0].x1, 8.0 / 3.0, 1e-15);
  EXPECT_EQ(s.road2.pieces()[0].value, 0.5);
  EXPECT_NEAR(s.road1.integral(-1.0 / 3.0, 0.0), 0.25, 1e-15);
}

TEST(ExactBox, SubCapacityTranslation) {
  const ExactBoxSolution exact({-2.0, -1.0, 0.3, 0.5, 1.0, 0.5});
  EXPECT_EQ(exact.regime(), ExactBoxSolution::Regime::translation);
  const auto s = exact.evaluate(0.5);
  ASSERT_EQ(s.road1.pieces().size(), 1u);
  EXPECT_DOUBLE_EQ(s.road1.pieces()[0].x0, -1.5);
  EXPECT_DOUBLE_EQ(s.road1.pieces()[0].x1, -0.5);
  const auto later = exact.evaluate(1.5);
  EXPECT_NEAR(later.road1.integral(-10, 0), 0.15, 1e-15);
  EXPECT_NEAR(later.road2.integral(0, 10), 0.15, 1e-15);
  EXPECT_EQ(later.r, 0.0);
}

TEST(ExactBox, FillRateBetweenCapacities) {
  // mu / v > rho > rho_max2: transport, then filling at v (rho - rho_max2).
  const ExactBoxSolution exact({-2.0, -1.0, 0.6, 0.75, 1.0, 0.5});
  EXPECT_EQ(exact.regime(), ExactBoxSolution::Regime::buffer_fill);
  EXPECT_EQ(exact.evaluate(1.0).r, 0.0);
  EXPECT_NEAR(exact.evaluate(1.5).r, 0.05, 1e-15);
  EXPECT_NEAR(exact.evaluate(2.0).r, 0.1, 1e-15);
  // Afterwards the buffer drains at the road-2 capacity.
  EXPECT_NEAR(exact.evaluate(2.1).r, 0.05, 1e-15);
  EXPECT_EQ(exact.evaluate(3.0).r, 0.0);
}

TEST(ExactBox, RejectsOtherData) {
  EXPECT_THROW(ExactBoxSolution({-1.0, 0.5, 1.0, 0.75, 1.0, 0.5}), nlb::UnsupportedRegime);
  EXPECT_THROW(ExactBoxSolution({-1.0, -2.0, 1.0, 0.75, 1.0, 0.5}), nlb::UnsupportedRegime);
  nlb::Scenario s = nlb::testing::box_datum(2.0, 0.01);
  s.init1 = PiecewiseProfile({{-5.0, -3.0, 1.0}, {-2.0, -1.0, 0.5}});
  EXPECT_THROW(nlb::box_params_from(s), nlb::UnsupportedRegime);
  s = nlb::testing::box_datum(2.0, 0.01);
  s.buffer.r0 = 0.1;
  EXPECT_THROW(nlb::box_params_from(s), nlb::UnsupportedRegime);
}

// Jumps of the road-1 profile (between consecutive pieces and at the outer
// edges) obey speed * [rho] = [f] with f = min{rho v, mu}.
void check_rankine_hugoniot(const BoxParams& p, double t) {
  const ExactBoxSolution exact(p);
  const double h = 1e-6;
  auto jumps = [&](double time) {
    struct Jump {
      double x, left, right;
    };
    std::vector<Jump> out;
    const nlb::ExactSnapshot snap = exact.evaluate(time);
    const auto& pieces = snap.road1.pieces();
    double prev_value = 0.0;
    double prev_end = -1e9;
    for (const auto& piece : pieces) {
      if (piece.x0 > prev_end) {
        if (prev_value != 0.0) out.push_back({prev_end, prev_value, 0.0});
        prev_value = 0.0;
      }
      out.push_back({piece.x0, prev_value, piece.value});
      prev_value = piece.value;
      prev_end = piece.x1;
    }
    if (prev_value != 0.0 && prev_end < 0.0) out.push_back({prev_end, prev_value, 0.0});
    return out;
  };
  const auto now = jumps(t);
  const auto next = jumps(t + h);
  ASSERT_EQ(now.size(), next.size());
  auto flux = [&](double rho) { return std::min(rho * p.v_free, p.mu); };
  for (std::size_t k = 0; k < now.size(); ++k) {
    const double speed = (next[k].x - now[k].x) / h;
    EXPECT_NEAR(speed * (now[k].right - now[k].left),
                flux(now[k].right) - flux(now[k].left), 1e-6)
        << "front at x = " << now[k].x << ", t = " << t;
  }
}

TEST(ExactBox, RankineHugoniot) {
  for (double t : {0.1, 0.3, 1.0, 3.0, 5.0}) check_rankine_hugoniot(kBox, t);
  check_rankine_hugoniot({-2.0, -1.0, 0.3, 0.5, 1.0, 0.5}, 0.5);
  check_rankine_hugoniot({-3.0, -1.0, 0.9, 0.4, 1.0, 0.5}, 0.7);
}

TEST(ExactBox, MassIsConstant) {
  const ExactBoxSolution exact(kBox);
  for (double t = 0.0; t < 56.0 / 9.0; t += 0.05) {
    EXPECT_NEAR(mass_of(exact.evaluate(t)), 14.0 / 3.0, 1e-12) << "t = " << t;
  }
  // Past exhaustion the plateau keeps draining; mass is still conserved.
  for (double t : {6.5, 8.0, 12.0}) {
    EXPECT_NEAR(mass_of(exact.evaluate(t)), 14.0 / 3.0, 1e-12) << "t = " << t;
  }
}

nlb::LimitConfig limit_config(const nlb::Scenario& s) {
  return {s.v2, s.buffer, s.grid, s.left_boundary, nlb::resolved_cfl_safety(s)};
}

TEST(LimitSolver, BoxBufferGrowth) {
  nlb::Scenario s = nlb::testing::box_datum(2.0, 0.01);
  s.model = nlb::ModelKind::limit_infinity_case;
  nlb::LimitInfinitySolver solver(limit_config(s), nlb::initial_state(s));
  nlb::run(solver, {3.0, {}, std::nullopt, {}});
  EXPECT_NEAR(solver.state().r, 2.0 / 3.0, 1e-2);
}

TEST(LimitSolver, SubCapacityTranslationKeepsBufferEmpty) {
  nlb::Scenario s = nlb::testing::box_datum(2.0, 0.01, -3.0, 3.0);
  s.model = nlb::ModelKind::limit_infinity_case;
  s.buffer.mu = 0.4;
  s.init1 = PiecewiseProfile::constant(-2.0, -1.0, 0.3);
  nlb::LimitInfinitySolver solver(limit_config(s), nlb::initial_state(s));
  EXPECT_EQ(solver.limit_case().discriminant, nlb::LimitDiscriminant::case1);
  nlb::run(solver, {1.5, {}, std::nullopt,
                    [](const nlb::Solver& sv, const nlb::StepReport&) {
                      ASSERT_EQ(sv.state().r, 0.0);
                    }});
  EXPECT_NEAR(nlb::total_mass(solver.state(), s.grid), 0.3, 1e-12);
}

TEST(LimitSolver, FillRateMatchesCapacityGap) {
  nlb::Scenario s = nlb::testing::box_datum(2.0, 0.01, -3.0, 3.0);
  s.model = nlb::ModelKind::limit_infinity_case;
  s.init1 = PiecewiseProfile::constant(-2.0, -1.0, 0.6);
  nlb::LimitInfinitySolver solver(limit_config(s), nlb::initial_state(s));
  const auto traj = nlb::run(solver, {1.8, {1.4, 1.8}, std::nullopt, {}});
  const double rate = (traj.snapshots[1].state.r - traj.snapshots[0].state.r) /
                      (traj.snapshots[1].state.t - traj.snapshots[0].state.t);
  EXPECT_NEAR(rate, 0.1, 1e-6);
}

TEST(LimitSolver, MassBalance) {
  nlb::Scenario s = nlb::testing::box_datum(2.0, 0.05);
  s.model = nlb::ModelKind::limit_infinity_case;
  nlb::LimitInfinitySolver solver(limit_config(s), nlb::initial_state(s));
  for (int n = 0; n < 300; ++n) {
    const double before = nlb::total_mass(solver.state(), s.grid);
    const auto rep = solver.step(solver.max_dt());
    const double after = nlb::total_mass(solver.state(), s.grid);
    if (rep.buffer_clamped) continue;
    EXPECT_NEAR(after - before, rep.dt * (rep.inflow_left - rep.outflow_right), 1e-12);
  }
}

nlb::Scenario riemann(double rho_l, double rho_r, double mu1, double mu2, double dx) {
  nlb::Scenario s;
  s.model = nlb::ModelKind::supply_chain;
  s.processors = {1.0, mu1, mu2};
  s.buffer = {1.0, 0.0, nlb::kInfinity};
  s.grid = {-2.0, 2.0, dx};
  s.init1 = PiecewiseProfile::constant(-2.0, 0.0, rho_l);
  s.init2 = PiecewiseProfile::constant(0.0, 2.0, rho_r);
  s.left_boundary = rho_l;
  s.horizon = 1.0;
  s.outputs = {{1.0}, "p", "b.csv"};
  return s;
}

TEST(SupplyChain, CapacityStateEmerges) {
  const auto s = riemann(0.9, 0.2, 0.5, 0.5, 0.005);
  const auto traj = nlb::run_scenario(s).trajectory;
  const auto& rho2 = traj.final_state.rho2;
  // Cells well inside [0, t v] carry mu2 / v.
  for (std::size_t m = 20; m < 150; ++m) EXPECT_NEAR(rho2[m], 0.5, 1e-9);
  EXPECT_NEAR(traj.final_state.r, 0.0, 1e-12);
  const nlb::SupplyChainRiemann exact(s.processors, 0.9, 0.2);
  EXPECT_DOUBLE_EQ(exact.road1_outflow(), 0.5);
  EXPECT_DOUBLE_EQ(exact.road2_inflow(), 0.5);
}

TEST(SupplyChain, SubCapacityTranslation) {
  const auto s = riemann(0.3, 0.2, 0.5, 0.5, 0.01);
  const auto traj = nlb::run_scenario(s).trajectory;
  const auto& rho2 = traj.final_state.rho2;
  EXPECT_NEAR(rho2[50], 0.3, 1e-9);
  EXPECT_NEAR(rho2[150], 0.2, 1e-9);
  EXPECT_EQ(traj.final_state.r, 0.0);
}

TEST(SupplyChain, BufferFillsAtFluxGap) {
  const auto s = riemann(0.7, 0.2, 1.0, 0.5, 0.01);
  const auto traj = nlb::run_scenario(s).trajectory;
  EXPECT_NEAR(traj.final_state.r, 0.2, 1e-12);
  const auto exact = nlb::exact_reference(s, 1.0);
  ASSERT_TRUE(exact.has_value());
  EXPECT_NEAR(exact->r, 0.2, 1e-15);
  EXPECT_EQ(exact->road2.value_at(0.5), 0.5);
  EXPECT_EQ(exact->road2.value_at(1.5), 0.2);
}

TEST(SupplyChain, MassBalance) {
  auto s = riemann(0.7, 0.2, 1.0, 0.5, 0.02);
  s.buffer.r0 = 0.1;
  nlb::SupplyChainSolver solver({s.processors, s.buffer, s.grid, s.left_boundary, 0.9},
                                nlb::initial_state(s));
  for (int n = 0; n < 200; ++n) {
    const double before = nlb::total_mass(solver.state(), s.grid);
    const auto rep = solver.step(solver.max_dt());
    const double after = nlb::total_mass(solver.state(), s.grid);
    EXPECT_NEAR(after - before, rep.dt * (rep.inflow_left - rep.outflow_right), 1e-12);
  }
}

TEST(SupplyChain, RejectsRoad2AboveCapacity) {
  EXPECT_THROW(nlb::SupplyChainRiemann({1.0, 1.0, 0.5}, 0.3, 0.6), nlb::UnsupportedRegime);
}

}  // namespace
