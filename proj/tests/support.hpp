#pragma once

#include <string>

#include "nlbuffer/model.hpp"

namespace nlb::testing {

/// Congested two-road setup: rho1 = 0.75 into rho2 = 0.5 with v1 = 1 - rho,
/// v2 = 1 - 5 rho / 3 and an unbounded, initially empty buffer.
inline Scenario congested_junction(double mu, KernelKind kind, double eta,
                                   double dx, ModelKind model = ModelKind::nonlocal) {
  Scenario s;
  s.model = model;
  s.kernel = {kind, eta};
  s.v1 = {1.0, 1.0};
  s.v2 = {1.0, 0.6};
  s.buffer = {mu, 0.0, kInfinity};
  s.grid = {-3.0, 1.0, dx};
  s.init1 = PiecewiseProfile::constant(-3.0, 0.0, 0.75);
  s.init2 = PiecewiseProfile::constant(0.0, 1.0, 0.5);
  s.left_boundary = 0.75;
  s.right_extension = RightExtension::constant_extrapolation;
  s.horizon = 1.0;
  s.outputs = {{1.0}, "profile", "buffer.csv"};
  return s;
}

/// Box rho = 1 on [a, -1/3] with v1 = 1 - rho, v2 = 1 - 2 rho, mu = 0.75 and
/// an empty road 2.
inline Scenario box_datum(double eta, double dx, double x_left = -6.0,
                          double x_right = 4.0, double a = -5.0,
                          double r_max = kInfinity, double horizon = 3.0) {
  Scenario s;
  s.model = ModelKind::nonlocal;
  s.kernel = {KernelKind::linear, eta};
  s.v1 = {1.0, 1.0};
  s.v2 = {1.0, 0.5};
  s.buffer = {0.75, 0.0, r_max};
  s.grid = {x_left, x_right, dx};
  s.init1 = PiecewiseProfile::constant(a, -1.0 / 3.0, 1.0);
  s.left_boundary = 0.0;
  s.right_extension = RightExtension::zero;
  s.horizon = horizon;
  s.outputs = {{horizon}, "profile", "buffer.csv"};
  return s;
}

}  // namespace nlb::testing
