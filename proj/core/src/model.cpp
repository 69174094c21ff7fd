#include "nlbuffer/model.hpp"

#include <algorithm>
#include <cmath>

#include "nlbuffer/errors.hpp"

namespace nlb {

double VelocityFn::operator()(double rho) const noexcept {
  return std::max(0.0, v_max * (1.0 - rho / rho_max));
}

double velocity_eval(const VelocityFn& v, double rho) noexcept {
  return v(rho);
}

double local_flux(const VelocityFn& v, double rho) noexcept {
  return rho * v(rho);
}

double demand(const VelocityFn& v, double rho) noexcept {
  const double sigma = v.critical_density();
  return rho <= sigma ? local_flux(v, rho) : local_flux(v, sigma);
}

double supply(const VelocityFn& v, double rho) noexcept {
  const double sigma = v.critical_density();
  return rho <= sigma ? local_flux(v, sigma) : local_flux(v, rho);
}

BufferBranch classify_buffer(double r, double r_max) noexcept {
  if (r <= kBufferTolerance) return BufferBranch::empty;
  if (r >= r_max - kBufferTolerance) return BufferBranch::full;
  return BufferBranch::partial;
}

double clamp_buffer(double r, double r_max) noexcept {
  return std::clamp(r, 0.0, r_max);
}

namespace {

std::size_t cell_count(double length, double dx, const char* road) {
  const double ratio = length / dx;
  const double cells = std::round(ratio);
  if (!(dx > 0.0) || cells < 1.0 || std::abs(ratio - cells) > 1e-9 * ratio) {
    throw NonCommensurateGrid(std::string(road) +
                              " length is not a positive multiple of dx");
  }
  return static_cast<std::size_t>(cells);
}

}  // namespace

std::size_t RoadGrid::cells1() const {
  return cell_count(-x_left, dx, "road 1");
}

std::size_t RoadGrid::cells2() const {
  return cell_count(x_right, dx, "road 2");
}

double RoadGrid::center1(std::size_t i) const noexcept {
  // Measured from the junction so that interfaces sit exactly on j*dx.
  const double n1 = std::round(-x_left / dx);
  return (static_cast<double>(i) - n1 + 0.5) * dx;
}

double RoadGrid::center2(std::size_t i) const noexcept {
  return (static_cast<double>(i) + 0.5) * dx;
}

void validate_grid(const RoadGrid& grid) {
  if (!(grid.dx > 0.0)) throw NonCommensurateGrid("dx must be positive");
  if (!(grid.x_left < 0.0) || !(grid.x_right > 0.0)) {
    throw NonCommensurateGrid("grid must satisfy x_left < 0 < x_right");
  }
  (void)grid.cells1();
  (void)grid.cells2();
}

PiecewiseProfile::PiecewiseProfile(std::vector<Piece> pieces)
    : pieces_(std::move(pieces)) {
  std::sort(pieces_.begin(), pieces_.end(),
            [](const Piece& a, const Piece& b) { return a.x0 < b.x0; });
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    if (!(pieces_[i].x1 > pieces_[i].x0)) {
      throw Error("profile piece must have x_start < x_end");
    }
    if (i > 0 && pieces_[i].x0 < pieces_[i - 1].x1) {
      throw Error("profile pieces overlap");
    }
  }
}

PiecewiseProfile PiecewiseProfile::constant(double x0, double x1,
                                            double value) {
  return PiecewiseProfile({{x0, x1, value}});
}

double PiecewiseProfile::value_at(double x) const noexcept {
  for (const auto& p : pieces_) {
    if (x >= p.x0 && x < p.x1) return p.value;
  }
  return 0.0;
}

double PiecewiseProfile::integral(double a, double b) const noexcept {
  double sum = 0.0;
  for (const auto& p : pieces_) {
    const double lo = std::max(a, p.x0);
    const double hi = std::min(b, p.x1);
    if (hi > lo) sum += p.value * (hi - lo);
  }
  return sum;
}

std::vector<double> PiecewiseProfile::cell_averages(double x_begin, double dx,
                                                    std::size_t n) const {
  std::vector<double> out(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double a = x_begin + static_cast<double>(i) * dx;
    out[i] = integral(a, a + dx) / dx;
  }
  return out;
}

double PiecewiseProfile::max_value() const noexcept {
  double m = 0.0;
  for (const auto& p : pieces_) m = std::max(m, p.value);
  return m;
}

double PiecewiseProfile::min_value() const noexcept {
  double m = 0.0;
  for (const auto& p : pieces_) m = std::min(m, p.value);
  return m;
}

double total_mass(const SimState& state, const RoadGrid& grid) {
  double sum = 0.0;
  for (double rho : state.rho1) sum += rho;
  for (double rho : state.rho2) sum += rho;
  return grid.dx * sum + state.r;
}

double l1_distance(std::span<const double> a, std::span<const double> b,
                   double dx) {
  if (a.size() != b.size()) {
    throw GridMismatch("l1_distance: arrays of different length (" +
                       std::to_string(a.size()) + " vs " +
                       std::to_string(b.size()) + ")");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += std::abs(a[i] - b[i]);
  return dx * sum;
}

std::string_view to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::nonlocal:
      return "nonlocal";
    case ModelKind::local_herty:
      return "local_herty";
    case ModelKind::local_limit0:
      return "local_limit0";
    case ModelKind::limit_infinity_case:
      return "limit_infinity_case";
    case ModelKind::supply_chain:
      return "supply_chain";
    case ModelKind::exact_box:
      return "exact_box";
  }
  return "unknown";
}

ModelKind model_kind_from_string(std::string_view name) {
  for (auto kind : {ModelKind::nonlocal, ModelKind::local_herty,
                    ModelKind::local_limit0, ModelKind::limit_infinity_case,
                    ModelKind::supply_chain, ModelKind::exact_box}) {
    if (name == to_string(kind)) return kind;
  }
  throw ValidationError("model", "unknown model '" + std::string(name) + "'");
}

std::string_view to_string(RightExtension ext) {
  return ext == RightExtension::zero ? "zero" : "constant_extrapolation";
}

RightExtension right_extension_from_string(std::string_view name) {
  if (name == "constant_extrapolation") {
    return RightExtension::constant_extrapolation;
  }
  if (name == "zero") return RightExtension::zero;
  throw ValidationError("right_extension",
                        "expected constant_extrapolation or zero");
}

double default_cfl_safety(ModelKind model) noexcept {
  return model == ModelKind::nonlocal ? 1.0 : 0.9;
}

double resolved_cfl_safety(const Scenario& s) noexcept {
  return s.cfl_safety.value_or(default_cfl_safety(s.model));
}

namespace {

void require(bool ok, const char* key, const std::string& what) {
  if (!ok) throw ValidationError(key, what);
}

void validate_velocity(const VelocityFn& v, const char* vmax_key,
                       const char* rhomax_key) {
  require(v.v_max > 0.0 && std::isfinite(v.v_max), vmax_key,
          "must be positive");
  require(v.rho_max > 0.0 && std::isfinite(v.rho_max), rhomax_key,
          "must be positive");
}

void validate_profile(const PiecewiseProfile& p, double upper,
                      const char* key) {
  for (const auto& piece : p.pieces()) {
    require(piece.value >= 0.0 && piece.value <= upper, key,
            "value " + std::to_string(piece.value) + " outside [0, " +
                std::to_string(upper) + "]");
  }
}

}  // namespace

void validate(const Scenario& s) {
  const bool processors = s.model == ModelKind::supply_chain;
  validate_velocity(s.v1, "v1.vmax", "v1.rhomax");
  validate_velocity(s.v2, "v2.vmax", "v2.rhomax");

  require(s.buffer.mu > 0.0 && std::isfinite(s.buffer.mu), "buffer.mu",
          "must be positive");
  require(s.buffer.r_max > 0.0, "buffer.rmax", "must be positive");
  require(s.buffer.r0 >= 0.0 && s.buffer.r0 <= s.buffer.r_max, "buffer.r0",
          "must lie in [0, rmax]");

  require(s.grid.dx > 0.0, "grid.dx", "must be positive");
  require(s.grid.x_left < 0.0, "grid.xL", "must be negative");
  require(s.grid.x_right > 0.0, "grid.xR", "must be positive");
  try {
    validate_grid(s.grid);
  } catch (const NonCommensurateGrid& e) {
    throw ValidationError("grid.dx", e.what());
  }

  if (s.model == ModelKind::nonlocal) {
    require(s.kernel.eta > 0.0, "kernel.eta", "must be positive");
    try {
      (void)build_discrete_kernel(s.kernel, s.grid.dx);
    } catch (const Error& e) {
      throw ValidationError("kernel.eta", e.what());
    }
  }

  if (processors) {
    require(s.processors.v > 0.0, "processors.v", "must be positive");
    require(s.processors.mu1 > 0.0, "processors.mu1", "must be positive");
    require(s.processors.mu2 > 0.0, "processors.mu2", "must be positive");
    validate_profile(s.init1, kInfinity, "init1");
    validate_profile(s.init2, kInfinity, "init2");
    require(s.left_boundary >= 0.0, "left_boundary_value",
            "must be non-negative");
  } else {
    validate_profile(s.init1, s.v1.rho_max, "init1");
    validate_profile(s.init2, s.v2.rho_max, "init2");
    require(s.left_boundary >= 0.0 && s.left_boundary <= s.v1.rho_max,
            "left_boundary_value", "must lie in [0, rho_max of road 1]");
  }

  require(s.horizon > 0.0 && std::isfinite(s.horizon), "T",
          "must be positive");
  if (s.cfl_safety) {
    require(*s.cfl_safety > 0.0 && *s.cfl_safety <= 1.0, "cfl_safety",
            "must lie in (0, 1]");
  }
  if (s.fixed_dt) require(*s.fixed_dt > 0.0, "dt", "must be positive");
  for (double t : s.outputs.snapshots) {
    require(t >= 0.0 && t <= s.horizon, "snapshots", "times must lie in [0, T]");
  }
}

SimState initial_state(const Scenario& s) {
  SimState state;
  const auto n1 = s.grid.cells1();
  const auto n2 = s.grid.cells2();
  const double dx = s.grid.dx;
  state.rho1 = s.init1.cell_averages(-static_cast<double>(n1) * dx, dx, n1);
  state.rho2 = s.init2.cell_averages(0.0, dx, n2);
  state.r = s.buffer.r0;
  state.t = 0.0;
  return state;
}

}  // namespace nlb
