#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "nlbuffer/kernel.hpp"

namespace nlb {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Linear velocity law v(rho) = v_max (1 - rho/rho_max), cut off at zero.
struct VelocityFn {
  double v_max = 1.0;
  double rho_max = 1.0;

  double operator()(double rho) const noexcept;
  /// Density of maximal flux, rho_max/2 for the linear law.
  double critical_density() const noexcept { return 0.5 * rho_max; }
  /// Sup-norm of v'.
  double slope_norm() const noexcept { return v_max / rho_max; }

  friend bool operator==(const VelocityFn&, const VelocityFn&) = default;
};

double velocity_eval(const VelocityFn& v, double rho) noexcept;
/// f(rho) = rho v(rho).
double local_flux(const VelocityFn& v, double rho) noexcept;
/// Sending function: f below the critical density, f(sigma) above.
double demand(const VelocityFn& v, double rho) noexcept;
/// Receiving function: f(sigma) below the critical density, f above.
double supply(const VelocityFn& v, double rho) noexcept;

struct BufferSpec {
  double mu = 1.0;
  double r0 = 0.0;
  double r_max = kInfinity;

  friend bool operator==(const BufferSpec&, const BufferSpec&) = default;
};

/// Loads within this distance of 0 or r_max switch the buffer branch.
inline constexpr double kBufferTolerance = 1e-12;

enum class BufferBranch { empty, partial, full };

BufferBranch classify_buffer(double r, double r_max) noexcept;
double clamp_buffer(double r, double r_max) noexcept;

/// Road 1 occupies [x_left, 0], road 2 occupies [0, x_right]. The junction
/// x = 0 is a cell interface on both roads.
struct RoadGrid {
  double x_left = -1.0;
  double x_right = 1.0;
  double dx = 0.01;

  std::size_t cells1() const;
  std::size_t cells2() const;
  /// Center of road-1 cell i, i = 0 at the left end.
  double center1(std::size_t i) const noexcept;
  double center2(std::size_t i) const noexcept;

  friend bool operator==(const RoadGrid&, const RoadGrid&) = default;
};

/// Throws NonCommensurateGrid unless both road lengths are positive integer
/// multiples of dx.
void validate_grid(const RoadGrid& grid);

struct SimState {
  std::vector<double> rho1;
  std::vector<double> rho2;
  double r = 0.0;
  double t = 0.0;
};

/// Piecewise-constant function; zero outside the listed pieces.
class PiecewiseProfile {
 public:
  struct Piece {
    double x0;
    double x1;
    double value;

    friend bool operator==(const Piece&, const Piece&) = default;
  };

  PiecewiseProfile() = default;
  /// Pieces must be non-degenerate and non-overlapping; they are sorted here.
  explicit PiecewiseProfile(std::vector<Piece> pieces);

  static PiecewiseProfile constant(double x0, double x1, double value);

  const std::vector<Piece>& pieces() const noexcept { return pieces_; }
  bool empty() const noexcept { return pieces_.empty(); }

  double value_at(double x) const noexcept;
  double integral(double a, double b) const noexcept;
  /// Averages over n cells of width dx starting at x_begin.
  std::vector<double> cell_averages(double x_begin, double dx,
                                    std::size_t n) const;
  double max_value() const noexcept;
  double min_value() const noexcept;

  friend bool operator==(const PiecewiseProfile&,
                         const PiecewiseProfile&) = default;

 private:
  std::vector<Piece> pieces_;
};

double total_mass(const SimState& state, const RoadGrid& grid);

/// dx * sum |a_j - b_j|; GridMismatch when the lengths differ.
double l1_distance(std::span<const double> a, std::span<const double> b,
                   double dx);

enum class ModelKind {
  nonlocal,
  local_herty,
  local_limit0,
  limit_infinity_case,
  supply_chain,
  exact_box
};

std::string_view to_string(ModelKind kind);
ModelKind model_kind_from_string(std::string_view name);

/// What the convolution stencils read beyond the right end of road 2.
enum class RightExtension { constant_extrapolation, zero };

std::string_view to_string(RightExtension ext);
RightExtension right_extension_from_string(std::string_view name);

/// Two processors with a buffer in between (supply-chain model).
struct ProcessorSpec {
  double v = 1.0;
  double mu1 = 1.0;
  double mu2 = 1.0;

  friend bool operator==(const ProcessorSpec&, const ProcessorSpec&) = default;
};

struct OutputPlan {
  std::vector<double> snapshots;
  std::string profile_csv;
  std::string buffer_csv;

  friend bool operator==(const OutputPlan&, const OutputPlan&) = default;
};

struct Scenario {
  ModelKind model = ModelKind::nonlocal;
  KernelSpec kernel;
  VelocityFn v1;
  VelocityFn v2;
  BufferSpec buffer;
  RoadGrid grid;
  PiecewiseProfile init1;
  PiecewiseProfile init2;
  double left_boundary = 0.0;
  RightExtension right_extension = RightExtension::constant_extrapolation;
  double horizon = 1.0;
  /// Unset means the model default: 1.0 for the non-local scheme, 0.9 for the
  /// Godunov-based ones.
  std::optional<double> cfl_safety;
  /// Fixed step instead of the CFL-derived one; checked against the bound.
  std::optional<double> fixed_dt;
  /// Only used by model = supply_chain.
  ProcessorSpec processors;
  OutputPlan outputs;

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

double default_cfl_safety(ModelKind model) noexcept;
double resolved_cfl_safety(const Scenario& s) noexcept;

/// Throws ValidationError naming the offending key.
void validate(const Scenario& s);

/// Cell averages of the initial profiles, r = r0, t = 0.
SimState initial_state(const Scenario& s);

}  // namespace nlb
