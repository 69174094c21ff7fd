#pragma once

#include <cstddef>
#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nlbuffer/characteristics.hpp"
#include "nlbuffer/limit_infinity.hpp"
#include "nlbuffer/model.hpp"
#include "nlbuffer/solver.hpp"

namespace nlb {

/// Solver for a validated scenario. exact_box has no stepping solver and
/// raises UnsupportedRegime here; run_scenario handles it.
std::unique_ptr<Solver> make_solver(const Scenario& s);

struct RunOptions {
  /// Store the characteristic speeds of every step (nonlocal and
  /// limit_infinity_case only).
  bool record_characteristics = false;
};

struct RunResult {
  Trajectory trajectory;
  std::optional<VelocityRecord> velocities;
};

/// Runs the scenario to its horizon with its snapshot plan. exact_box runs
/// are sampled from the closed-form solution on the same grid.
RunResult run_scenario(const Scenario& s, const RunOptions& options = {});

/// Closed-form solution when one is available: box data for the limit
/// system, Riemann data for the supply chain.
std::optional<ExactSnapshot> exact_reference(const Scenario& s, double t);

/// The closed-form profiles as cell averages on the scenario grid.
SimState sample_exact(const ExactSnapshot& exact, const RoadGrid& grid,
                      double t);

/// "%.17g".
std::string format_number(double value);

void write_profile_csv(const std::filesystem::path& path, const RoadGrid& grid,
                       Road road, std::span<const double> rho);
void write_buffer_csv(const std::filesystem::path& path,
                      std::span<const BufferSample> samples);

/// Writes <prefix>_road1_t<t>.csv and <prefix>_road2_t<t>.csv per snapshot
/// and the buffer history into out_dir. Returns the written paths.
std::vector<std::filesystem::path> run_command(
    const Scenario& s, const std::filesystem::path& out_dir);

/// dx * sum |a - b| over road-1 cells whose centers lie in [x0, x1].
double road1_l1(const RoadGrid& grid, std::span<const double> a,
                std::span<const double> b, double x0, double x1);

struct CompareOptions {
  std::vector<double> etas;
  /// local_herty, local_limit0, limit_infinity_case or exact_box.
  std::vector<ModelKind> references;
  /// Road-1 interval of the L1 distances; defaults to all of road 1.
  std::optional<double> interval_begin;
  std::optional<double> interval_end;
  bool descending = true;
};

struct ComparisonRow {
  std::string run;
  std::optional<double> eta;
  double r_final = 0.0;
  /// One entry per reference, in CompareOptions::references order.
  std::vector<double> l1;
};

struct ComparisonReport {
  std::vector<ModelKind> references;
  double interval_begin = 0.0;
  double interval_end = 0.0;
  /// Non-local rows sorted by eta, then one row per reference.
  std::vector<ComparisonRow> rows;
};

/// Runs the non-local scheme for every eta and each reference model on the
/// base scenario's grid and data, concurrently.
ComparisonReport compare_command(const Scenario& base,
                                 const CompareOptions& options);

/// Columns run,eta,r_T,l1_<reference>...
void write_comparison_csv(const std::filesystem::path& path,
                          const ComparisonReport& report);

struct ConvergenceRow {
  double dx = 0.0;
  double l1_error = 0.0;
  /// log2 of the error ratio to the previous (coarser) row; NaN on the first.
  double order = 0.0;
  /// Previous error over this one; NaN on the first row.
  double ratio = 0.0;
};

struct ConvergenceReport {
  /// "exact" or "finest".
  std::string reference;
  std::vector<ConvergenceRow> rows;
};

/// L1 error over both roads at the horizon for each dx, against the exact
/// solution when one exists, otherwise against the finest run (which must
/// refine every other grid by an integer factor). Rows sorted by dx
/// descending.
ConvergenceReport convergence_command(const Scenario& s,
                                      std::span<const double> dx_values);

void write_convergence_csv(const std::filesystem::path& path,
                           const ConvergenceReport& report);

/// Runs the scenario with recorded speeds and traces one curve per seed
/// from t = 0; negative x starts on road 1.
std::vector<CharTrajectory> trace_scenario(const Scenario& s,
                                           std::span<const double> seed_x,
                                           double tracer_dt);

/// One CSV (t,x) per seed: characteristic_<k>.csv.
std::vector<std::filesystem::path> characteristics_command(
    const Scenario& s, std::span<const double> seed_x, double tracer_dt,
    const std::filesystem::path& out_dir);

}  // namespace nlb
