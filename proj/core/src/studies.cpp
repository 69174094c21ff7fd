#include "nlbuffer/studies.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>

#include "nlbuffer/errors.hpp"
#include "nlbuffer/local_solver.hpp"
#include "nlbuffer/nonlocal_solver.hpp"

namespace nlb {

namespace fs = std::filesystem;

std::unique_ptr<Solver> make_solver(const Scenario& s) {
  const double safety = resolved_cfl_safety(s);
  SimState init = initial_state(s);
  switch (s.model) {
    case ModelKind::nonlocal:
      return std::make_unique<NonlocalSolver>(
          NonlocalConfig{s.kernel, s.v1, s.v2, s.buffer, s.grid,
                         s.left_boundary, s.right_extension, safety},
          std::move(init));
    case ModelKind::local_herty:
    case ModelKind::local_limit0:
      return std::make_unique<LocalSolver>(
          LocalConfig{s.model == ModelKind::local_herty ? LocalCoupling::herty
                                                        : LocalCoupling::limit0,
                      s.v1, s.v2, s.buffer, s.grid, s.left_boundary,
                      s.right_extension, safety},
          std::move(init));
    case ModelKind::limit_infinity_case:
      return std::make_unique<LimitInfinitySolver>(
          LimitConfig{s.v2, s.buffer, s.grid, s.left_boundary, safety},
          std::move(init));
    case ModelKind::supply_chain:
      return std::make_unique<SupplyChainSolver>(
          SupplyChainConfig{s.processors, s.buffer, s.grid, s.left_boundary,
                            safety},
          std::move(init));
    case ModelKind::exact_box:
      break;
  }
  throw UnsupportedRegime("exact_box has no time-stepping solver");
}

SimState sample_exact(const ExactSnapshot& exact, const RoadGrid& grid,
                      double t) {
  const std::size_t n1 = grid.cells1();
  const std::size_t n2 = grid.cells2();
  SimState out;
  out.rho1 = exact.road1.cell_averages(-static_cast<double>(n1) * grid.dx,
                                       grid.dx, n1);
  out.rho2 = exact.road2.cell_averages(0.0, grid.dx, n2);
  out.r = exact.r;
  out.t = t;
  return out;
}

namespace {

RunResult run_exact_box(const Scenario& s) {
  const ExactBoxSolution exact(box_params_from(s));
  RunResult result;
  Trajectory& traj = result.trajectory;
  std::vector<double> times = s.outputs.snapshots;
  std::sort(times.begin(), times.end());
  for (double t : times) {
    traj.snapshots.push_back({t, sample_exact(exact.evaluate(t), s.grid, t)});
  }
  // Buffer history on the grid's natural time step.
  const double dt = s.grid.dx / exact.params().v_free;
  const auto count = static_cast<std::size_t>(std::ceil(s.horizon / dt - 1e-9));
  for (std::size_t k = 0; k <= count; ++k) {
    const double t = std::min(static_cast<double>(k) * dt, s.horizon);
    traj.buffer.push_back({t, exact.evaluate(t).r});
  }
  traj.final_state = sample_exact(exact.evaluate(s.horizon), s.grid, s.horizon);
  return result;
}

bool single_constant(const PiecewiseProfile& p, double x0, double x1,
                     double& value) {
  if (p.empty()) {
    value = 0.0;
    return true;
  }
  if (p.pieces().size() != 1) return false;
  const auto& piece = p.pieces().front();
  if (piece.x0 > x0 || piece.x1 < x1) return false;
  value = piece.value;
  return true;
}

}  // namespace

RunResult run_scenario(const Scenario& s, const RunOptions& options) {
  if (s.model == ModelKind::exact_box) {
    if (options.record_characteristics) {
      throw UnsupportedRegime("exact_box runs do not record speeds");
    }
    return run_exact_box(s);
  }

  std::unique_ptr<Solver> solver = make_solver(s);
  RunResult result;
  RunControl control{s.horizon, s.outputs.snapshots, s.fixed_dt, {}};

  if (options.record_characteristics) {
    std::function<CharSpeeds(const Solver&)> speeds;
    if (s.model == ModelKind::nonlocal) {
      speeds = [](const Solver& base) {
        const auto& ns = static_cast<const NonlocalSolver&>(base);
        return char_speeds(ns.state(), ns.fields());
      };
    } else if (s.model == ModelKind::limit_infinity_case) {
      speeds = [](const Solver& base) {
        const auto& ls = static_cast<const LimitInfinitySolver&>(base);
        const LimitCase& c = ls.limit_case();
        return limit_char_speeds(ls.state(), c.v_free,
                                 c.road1_cap(ls.state().r));
      };
    } else {
      throw UnsupportedRegime(
          "characteristics are defined for nonlocal and limit_infinity_case");
    }
    result.velocities.emplace(s.grid);
    VelocityRecord& record = *result.velocities;
    record.append(solver->state().t, speeds(*solver));
    control.observer = [&record, speeds](const Solver& sv, const StepReport&) {
      record.append(sv.state().t, speeds(sv));
    };
  }

  result.trajectory = run(*solver, control);
  return result;
}

std::optional<ExactSnapshot> exact_reference(const Scenario& s, double t) {
  if (s.model == ModelKind::exact_box ||
      s.model == ModelKind::limit_infinity_case) {
    if (s.left_boundary != 0.0) return std::nullopt;
    try {
      const BoxParams p = box_params_from(s);
      if (p.a < s.grid.x_left) return std::nullopt;
      return ExactBoxSolution(p).evaluate(t);
    } catch (const UnsupportedRegime&) {
      return std::nullopt;
    }
  }
  if (s.model == ModelKind::supply_chain) {
    double left = 0.0;
    double right = 0.0;
    if (!single_constant(s.init1, s.grid.x_left, 0.0, left) ||
        !single_constant(s.init2, 0.0, s.grid.x_right, right)) {
      return std::nullopt;
    }
    if (s.left_boundary != left || s.buffer.r0 != 0.0) return std::nullopt;
    try {
      const SupplyChainRiemann riemann(s.processors, left, right);
      ExactSnapshot snap = riemann.evaluate(t, s.grid.x_left, s.grid.x_right);
      if (snap.r > s.buffer.r_max) return std::nullopt;
      return snap;
    } catch (const UnsupportedRegime&) {
      return std::nullopt;
    }
  }
  return std::nullopt;
}

std::string format_number(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

namespace {

std::ofstream open_output(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  return out;
}

std::string short_number(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", value);
  return buf;
}

}  // namespace

void write_profile_csv(const fs::path& path, const RoadGrid& grid, Road road,
                       std::span<const double> rho) {
  std::ofstream out = open_output(path);
  out << "x,rho\n";
  const std::size_t n1 = road == Road::one ? rho.size() : 0;
  for (std::size_t i = 0; i < rho.size(); ++i) {
    const double x = road == Road::one
                         ? (static_cast<double>(i) - static_cast<double>(n1) + 0.5) * grid.dx
                         : grid.center2(i);
    out << format_number(x) << ',' << format_number(rho[i]) << '\n';
  }
}

void write_buffer_csv(const fs::path& path,
                      std::span<const BufferSample> samples) {
  std::ofstream out = open_output(path);
  out << "t,r\n";
  for (const BufferSample& s : samples) {
    out << format_number(s.t) << ',' << format_number(s.r) << '\n';
  }
}

std::vector<fs::path> run_command(const Scenario& s, const fs::path& out_dir) {
  const RunResult result = run_scenario(s);
  std::vector<fs::path> written;
  for (const Snapshot& snap : result.trajectory.snapshots) {
    const std::string stem =
        s.outputs.profile_csv + "_road%d_t" + short_number(snap.requested_t) + ".csv";
    for (Road road : {Road::one, Road::two}) {
      std::string name = stem;
      name.replace(name.find("%d"), 2, road == Road::one ? "1" : "2");
      const fs::path path = out_dir / name;
      write_profile_csv(path, s.grid, road,
                        road == Road::one ? snap.state.rho1 : snap.state.rho2);
      written.push_back(path);
    }
  }
  const fs::path buffer_path = out_dir / s.outputs.buffer_csv;
  write_buffer_csv(buffer_path, result.trajectory.buffer);
  written.push_back(buffer_path);
  return written;
}

double road1_l1(const RoadGrid& grid, std::span<const double> a,
                std::span<const double> b, double x0, double x1) {
  if (a.size() != b.size()) throw GridMismatch("road-1 arrays differ in size");
  const std::size_t n1 = a.size();
  double sum = 0.0;
  for (std::size_t i = 0; i < n1; ++i) {
    const double x =
        (static_cast<double>(i) - static_cast<double>(n1) + 0.5) * grid.dx;
    if (x >= x0 && x <= x1) sum += std::abs(a[i] - b[i]);
  }
  return grid.dx * sum;
}

ComparisonReport compare_command(const Scenario& base,
                                 const CompareOptions& options) {
  ComparisonReport report;
  report.references = options.references;
  report.interval_begin = options.interval_begin.value_or(base.grid.x_left);
  report.interval_end = options.interval_end.value_or(0.0);

  auto final_state = [](Scenario s) {
    s.outputs.snapshots = {s.horizon};
    return run_scenario(s).trajectory.final_state;
  };

  std::vector<double> etas = options.etas;
  std::sort(etas.begin(), etas.end());
  if (options.descending) std::reverse(etas.begin(), etas.end());

  std::vector<std::future<SimState>> nonlocal_runs;
  for (double eta : etas) {
    Scenario s = base;
    s.model = ModelKind::nonlocal;
    s.kernel.eta = eta;
    validate(s);
    nonlocal_runs.push_back(std::async(std::launch::async, final_state, s));
  }
  std::vector<std::future<SimState>> reference_runs;
  for (ModelKind kind : options.references) {
    if (kind == ModelKind::nonlocal) {
      throw ValidationError("references", "the non-local model is not a reference");
    }
    Scenario s = base;
    s.model = kind;
    s.cfl_safety.reset();
    validate(s);
    reference_runs.push_back(std::async(std::launch::async, final_state, s));
  }

  std::vector<SimState> refs;
  for (auto& f : reference_runs) refs.push_back(f.get());

  auto row_for = [&](std::string name, std::optional<double> eta,
                     const SimState& state) {
    ComparisonRow row{std::move(name), eta, state.r, {}};
    for (const SimState& ref : refs) {
      row.l1.push_back(road1_l1(base.grid, state.rho1, ref.rho1,
                                report.interval_begin, report.interval_end));
    }
    return row;
  };
  for (std::size_t k = 0; k < etas.size(); ++k) {
    report.rows.push_back(row_for("nonlocal", etas[k], nonlocal_runs[k].get()));
  }
  for (std::size_t k = 0; k < refs.size(); ++k) {
    report.rows.push_back(
        row_for(std::string(to_string(options.references[k])), std::nullopt, refs[k]));
  }
  return report;
}

void write_comparison_csv(const fs::path& path, const ComparisonReport& report) {
  std::ofstream out = open_output(path);
  out << "run,eta,r_T";
  for (ModelKind k : report.references) out << ",l1_" << to_string(k);
  out << '\n';
  for (const ComparisonRow& row : report.rows) {
    out << row.run << ',' << (row.eta ? format_number(*row.eta) : std::string())
        << ',' << format_number(row.r_final);
    for (double d : row.l1) out << ',' << format_number(d);
    out << '\n';
  }
}

namespace {

/// Averages a fine array onto a grid `factor` times coarser.
std::vector<double> coarsen(std::span<const double> fine, std::size_t factor) {
  std::vector<double> out(fine.size() / factor, 0.0);
  for (std::size_t i = 0; i < out.size(); ++i) {
    double sum = 0.0;
    for (std::size_t k = 0; k < factor; ++k) sum += fine[i * factor + k];
    out[i] = sum / static_cast<double>(factor);
  }
  return out;
}

double network_l1(const SimState& a, const SimState& b, double dx) {
  return l1_distance(a.rho1, b.rho1, dx) + l1_distance(a.rho2, b.rho2, dx);
}

}  // namespace

ConvergenceReport convergence_command(const Scenario& s,
                                      std::span<const double> dx_values) {
  if (dx_values.empty()) throw ValidationError("dx", "need at least one dx");
  std::vector<double> dxs(dx_values.begin(), dx_values.end());
  std::sort(dxs.begin(), dxs.end(), std::greater<>());

  std::vector<Scenario> scenarios;
  for (double dx : dxs) {
    Scenario c = s;
    c.grid.dx = dx;
    c.fixed_dt.reset();
    c.outputs.snapshots = {c.horizon};
    validate(c);
    scenarios.push_back(std::move(c));
  }
  std::vector<std::future<SimState>> runs;
  for (const Scenario& c : scenarios) {
    runs.push_back(std::async(std::launch::async, [c] {
      return run_scenario(c).trajectory.final_state;
    }));
  }
  std::vector<SimState> finals;
  for (auto& f : runs) finals.push_back(f.get());

  ConvergenceReport report;
  const std::optional<ExactSnapshot> exact = exact_reference(s, s.horizon);
  report.reference = exact ? "exact" : "finest";
  const SimState& finest = finals.back();
  const double dx_fine = dxs.back();
  for (std::size_t k = 0; k < dxs.size(); ++k) {
    double err;
    if (exact) {
      err = network_l1(finals[k], sample_exact(*exact, scenarios[k].grid, s.horizon),
                       dxs[k]);
    } else {
      const double ratio = dxs[k] / dx_fine;
      const double factor = std::round(ratio);
      if (std::abs(ratio - factor) > 1e-9 * ratio) {
        throw GridMismatch("dx = " + format_number(dxs[k]) +
                           " is not a multiple of the finest dx");
      }
      const auto f = static_cast<std::size_t>(factor);
      SimState ref;
      ref.rho1 = coarsen(finest.rho1, f);
      ref.rho2 = coarsen(finest.rho2, f);
      err = network_l1(finals[k], ref, dxs[k]);
    }
    ConvergenceRow row{dxs[k], err, std::nan(""), std::nan("")};
    if (k > 0) {
      const ConvergenceRow& prev = report.rows.back();
      row.ratio = prev.l1_error / err;
      row.order = std::log(row.ratio) / std::log(prev.dx / dxs[k]);
    }
    report.rows.push_back(row);
  }
  return report;
}

void write_convergence_csv(const fs::path& path,
                           const ConvergenceReport& report) {
  std::ofstream out = open_output(path);
  out << "dx,l1_error,order\n";
  for (const ConvergenceRow& row : report.rows) {
    out << format_number(row.dx) << ',' << format_number(row.l1_error) << ','
        << (std::isnan(row.order) ? std::string() : format_number(row.order))
        << '\n';
  }
}

std::vector<CharTrajectory> trace_scenario(const Scenario& s,
                                           std::span<const double> seed_x,
                                           double tracer_dt) {
  Scenario c = s;
  c.outputs.snapshots = {c.horizon};
  const RunResult result = run_scenario(c, RunOptions{true});
  std::vector<CharSeed> seeds;
  for (double x : seed_x) {
    seeds.push_back({0.0, x, x < 0.0 ? Road::one : Road::two});
  }
  return trace_characteristics(*result.velocities, seeds, tracer_dt, c.horizon);
}

std::vector<fs::path> characteristics_command(const Scenario& s,
                                              std::span<const double> seed_x,
                                              double tracer_dt,
                                              const fs::path& out_dir) {
  const auto curves = trace_scenario(s, seed_x, tracer_dt);
  std::vector<fs::path> written;
  for (std::size_t k = 0; k < curves.size(); ++k) {
    const fs::path path = out_dir / ("characteristic_" + std::to_string(k) + ".csv");
    std::ofstream out = open_output(path);
    out << "t,x\n";
    for (std::size_t m = 0; m < curves[k].t.size(); ++m) {
      out << format_number(curves[k].t[m]) << ',' << format_number(curves[k].x[m])
          << '\n';
    }
    written.push_back(path);
  }
  return written;
}

}  // namespace nlb
