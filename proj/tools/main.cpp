#include <cstdio>
#include <exception>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "nlbuffer/errors.hpp"
#include "nlbuffer/scenario_io.hpp"
#include "nlbuffer/studies.hpp"

namespace fs = std::filesystem;

namespace {

struct Common {
  std::string config;
  std::string out = ".";
};

void add_common(CLI::App* cmd, Common& common) {
  cmd->add_option("--config", common.config, "Scenario JSON file")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--out", common.out, "Output directory")
      ->capture_default_str();
}

void report(const std::vector<fs::path>& files) {
  for (const auto& f : files) std::printf("wrote %s\n", f.string().c_str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-road traffic network with a junction buffer"};
  app.require_subcommand(1);

  Common run_opts;
  CLI::App* run_cmd = app.add_subcommand("run", "Run one scenario and write CSV output");
  add_common(run_cmd, run_opts);

  Common cmp_opts;
  std::vector<double> etas;
  std::vector<std::string> references{"local_limit0"};
  std::optional<double> interval_begin;
  std::optional<double> interval_end;
  std::string order = "desc";
  CLI::App* cmp_cmd = app.add_subcommand(
      "compare", "Sweep the non-local range against reference models");
  add_common(cmp_cmd, cmp_opts);
  cmp_cmd->add_option("--eta", etas, "Non-local range (repeatable)")->required();
  cmp_cmd->add_option("--reference", references,
                      "local_herty, local_limit0, limit_infinity_case or exact_box")
      ->capture_default_str();
  cmp_cmd->add_option("--interval-begin", interval_begin, "Left end of the L1 interval");
  cmp_cmd->add_option("--interval-end", interval_end, "Right end of the L1 interval");
  cmp_cmd->add_option("--order", order, "Row order by eta")
      ->check(CLI::IsMember({"asc", "desc"}))
      ->capture_default_str();

  Common conv_opts;
  std::vector<double> dxs;
  CLI::App* conv_cmd =
      app.add_subcommand("convergence", "Grid refinement study at the horizon");
  add_common(conv_cmd, conv_opts);
  conv_cmd->add_option("--dx", dxs, "Cell width (repeatable)")->required();

  Common char_opts;
  std::vector<double> seeds;
  double tracer_dt = 0.01;
  CLI::App* char_cmd = app.add_subcommand(
      "characteristics", "Trace characteristic curves through the recorded run");
  add_common(char_cmd, char_opts);
  char_cmd->add_option("--seed-x", seeds, "Starting position at t = 0 (repeatable)")
      ->required();
  char_cmd->add_option("--tracer-dt", tracer_dt, "Euler step of the tracer")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (run_cmd->parsed()) {
      const nlb::Scenario s = nlb::parse_scenario(run_opts.config);
      report(nlb::run_command(s, run_opts.out));
    } else if (cmp_cmd->parsed()) {
      const nlb::Scenario s = nlb::parse_scenario(cmp_opts.config);
      nlb::CompareOptions options;
      options.etas = etas;
      for (const auto& name : references) {
        options.references.push_back(nlb::model_kind_from_string(name));
      }
      options.interval_begin = interval_begin;
      options.interval_end = interval_end;
      options.descending = order == "desc";
      const auto table = nlb::compare_command(s, options);
      const fs::path path = fs::path(cmp_opts.out) / "comparison.csv";
      nlb::write_comparison_csv(path, table);
      report({path});
    } else if (conv_cmd->parsed()) {
      const nlb::Scenario s = nlb::parse_scenario(conv_opts.config);
      const auto table = nlb::convergence_command(s, dxs);
      const fs::path path = fs::path(conv_opts.out) / "convergence.csv";
      nlb::write_convergence_csv(path, table);
      std::printf("reference: %s\n", table.reference.c_str());
      report({path});
    } else if (char_cmd->parsed()) {
      const nlb::Scenario s = nlb::parse_scenario(char_opts.config);
      report(nlb::characteristics_command(s, seeds, tracer_dt, char_opts.out));
    }
  } catch (const nlb::ValidationError& e) {
    std::fprintf(stderr, "error: %s: %s\n", e.key().c_str(), e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
