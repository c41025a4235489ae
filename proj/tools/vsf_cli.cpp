// vsf: run, sweep, compare and synth front end.
//
// Exit codes: 0 success, 1 config error, 2 data error, 3 I/O error,
// 4 usage error, 5 internal error.

#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "vsf/config_file.hpp"
#include "vsf/data_io.hpp"
#include "vsf/report_io.hpp"
#include "vsf/sim.hpp"
#include "vsf/sweep.hpp"

namespace {

constexpr int kExitUsage = 4;

int exit_code(vsf::ErrorKind kind) {
  switch (kind) {
    case vsf::ErrorKind::Config: return 1;
    case vsf::ErrorKind::Data: return 2;
    case vsf::ErrorKind::Io: return 3;
    case vsf::ErrorKind::Internal: return 5;
  }
  return 5;
}

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Args {
  std::string config;
  std::string data;
  std::string out;
  bool force = false;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> grid;
};

vsf::RunConfig load_run_config(const Args& a) {
  vsf::RunConfig rc = a.config.empty() ? vsf::RunConfig{} : vsf::load_config_file(a.config);
  if (a.seed) {
    rc.sim.rng_seed = *a.seed;
    if (rc.synthetic) rc.synthetic->rng_seed = *a.seed;
  }
  vsf::require_valid(rc.sim);
  return rc;
}

vsf::Dataset load_dataset(const Args& a, const vsf::RunConfig& rc) {
  if (!a.data.empty()) {
    vsf::LoadStats stats;
    auto ds = vsf::load_csv_file(a.data, rc.layout, &stats);
    if (stats.duplicates)
      std::cerr << "warning: " << stats.duplicates
                << " duplicate (timestamp, node) rows; the last one was kept\n";
    return vsf::align_traces(ds, rc.gaps);
  }
  if (rc.synthetic) return vsf::generate_synthetic(*rc.synthetic);
  throw vsf::LoadError("no dataset: pass --data or give synth.* keys in the config");
}

void print_notes(const vsf::SimReport& report) {
  for (const auto& n : report.notes) std::cerr << "note: " << n << '\n';
}

int cmd_run(const Args& a) {
  const auto rc = load_run_config(a);
  const auto dataset = load_dataset(a, rc);
  const auto report = vsf::run_simulation(rc.sim, dataset);
  print_notes(report);
  vsf::write_run_files(a.out, report, a.force);
  const auto s = vsf::summarize_run(report);
  std::printf("nodes %zu  slots %zu  retrains %zu  mean_abs_error %.6g  energy %.6g J\n",
              dataset.node_count(), report.slot_count, report.retrains, s.mean_abs_error,
              s.total_energy_uj / 1e6);
  return 0;
}

int cmd_compare(const Args& a) {
  const auto rc = load_run_config(a);
  const auto dataset = load_dataset(a, rc);
  const auto vsf_report = vsf::run_simulation(rc.sim, dataset);
  const auto baseline = vsf::run_baseline_lms(rc.sim, dataset);
  print_notes(vsf_report);
  const auto comparison = vsf::compare(vsf_report, baseline);
  const auto paths = vsf::prepare_outputs(a.out, {"comparison.csv"}, a.force);
  std::ostringstream out;
  vsf::write_comparison_csv(out, comparison);
  vsf::write_text_file(paths[0], out.str());
  const auto& t = comparison.total();
  std::printf("vsf %.6g J  baseline %.6g J  ratio %.4f\n", t.vsf_energy_uj / 1e6,
              t.baseline_energy_uj / 1e6, t.energy_ratio);
  return 0;
}

int cmd_sweep(const Args& a) {
  if (a.grid.empty()) throw UsageError("sweep needs at least one --grid key=v1,v2,...");
  std::vector<vsf::GridAxis> axes;
  for (const auto& g : a.grid) {
    try {
      axes.push_back(vsf::parse_grid_axis(g));
    } catch (const vsf::ConfigError& e) {
      throw UsageError(e.what());
    }
  }
  const auto rc = load_run_config(a);
  const auto dataset = load_dataset(a, rc);
  const auto points = vsf::expand_grid(rc.sim, axes);
  const auto paths = vsf::prepare_outputs(a.out, {"sweep.csv"}, a.force);
  const auto rows = vsf::run_sweep(points, dataset);
  std::ostringstream out;
  vsf::write_sweep_csv(out, rows, dataset.node_ids());
  vsf::write_text_file(paths[0], out.str());

  int status = 0;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    if (rows[k].ok()) continue;
    std::cerr << "point " << k << " failed (" << vsf::to_string(rows[k].error_kind)
              << "): " << rows[k].error << '\n';
    if (!status) status = exit_code(rows[k].error_kind);
  }
  std::printf("%zu points, %zu failed\n", rows.size(),
              static_cast<std::size_t>(
                  std::count_if(rows.begin(), rows.end(), [](auto& r) { return !r.ok(); })));
  return status;
}

int cmd_synth(const Args& a) {
  const auto rc = load_run_config(a);
  const vsf::SyntheticSpec spec = rc.synthetic.value_or([&] {
    vsf::SyntheticSpec s;
    s.rng_seed = rc.sim.rng_seed;
    return s;
  }());
  const auto dataset = vsf::generate_synthetic(spec);
  const auto paths = vsf::prepare_outputs(a.out, {"synthetic.csv"}, a.force);
  std::ostringstream out;
  vsf::write_wide_csv(out, dataset);
  vsf::write_text_file(paths[0], out.str());
  std::printf("%zu nodes, %zu slots -> %s\n", dataset.node_count(), dataset.length(),
              paths[0].string().c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Virtual sensing simulator for dormant/active sensor networks"};
  app.require_subcommand(1);
  Args args;

  auto common = [&](CLI::App* sub, bool needs_data) {
    sub->add_option("--config", args.config, "Key-value config file");
    if (needs_data) sub->add_option("--data", args.data, "Dataset CSV (wide layout by default)");
    sub->add_option("--out", args.out, "Output directory")->required();
    sub->add_flag("--force", args.force, "Overwrite existing output files");
    sub->add_option("--seed", args.seed, "Override rng_seed (and the synthetic seed)");
  };

  auto* run = app.add_subcommand("run", "Simulate once; writes slots.csv, summary.csv, energy.csv");
  common(run, true);
  auto* sweep = app.add_subcommand("sweep", "Run a parameter grid; writes sweep.csv");
  common(sweep, true);
  sweep->add_option("--grid", args.grid, "key=v1,v2,... (repeatable; window=O:R pairs)");
  auto* cmp = app.add_subcommand("compare", "VSF against the LMS baseline; writes comparison.csv");
  common(cmp, true);
  auto* synth = app.add_subcommand("synth", "Write a synthetic dataset as synthetic.csv");
  common(synth, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (run->parsed()) return cmd_run(args);
    if (sweep->parsed()) return cmd_sweep(args);
    if (cmp->parsed()) return cmd_compare(args);
    return cmd_synth(args);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    const auto kind = vsf::classify(e);
    std::cerr << vsf::to_string(kind) << ": " << e.what() << '\n';
    return exit_code(kind);
  }
}
