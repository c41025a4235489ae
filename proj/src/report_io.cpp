#include "vsf/report_io.hpp"

#include <fstream>
#include <ostream>
#include <set>
#include <sstream>

#include "vsf/data_io.hpp"

namespace vsf {

namespace fs = std::filesystem;

std::vector<fs::path> prepare_outputs(const fs::path& dir, const std::vector<std::string>& files,
                                      bool force) {
  std::error_code ec;
  if (fs::exists(dir, ec) && !fs::is_directory(dir, ec))
    throw IoError("output path '" + dir.string() + "' exists and is not a directory");
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory '" + dir.string() + "': " + ec.message());
  std::vector<fs::path> paths;
  for (const auto& f : files) {
    paths.push_back(dir / f);
    if (!force && fs::exists(paths.back(), ec))
      throw IoError("'" + paths.back().string() + "' already exists (use --force to overwrite)");
  }
  return paths;
}

void write_text_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << content;
  out.flush();
  if (!out) throw IoError("write to '" + path.string() + "' failed");
}

void write_slots_csv(std::ostream& out, const SimReport& report) {
  out << "slot,node,phase,role,actual,reconstructed,abs_error,source,action\n";
  for (const auto& r : report.records) {
    out << r.slot << ',' << report.node_ids[r.node] << ',' << to_string(r.phase) << ','
        << to_string(r.role) << ',' << format_double(r.actual) << ','
        << format_double(r.reconstructed) << ',' << format_double(r.abs_error) << ','
        << to_string(r.source) << ',' << to_string(r.action) << '\n';
  }
}

void write_summary_csv(std::ostream& out, const SimReport& report) {
  out << "node,evaluated_slots,mean_abs_error,max_abs_error,type1_slots,type1_mean_abs_error,"
         "senses,transmissions,suppressions,dormant_slots\n";
  for (std::size_t i = 0; i < report.node_ids.size(); ++i) {
    const auto& s = report.nodes[i];
    out << report.node_ids[i] << ',' << s.evaluated_slots << ',' << format_double(s.mean_abs_error)
        << ',' << format_double(s.max_abs_error) << ',' << s.type1_slots << ','
        << format_double(s.type1_mean_abs_error) << ',' << s.senses << ',' << s.transmissions
        << ',' << s.suppressions << ',' << s.dormant_slots << '\n';
  }
}

void write_energy_csv(std::ostream& out, const SimReport& report) {
  out << "label,sensing_j,tx_j,mode_j,switch_j,total_j,senses,transmissions,switches\n";
  NodeEnergy total;
  auto row = [&](const std::string& label, const NodeEnergy& e) {
    out << label << ',' << format_double(e.sensing_uj / 1e6) << ','
        << format_double(e.tx_uj / 1e6) << ',' << format_double(e.mode_uj / 1e6) << ','
        << format_double(e.switch_uj / 1e6) << ',' << format_double(e.total_j()) << ','
        << e.senses << ',' << e.transmissions << ',' << e.switches << '\n';
  };
  auto add = [](NodeEnergy& into, const NodeEnergy& e) {
    into.sensing_uj += e.sensing_uj;
    into.tx_uj += e.tx_uj;
    into.mode_uj += e.mode_uj;
    into.switch_uj += e.switch_uj;
    into.senses += e.senses;
    into.transmissions += e.transmissions;
    into.switches += e.switches;
  };
  for (std::size_t i = 0; i < report.node_ids.size(); ++i) {
    row(report.node_ids[i], report.ledger.nodes[i]);
    add(total, report.ledger.nodes[i]);
  }
  for (const auto& p : report.energy.pairs) {
    NodeEnergy pair;
    add(pair, report.ledger.nodes[p.type1]);
    add(pair, report.ledger.nodes[p.companion]);
    row(report.node_ids[p.type1] + "+" + report.node_ids[p.companion], pair);
  }
  row("total", total);
}

void write_comparison_csv(std::ostream& out, const Comparison& comparison) {
  out << "label,vsf_energy_j,baseline_energy_j,energy_ratio,vsf_transmissions,"
         "baseline_transmissions,vsf_senses,baseline_senses,vsf_mean_abs_error,"
         "baseline_mean_abs_error\n";
  for (const auto& r : comparison.rows) {
    out << r.label << ',' << format_double(r.vsf_energy_uj / 1e6) << ','
        << format_double(r.baseline_energy_uj / 1e6) << ',' << format_double(r.energy_ratio)
        << ',' << r.vsf_transmissions << ',' << r.baseline_transmissions << ',' << r.vsf_senses
        << ',' << r.baseline_senses << ',' << format_double(r.vsf_mean_abs_error) << ','
        << format_double(r.baseline_mean_abs_error) << '\n';
  }
}

void write_run_files(const fs::path& dir, const SimReport& report, bool force) {
  const auto paths = prepare_outputs(dir, {"slots.csv", "summary.csv", "energy.csv"}, force);
  std::ostringstream slots, summary, energy;
  write_slots_csv(slots, report);
  write_summary_csv(summary, report);
  write_energy_csv(energy, report);
  write_text_file(paths[0], slots.str());
  write_text_file(paths[1], summary.str());
  write_text_file(paths[2], energy.str());
}

}  // namespace vsf
