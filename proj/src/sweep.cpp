#include "vsf/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <set>

#include "vsf/config_file.hpp"
#include "vsf/data_io.hpp"

namespace vsf {
namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t");
  return s.substr(first, last - first + 1);
}

void apply_setting(SimConfig& cfg, const std::string& key, const std::string& value) {
  if (key != "window") {
    set_sim_key(cfg, key, value);
    return;
  }
  const auto colon = value.find(':');
  if (colon == std::string::npos)
    throw ConfigError("window: expected O_p:R_p, got '" + value + "'");
  set_sim_key(cfg, "operational_len", value.substr(0, colon));
  set_sim_key(cfg, "revalidation_len", value.substr(colon + 1));
}

SweepRow run_point(const SweepPoint& point, const Dataset& dataset) {
  SweepRow row{point, std::nullopt, point.error};
  if (!point.error.empty()) return row;
  try {
    row.summary = summarize_run(run_simulation(point.config, dataset));
  } catch (const std::exception& e) {
    row.error = e.what();
    row.error_kind = classify(e);
  }
  return row;
}

}  // namespace

GridAxis parse_grid_axis(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos) throw ConfigError("grid '" + text + "': expected key=v1,v2,...");
  GridAxis axis;
  axis.key = trim(text.substr(0, eq));
  if (axis.key.empty()) throw ConfigError("grid '" + text + "': missing key");
  if (axis.key != "window") {
    const auto keys = sim_keys();
    const std::string canon = axis.key == "epsilon" ? "error_threshold" : axis.key;
    if (std::find(keys.begin(), keys.end(), canon) == keys.end())
      throw ConfigError("grid '" + text + "': unknown key '" + axis.key + "'");
  }
  std::string rest = text.substr(eq + 1);
  std::size_t start = 0;
  while (start <= rest.size()) {
    const auto comma = rest.find(',', start);
    const auto v = trim(rest.substr(start, comma == std::string::npos ? std::string::npos
                                                                      : comma - start));
    if (!v.empty()) axis.values.push_back(v);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (axis.values.empty()) throw ConfigError("grid '" + text + "': no values");
  return axis;
}

std::vector<SweepPoint> expand_grid(const SimConfig& base, const std::vector<GridAxis>& axes) {
  if (axes.empty()) throw ConfigError("empty grid");
  std::vector<SweepPoint> points(1);
  points[0].config = base;
  for (const auto& axis : axes) {
    std::vector<SweepPoint> next;
    for (const auto& p : points) {
      for (const auto& v : axis.values) {
        SweepPoint q = p;
        q.settings.emplace_back(axis.key, v);
        if (q.error.empty()) {
          try {
            apply_setting(q.config, axis.key, v);
          } catch (const ConfigError& e) {
            q.error = e.what();
          }
        }
        next.push_back(std::move(q));
      }
    }
    points = std::move(next);
  }
  for (auto& p : points) {
    if (!p.error.empty()) continue;
    const auto check = validate_config(p.config);
    if (!check.ok()) p.error = check.describe();
  }
  return points;
}

RunSummary summarize_run(const SimReport& report) {
  RunSummary s;
  const std::size_t n = report.node_ids.size();
  double sum = 0.0, sum_sq = 0.0, type1_sum = 0.0;
  std::uint64_t count = 0;
  for (const auto& r : report.records) {
    if (r.slot < report.evaluation_start) continue;
    ++count;
    sum += r.abs_error;
    sum_sq += r.abs_error * r.abs_error;
    if (r.role == Role::TypeI && r.action == ActionKind::Slept) {
      ++s.type1_slots;
      type1_sum += r.abs_error;
    }
  }
  if (count) {
    s.mean_abs_error = sum / static_cast<double>(count);
    const double var = sum_sq / static_cast<double>(count) - s.mean_abs_error * s.mean_abs_error;
    s.error_std = std::sqrt(std::max(0.0, var));
  }
  if (s.type1_slots) s.type1_mean_abs_error = type1_sum / static_cast<double>(s.type1_slots);

  std::set<NodeIndex> paired;
  for (const auto& [a, b] : report.companion_pairs) {
    paired.insert(a);
    paired.insert(b);
  }
  for (std::size_t i = 0; i < n; ++i) {
    const auto& e = report.ledger.nodes[i];
    s.node_energy_uj.push_back(e.total_uj());
    s.node_transmissions.push_back(e.transmissions);
    s.total_energy_uj += e.total_uj();
    s.transmissions += e.transmissions;
    if (paired.count(i)) s.paired_energy_uj += e.total_uj();
  }
  return s;
}

std::vector<SweepRow> run_sweep_serial(const std::vector<SweepPoint>& points,
                                       const Dataset& dataset) {
  std::vector<SweepRow> rows;
  rows.reserve(points.size());
  for (const auto& p : points) rows.push_back(run_point(p, dataset));
  return rows;
}

std::vector<SweepRow> run_sweep_parallel(const std::vector<SweepPoint>& points,
                                         const Dataset& dataset) {
  std::vector<SweepRow> rows(points.size());
  const auto count = static_cast<std::ptrdiff_t>(points.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t k = 0; k < count; ++k) rows[k] = run_point(points[k], dataset);
  return rows;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows,
                     const std::vector<std::string>& node_ids) {
  std::vector<std::string> axes;
  if (!rows.empty())
    for (const auto& [k, _] : rows.front().point.settings) axes.push_back(k);
  out << "point";
  for (const auto& a : axes) out << ',' << a;
  out << ",status,mean_abs_error,error_std,type1_mean_abs_error,type1_slots,total_energy_j,"
         "paired_energy_j,transmissions";
  for (const auto& id : node_ids) out << ",energy_j_" << id;
  for (const auto& id : node_ids) out << ",transmissions_" << id;
  out << '\n';
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const auto& r = rows[k];
    out << k;
    for (const auto& [_, v] : r.point.settings) out << ',' << v;
    if (!r.ok()) {
      out << ",failed";
      for (std::size_t c = 0; c < 7 + 2 * node_ids.size(); ++c) out << ',';
      out << '\n';
      continue;
    }
    const auto& s = *r.summary;
    out << ",ok," << format_double(s.mean_abs_error) << ',' << format_double(s.error_std) << ','
        << format_double(s.type1_mean_abs_error) << ',' << s.type1_slots << ','
        << format_double(s.total_energy_uj / 1e6) << ','
        << format_double(s.paired_energy_uj / 1e6) << ',' << s.transmissions;
    for (double e : s.node_energy_uj) out << ',' << format_double(e / 1e6);
    for (auto t : s.node_transmissions) out << ',' << t;
    out << '\n';
  }
}

}  // namespace vsf
