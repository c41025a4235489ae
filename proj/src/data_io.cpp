#include "vsf/data_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>

namespace vsf {
namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) fields.push_back(trim(field));
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

// Slot index per timestamp, by rank.
std::map<std::string, std::size_t> rank_timestamps(std::vector<std::string> stamps) {
  std::sort(stamps.begin(), stamps.end());
  stamps.erase(std::unique(stamps.begin(), stamps.end()), stamps.end());
  const bool numeric = std::all_of(stamps.begin(), stamps.end(), [](const std::string& s) {
    double v;
    return parse_double(s, v);
  });
  if (numeric) {
    std::stable_sort(stamps.begin(), stamps.end(), [](const std::string& a, const std::string& b) {
      double x, y;
      parse_double(a, x);
      parse_double(b, y);
      return x < y;
    });
  }
  std::map<std::string, std::size_t> rank;
  for (std::size_t i = 0; i < stamps.size(); ++i) rank.emplace(stamps[i], i);
  return rank;
}

SensorTrace empty_trace(const std::string& id, std::size_t length) {
  SensorTrace t;
  t.node_id = id;
  t.values.assign(length, 0.0);
  t.valid.assign(length, false);
  return t;
}

[[noreturn]] void bad_value(const std::string& text, std::size_t line) {
  throw LoadError("line " + std::to_string(line) + ": cannot parse value '" + text + "'");
}

}  // namespace

bool parse_double(const std::string& text, double& out) {
  const std::string t = trim(text);
  if (t.empty()) return false;
  const char* begin = t.data();
  const char* end = t.data() + t.size();
  if (*begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, out);
  return ec == std::errc() && ptr == end;
}

std::string format_double(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc()) return "nan";
  return std::string(buf, ptr);
}

CsvTable read_csv_table(std::istream& in) {
  CsvTable table;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 && line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0)
      line.erase(0, 3);
    if (trim(line).empty()) continue;
    auto fields = split(line);
    if (!have_header) {
      table.header = std::move(fields);
      have_header = true;
      continue;
    }
    if (fields.size() != table.header.size())
      throw LoadError("line " + std::to_string(line_no) + ": expected " +
                      std::to_string(table.header.size()) + " fields, found " +
                      std::to_string(fields.size()));
    table.rows.push_back(std::move(fields));
    table.line_numbers.push_back(line_no);
  }
  if (!have_header) throw LoadError("missing header row");
  return table;
}

CsvLayout parse_layout(const std::string& text) {
  if (text == "long") return CsvLayout::Long;
  if (text == "wide") return CsvLayout::Wide;
  throw ConfigError("unknown CSV layout '" + text + "' (expected long or wide)");
}

Dataset load_csv(std::istream& in, CsvLayout layout, LoadStats* stats) {
  const CsvTable table = read_csv_table(in);
  if (table.rows.empty()) throw LoadError("no data rows");
  LoadStats local;
  local.rows = table.rows.size();

  std::vector<std::string> stamps;
  for (const auto& row : table.rows) stamps.push_back(row[0]);
  const auto rank = rank_timestamps(stamps);
  const std::size_t length = rank.size();

  Dataset ds;
  if (layout == CsvLayout::Wide) {
    if (table.header.size() < 2) throw LoadError("wide layout needs at least one node column");
    for (std::size_t c = 1; c < table.header.size(); ++c)
      ds.traces.push_back(empty_trace(table.header[c], length));
    std::vector<bool> seen(length, false);
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
      const auto& row = table.rows[r];
      const std::size_t slot = rank.at(row[0]);
      if (seen[slot]) ++local.duplicates;
      seen[slot] = true;
      for (std::size_t c = 1; c < row.size(); ++c) {
        auto& trace = ds.traces[c - 1];
        if (row[c].empty()) {
          trace.valid[slot] = false;
          continue;
        }
        double v;
        if (!parse_double(row[c], v)) bad_value(row[c], table.line_numbers[r]);
        trace.values[slot] = v;
        trace.valid[slot] = true;
      }
    }
  } else {
    if (table.header.size() != 3)
      throw LoadError("long layout expects timestamp,node_id,value columns");
    std::map<std::string, SensorTrace> by_node;
    std::map<std::string, std::vector<bool>> seen;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
      const auto& row = table.rows[r];
      if (row[1].empty())
        throw LoadError("line " + std::to_string(table.line_numbers[r]) + ": empty node id");
      auto [it, inserted] = by_node.try_emplace(row[1], empty_trace(row[1], length));
      auto& marks = seen.try_emplace(row[1], std::vector<bool>(length, false)).first->second;
      const std::size_t slot = rank.at(row[0]);
      if (marks[slot]) ++local.duplicates;
      marks[slot] = true;
      if (row[2].empty()) {
        it->second.valid[slot] = false;
        continue;
      }
      double v;
      if (!parse_double(row[2], v)) bad_value(row[2], table.line_numbers[r]);
      it->second.values[slot] = v;
      it->second.valid[slot] = true;
    }
    for (auto& [id, trace] : by_node) ds.traces.push_back(std::move(trace));
  }
  if (stats) *stats = local;
  return ds;
}

Dataset load_csv_file(const std::string& path, CsvLayout layout, LoadStats* stats) {
  std::ifstream in(path);
  if (!in) throw LoadError("cannot open data file '" + path + "'");
  return load_csv(in, layout, stats);
}

void write_wide_csv(std::ostream& out, const Dataset& dataset) {
  const std::size_t length = dataset.length();
  out << "timestamp";
  for (const auto& t : dataset.traces) out << ',' << t.node_id;
  out << '\n';
  for (std::size_t s = 0; s < length; ++s) {
    out << s;
    for (const auto& t : dataset.traces) {
      out << ',';
      if (t.valid[s]) out << format_double(t.values[s]);
    }
    out << '\n';
  }
}

Dataset align_traces(const Dataset& dataset, const GapPolicy& policy) {
  const std::size_t length = dataset.length();
  Dataset out = dataset;
  for (auto& trace : out.traces) {
    std::size_t s = 0;
    while (s < length) {
      if (trace.valid[s]) {
        ++s;
        continue;
      }
      std::size_t end = s;
      while (end < length && !trace.valid[end]) ++end;
      const std::string where = "node '" + trace.node_id + "' slots [" + std::to_string(s) +
                                ", " + std::to_string(end) + ")";
      if (std::holds_alternative<Reject>(policy))
        throw AlignmentError("gap at " + where + " rejected by policy");
      const std::size_t max_run = std::get<Interpolate>(policy).max_run;
      if (s == 0 || end == length)
        throw AlignmentError("gap at " + where + " has no anchor on both sides");
      if (end - s > max_run)
        throw AlignmentError("gap at " + where + " is longer than " + std::to_string(max_run) +
                             " slots");
      const double left = trace.values[s - 1];
      const double right = trace.values[end];
      const double span = static_cast<double>(end - (s - 1));
      for (std::size_t k = s; k < end; ++k) {
        const double w = static_cast<double>(k - (s - 1)) / span;
        trace.values[k] = left + w * (right - left);
        trace.valid[k] = true;
      }
      s = end;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

std::vector<double> base_realization(const BaseProcess& base, std::size_t length,
                                     std::mt19937_64& rng) {
  std::vector<double> x(length);
  std::visit(
      [&](const auto& proc) {
        using T = std::decay_t<decltype(proc)>;
        if constexpr (std::is_same_v<T, Ar1>) {
          std::normal_distribution<double> noise(0.0, 1.0);
          double v = proc.start;
          for (std::size_t t = 0; t < length; ++t) {
            if (t > 0) v = proc.coeff * v + (proc.noise_std > 0 ? proc.noise_std * noise(rng) : 0.0);
            x[t] = v;
          }
        } else if constexpr (std::is_same_v<T, RandomWalk>) {
          std::normal_distribution<double> step(0.0, 1.0);
          double v = proc.start;
          for (std::size_t t = 0; t < length; ++t) {
            if (t > 0) v += proc.step_std * step(rng);
            x[t] = v;
          }
        } else {
          std::normal_distribution<double> noise(0.0, 1.0);
          const double w = 2.0 * std::numbers::pi / proc.period;
          for (std::size_t t = 0; t < length; ++t) {
            const double td = static_cast<double>(t);
            x[t] = proc.offset + proc.drift_per_slot * td +
                   proc.amplitude * std::sin(w * td + proc.phase) +
                   (proc.noise_std > 0 ? proc.noise_std * noise(rng) : 0.0);
          }
        }
      },
      base);
  return x;
}

}  // namespace

Dataset generate_synthetic(const SyntheticSpec& spec) {
  const std::size_t n = spec.node_count;
  if (n == 0) throw SpecError("synthetic spec needs at least one node");
  if (spec.length == 0) throw SpecError("synthetic spec needs a positive length");
  if (const auto* s = std::get_if<SineDrift>(&spec.base); s && !(s->period > 0.0))
    throw SpecError("sine period must be positive");

  std::vector<std::vector<const AffineLink*>> incoming(n);
  for (const auto& link : spec.links) {
    if (link.source >= n || link.target >= n)
      throw SpecError("affine link refers to a missing node");
    if (link.source == link.target) throw SpecError("affine link from a node to itself");
    incoming[link.target].push_back(&link);
  }

  // Kahn's algorithm; leftovers mean a cycle.
  std::vector<std::size_t> pending(n, 0);
  for (const auto& link : spec.links) ++pending[link.target];
  std::vector<NodeIndex> order;
  for (NodeIndex i = 0; i < n; ++i)
    if (pending[i] == 0) order.push_back(i);
  for (std::size_t k = 0; k < order.size(); ++k)
    for (const auto& link : spec.links)
      if (link.source == order[k] && --pending[link.target] == 0) order.push_back(link.target);
  if (order.size() != n) throw SpecError("affine links form a cycle");

  Dataset ds;
  ds.traces.resize(n);
  for (NodeIndex i : order) {
    std::seed_seq seq{static_cast<std::uint64_t>(spec.rng_seed),
                      static_cast<std::uint64_t>(spec.rng_seed >> 32),
                      static_cast<std::uint64_t>(i), std::uint64_t{0x5eed}};
    std::mt19937_64 rng(seq);
    std::vector<double> values;
    if (incoming[i].empty()) {
      values = base_realization(spec.base, spec.length, rng);
    } else {
      values.assign(spec.length, 0.0);
      double noise_std = 0.0;
      for (const AffineLink* link : incoming[i]) {
        const auto& src = ds.traces[link->source].values;
        for (std::size_t t = 0; t < spec.length; ++t)
          values[t] += link->slope * src[t] + link->intercept;
        noise_std = std::max(noise_std, link->link_noise_std);
      }
      if (noise_std > 0.0) {
        std::normal_distribution<double> noise(0.0, noise_std);
        for (auto& v : values) v += noise(rng);
      }
    }
    ds.traces[i] = SensorTrace::from_values("n" + std::to_string(i), std::move(values), spec.unit);
  }
  return ds;
}

}  // namespace vsf
