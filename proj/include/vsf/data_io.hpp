#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "vsf/core.hpp"

namespace vsf {

// ---------------------------------------------------------------------------
// CSV

/// Header plus rows of raw fields. Shared by every CSV reader here.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> line_numbers;  // 1-based source line of each row
};

/// Comma-separated, header required, blank lines skipped, no quoting.
/// Throws LoadError on ragged rows or a missing header.
CsvTable read_csv_table(std::istream& in);

/// Strict decimal parse ('.' separator, whole field consumed).
bool parse_double(const std::string& text, double& out);

enum class CsvLayout {
  Long,  // timestamp,node_id,value
  Wide,  // timestamp,node_A,node_B,...
};
CsvLayout parse_layout(const std::string& text);

struct LoadStats {
  std::size_t rows = 0;
  std::size_t duplicates = 0;  // (timestamp, node) repeats; the last one wins
};

/// One trace per node, slots ordered by timestamp rank (numeric order when
/// every timestamp is a number, string order otherwise). Empty cells and
/// absent (timestamp, node) pairs become gaps. Wide files keep column
/// order; long files order nodes by id.
Dataset load_csv(std::istream& in, CsvLayout layout, LoadStats* stats = nullptr);
Dataset load_csv_file(const std::string& path, CsvLayout layout, LoadStats* stats = nullptr);

/// Wide layout with the slot index as timestamp and round-trip precision.
void write_wide_csv(std::ostream& out, const Dataset& dataset);

/// Shortest-round-trip decimal form used by every writer.
std::string format_double(double value);

// ---------------------------------------------------------------------------
// Alignment

struct Interpolate {
  std::size_t max_run = 3;
};
struct Reject {};
using GapPolicy = std::variant<Interpolate, Reject>;

/// Fills interior gap runs of at most max_run slots linearly; boundary gaps,
/// longer runs, and any gap under Reject are AlignmentErrors naming the node
/// and slot range.
Dataset align_traces(const Dataset& dataset, const GapPolicy& policy = Interpolate{});

// ---------------------------------------------------------------------------
// Synthetic data

struct Ar1 {
  double coeff = 0.9;
  double noise_std = 0.0;
  double start = 1.0;
};
struct RandomWalk {
  double step_std = 0.1;
  double start = 0.0;
};
struct SineDrift {
  double period = 100.0;
  double amplitude = 1.0;
  double noise_std = 0.0;
  double offset = 0.0;
  double drift_per_slot = 0.0;
  double phase = 0.0;  // radians
};
using BaseProcess = std::variant<Ar1, RandomWalk, SineDrift>;

/// target(t) += slope * source(t) + intercept. Several links into one target
/// add up; link noise is drawn once per target per slot from the largest
/// link_noise_std among its links.
struct AffineLink {
  NodeIndex source = 0;
  NodeIndex target = 1;
  double slope = 1.0;
  double intercept = 0.0;
  double link_noise_std = 0.0;
};

struct SyntheticSpec {
  std::size_t node_count = 2;
  std::size_t length = 1000;
  BaseProcess base = SineDrift{};
  std::vector<AffineLink> links;
  std::uint64_t rng_seed = 1;
  std::string unit;
};

/// Nodes without incoming links draw independent realizations of the base
/// process; linked nodes are built in dependency order. Deterministic in the
/// spec. Throws SpecError for cyclic or out-of-range links.
Dataset generate_synthetic(const SyntheticSpec& spec);

}  // namespace vsf
