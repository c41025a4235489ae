#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "vsf/sim.hpp"

namespace vsf {

/// Creates `dir` if needed and checks that none of `files` exists there
/// unless `force` is set. Throws IoError. Returns the full paths.
std::vector<std::filesystem::path> prepare_outputs(const std::filesystem::path& dir,
                                                   const std::vector<std::string>& files,
                                                   bool force);

/// Writes `content` to `path`, throwing IoError on failure.
void write_text_file(const std::filesystem::path& path, const std::string& content);

// slot,node,phase,role,actual,reconstructed,abs_error,source,action
void write_slots_csv(std::ostream& out, const SimReport& report);
// one row per node
void write_summary_csv(std::ostream& out, const SimReport& report);
// one row per node, then one per companion pair, then the total
void write_energy_csv(std::ostream& out, const SimReport& report);
void write_comparison_csv(std::ostream& out, const Comparison& comparison);

/// slots.csv, summary.csv and energy.csv in `dir`.
void write_run_files(const std::filesystem::path& dir, const SimReport& report, bool force);

}  // namespace vsf
