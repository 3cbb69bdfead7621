/// @file io.hpp
/// @brief CSV and JSON output with atomic replacement of the target file.
#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "monokin/characteristics.hpp"
#include "monokin/particles.hpp"
#include "monokin/state.hpp"

namespace monokin {

/// Time tag as Python formats "{:.4}": 4 significant digits, ".0" appended
/// to integral fixed-point output (0.5 -> "0.5", 1 -> "1.0", 1e-5 -> "1e-05").
std::string format_time_tag(double t);

/// Shortest round-trip decimal for finite values; "" for NaN.
std::string format_number(double v);

/// Writes to a temporary file in the same directory, then renames it.
void atomic_write(const std::filesystem::path& path, const std::string& content);

std::string csv_line(const std::vector<std::string>& cells);

/// Diagnostics CSV columns, in order.
const std::vector<std::string>& diagnostics_columns();
std::string diagnostics_csv(const std::vector<DiagnosticsRecord>& records);

/// x, rho, u, e.
std::string macro_snapshot_csv(const MacroState& s, const Field& e);
/// nx rows of nxi values.
std::string profile_csv(const Profile& g);
/// Grid metadata for a profile snapshot.
std::string profile_sidecar(const Profile& g);
/// t, X, Sigma_1..Sigma_n, det_J.
std::string trajectory_csv(const CharTrajectory& tr);
/// i, m, x, v.
std::string swarm_csv(const Swarm& s);

/// Parses a CSV with a header row into header + rows of cells. Lines
/// starting with '#' are skipped.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};
CsvTable read_csv(const std::filesystem::path& path);

}  // namespace monokin
