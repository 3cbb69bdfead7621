#include "monokin/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace monokin {

std::string format_time_tag(double t) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4g", t);
  std::string s(buf);
  if (s.find_first_of(".e") == std::string::npos && s.find("inf") == std::string::npos &&
      s.find("nan") == std::string::npos) {
    s += ".0";
  }
  return s;
}

std::string format_number(double v) {
  if (std::isnan(v)) return "";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void atomic_write(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::string csv_line(const std::vector<std::string>& cells) {
  std::string s;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) s += ',';
    s += cells[i];
  }
  s += '\n';
  return s;
}

const std::vector<std::string>& diagnostics_columns() {
  static const std::vector<std::string> cols = {
      "t",       "mass",  "momentum", "energy", "mod_energy", "boltzmann", "rel_entropy",
      "fisher",  "e_min", "e_total",  "w1_rho", "w1_mom",     "w1_g",      "xi_m2"};
  return cols;
}

std::string diagnostics_csv(const std::vector<DiagnosticsRecord>& records) {
  std::string out = csv_line(diagnostics_columns());
  for (const DiagnosticsRecord& r : records) {
    std::vector<std::string> cells;
    for (const std::string& c : diagnostics_columns()) {
      if (c == "t") {
        cells.push_back(format_number(r.t));
        continue;
      }
      const auto v = r.get(c);
      cells.push_back(v ? format_number(*v) : "");
    }
    out += csv_line(cells);
  }
  return out;
}

std::string macro_snapshot_csv(const MacroState& s, const Field& e) {
  std::string out = csv_line({"x", "rho", "u", "e"});
  for (int i = 0; i < s.grid.size(); ++i) {
    out += csv_line({format_number(s.grid.center(i)), format_number(s.rho[i]),
                     format_number(s.u[i]), format_number(e[i])});
  }
  return out;
}

std::string profile_csv(const Profile& g) {
  std::string out;
  std::vector<std::string> row(g.grid.xi.size());
  for (int i = 0; i < g.grid.x.size(); ++i) {
    for (int j = 0; j < g.grid.xi.size(); ++j) row[j] = format_number(g.at(i, j));
    out += csv_line(row);
  }
  return out;
}

std::string profile_sidecar(const Profile& g) {
  nlohmann::ordered_json j;
  j["t"] = g.t;
  j["nx"] = g.grid.x.size();
  j["length"] = g.grid.x.length();
  j["nxi"] = g.grid.xi.size();
  j["xi_max"] = g.grid.xi.xi_max();
  j["layout"] = "rows are x-cells, columns are xi-cells, cell-centred";
  return j.dump(2) + "\n";
}

std::string trajectory_csv(const CharTrajectory& tr) {
  std::vector<std::string> head = {"t", "X"};
  for (int k = 1; k <= tr.n_dims; ++k) head.push_back("Sigma_" + std::to_string(k));
  head.push_back("det_J");
  std::string out = csv_line(head);
  for (std::size_t s = 0; s < tr.times.size(); ++s) {
    std::vector<std::string> row = {format_number(tr.times[s]), format_number(tr.X[s])};
    for (double v : tr.Sigma[s]) row.push_back(format_number(v));
    row.push_back(format_number(tr.jacobian_det[s]));
    out += csv_line(row);
  }
  return out;
}

std::string swarm_csv(const Swarm& s) {
  std::string out = csv_line({"i", "m", "x", "v"});
  for (int i = 0; i < s.size(); ++i) {
    out += csv_line({std::to_string(i), format_number(s.m[i]), format_number(s.x[i]),
                     format_number(s.v[i])});
  }
  return out;
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  CsvTable t;
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    if (header) {
      t.header = std::move(cells);
      header = false;
    } else {
      t.rows.push_back(std::move(cells));
    }
  }
  return t;
}

}  // namespace monokin
