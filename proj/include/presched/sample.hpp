#pragma once

#include <map>
#include <string>
#include <vector>

#include "presched/common.hpp"
#include "presched/csv.hpp"

namespace presched {

// One data point (x_i, L_i): context features plus realized nodal net loads.
// features[0] is the constant 1; the point forecast is features[1] when
// present (the default feature layout).
struct Sample {
  std::string timestamp;
  std::vector<double> features;
  std::map<std::string, Mw> nodal_loads;
  Mw aggregate = 0;  // L = sum of nodal loads
  Mw forecast = 0;   // L^F
  double weight = 1.0;
};

inline void validate_samples(const std::vector<Sample>& samples) {
  if (samples.empty()) fail(Errc::empty_sample_set, "no samples");
  std::size_t p = samples.front().features.size();
  for (const auto& s : samples) {
    if (s.features.size() != p)
      fail(Errc::dimension_mismatch, "inconsistent feature dimension");
    if (s.features.empty() || s.features[0] != 1.0)
      fail(Errc::dimension_mismatch, "first feature must be the constant 1");
    if (!(s.weight > 0)) fail(Errc::dimension_mismatch, "non-positive sample weight");
    double total = 0;
    for (const auto& [node, load] : s.nodal_loads) total += load;
    if (std::abs(total - s.aggregate) > 1e-6)
      fail(Errc::dimension_mismatch, "aggregate load inconsistent with nodal map");
  }
}

// --- sample CSV: timestamp,LF,L,<node>,... ----------------------------------

inline void save_samples(const std::vector<Sample>& samples, const std::string& path) {
  if (samples.empty()) fail(Errc::empty_sample_set, "nothing to save");
  std::vector<std::string> nodes;
  for (const auto& [node, load] : samples.front().nodal_loads) nodes.push_back(node);
  csv::Writer w(path);
  {
    std::string header = "timestamp,LF,L";
    for (const auto& n : nodes) header += "," + n;
    w.row(header);
  }
  for (const auto& s : samples) {
    std::string row = s.timestamp;
    auto num = [](double v) {
      char buf[32];
      std::snprintf(buf, sizeof(buf), "%.17g", v);
      return std::string(buf);
    };
    row += "," + num(s.forecast) + "," + num(s.aggregate);
    for (const auto& n : nodes) row += "," + num(s.nodal_loads.at(n));
    w.row(row);
  }
}

inline std::vector<Sample> load_samples(const std::string& path) {
  auto tab = csv::read_file(path);
  int c_ts = tab.require_column("timestamp");
  int c_lf = tab.require_column("LF");
  int c_l = tab.require_column("L");
  std::vector<std::pair<int, std::string>> node_cols;
  for (std::size_t j = 0; j < tab.header.size(); ++j) {
    int jj = static_cast<int>(j);
    if (jj == c_ts || jj == c_lf || jj == c_l) continue;
    node_cols.emplace_back(jj, tab.header[j]);
  }
  std::vector<Sample> out;
  for (const auto& r : tab.rows) {
    Sample s;
    s.timestamp = r[c_ts];
    s.forecast = csv::parse_number(r[c_lf], "LF");
    s.aggregate = csv::parse_number(r[c_l], "L");
    for (const auto& [j, node] : node_cols)
      s.nodal_loads[node] = csv::parse_number(r[j], "nodal load " + node);
    s.features = {1.0, s.forecast};
    s.weight = 1.0 / static_cast<double>(tab.rows.size());
    out.push_back(std::move(s));
  }
  validate_samples(out);
  return out;
}

}  // namespace presched
