#pragma once

#include <charconv>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "presched/common.hpp"

namespace presched::csv {

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  int column(const std::string& name) const {
    for (std::size_t j = 0; j < header.size(); ++j)
      if (header[j] == name) return static_cast<int>(j);
    return -1;
  }
  int require_column(const std::string& name) const {
    int j = column(name);
    if (j < 0) fail(Errc::missing_column, "column '" + name + "' not found");
    return j;
  }
};

inline std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

inline std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

inline Table read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::io_error, "cannot open " + path);
  Table t;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    auto cells = split_line(line);
    for (auto& c : cells) c = trim(c);
    if (first) {
      t.header = std::move(cells);
      first = false;
    } else {
      t.rows.push_back(std::move(cells));
    }
  }
  if (first) fail(Errc::io_error, "empty csv: " + path);
  return t;
}

// Empty cell -> nullopt (a gap).
inline std::optional<double> parse_cell(const std::string& s) {
  if (s.empty()) return std::nullopt;
  double v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size())
    fail(Errc::io_error, "not a number: '" + s + "'");
  return v;
}

inline double parse_number(const std::string& s, const std::string& what) {
  auto v = parse_cell(s);
  if (!v) fail(Errc::io_error, "missing value for " + what);
  return *v;
}

class Writer {
 public:
  explicit Writer(const std::string& path) : out_(path) {
    if (!out_) fail(Errc::io_error, "cannot write " + path);
    out_.precision(17);
  }
  template <typename... Ts>
  void row(const Ts&... cells) {
    bool first = true;
    ((out_ << (first ? "" : ","), first = false, out_ << cells), ...);
    out_ << "\n";
  }
  void flush() { out_.flush(); }

 private:
  std::ofstream out_;
};

}  // namespace presched::csv
