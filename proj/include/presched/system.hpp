#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "presched/common.hpp"
#include "presched/csv.hpp"

namespace presched {

struct Generator {
  std::string id;
  std::string node;
  Currency marginal_cost = 0;  // C
  Currency up_cost = 0;        // C^u
  Currency down_cost = 0;      // C^d, may be negative (unit is paid to reduce)
  Mw capacity = 0;             // P̄ > 0
  Mw up_limit = 0;             // R^u >= 0
  Mw down_limit = 0;           // R^d >= 0
};

struct Line {
  std::string id;
  std::string origin;  // o(l)
  std::string end;     // e(l)
  Mw capacity = kInf;  // F̄; kInf = unbounded (explicit sentinel, not a big number)
};

// Immutable after build_system; generators are in canonical merit order.
struct PowerSystem {
  std::vector<Generator> generators;  // sorted by (C, id), strictly
  std::vector<Line> lines;
  std::vector<std::string> nodes;  // sorted, unique

  // index maps derived at build time
  std::map<std::string, int> node_index;
  std::vector<std::vector<int>> generators_at_node;  // node idx -> generator positions
  std::vector<std::vector<int>> lines_from_node;     // node idx -> line positions with o(l)=node
  std::vector<std::vector<int>> lines_to_node;       // node idx -> line positions with e(l)=node

  Mw total_capacity = 0;

  int node_of_generator(int g) const { return node_index.at(generators[g].node); }
};

inline PowerSystem build_system(std::vector<Generator> generators, std::vector<Line> lines) {
  if (generators.empty()) fail(Errc::empty_system, "no generators");

  for (const auto& g : generators) {
    if (!(g.capacity > 0))
      fail(Errc::non_positive_capacity, "generator " + g.id + " has Pmax <= 0");
    if (g.up_limit < 0 || g.down_limit < 0)
      fail(Errc::non_positive_capacity, "generator " + g.id + " has negative balancing limit");
    if (!(g.up_cost > g.down_cost))
      fail(Errc::up_cost_not_above_down_cost, "generator " + g.id + " violates Cu > Cd");
  }
  for (const auto& l : lines) {
    if (l.origin == l.end) fail(Errc::dangling_node_reference, "line " + l.id + " is a self-loop");
    if (!(l.capacity > 0)) fail(Errc::non_positive_capacity, "line " + l.id + " has Fmax <= 0");
  }

  // Merit order with deterministic id tie-break.
  std::sort(generators.begin(), generators.end(), [](const Generator& a, const Generator& b) {
    if (a.marginal_cost != b.marginal_cost) return a.marginal_cost < b.marginal_cost;
    return a.id < b.id;
  });

  std::set<std::string> gen_ids, line_ids;
  for (const auto& g : generators)
    if (!gen_ids.insert(g.id).second) fail(Errc::duplicate_id, "generator id " + g.id);
  for (const auto& l : lines)
    if (!line_ids.insert(l.id).second) fail(Errc::duplicate_id, "line id " + l.id);

  PowerSystem sys;
  sys.generators = std::move(generators);
  sys.lines = std::move(lines);

  std::set<std::string> nodes;
  for (const auto& g : sys.generators) nodes.insert(g.node);
  for (const auto& l : sys.lines) {
    nodes.insert(l.origin);
    nodes.insert(l.end);
  }
  sys.nodes.assign(nodes.begin(), nodes.end());
  for (std::size_t i = 0; i < sys.nodes.size(); ++i)
    sys.node_index[sys.nodes[i]] = static_cast<int>(i);

  sys.generators_at_node.resize(sys.nodes.size());
  sys.lines_from_node.resize(sys.nodes.size());
  sys.lines_to_node.resize(sys.nodes.size());
  for (std::size_t g = 0; g < sys.generators.size(); ++g)
    sys.generators_at_node[sys.node_index.at(sys.generators[g].node)].push_back(
        static_cast<int>(g));
  for (std::size_t l = 0; l < sys.lines.size(); ++l) {
    sys.lines_from_node[sys.node_index.at(sys.lines[l].origin)].push_back(static_cast<int>(l));
    sys.lines_to_node[sys.node_index.at(sys.lines[l].end)].push_back(static_cast<int>(l));
  }

  for (const auto& g : sys.generators) sys.total_capacity += g.capacity;
  return sys;
}

inline Mw total_capacity(const PowerSystem& sys) { return sys.total_capacity; }

// --- system CSV pair: generators.csv + lines.csv ---------------------------

inline PowerSystem load_system(const std::string& dir) {
  auto gen_tab = csv::read_file(dir + "/generators.csv");
  int c_id = gen_tab.require_column("id"), c_node = gen_tab.require_column("node");
  int c_c = gen_tab.require_column("C"), c_cu = gen_tab.require_column("Cu");
  int c_cd = gen_tab.require_column("Cd"), c_p = gen_tab.require_column("Pmax");
  int c_ru = gen_tab.require_column("Ru"), c_rd = gen_tab.require_column("Rd");

  std::vector<Generator> gens;
  for (const auto& r : gen_tab.rows) {
    Generator g;
    g.id = r[c_id];
    g.node = r[c_node];
    g.marginal_cost = csv::parse_number(r[c_c], "C");
    g.up_cost = csv::parse_number(r[c_cu], "Cu");
    g.down_cost = csv::parse_number(r[c_cd], "Cd");
    g.capacity = csv::parse_number(r[c_p], "Pmax");
    g.up_limit = csv::parse_number(r[c_ru], "Ru");
    g.down_limit = csv::parse_number(r[c_rd], "Rd");
    gens.push_back(std::move(g));
  }

  auto line_tab = csv::read_file(dir + "/lines.csv");
  int l_id = line_tab.require_column("id"), l_from = line_tab.require_column("from");
  int l_to = line_tab.require_column("to"), l_f = line_tab.require_column("Fmax");
  std::vector<Line> lines;
  for (const auto& r : line_tab.rows) {
    Line l;
    l.id = r[l_id];
    l.origin = r[l_from];
    l.end = r[l_to];
    auto cap = csv::parse_cell(r[l_f]);  // empty cell = unbounded
    l.capacity = cap ? *cap : kInf;
    lines.push_back(std::move(l));
  }
  return build_system(std::move(gens), std::move(lines));
}

inline void save_system(const PowerSystem& sys, const std::string& dir) {
  csv::Writer gw(dir + "/generators.csv");
  gw.row("id", "node", "C", "Cu", "Cd", "Pmax", "Ru", "Rd");
  for (const auto& g : sys.generators)
    gw.row(g.id, g.node, g.marginal_cost, g.up_cost, g.down_cost, g.capacity, g.up_limit,
           g.down_limit);
  csv::Writer lw(dir + "/lines.csv");
  lw.row("id", "from", "to", "Fmax");
  for (const auto& l : sys.lines) {
    if (std::isinf(l.capacity))
      lw.row(l.id, l.origin, l.end, "");
    else
      lw.row(l.id, l.origin, l.end, l.capacity);
  }
}

}  // namespace presched
