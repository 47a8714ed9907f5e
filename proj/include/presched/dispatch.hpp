#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "presched/common.hpp"
#include "presched/lp.hpp"
#include "presched/system.hpp"

namespace presched {

struct DispatchResult {
  std::vector<Mw> schedule;              // p_g, canonical order
  Currency forward_cost = 0;             // sum C_g p_g
  std::optional<int> marginal_position;  // partially loaded unit, if any
};

struct BalanceResult {
  std::vector<Mw> up;     // r^u_g
  std::vector<Mw> down;   // r^d_g
  std::vector<Mw> flows;  // f_l, signed origin->end
  std::vector<Mw> shed;   // per node, unserved load
  std::vector<Mw> spill;  // per node, absorbed surplus
  Currency balancing_cost = 0;  // excludes forward cost
  Currency total_cost = 0;
  bool slack_active = false;
  Mw slack_total = 0;
};

inline Mw clamp_prescription(const PowerSystem& sys, Mw value) {
  return std::min(std::max(value, 0.0), sys.total_capacity);
}

// Greedy fill in canonical merit order; provably optimal for the aggregate
// forward dispatch.
inline DispatchResult forward_dispatch(const PowerSystem& sys, Mw prescribed) {
  const double tol = 1e-9 * std::max(1.0, sys.total_capacity);
  if (prescribed < -tol || prescribed > sys.total_capacity + tol)
    fail(Errc::prescription_out_of_range,
         "prescribed " + std::to_string(prescribed) + " MW outside [0, " +
             std::to_string(sys.total_capacity) + "]");
  DispatchResult out;
  out.schedule.assign(sys.generators.size(), 0.0);
  Mw residual = std::min(std::max(prescribed, 0.0), sys.total_capacity);
  for (std::size_t g = 0; g < sys.generators.size() && residual > 0; ++g) {
    Mw take = std::min(residual, sys.generators[g].capacity);
    out.schedule[g] = take;
    residual -= take;
    if (take < sys.generators[g].capacity) out.marginal_position = static_cast<int>(g);
  }
  for (std::size_t g = 0; g < sys.generators.size(); ++g)
    out.forward_cost += sys.generators[g].marginal_cost * out.schedule[g];
  return out;
}

// Literal LP form of the forward dispatch, kept as an independent oracle for
// the greedy. A deterministic cost perturbation by canonical position selects
// the merit-order vertex among ties; the reported cost uses the true costs.
inline DispatchResult forward_dispatch_lp(const PowerSystem& sys, Mw prescribed) {
  const double tol = 1e-9 * std::max(1.0, sys.total_capacity);
  if (prescribed < -tol || prescribed > sys.total_capacity + tol)
    fail(Errc::prescription_out_of_range, "prescribed value outside range");
  prescribed = std::min(std::max(prescribed, 0.0), sys.total_capacity);

  double cmax = 1.0;
  for (const auto& g : sys.generators) cmax = std::max(cmax, std::abs(g.marginal_cost));
  lp::LpProblem lp;
  std::vector<lp::LpProblem::Entry> balance;
  for (std::size_t g = 0; g < sys.generators.size(); ++g) {
    double eps = cmax * 1e-12 * static_cast<double>(g + 1);
    int v = lp.add_var("p_" + sys.generators[g].id, 0.0, sys.generators[g].capacity,
                       sys.generators[g].marginal_cost + eps);
    balance.push_back({v, 1.0});
  }
  lp.add_row(balance, lp::Sense::eq, prescribed, "balance");
  lp::Solution sol = lp::solve_lp(lp);
  if (sol.status != lp::Status::optimal) fail(Errc::solver_failure, "forward dispatch LP failed");

  DispatchResult out;
  out.schedule = sol.values;
  for (std::size_t g = 0; g < sys.generators.size(); ++g) {
    out.forward_cost += sys.generators[g].marginal_cost * out.schedule[g];
    if (out.schedule[g] > 1e-9 && out.schedule[g] < sys.generators[g].capacity - 1e-9)
      out.marginal_position = static_cast<int>(g);
  }
  return out;
}

namespace detail {

struct BalanceVars {
  int first_up = 0, first_down = 0, first_flow = 0, first_shed = 0, first_spill = 0;
  int first_p = -1;  // only when the schedule is free (system optimum)
};

// Shared builder for the real-time balancing LP. When `free_schedule` is set
// the p_g become variables in [0, Pmax] with their marginal cost, which gives
// the single-shot system optimum used as a per-sample cost floor.
inline BalanceVars build_balance_lp(lp::LpProblem& lp, const PowerSystem& sys,
                                    const std::vector<Mw>* schedule,
                                    const std::map<std::string, Mw>& nodal_loads,
                                    double slack_penalty, bool free_schedule) {
  const int ng = static_cast<int>(sys.generators.size());
  const int nl = static_cast<int>(sys.lines.size());
  const int nb = static_cast<int>(sys.nodes.size());
  BalanceVars ix;

  ix.first_up = static_cast<int>(lp.vars.size());
  for (int g = 0; g < ng; ++g)
    lp.add_var("ru_" + sys.generators[g].id, 0.0, sys.generators[g].up_limit,
               sys.generators[g].up_cost);
  ix.first_down = static_cast<int>(lp.vars.size());
  for (int g = 0; g < ng; ++g)
    lp.add_var("rd_" + sys.generators[g].id, 0.0, sys.generators[g].down_limit,
               -sys.generators[g].down_cost);
  ix.first_flow = static_cast<int>(lp.vars.size());
  for (int l = 0; l < nl; ++l) {
    double cap = sys.lines[l].capacity;
    lp.add_var("f_" + sys.lines[l].id, std::isinf(cap) ? -kInf : -cap,
               std::isinf(cap) ? kInf : cap, 0.0);
  }
  ix.first_shed = static_cast<int>(lp.vars.size());
  for (int b = 0; b < nb; ++b) lp.add_var("shed_" + sys.nodes[b], 0.0, kInf, slack_penalty);
  ix.first_spill = static_cast<int>(lp.vars.size());
  for (int b = 0; b < nb; ++b) lp.add_var("spill_" + sys.nodes[b], 0.0, kInf, slack_penalty);
  if (free_schedule) {
    ix.first_p = static_cast<int>(lp.vars.size());
    for (int g = 0; g < ng; ++g)
      lp.add_var("p_" + sys.generators[g].id, 0.0, sys.generators[g].capacity,
                 sys.generators[g].marginal_cost);
  }

  // eventual output inside unit limits: 0 <= p_g + ru_g - rd_g <= Pmax
  for (int g = 0; g < ng; ++g) {
    double p0 = free_schedule ? 0.0 : (*schedule)[g];
    std::vector<lp::LpProblem::Entry> lo{{ix.first_up + g, 1.0}, {ix.first_down + g, -1.0}};
    std::vector<lp::LpProblem::Entry> hi = lo;
    if (free_schedule) {
      lo.push_back({ix.first_p + g, 1.0});
      hi.push_back({ix.first_p + g, 1.0});
    }
    lp.add_row(std::move(lo), lp::Sense::ge, -p0, "out_lo_" + sys.generators[g].id);
    lp.add_row(std::move(hi), lp::Sense::le, sys.generators[g].capacity - p0,
               "out_hi_" + sys.generators[g].id);
  }

  // nodal balance with shed/spill slacks
  for (int b = 0; b < nb; ++b) {
    std::vector<lp::LpProblem::Entry> row;
    double rhs = 0;
    auto it = nodal_loads.find(sys.nodes[b]);
    if (it != nodal_loads.end()) rhs += it->second;
    for (int g : sys.generators_at_node[b]) {
      row.push_back({ix.first_up + g, 1.0});
      row.push_back({ix.first_down + g, -1.0});
      if (free_schedule)
        row.push_back({ix.first_p + g, 1.0});
      else
        rhs -= (*schedule)[g];
    }
    for (int l : sys.lines_from_node[b]) row.push_back({ix.first_flow + l, -1.0});
    for (int l : sys.lines_to_node[b]) row.push_back({ix.first_flow + l, 1.0});
    row.push_back({ix.first_shed + b, 1.0});
    row.push_back({ix.first_spill + b, -1.0});
    lp.add_row(std::move(row), lp::Sense::eq, rhs, "node_" + sys.nodes[b]);
  }
  return ix;
}

}  // namespace detail

struct BalanceOptions {
  double slack_penalty = kSlackPenalty;  // currency/MWh on shed and spill
};

inline BalanceResult balance(const PowerSystem& sys, const DispatchResult& forward,
                             const std::map<std::string, Mw>& nodal_loads,
                             const BalanceOptions& opt = {}) {
  lp::LpProblem lp;
  auto ix = detail::build_balance_lp(lp, sys, &forward.schedule, nodal_loads, opt.slack_penalty,
                                     /*free_schedule=*/false);
  lp::Solution sol = lp::solve_lp(lp);
  if (sol.status != lp::Status::optimal)
    fail(Errc::solver_failure, "balancing LP not optimal; this should be impossible with slacks");

  const int ng = static_cast<int>(sys.generators.size());
  const int nl = static_cast<int>(sys.lines.size());
  const int nb = static_cast<int>(sys.nodes.size());
  BalanceResult out;
  out.up.resize(ng);
  out.down.resize(ng);
  out.flows.resize(nl);
  out.shed.resize(nb);
  out.spill.resize(nb);
  for (int g = 0; g < ng; ++g) {
    // net the two directions: the optimum never uses both (Cu > Cd), so this
    // only removes numerical residue
    double net = sol.values[ix.first_up + g] - sol.values[ix.first_down + g];
    out.up[g] = std::max(net, 0.0);
    out.down[g] = std::max(-net, 0.0);
  }
  for (int l = 0; l < nl; ++l) out.flows[l] = sol.values[ix.first_flow + l];
  for (int b = 0; b < nb; ++b) {
    out.shed[b] = std::max(sol.values[ix.first_shed + b], 0.0);
    out.spill[b] = std::max(sol.values[ix.first_spill + b], 0.0);
    out.slack_total += out.shed[b] + out.spill[b];
  }
  out.slack_active = out.slack_total > 1e-6;
  for (int g = 0; g < ng; ++g)
    out.balancing_cost +=
        sys.generators[g].up_cost * out.up[g] - sys.generators[g].down_cost * out.down[g];
  out.balancing_cost += opt.slack_penalty * out.slack_total;
  out.total_cost = forward.forward_cost + out.balancing_cost;
  return out;
}

inline std::pair<DispatchResult, BalanceResult> two_stage_cost(
    const PowerSystem& sys, Mw prescribed, const std::map<std::string, Mw>& nodal_loads,
    const BalanceOptions& opt = {}) {
  DispatchResult fwd = forward_dispatch(sys, prescribed);
  BalanceResult bal = balance(sys, fwd, nodal_loads, opt);
  return {std::move(fwd), std::move(bal)};
}

// Single-shot system optimum: schedule free in [0, Pmax], no merit order.
// A valid lower bound on the realized two-stage cost of any method.
inline Currency system_optimum_cost(const PowerSystem& sys,
                                    const std::map<std::string, Mw>& nodal_loads,
                                    const BalanceOptions& opt = {}) {
  lp::LpProblem lp;
  detail::build_balance_lp(lp, sys, nullptr, nodal_loads, opt.slack_penalty,
                           /*free_schedule=*/true);
  lp::Solution sol = lp::solve_lp(lp);
  if (sol.status != lp::Status::optimal) fail(Errc::solver_failure, "system optimum LP failed");
  return sol.objective;
}

}  // namespace presched
