#pragma once

#include <chrono>
#include <cmath>
#include <map>
#include <queue>
#include <vector>

#include "presched/common.hpp"
#include "presched/lp.hpp"

namespace presched::lp {

// LP plus binary flags; chains are sequences of binaries known to be monotone
// non-increasing (u[0] >= u[1] >= ...), used for propagation and branching.
struct MilpProblem {
  LpProblem lp;
  std::vector<int> binaries;
  std::vector<std::vector<int>> chains;

  void validate() const {
    lp.validate();
    for (int j : binaries) {
      if (j < 0 || j >= static_cast<int>(lp.vars.size()))
        fail(Errc::malformed_problem, "binary flag on undeclared variable");
      if (lp.vars[j].lb < -kIntTol || lp.vars[j].ub > 1 + kIntTol)
        fail(Errc::malformed_problem, "binary variable not bounded [0,1]");
    }
    for (const auto& chain : chains)
      for (int j : chain) {
        bool is_bin = false;
        for (int b : binaries) is_bin = is_bin || (b == j);
        if (!is_bin) fail(Errc::malformed_problem, "chain member is not a binary");
      }
  }
};

struct MilpOptions {
  double gap_tol = kDefaultGapTol;
  double time_limit = kInf;  // seconds
  long node_limit = -1;
  SolveOptions lp_options = {};
};

namespace detail {

struct BnbNode {
  double bound;
  long id;
  std::vector<std::int8_t> fix;  // per binary: -1 free, 0, 1
  std::vector<double> values;    // LP relaxation values (structural)
  std::vector<std::uint8_t> basis;
};

struct NodeOrder {
  bool operator()(const BnbNode& a, const BnbNode& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;  // min-heap on bound
    return a.id > b.id;
  }
};

}  // namespace detail

inline Solution solve_milp(const MilpProblem& problem, const MilpOptions& opt = {}) {
  problem.validate();
  const auto t0 = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  };

  const int nbin = static_cast<int>(problem.binaries.size());
  if (nbin == 0) return solve_lp(problem.lp, opt.lp_options);

  std::map<int, int> bin_pos;  // var -> position in binaries
  for (int k = 0; k < nbin; ++k) bin_pos[problem.binaries[k]] = k;

  // chain membership: binary position -> (chain, index within chain)
  std::vector<std::pair<int, int>> chain_of(nbin, {-1, -1});
  for (std::size_t c = 0; c < problem.chains.size(); ++c)
    for (std::size_t i = 0; i < problem.chains[c].size(); ++i)
      chain_of[bin_pos.at(problem.chains[c][i])] = {static_cast<int>(c), static_cast<int>(i)};

  // fixing one chain element implies a prefix/suffix of fixings
  auto propagate = [&](std::vector<std::int8_t>& fix, int pos, std::int8_t val) -> bool {
    if (fix[pos] >= 0 && fix[pos] != val) return false;
    fix[pos] = val;
    auto [c, i] = chain_of[pos];
    if (c < 0) return true;
    const auto& chain = problem.chains[c];
    if (val == 1) {
      for (int k = 0; k < i; ++k) {
        int p = bin_pos.at(chain[k]);
        if (fix[p] == 0) return false;
        fix[p] = 1;
      }
    } else {
      for (std::size_t k = i + 1; k < chain.size(); ++k) {
        int p = bin_pos.at(chain[k]);
        if (fix[p] == 1) return false;
        fix[p] = 0;
      }
    }
    return true;
  };

  auto solve_node = [&](const std::vector<std::int8_t>& fix,
                        const std::vector<std::uint8_t>* warm) {
    LpProblem lp = problem.lp;
    for (int k = 0; k < nbin; ++k) {
      if (fix[k] < 0) continue;
      auto& v = lp.vars[problem.binaries[k]];
      v.lb = v.ub = static_cast<double>(fix[k]);
    }
    return solve_lp(lp, opt.lp_options, warm);
  };

  Solution best;       // incumbent
  bool have_inc = false;
  long node_count = 0;
  long next_id = 0;

  std::priority_queue<detail::BnbNode, std::vector<detail::BnbNode>, detail::NodeOrder> open;

  {
    std::vector<std::int8_t> fix(nbin, -1);
    Solution root = solve_node(fix, nullptr);
    ++node_count;
    if (root.status == Status::infeasible || root.status == Status::unbounded) {
      root.node_count = node_count;
      return root;
    }
    open.push({root.objective, next_id++, std::move(fix), std::move(root.values),
               std::move(root.basis)});
  }

  double best_bound = -kInf;
  auto current_gap = [&]() {
    if (!have_inc) return kInf;
    return (best.objective - best_bound) / std::max(1.0, std::abs(best.objective));
  };

  Status final_status = Status::optimal;
  while (!open.empty()) {
    // closed subtrees are covered by the incumbent, so the proof bound is
    // the smaller of the open-node front and the incumbent value
    best_bound = open.top().bound;
    if (have_inc) best_bound = std::min(best_bound, best.objective);
    if (have_inc && current_gap() <= opt.gap_tol) break;
    if (elapsed() > opt.time_limit) {
      final_status = Status::time_limit;
      break;
    }
    if (opt.node_limit >= 0 && node_count >= opt.node_limit) {
      final_status = Status::gap_limit;
      break;
    }

    detail::BnbNode node = open.top();
    open.pop();
    if (have_inc && node.bound >= best.objective - 1e-12 * std::max(1.0, std::abs(best.objective)))
      continue;

    // most fractional binary
    int branch_pos = -1;
    double best_frac = kIntTol;
    for (int k = 0; k < nbin; ++k) {
      if (node.fix[k] >= 0) continue;
      double v = node.values[problem.binaries[k]];
      double frac = std::abs(v - std::round(v));
      if (frac > best_frac) {
        best_frac = frac;
        branch_pos = k;
      }
    }

    if (branch_pos < 0) {
      // integral relaxation: candidate incumbent
      if (!have_inc || node.bound < best.objective) {
        have_inc = true;
        best.status = Status::optimal;
        best.objective = node.bound;
        best.values = node.values;
        best.basis = node.basis;
      }
      continue;
    }

    for (std::int8_t v : {static_cast<std::int8_t>(1), static_cast<std::int8_t>(0)}) {
      std::vector<std::int8_t> child_fix = node.fix;
      if (!propagate(child_fix, branch_pos, v)) continue;
      Solution sol = solve_node(child_fix, &node.basis);
      ++node_count;
      if (sol.status != Status::optimal) continue;
      double bound = std::max(sol.objective, node.bound);
      if (have_inc &&
          bound >= best.objective - 1e-12 * std::max(1.0, std::abs(best.objective)))
        continue;
      open.push({bound, next_id++, std::move(child_fix), std::move(sol.values),
                 std::move(sol.basis)});
    }
  }

  if (open.empty()) best_bound = have_inc ? best.objective : best_bound;

  if (!have_inc) {
    if (final_status == Status::time_limit)
      fail(Errc::no_incumbent_within_time_limit, "branch and bound found no feasible point");
    Solution sol;
    sol.status = Status::infeasible;
    sol.node_count = node_count;
    return sol;
  }

  best.best_bound = best_bound;
  best.gap = std::max(0.0, (best.objective - best_bound) /
                               std::max(1.0, std::abs(best.objective)));
  best.node_count = node_count;
  best.status = best.gap <= opt.gap_tol ? Status::optimal : final_status;
  return best;
}

}  // namespace presched::lp
