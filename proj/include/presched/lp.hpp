#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "presched/common.hpp"

namespace presched::lp {

enum class Sense { le, ge, eq };

enum class Status { optimal, infeasible, unbounded, gap_limit, time_limit };

inline const char* status_name(Status s) {
  switch (s) {
    case Status::optimal: return "Optimal";
    case Status::infeasible: return "Infeasible";
    case Status::unbounded: return "Unbounded";
    case Status::gap_limit: return "GapLimit";
    case Status::time_limit: return "TimeLimit";
  }
  return "?";
}

// Sparse minimization problem over bounded variables.
struct LpProblem {
  struct Var {
    std::string name;
    double lb = 0, ub = kInf, obj = 0;
  };
  struct Entry {
    int var;
    double coef;
  };
  struct Row {
    std::vector<Entry> coeffs;
    Sense sense = Sense::eq;
    double rhs = 0;
    std::string name;
  };

  std::vector<Var> vars;
  std::vector<Row> rows;

  int add_var(std::string name, double lb, double ub, double obj = 0) {
    vars.push_back({std::move(name), lb, ub, obj});
    return static_cast<int>(vars.size()) - 1;
  }
  int add_row(std::vector<Entry> coeffs, Sense sense, double rhs, std::string name = "") {
    rows.push_back({std::move(coeffs), sense, rhs, std::move(name)});
    return static_cast<int>(rows.size()) - 1;
  }

  void validate() const {
    for (const auto& v : vars)
      if (!(v.lb <= v.ub)) fail(Errc::malformed_problem, "variable " + v.name + " has lb > ub");
    for (const auto& r : rows) {
      if (!std::isfinite(r.rhs)) fail(Errc::malformed_problem, "non-finite rhs in row " + r.name);
      for (const auto& e : r.coeffs) {
        if (e.var < 0 || e.var >= static_cast<int>(vars.size()))
          fail(Errc::malformed_problem, "row " + r.name + " references undeclared variable");
        if (!std::isfinite(e.coef))
          fail(Errc::malformed_problem, "non-finite coefficient in row " + r.name);
      }
    }
  }

  // Debug dump in LP text format for cross-checking with external solvers.
  void write_lp_format(std::ostream& out, const std::vector<int>* binaries = nullptr) const {
    auto vname = [&](int j) {
      return vars[j].name.empty() ? ("x" + std::to_string(j)) : vars[j].name;
    };
    out << "Minimize\n obj:";
    for (std::size_t j = 0; j < vars.size(); ++j)
      if (vars[j].obj != 0) out << " + " << vars[j].obj << " " << vname(static_cast<int>(j));
    out << "\nSubject To\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const auto& r = rows[i];
      out << " " << (r.name.empty() ? "c" + std::to_string(i) : r.name) << ":";
      for (const auto& e : r.coeffs) out << " + " << e.coef << " " << vname(e.var);
      out << (r.sense == Sense::le ? " <= " : r.sense == Sense::ge ? " >= " : " = ") << r.rhs
          << "\n";
    }
    out << "Bounds\n";
    for (std::size_t j = 0; j < vars.size(); ++j) {
      const auto& v = vars[j];
      if (std::isinf(v.lb) && std::isinf(v.ub))
        out << " " << vname(static_cast<int>(j)) << " free\n";
      else {
        out << " ";
        if (std::isinf(v.lb))
          out << "-inf";
        else
          out << v.lb;
        out << " <= " << vname(static_cast<int>(j)) << " <= ";
        if (std::isinf(v.ub))
          out << "+inf";
        else
          out << v.ub;
        out << "\n";
      }
    }
    if (binaries && !binaries->empty()) {
      out << "Binaries\n";
      for (int j : *binaries) out << " " << vname(j) << "\n";
    }
    out << "End\n";
  }
};

enum VarState : std::uint8_t { kBasic = 0, kAtLower = 1, kAtUpper = 2, kFreeZero = 3 };

struct Solution {
  Status status = Status::infeasible;
  double objective = kInf;
  std::vector<double> values;         // structural variables
  std::vector<double> duals;          // one multiplier per row
  std::vector<double> reduced_costs;  // structural variables
  std::vector<std::uint8_t> basis;    // var states (structural + logical), reusable as warm start
  // MILP statistics
  double best_bound = -kInf;
  double gap = 0;
  long node_count = 0;
};

struct SolveOptions {
  double feas_tol = kFeasTol;
  double dual_tol = 1e-8;
  double pivot_tol = 1e-10;
  int bland_trigger = 1000;  // degenerate pivots before switching to Bland's rule
  long iter_limit = -1;      // default derived from size
  int refactor_every = 256;
};

// For any multiplier vector y, min_x { c'x + y'(b - Ax) : lb <= x <= ub } is a
// valid lower bound on the LP optimum (bound variables to their cheaper end).
inline double lagrangian_bound(const LpProblem& p, const std::vector<double>& y) {
  double val = 0;
  for (std::size_t i = 0; i < p.rows.size(); ++i) val += y[i] * p.rows[i].rhs;
  std::vector<double> d(p.vars.size());
  for (std::size_t j = 0; j < p.vars.size(); ++j) d[j] = p.vars[j].obj;
  for (std::size_t i = 0; i < p.rows.size(); ++i)
    for (const auto& e : p.rows[i].coeffs) d[e.var] -= y[i] * e.coef;
  // logical contribution: slack s_i with cost 0 and bound set by sense
  for (std::size_t i = 0; i < p.rows.size(); ++i) {
    double ds = -y[i];
    switch (p.rows[i].sense) {
      case Sense::eq: break;                                    // s fixed at 0
      case Sense::le: if (ds < -1e-12) return -kInf; break;     // s in [0, inf)
      case Sense::ge: if (ds > 1e-12) return -kInf; break;      // s in (-inf, 0]
    }
  }
  for (std::size_t j = 0; j < p.vars.size(); ++j) {
    const auto& v = p.vars[j];
    if (std::abs(d[j]) <= 1e-12) continue;
    double end = d[j] > 0 ? v.lb : v.ub;
    if (std::isinf(end)) return -kInf;
    val += d[j] * end;
  }
  return val;
}

namespace detail {

class Simplex {
 public:
  Simplex(const LpProblem& p, const SolveOptions& opt) : p_(p), opt_(opt) {
    m_ = static_cast<int>(p.rows.size());
    n_ = static_cast<int>(p.vars.size());
    total_ = n_ + m_;
    lb_.resize(total_);
    ub_.resize(total_);
    cost_.assign(total_, 0.0);
    cols_.resize(total_);
    rhs_.resize(m_);
    for (int j = 0; j < n_; ++j) {
      lb_[j] = p.vars[j].lb;
      ub_[j] = p.vars[j].ub;
      cost_[j] = p.vars[j].obj;
    }
    for (int i = 0; i < m_; ++i) {
      const auto& r = p.rows[i];
      rhs_[i] = r.rhs;
      for (const auto& e : r.coeffs) cols_[e.var].push_back({i, e.coef});
      int s = n_ + i;
      cols_[s].push_back({i, 1.0});
      switch (r.sense) {
        case Sense::le: lb_[s] = 0; ub_[s] = kInf; break;
        case Sense::ge: lb_[s] = -kInf; ub_[s] = 0; break;
        case Sense::eq: lb_[s] = 0; ub_[s] = 0; break;
      }
    }
    if (opt_.iter_limit < 0) iter_limit_ = 20000 + 200L * (m_ + n_);
    else iter_limit_ = opt_.iter_limit;
  }

  Solution solve(const std::vector<std::uint8_t>* warm) {
    init_basis(warm);
    refactor();
    compute_basics();

    Status st = phase1();
    if (st == Status::optimal) st = phase2();

    Solution sol;
    sol.status = st;
    sol.basis.assign(state_.begin(), state_.end());
    if (st == Status::optimal) {
      sol.objective = 0;
      for (int j = 0; j < n_; ++j) sol.objective += cost_[j] * x_[j];
      sol.values.assign(x_.begin(), x_.begin() + n_);
      std::vector<double> y = btran_costs();
      sol.duals = y;
      sol.reduced_costs.resize(n_);
      for (int j = 0; j < n_; ++j) {
        double d = cost_[j];
        for (const auto& e : cols_[j]) d -= y[e.row] * e.coef;
        sol.reduced_costs[j] = d;
      }
    }
    return sol;
  }

 private:
  struct ColEntry {
    int row;
    double coef;
  };

  const LpProblem& p_;
  SolveOptions opt_;
  int m_ = 0, n_ = 0, total_ = 0;
  long iter_limit_ = 0;
  std::vector<double> lb_, ub_, cost_, rhs_;
  std::vector<std::vector<ColEntry>> cols_;

  std::vector<int> basic_;            // m slots -> var index
  std::vector<std::uint8_t> state_;   // per var
  std::vector<double> x_;             // per var
  std::vector<double> binv_;          // m*m row-major
  std::vector<double> work_, ftran_w_;
  int pivots_since_refactor_ = 0;
  long degenerate_pivots_ = 0;
  bool bland_ = false;

  double* binv_row(int i) { return binv_.data() + static_cast<std::size_t>(i) * m_; }

  double nonbasic_resting_value(int j) const {
    if (state_[j] == kAtLower) return lb_[j];
    if (state_[j] == kAtUpper) return ub_[j];
    return 0.0;
  }

  void init_basis(const std::vector<std::uint8_t>* warm) {
    basic_.clear();
    state_.assign(total_, kAtLower);
    x_.assign(total_, 0.0);
    bool used_warm = false;
    if (warm && static_cast<int>(warm->size()) == total_) {
      int nb = 0;
      for (int j = 0; j < total_; ++j)
        if ((*warm)[j] == kBasic) ++nb;
      if (nb == m_) {
        state_.assign(warm->begin(), warm->end());
        for (int j = 0; j < total_; ++j)
          if (state_[j] == kBasic) basic_.push_back(j);
        used_warm = true;
      }
    }
    if (!used_warm) {
      for (int i = 0; i < m_; ++i) {
        basic_.push_back(n_ + i);
        state_[n_ + i] = kBasic;
      }
    }
    for (int j = 0; j < total_; ++j) {
      if (state_[j] == kBasic) continue;
      bool lo = std::isfinite(lb_[j]), hi = std::isfinite(ub_[j]);
      // repair states that no longer match the bounds (e.g. after branching)
      if (state_[j] == kAtLower && !lo) state_[j] = hi ? kAtUpper : kFreeZero;
      if (state_[j] == kAtUpper && !hi) state_[j] = lo ? kAtLower : kFreeZero;
      if (state_[j] == kFreeZero && (lo || hi)) state_[j] = lo ? kAtLower : kAtUpper;
      x_[j] = nonbasic_resting_value(j);
    }
  }

  // Invert the basis matrix; degenerate columns are swapped for logicals.
  void refactor() {
    for (int attempt = 0; attempt <= m_; ++attempt) {
      binv_.assign(static_cast<std::size_t>(m_) * m_, 0.0);
      std::vector<std::vector<double>> M(m_, std::vector<double>(m_, 0.0));
      for (int k = 0; k < m_; ++k)
        for (const auto& e : cols_[basic_[k]]) M[e.row][k] = e.coef;
      for (int i = 0; i < m_; ++i) binv_row(i)[i] = 1.0;

      std::vector<int> pivot_row_of_col(m_, -1);
      std::vector<bool> row_used(m_, false);
      int bad_col = -1;
      for (int k = 0; k < m_ && bad_col < 0; ++k) {
        int piv = -1;
        double best = 1e-11;
        for (int i = 0; i < m_; ++i)
          if (!row_used[i] && std::abs(M[i][k]) > best) {
            best = std::abs(M[i][k]);
            piv = i;
          }
        if (piv < 0) {
          bad_col = k;
          break;
        }
        row_used[piv] = true;
        pivot_row_of_col[k] = piv;
        double inv = 1.0 / M[piv][k];
        for (int c = 0; c < m_; ++c) M[piv][c] *= inv;
        for (int c = 0; c < m_; ++c) binv_row(piv)[c] *= inv;
        for (int i = 0; i < m_; ++i) {
          if (i == piv) continue;
          double f = M[i][k];
          if (f == 0.0) continue;
          for (int c = 0; c < m_; ++c) M[i][c] -= f * M[piv][c];
          for (int c = 0; c < m_; ++c) binv_row(i)[c] -= f * binv_row(piv)[c];
        }
      }
      if (bad_col < 0) {
        // rows of binv currently hold B^{-1} permuted: row pivot_row_of_col[k]
        // corresponds to basic slot k; reorder so slot order matches rows.
        std::vector<double> reordered(static_cast<std::size_t>(m_) * m_);
        for (int k = 0; k < m_; ++k) {
          const double* src = binv_row(pivot_row_of_col[k]);
          std::copy(src, src + m_, reordered.data() + static_cast<std::size_t>(k) * m_);
        }
        // basic slot order must match equation order: slot k solves for basic_[k];
        // we keep slots as-is (binv rows now aligned with slots).
        binv_.swap(reordered);
        pivots_since_refactor_ = 0;
        return;
      }
      // replace the dependent basic with the logical of an unused row
      int free_row = -1;
      for (int i = 0; i < m_; ++i)
        if (!row_used[i]) {
          free_row = i;
          break;
        }
      int displaced = basic_[bad_col];
      bool lo = std::isfinite(lb_[displaced]);
      state_[displaced] = lo ? kAtLower : (std::isfinite(ub_[displaced]) ? kAtUpper : kFreeZero);
      x_[displaced] = nonbasic_resting_value(displaced);
      int logical = n_ + free_row;
      if (state_[logical] == kBasic)
        fail(Errc::solver_failure, "basis repair failed");
      basic_[bad_col] = logical;
      state_[logical] = kBasic;
    }
    fail(Errc::solver_failure, "could not factorize basis");
  }

  void compute_basics() {
    work_.assign(rhs_.begin(), rhs_.end());
    for (int j = 0; j < total_; ++j) {
      if (state_[j] == kBasic || x_[j] == 0.0) continue;
      for (const auto& e : cols_[j]) work_[e.row] -= e.coef * x_[j];
    }
    for (int k = 0; k < m_; ++k) {
      const double* row = binv_row(k);
      double v = 0;
      for (int i = 0; i < m_; ++i) v += row[i] * work_[i];
      x_[basic_[k]] = v;
    }
  }

  std::vector<double> ftran(int j) {
    ftran_w_.assign(m_, 0.0);
    for (const auto& e : cols_[j]) {
      double a = e.coef;
      for (int k = 0; k < m_; ++k) ftran_w_[k] += binv_row(k)[e.row] * a;
    }
    return ftran_w_;
  }

  std::vector<double> btran(const std::vector<double>& cb) {
    std::vector<double> y(m_, 0.0);
    for (int k = 0; k < m_; ++k) {
      double c = cb[k];
      if (c == 0.0) continue;
      const double* row = binv_row(k);
      for (int i = 0; i < m_; ++i) y[i] += c * row[i];
    }
    return y;
  }

  std::vector<double> btran_costs() {
    std::vector<double> cb(m_);
    for (int k = 0; k < m_; ++k) cb[k] = cost_[basic_[k]];
    return btran(cb);
  }

  double bound_tol(int j) const {
    double s = 1.0;
    if (std::isfinite(lb_[j])) s = std::max(s, std::abs(lb_[j]));
    if (std::isfinite(ub_[j])) s = std::max(s, std::abs(ub_[j]));
    return opt_.feas_tol * s;
  }

  double infeasibility(int j) const {
    double v = x_[j];
    if (std::isfinite(lb_[j]) && v < lb_[j]) return lb_[j] - v;
    if (std::isfinite(ub_[j]) && v > ub_[j]) return v - ub_[j];
    return 0.0;
  }

  bool basis_feasible() const {
    for (int k = 0; k < m_; ++k) {
      int j = basic_[k];
      if (infeasibility(j) > bound_tol(j)) return false;
    }
    return true;
  }

  Status phase1() {
    long iters = 0;
    while (!basis_feasible()) {
      if (++iters > iter_limit_) fail(Errc::solver_failure, "phase-1 iteration limit");
      std::vector<double> cb(m_, 0.0);
      for (int k = 0; k < m_; ++k) {
        int j = basic_[k];
        double tol = bound_tol(j);
        if (std::isfinite(lb_[j]) && x_[j] < lb_[j] - tol) cb[k] = -1.0;
        else if (std::isfinite(ub_[j]) && x_[j] > ub_[j] + tol) cb[k] = 1.0;
      }
      std::vector<double> y = btran(cb);
      int enter = -1;
      int dir = 0;
      double best = 0;
      for (int j = 0; j < total_; ++j) {
        if (state_[j] == kBasic) continue;
        if (lb_[j] == ub_[j]) continue;
        double d = -dot_col(y, j);
        int sigma = eligible_direction(j, d, opt_.dual_tol);
        if (sigma == 0) continue;
        double score = std::abs(d);
        if (bland_) {
          enter = j;
          dir = sigma;
          break;
        }
        if (score > best) {
          best = score;
          enter = j;
          dir = sigma;
        }
      }
      if (enter < 0) return Status::infeasible;
      if (!step(enter, dir, /*phase1=*/true)) return Status::infeasible;  // stalled
    }
    return Status::optimal;
  }

  Status phase2() {
    long iters = 0;
    while (true) {
      if (++iters > iter_limit_) fail(Errc::solver_failure, "phase-2 iteration limit");
      if (pivots_since_refactor_ >= opt_.refactor_every) {
        refactor();
        compute_basics();
        if (!basis_feasible()) {
          Status st = phase1();
          if (st != Status::optimal) return st;
        }
      }
      std::vector<double> y = btran_costs();
      int enter = -1;
      int dir = 0;
      double best = 0;
      for (int j = 0; j < total_; ++j) {
        if (state_[j] == kBasic) continue;
        if (lb_[j] == ub_[j]) continue;
        double d = cost_[j] - dot_col(y, j);
        int sigma = eligible_direction(j, d, opt_.dual_tol);
        if (sigma == 0) continue;
        if (bland_) {
          enter = j;
          dir = sigma;
          break;
        }
        double score = std::abs(d);
        if (score > best) {
          best = score;
          enter = j;
          dir = sigma;
        }
      }
      if (enter < 0) return Status::optimal;
      if (!step(enter, dir, /*phase1=*/false)) return Status::unbounded;
    }
  }

  double dot_col(const std::vector<double>& y, int j) const {
    double v = 0;
    for (const auto& e : cols_[j]) v += y[e.row] * e.coef;
    return v;
  }

  // direction the nonbasic variable may move to improve: +1 up, -1 down, 0 none
  int eligible_direction(int j, double d, double tol) const {
    switch (state_[j]) {
      case kAtLower: return d < -tol ? +1 : 0;
      case kAtUpper: return d > tol ? -1 : 0;
      case kFreeZero:
        if (d < -tol) return +1;
        if (d > tol) return -1;
        return 0;
      default: return 0;
    }
  }

  // One simplex step; returns false when no blocking event exists (unbounded
  // direction in phase 2; numerical stall in phase 1).
  bool step(int enter, int dir, bool phase1) {
    std::vector<double> w = ftran(enter);
    double sigma = static_cast<double>(dir);

    double best_delta = kInf;
    int leave_pos = -1;
    std::uint8_t leave_state = kAtLower;
    double best_pivot = 0;

    if (std::isfinite(lb_[enter]) && std::isfinite(ub_[enter]))
      best_delta = ub_[enter] - lb_[enter];  // bound flip

    for (int k = 0; k < m_; ++k) {
      if (std::abs(w[k]) <= opt_.pivot_tol) continue;
      int j = basic_[k];
      double rate = -sigma * w[k];
      double v = x_[j];
      double tol = bound_tol(j);
      double cand = kInf;
      std::uint8_t to_state = kAtLower;
      bool below = std::isfinite(lb_[j]) && v < lb_[j] - tol;
      bool above = std::isfinite(ub_[j]) && v > ub_[j] + tol;
      if (phase1 && below) {
        if (rate > 0) { cand = (lb_[j] - v) / rate; to_state = kAtLower; }
      } else if (phase1 && above) {
        if (rate < 0) { cand = (ub_[j] - v) / rate; to_state = kAtUpper; }
      } else {
        if (rate > 0 && std::isfinite(ub_[j])) { cand = (ub_[j] - v) / rate; to_state = kAtUpper; }
        else if (rate < 0 && std::isfinite(lb_[j])) { cand = (lb_[j] - v) / rate; to_state = kAtLower; }
      }
      if (!std::isfinite(cand)) continue;
      cand = std::max(cand, 0.0);
      bool take;
      if (bland_) {
        take = cand < best_delta - 1e-12 ||
               (cand <= best_delta + 1e-12 && (leave_pos < 0 || j < basic_[leave_pos]));
      } else {
        take = cand < best_delta - 1e-9 * (1 + std::abs(best_delta)) ||
               (cand <= best_delta + 1e-9 * (1 + std::abs(best_delta)) &&
                std::abs(w[k]) > best_pivot);
      }
      if (take) {
        best_delta = cand;
        leave_pos = k;
        leave_state = to_state;
        best_pivot = std::abs(w[k]);
      }
    }

    if (!std::isfinite(best_delta)) return false;

    double delta = best_delta;
    if (delta <= 1e-11) {
      if (++degenerate_pivots_ >= opt_.bland_trigger) bland_ = true;
    } else {
      // progress was made; drop back to the faster pricing rule
      degenerate_pivots_ = 0;
      bland_ = false;
    }

    // update basic values along the direction
    for (int k = 0; k < m_; ++k) {
      if (w[k] == 0.0) continue;
      x_[basic_[k]] -= sigma * w[k] * delta;
    }

    if (leave_pos < 0) {
      // bound flip of the entering variable
      x_[enter] = (dir > 0) ? ub_[enter] : lb_[enter];
      state_[enter] = (dir > 0) ? kAtUpper : kAtLower;
      return true;
    }

    int leave = basic_[leave_pos];
    double enter_start = nonbasic_resting_value(enter);
    x_[enter] = enter_start + sigma * delta;
    x_[leave] = (leave_state == kAtLower) ? lb_[leave] : ub_[leave];
    state_[leave] = leave_state;
    basic_[leave_pos] = enter;
    state_[enter] = kBasic;

    // product-form update of the explicit inverse
    double piv = w[leave_pos];
    double* prow = binv_row(leave_pos);
    double inv = 1.0 / piv;
    for (int c = 0; c < m_; ++c) prow[c] *= inv;
    for (int k = 0; k < m_; ++k) {
      if (k == leave_pos) continue;
      double f = w[k];
      if (f == 0.0) continue;
      double* row = binv_row(k);
      for (int c = 0; c < m_; ++c) row[c] -= f * prow[c];
    }
    ++pivots_since_refactor_;
    return true;
  }
};

}  // namespace detail

inline Solution solve_lp(const LpProblem& problem, const SolveOptions& opt = {},
                         const std::vector<std::uint8_t>* warm_basis = nullptr) {
  problem.validate();
  if (problem.rows.empty()) {
    // pure bound problem: each variable sits at its cheaper end
    Solution sol;
    sol.status = Status::optimal;
    sol.objective = 0;
    sol.values.resize(problem.vars.size());
    sol.reduced_costs.resize(problem.vars.size());
    for (std::size_t j = 0; j < problem.vars.size(); ++j) {
      const auto& v = problem.vars[j];
      double val = 0;
      if (v.obj > 0) val = v.lb;
      else if (v.obj < 0) val = v.ub;
      else val = std::isfinite(v.lb) ? v.lb : (std::isfinite(v.ub) ? v.ub : 0.0);
      if (!std::isfinite(val)) {
        sol.status = Status::unbounded;
        return sol;
      }
      sol.values[j] = val;
      sol.objective += v.obj * val;
      sol.reduced_costs[j] = v.obj;
    }
    return sol;
  }
  detail::Simplex s(problem, opt);
  return s.solve(warm_basis);
}

}  // namespace presched::lp
