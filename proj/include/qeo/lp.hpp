#ifndef QEO_LP_HPP
#define QEO_LP_HPP

// Dense two-phase primal simplex for
//
//   maximize  c^T x   subject to  A x = b,  x_j >= 0 or x_j free.
//
// Pivoting follows Bland's rule (lowest index enters, lowest basic index
// leaves among ratio ties), so the returned vertex and dual are
// deterministic. Free variables are split into positive and negative parts.
// Duals come from the reduced costs of the phase-one artificial columns.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "qeo/errors.hpp"

namespace qeo::lp {

enum class Bound { NonNegative, Free };

enum class Status { Optimal, Infeasible, Unbounded, NumericalFailure };

inline const char* to_string(Status s) {
  switch (s) {
    case Status::Optimal: return "optimal";
    case Status::Infeasible: return "infeasible";
    case Status::Unbounded: return "unbounded";
    case Status::NumericalFailure: return "numerical_failure";
  }
  return "unknown";
}

struct LinearProgram {
  std::vector<double> objective;               // n
  std::vector<std::vector<double>> matrix;     // m rows of n
  std::vector<double> rhs;                     // m
  std::vector<Bound> bounds;                   // n; empty means all NonNegative

  std::size_t num_vars() const { return objective.size(); }
  std::size_t num_rows() const { return rhs.size(); }

  Bound bound(std::size_t j) const { return bounds.empty() ? Bound::NonNegative : bounds[j]; }

  // Appends the equality row . x = value.
  void add_row(std::vector<double> row, double value) {
    matrix.push_back(std::move(row));
    rhs.push_back(value);
  }
};

struct LpSolution {
  Status status = Status::NumericalFailure;
  double value = 0.0;
  std::vector<double> primal;
  std::vector<double> dual;
  double primal_residual = 0.0;  // max |A x - b|, and bound violations
  double dual_residual = 0.0;    // max violation of dual feasibility
  double duality_gap = 0.0;      // |c^T x - b^T y|
  std::size_t pivots = 0;
  std::string message;

  bool optimal() const { return status == Status::Optimal; }
};

struct SolverOptions {
  double pivot_tol = 1e-9;
  double cost_tol = 1e-9;
  double feasibility_tol = 1e-9;  // phase-one infeasibility and final residual checks
  std::size_t max_pivots = 200000;
};

namespace detail {

class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), t_((rows + 1) * (cols + 1), 0.0) {}

  double& at(std::size_t i, std::size_t j) { return t_[i * (cols_ + 1) + j]; }
  double at(std::size_t i, std::size_t j) const { return t_[i * (cols_ + 1) + j]; }
  double& rhs(std::size_t i) { return at(i, cols_); }
  double& cost(std::size_t j) { return at(rows_, j); }
  double& objective_rhs() { return at(rows_, cols_); }

  void pivot(std::size_t pr, std::size_t pc) {
    const double inv = 1.0 / at(pr, pc);
    for (std::size_t j = 0; j <= cols_; ++j) at(pr, j) *= inv;
    at(pr, pc) = 1.0;
    for (std::size_t i = 0; i <= rows_; ++i) {
      if (i == pr) continue;
      const double f = at(i, pc);
      if (f == 0.0) continue;
      for (std::size_t j = 0; j <= cols_; ++j) at(i, j) -= f * at(pr, j);
      at(i, pc) = 0.0;
    }
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> t_;
};

class SimplexSolver {
 public:
  SimplexSolver(const LinearProgram& lp, const SolverOptions& opts) : lp_(lp), opts_(opts) {}

  LpSolution run() {
    LpSolution sol;
    if (!validate(sol)) return sol;
    build();

    // Phase one: maximize -sum(artificials).
    std::vector<double> phase1(total_cols_, 0.0);
    for (std::size_t i = 0; i < m_; ++i) phase1[art_begin_ + i] = -1.0;
    set_objective(phase1);
    Status st = iterate(/*allow_artificial=*/true, sol.pivots);
    if (st == Status::NumericalFailure) return fail(sol, "phase one exceeded pivot limit");
    const double infeas = tab_.objective_rhs();  // = sum of artificials
    if (infeas > opts_.feasibility_tol * (1.0 + rhs_scale_)) {
      sol.status = Status::Infeasible;
      sol.message = "phase one ended with artificial mass " + std::to_string(infeas);
      return sol;
    }
    expel_artificials(sol.pivots);

    // Phase two: the real objective, artificials barred from entering.
    std::vector<double> phase2(total_cols_, 0.0);
    for (std::size_t c = 0; c < struct_cols_; ++c) phase2[c] = lp_.objective[col_var_[c]] * col_sign_[c];
    set_objective(phase2);
    st = iterate(/*allow_artificial=*/false, sol.pivots);
    if (st == Status::Unbounded) {
      sol.status = Status::Unbounded;
      sol.message = "objective unbounded above";
      return sol;
    }
    if (st == Status::NumericalFailure) return fail(sol, "phase two exceeded pivot limit");

    extract(sol);
    return sol;
  }

 private:
  bool validate(LpSolution& sol) const {
    const std::size_t n = lp_.num_vars();
    if (lp_.matrix.size() != lp_.num_rows()) throw StructuralError("LinearProgram: row count mismatch");
    if (!lp_.bounds.empty() && lp_.bounds.size() != n) throw StructuralError("LinearProgram: bounds size mismatch");
    for (const auto& row : lp_.matrix) {
      if (row.size() != n) throw StructuralError("LinearProgram: row length mismatch");
      for (double a : row) {
        if (!std::isfinite(a)) {
          fail(sol, "non-finite constraint coefficient");
          return false;
        }
      }
    }
    for (double v : lp_.objective) {
      if (!std::isfinite(v)) {
        fail(sol, "non-finite objective coefficient");
        return false;
      }
    }
    for (double v : lp_.rhs) {
      if (!std::isfinite(v)) {
        fail(sol, "non-finite right-hand side");
        return false;
      }
    }
    return true;
  }

  static LpSolution& fail(LpSolution& sol, const std::string& why) {
    sol.status = Status::NumericalFailure;
    sol.message = why;
    return sol;
  }

  void build() {
    m_ = lp_.num_rows();
    const std::size_t n = lp_.num_vars();
    for (std::size_t j = 0; j < n; ++j) {
      col_var_.push_back(j);
      col_sign_.push_back(1.0);
      if (lp_.bound(j) == Bound::Free) {
        col_var_.push_back(j);
        col_sign_.push_back(-1.0);
      }
    }
    struct_cols_ = col_var_.size();
    art_begin_ = struct_cols_;
    total_cols_ = struct_cols_ + m_;
    tab_ = Tableau(m_, total_cols_);
    row_sign_.assign(m_, 1.0);
    basis_.assign(m_, 0);
    rhs_scale_ = 0.0;
    for (std::size_t i = 0; i < m_; ++i) {
      row_sign_[i] = lp_.rhs[i] < 0.0 ? -1.0 : 1.0;
      for (std::size_t c = 0; c < struct_cols_; ++c) {
        tab_.at(i, c) = row_sign_[i] * col_sign_[c] * lp_.matrix[i][col_var_[c]];
      }
      tab_.at(i, art_begin_ + i) = 1.0;
      tab_.rhs(i) = row_sign_[i] * lp_.rhs[i];
      basis_[i] = art_begin_ + i;
      rhs_scale_ = std::max(rhs_scale_, std::abs(lp_.rhs[i]));
    }
  }

  // Loads `costs` into the objective row, priced out against the current basis.
  void set_objective(const std::vector<double>& costs) {
    for (std::size_t j = 0; j < total_cols_; ++j) tab_.cost(j) = costs[j];
    tab_.objective_rhs() = 0.0;
    for (std::size_t i = 0; i < m_; ++i) {
      const double cb = costs[basis_[i]];
      if (cb == 0.0) continue;
      for (std::size_t j = 0; j <= total_cols_; ++j) tab_.at(m_, j) -= cb * tab_.at(i, j);
    }
  }

  Status iterate(bool allow_artificial, std::size_t& pivots) {
    const std::size_t limit = allow_artificial ? total_cols_ : struct_cols_;
    while (true) {
      std::size_t enter = limit;
      for (std::size_t j = 0; j < limit; ++j) {
        if (tab_.cost(j) > opts_.cost_tol) {
          enter = j;
          break;
        }
      }
      if (enter == limit) return Status::Optimal;

      std::size_t leave = m_;
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < m_; ++i) {
        const double a = tab_.at(i, enter);
        if (a <= opts_.pivot_tol) continue;
        const double ratio = std::max(tab_.rhs(i), 0.0) / a;
        const double slack = 1e-12 * std::max(1.0, std::abs(ratio));
        if (leave == m_ || ratio < best - slack) {
          best = ratio;
          leave = i;
        } else if (ratio <= best + slack && basis_[i] < basis_[leave]) {
          best = std::min(best, ratio);
          leave = i;
        }
      }
      if (leave == m_) return Status::Unbounded;
      tab_.pivot(leave, enter);
      basis_[leave] = enter;
      if (++pivots > opts_.max_pivots) return Status::NumericalFailure;
    }
  }

  // Pivots zero-level artificials out of the basis where a structural column
  // can replace them; rows where none can are redundant and keep theirs.
  void expel_artificials(std::size_t& pivots) {
    for (std::size_t i = 0; i < m_; ++i) {
      if (basis_[i] < art_begin_) continue;
      std::size_t best_col = struct_cols_;
      double best_mag = 1e-9;
      for (std::size_t c = 0; c < struct_cols_; ++c) {
        const double mag = std::abs(tab_.at(i, c));
        if (mag > best_mag) {
          best_mag = mag;
          best_col = c;
        }
      }
      if (best_col == struct_cols_) continue;
      tab_.pivot(i, best_col);
      basis_[i] = best_col;
      ++pivots;
    }
  }

  void extract(LpSolution& sol) {
    const std::size_t n = lp_.num_vars();
    std::vector<double> cols(total_cols_, 0.0);
    for (std::size_t i = 0; i < m_; ++i) cols[basis_[i]] = tab_.rhs(i);
    sol.primal.assign(n, 0.0);
    for (std::size_t c = 0; c < struct_cols_; ++c) sol.primal[col_var_[c]] += col_sign_[c] * cols[c];

    // Reduced cost of artificial i in phase two is 0 - y_i (sign-flipped row).
    sol.dual.assign(m_, 0.0);
    for (std::size_t i = 0; i < m_; ++i) sol.dual[i] = -tab_.cost(art_begin_ + i) * row_sign_[i];

    double value = 0.0;
    for (std::size_t j = 0; j < n; ++j) value += lp_.objective[j] * sol.primal[j];
    sol.value = value;

    double pres = 0.0;
    for (std::size_t i = 0; i < m_; ++i) {
      double ax = 0.0;
      for (std::size_t j = 0; j < n; ++j) ax += lp_.matrix[i][j] * sol.primal[j];
      pres = std::max(pres, std::abs(ax - lp_.rhs[i]));
    }
    for (std::size_t j = 0; j < n; ++j) {
      if (lp_.bound(j) == Bound::NonNegative) pres = std::max(pres, -sol.primal[j]);
    }

    double dres = 0.0;
    double cscale = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      double aty = 0.0;
      for (std::size_t i = 0; i < m_; ++i) aty += lp_.matrix[i][j] * sol.dual[i];
      const double reduced = lp_.objective[j] - aty;
      dres = std::max(dres, lp_.bound(j) == Bound::Free ? std::abs(reduced) : reduced);
      cscale = std::max(cscale, std::abs(lp_.objective[j]));
    }
    double by = 0.0;
    for (std::size_t i = 0; i < m_; ++i) by += lp_.rhs[i] * sol.dual[i];

    sol.primal_residual = pres;
    sol.dual_residual = std::max(dres, 0.0);
    sol.duality_gap = std::abs(value - by);

    const double ptol = opts_.feasibility_tol * (1.0 + rhs_scale_);
    const double dtol = opts_.feasibility_tol * (1.0 + cscale);
    const double gtol = opts_.feasibility_tol * (1.0 + std::abs(value));
    if (sol.primal_residual > ptol || sol.dual_residual > dtol || sol.duality_gap > gtol) {
      sol.status = Status::NumericalFailure;
      sol.message = "optimality certificate failed: primal " + std::to_string(sol.primal_residual) +
                    ", dual " + std::to_string(sol.dual_residual) + ", gap " + std::to_string(sol.duality_gap);
      return;
    }
    sol.status = Status::Optimal;
  }

  const LinearProgram& lp_;
  SolverOptions opts_;
  std::size_t m_ = 0;
  std::size_t struct_cols_ = 0;
  std::size_t art_begin_ = 0;
  std::size_t total_cols_ = 0;
  std::vector<std::size_t> col_var_;
  std::vector<double> col_sign_;
  std::vector<double> row_sign_;
  std::vector<std::size_t> basis_;
  double rhs_scale_ = 0.0;
  Tableau tab_{0, 0};
};

}  // namespace detail

inline LpSolution solve(const LinearProgram& lp, const SolverOptions& opts = {}) {
  return detail::SimplexSolver(lp, opts).run();
}

}  // namespace qeo::lp

#endif  // QEO_LP_HPP
