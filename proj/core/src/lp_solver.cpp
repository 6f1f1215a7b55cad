#include "gaslift/lp_solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>

#include "gaslift/error.hpp"

namespace gaslift {

namespace {

// Applied to the equilibrated tableau, whose entries are O(1).
constexpr double kPivotTolerance = 1e-7;
constexpr double kCostTolerance = 1e-9;
constexpr double kRatioTieTolerance = 1e-12;
// Entries below this magnitude after a pivot are roundoff and get zeroed.
constexpr double kDropTolerance = 1e-12;

// Power of two closest to 1 / magnitude, so scaling is exact.
double inverse_pow2(double magnitude) {
  if (magnitude == 0.0) return 1.0;
  int exponent = 0;
  std::frexp(magnitude, &exponent);
  return std::ldexp(1.0, -(exponent - 1));
}

// x_original = offset + sign * y_plus (- y_minus for split variables).
struct ColumnMap {
  std::size_t plus = 0;
  std::size_t minus = 0;
  bool split = false;
  double sign = 1.0;
  double offset = 0.0;
};

enum class ColumnKind { Structural, Slack, Artificial };

class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), cells_(rows * (cols + 1), 0.0), costs_(cols + 1, 0.0),
        basis_(rows, 0), origin_(rows) {
    for (std::size_t r = 0; r < rows; ++r) origin_[r] = r;
  }

  double& at(std::size_t r, std::size_t c) { return cells_[r * (cols_ + 1) + c]; }
  double at(std::size_t r, std::size_t c) const { return cells_[r * (cols_ + 1) + c]; }
  double& rhs(std::size_t r) { return at(r, cols_); }
  double rhs(std::size_t r) const { return at(r, cols_); }
  double& cost(std::size_t c) { return costs_[c]; }
  // The cost row stores -(objective) in its rhs slot.
  double objective() const { return -costs_[cols_]; }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t& basis(std::size_t r) { return basis_[r]; }
  std::size_t basis(std::size_t r) const { return basis_[r]; }
  // Index of row r in the initial tableau.
  std::size_t origin(std::size_t r) const { return origin_[r]; }

  // Loads reduced costs for `c` relative to the current basis.
  void set_objective(const std::vector<double>& c) {
    for (std::size_t j = 0; j < cols_; ++j) costs_[j] = c[j];
    costs_[cols_] = 0.0;
    for (std::size_t r = 0; r < rows_; ++r) {
      const double cb = c[basis_[r]];
      if (cb == 0.0) continue;
      for (std::size_t j = 0; j <= cols_; ++j) costs_[j] -= cb * at(r, j);
    }
  }

  void pivot(std::size_t pr, std::size_t pc) {
    const double inv = 1.0 / at(pr, pc);
    for (std::size_t j = 0; j <= cols_; ++j) at(pr, j) *= inv;
    at(pr, pc) = 1.0;
    for (std::size_t r = 0; r < rows_; ++r) {
      if (r == pr) continue;
      const double f = at(r, pc);
      if (f == 0.0) continue;
      for (std::size_t j = 0; j <= cols_; ++j) {
        double& cell = at(r, j);
        cell -= f * at(pr, j);
        if (std::fabs(cell) < kDropTolerance) cell = 0.0;
      }
      at(r, pc) = 0.0;
    }
    const double f = costs_[pc];
    if (f != 0.0) {
      for (std::size_t j = 0; j <= cols_; ++j) costs_[j] -= f * at(pr, j);
      costs_[pc] = 0.0;
    }
    basis_[pr] = pc;
  }

  void remove_row(std::size_t r) {
    const std::size_t width = cols_ + 1;
    cells_.erase(cells_.begin() + static_cast<std::ptrdiff_t>(r * width),
                 cells_.begin() + static_cast<std::ptrdiff_t>((r + 1) * width));
    basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(r));
    origin_.erase(origin_.begin() + static_cast<std::ptrdiff_t>(r));
    --rows_;
  }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> cells_;
  std::vector<double> costs_;
  std::vector<std::size_t> basis_;
  std::vector<std::size_t> origin_;
};

// Solves M x = v in place by Gaussian elimination with partial pivoting.
// Returns false when M is numerically singular.
bool solve_dense(std::vector<double> m, std::vector<double>& v) {
  const std::size_t n = v.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::fabs(m[r * n + col]) > std::fabs(m[piv * n + col])) piv = r;
    }
    if (std::fabs(m[piv * n + col]) < 1e-13) return false;
    if (piv != col) {
      for (std::size_t c = 0; c < n; ++c) std::swap(m[piv * n + c], m[col * n + c]);
      std::swap(v[piv], v[col]);
    }
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = m[r * n + col] / m[col * n + col];
      if (f == 0.0) continue;
      for (std::size_t c = col; c < n; ++c) m[r * n + c] -= f * m[col * n + c];
      v[r] -= f * v[col];
    }
  }
  for (std::size_t r = n; r-- > 0;) {
    double acc = v[r];
    for (std::size_t c = r + 1; c < n; ++c) acc -= m[r * n + c] * v[c];
    v[r] = acc / m[r * n + r];
  }
  return true;
}

// Recomputes the basic values of the final basis from the initial tableau,
// with one round of residual refinement. Falls back to the tableau's own
// right-hand side if the basis matrix turns out singular.
std::vector<double> basic_values(const Tableau& initial, const Tableau& final_tab) {
  const std::size_t k = final_tab.rows();
  std::vector<double> fallback(k);
  for (std::size_t r = 0; r < k; ++r) fallback[r] = final_tab.rhs(r);
  if (k == 0) return fallback;

  std::vector<double> basis_matrix(k * k);
  std::vector<double> b(k);
  for (std::size_t r = 0; r < k; ++r) {
    const std::size_t row = final_tab.origin(r);
    b[r] = initial.rhs(row);
    for (std::size_t c = 0; c < k; ++c) basis_matrix[r * k + c] = initial.at(row, final_tab.basis(c));
  }
  std::vector<double> x = b;
  if (!solve_dense(basis_matrix, x)) return fallback;
  std::vector<double> residual(k);
  for (std::size_t r = 0; r < k; ++r) {
    long double acc = b[r];
    for (std::size_t c = 0; c < k; ++c) {
      acc -= static_cast<long double>(basis_matrix[r * k + c]) * x[c];
    }
    residual[r] = static_cast<double>(acc);
  }
  if (solve_dense(basis_matrix, residual)) {
    for (std::size_t r = 0; r < k; ++r) x[r] += residual[r];
  }
  return x;
}

enum class PhaseOutcome { Optimal, Unbounded };

class SimplexRun {
 public:
  SimplexRun(Tableau& tab, const std::vector<ColumnKind>& kinds, const SimplexConfig& cfg,
             int& iterations)
      : tab_(tab), kinds_(kinds), cfg_(cfg), iterations_(iterations) {}

  // Maximizes the loaded objective with Bland's rule. `allow_artificial`
  // controls whether artificial columns may enter the basis.
  PhaseOutcome run(bool allow_artificial, std::vector<double>* trace, double trace_sign,
                   double trace_offset) {
    if (trace) trace->push_back(trace_sign * tab_.objective() + trace_offset);
    while (true) {
      std::size_t entering = tab_.cols();
      for (std::size_t j = 0; j < tab_.cols(); ++j) {
        if (!allow_artificial && kinds_[j] == ColumnKind::Artificial) continue;
        if (tab_.cost(j) > kCostTolerance) {
          entering = j;
          break;
        }
      }
      if (entering == tab_.cols()) return PhaseOutcome::Optimal;

      std::size_t leaving = tab_.rows();
      double best_ratio = 0.0;
      for (std::size_t r = 0; r < tab_.rows(); ++r) {
        const double a = tab_.at(r, entering);
        if (a <= kPivotTolerance) continue;
        const double ratio = std::max(0.0, tab_.rhs(r)) / a;
        if (leaving == tab_.rows() || ratio < best_ratio - kRatioTieTolerance) {
          best_ratio = ratio;
          leaving = r;
        } else if (ratio <= best_ratio + kRatioTieTolerance &&
                   tab_.basis(r) < tab_.basis(leaving)) {
          leaving = r;
        }
      }
      if (leaving == tab_.rows()) return PhaseOutcome::Unbounded;

      if (++iterations_ > cfg_.max_iterations) {
        throw IterationLimit("simplex exceeded " + std::to_string(cfg_.max_iterations) +
                             " iterations");
      }
      tab_.pivot(leaving, entering);
      if (trace) trace->push_back(trace_sign * tab_.objective() + trace_offset);
    }
  }

 private:
  Tableau& tab_;
  const std::vector<ColumnKind>& kinds_;
  const SimplexConfig& cfg_;
  int& iterations_;
};

}  // namespace

const char* to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Optimal: return "Optimal";
    case SolveStatus::Infeasible: return "Infeasible";
    case SolveStatus::Unbounded: return "Unbounded";
  }
  return "Unknown";
}

Solution solve(const LinearProgram& lp, const SimplexConfig& cfg) {
  lp.validate();
  if (!(cfg.feasibility_tolerance > 0.0) || cfg.max_iterations <= 0) {
    throw InvalidInput("simplex config needs a positive tolerance and iteration limit");
  }
  const std::size_t n = lp.num_variables();
  const std::size_t m = lp.num_constraints();

  // Map every original variable onto nonnegative columns.
  std::vector<ColumnMap> maps(n);
  std::size_t structural = 0;
  struct BoundRow {
    std::size_t col;
    double width;
  };
  std::vector<BoundRow> bound_rows;
  for (std::size_t i = 0; i < n; ++i) {
    const double lo = lp.variable_lower_bounds[i];
    const double hi = lp.variable_upper_bounds[i];
    ColumnMap& map = maps[i];
    map.plus = structural++;
    if (std::isfinite(lo)) {
      map.offset = lo;
      if (std::isfinite(hi)) bound_rows.push_back({map.plus, hi - lo});
    } else if (std::isfinite(hi)) {
      map.offset = hi;
      map.sign = -1.0;
    } else {
      map.split = true;
      map.minus = structural++;
    }
  }

  // Rows in y-space, normalized to a nonnegative right-hand side.
  const std::size_t total_rows = m + bound_rows.size();
  std::vector<std::vector<double>> rows(total_rows, std::vector<double>(structural, 0.0));
  std::vector<Sense> senses(total_rows);
  std::vector<double> rhs(total_rows);
  for (std::size_t r = 0; r < m; ++r) {
    double b = lp.rhs[r];
    for (std::size_t i = 0; i < n; ++i) {
      const double a = lp.coeff(r, i);
      if (a == 0.0) continue;
      b -= a * maps[i].offset;
      rows[r][maps[i].plus] += a * maps[i].sign;
      if (maps[i].split) rows[r][maps[i].minus] -= a;
    }
    senses[r] = lp.constraint_senses[r];
    rhs[r] = b;
  }
  for (std::size_t k = 0; k < bound_rows.size(); ++k) {
    rows[m + k][bound_rows[k].col] = 1.0;
    senses[m + k] = Sense::LessEqual;
    rhs[m + k] = bound_rows[k].width;
  }
  // Equilibrate: rows to unit max-norm, then columns. The tableau solves for
  // y'_c = y_c / col_scale[c].
  for (std::size_t r = 0; r < total_rows; ++r) {
    double top = 0.0;
    for (double a : rows[r]) top = std::max(top, std::fabs(a));
    const double scale = inverse_pow2(top);
    for (double& a : rows[r]) a *= scale;
    rhs[r] *= scale;
  }
  std::vector<double> col_scale(structural, 1.0);
  for (std::size_t c = 0; c < structural; ++c) {
    double top = 0.0;
    for (std::size_t r = 0; r < total_rows; ++r) top = std::max(top, std::fabs(rows[r][c]));
    col_scale[c] = inverse_pow2(top);
    for (std::size_t r = 0; r < total_rows; ++r) rows[r][c] *= col_scale[c];
  }
  for (std::size_t r = 0; r < total_rows; ++r) {
    if (rhs[r] < 0.0) {
      rhs[r] = -rhs[r];
      for (double& a : rows[r]) a = -a;
      if (senses[r] == Sense::LessEqual) {
        senses[r] = Sense::GreaterEqual;
      } else if (senses[r] == Sense::GreaterEqual) {
        senses[r] = Sense::LessEqual;
      }
    }
  }

  std::size_t slack_count = 0;
  std::size_t artificial_count = 0;
  for (Sense s : senses) {
    if (s != Sense::Equal) ++slack_count;
    if (s != Sense::LessEqual) ++artificial_count;
  }
  const std::size_t cols = structural + slack_count + artificial_count;
  std::vector<ColumnKind> kinds(cols, ColumnKind::Structural);
  Tableau tab(total_rows, cols);
  {
    std::size_t next_slack = structural;
    std::size_t next_art = structural + slack_count;
    for (std::size_t r = 0; r < total_rows; ++r) {
      for (std::size_t c = 0; c < structural; ++c) tab.at(r, c) = rows[r][c];
      tab.rhs(r) = rhs[r];
      if (senses[r] == Sense::LessEqual) {
        kinds[next_slack] = ColumnKind::Slack;
        tab.at(r, next_slack) = 1.0;
        tab.basis(r) = next_slack++;
      } else {
        if (senses[r] == Sense::GreaterEqual) {
          kinds[next_slack] = ColumnKind::Slack;
          tab.at(r, next_slack++) = -1.0;
        }
        kinds[next_art] = ColumnKind::Artificial;
        tab.at(r, next_art) = 1.0;
        tab.basis(r) = next_art++;
      }
    }
  }

  const Tableau initial = tab;
  Solution sol;
  SimplexRun runner(tab, kinds, cfg, sol.iterations);

  if (artificial_count > 0) {
    std::vector<double> phase1(cols, 0.0);
    for (std::size_t c = 0; c < cols; ++c) {
      if (kinds[c] == ColumnKind::Artificial) phase1[c] = -1.0;
    }
    tab.set_objective(phase1);
    runner.run(true, cfg.record_trace ? &sol.trace.phase1_objective : nullptr, -1.0, 0.0);
    if (-tab.objective() > cfg.feasibility_tolerance) {
      sol.status = SolveStatus::Infeasible;
      return sol;
    }
    // Pivot zero-level artificials out of the basis; drop redundant rows.
    for (std::size_t r = 0; r < tab.rows();) {
      if (kinds[tab.basis(r)] != ColumnKind::Artificial) {
        ++r;
        continue;
      }
      std::size_t pc = cols;
      double best = kPivotTolerance;
      for (std::size_t c = 0; c < cols; ++c) {
        if (kinds[c] == ColumnKind::Artificial) continue;
        if (std::fabs(tab.at(r, c)) > best) {
          best = std::fabs(tab.at(r, c));
          pc = c;
        }
      }
      if (pc == cols) {
        tab.remove_row(r);
      } else {
        tab.pivot(r, pc);
        ++r;
      }
    }
  }

  std::vector<double> phase2(cols, 0.0);
  double offset = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double c = lp.objective_coeffs[i];
    offset += c * maps[i].offset;
    phase2[maps[i].plus] += c * maps[i].sign;
    if (maps[i].split) phase2[maps[i].minus] -= c;
  }
  for (std::size_t c = 0; c < structural; ++c) phase2[c] *= col_scale[c];
  tab.set_objective(phase2);
  const PhaseOutcome outcome =
      runner.run(false, cfg.record_trace ? &sol.trace.phase2_objective : nullptr, 1.0, offset);
  if (outcome == PhaseOutcome::Unbounded) {
    sol.status = SolveStatus::Unbounded;
    return sol;
  }

  std::vector<double> y(cols, 0.0);
  const std::vector<double> basic = basic_values(initial, tab);
  for (std::size_t r = 0; r < tab.rows(); ++r) y[tab.basis(r)] = std::max(0.0, basic[r]);
  for (std::size_t c = 0; c < structural; ++c) y[c] *= col_scale[c];
  sol.primal_values.resize(n);
  sol.objective = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double v = maps[i].offset + maps[i].sign * y[maps[i].plus];
    if (maps[i].split) v -= y[maps[i].minus];
    sol.primal_values[i] = v;
    sol.objective += lp.objective_coeffs[i] * v;
  }
  sol.status = SolveStatus::Optimal;
  return sol;
}

double max_violation(const LinearProgram& lp, const std::vector<double>& x) {
  double worst = 0.0;
  for (std::size_t r = 0; r < lp.num_constraints(); ++r) {
    double lhs = 0.0;
    for (std::size_t c = 0; c < lp.num_variables(); ++c) lhs += lp.coeff(r, c) * x[c];
    const double diff = lhs - lp.rhs[r];
    switch (lp.constraint_senses[r]) {
      case Sense::LessEqual: worst = std::max(worst, diff); break;
      case Sense::GreaterEqual: worst = std::max(worst, -diff); break;
      case Sense::Equal: worst = std::max(worst, std::fabs(diff)); break;
    }
  }
  for (std::size_t c = 0; c < lp.num_variables(); ++c) {
    worst = std::max(worst, lp.variable_lower_bounds[c] - x[c]);
    worst = std::max(worst, x[c] - lp.variable_upper_bounds[c]);
  }
  return worst;
}

}  // namespace gaslift
