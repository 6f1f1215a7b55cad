#pragma once

#include <vector>

#include "gaslift/formulation.hpp"

namespace gaslift {

enum class PivotRule { Bland };

struct SimplexConfig {
  double feasibility_tolerance = 1e-7;
  PivotRule pivot_rule = PivotRule::Bland;
  int max_iterations = 10000;
  // Record the objective after every pivot in Solution::trace.
  bool record_trace = false;
};

enum class SolveStatus { Optimal, Infeasible, Unbounded };

const char* to_string(SolveStatus status);

struct SolveTrace {
  // Sum of artificial variables, one entry per phase-1 pivot (plus the start).
  std::vector<double> phase1_objective;
  // Original objective, one entry per phase-2 pivot (plus the start).
  std::vector<double> phase2_objective;
};

struct Solution {
  SolveStatus status = SolveStatus::Infeasible;
  double objective = 0.0;
  std::vector<double> primal_values;
  int iterations = 0;
  SolveTrace trace;
};

/// Dense two-phase primal simplex with Bland's rule.
///
/// Variable bounds may be infinite on either side; free variables are split.
/// Throws IterationLimit past cfg.max_iterations and InvalidInput for a
/// malformed LP or config.
Solution solve(const LinearProgram& lp, const SimplexConfig& cfg = {});

// Largest violation of any row or bound by x.
double max_violation(const LinearProgram& lp, const std::vector<double>& x);

}  // namespace gaslift
