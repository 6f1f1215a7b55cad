#include "gaslift/exact.hpp"

#include <algorithm>
#include <cmath>

#include "gaslift/error.hpp"

namespace gaslift {

namespace {
// Objectives within this relative margin count as ties.
constexpr double kTieTolerance = 1e-9;
}  // namespace

std::optional<double> objective_for(const ProblemParams& params, const FlowTable& table,
                                    const RegionAssignment& z, const SimplexConfig& cfg) {
  const LinearProgram lp = build_early_fixed_lp(params, table, z);
  const Solution sol = solve(lp, cfg);
  if (sol.status != SolveStatus::Optimal) return std::nullopt;
  return sol.objective;
}

ExactResult solve_exact(const ProblemParams& params, const FlowTable& table,
                        const SimplexConfig& cfg) {
  ExactResult result;
  result.per_assignment_objectives.reserve(kAssignmentCount);
  bool found = false;
  for (const RegionAssignment& z : enumerate_assignments()) {
    const std::optional<double> value = objective_for(params, table, z, cfg);
    result.per_assignment_objectives.emplace_back(z, value);
    if (!value) continue;
    const double margin = kTieTolerance * std::max(1.0, std::fabs(result.best_objective));
    if (!found || *value > result.best_objective + margin) {
      result.best_objective = *value;
      result.best_assignment = z;
      found = true;
    }
  }
  if (!found) throw AllInfeasible("every early-fixed LP is infeasible");
  return result;
}

}  // namespace gaslift
