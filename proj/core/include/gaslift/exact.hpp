#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "gaslift/formulation.hpp"
#include "gaslift/lp_solver.hpp"

namespace gaslift {

struct ExactResult {
  double best_objective = 0.0;
  RegionAssignment best_assignment;
  // Lexicographic order; nullopt marks an infeasible early-fixed LP.
  std::vector<std::pair<RegionAssignment, std::optional<double>>> per_assignment_objectives;
};

// Optimal oil flow of the early-fixed LP, or nullopt when it is infeasible.
std::optional<double> objective_for(const ProblemParams& params, const FlowTable& table,
                                    const RegionAssignment& z, const SimplexConfig& cfg = {});

/// Solves P(params) exactly by solving the early-fixed LP of every z in Z.
/// Ties resolve to the lexicographically smallest assignment.
/// Throws AllInfeasible if no assignment admits a feasible LP.
ExactResult solve_exact(const ProblemParams& params, const FlowTable& table,
                        const SimplexConfig& cfg = {});

}  // namespace gaslift
