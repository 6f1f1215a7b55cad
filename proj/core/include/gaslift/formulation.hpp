#pragma once

#include <compare>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "gaslift/well_model.hpp"

namespace gaslift {

// One linearization interval per axis: lift gas in
// [qgl_points[zgl_idx], qgl_points[zgl_idx + 1]] and wellhead pressure in
// [whp_points[zwhp_idx], whp_points[zwhp_idx + 1]].
struct RegionAssignment {
  int zgl_idx = 0;
  int zwhp_idx = 0;

  friend auto operator<=>(const RegionAssignment&, const RegionAssignment&) = default;
};

inline constexpr std::size_t kAssignmentCount = kIntervals * kIntervals;

bool is_valid(const RegionAssignment& z);

// Position of z in the lexicographic enumeration, 0..24.
std::size_t assignment_index(const RegionAssignment& z);

// All 25 assignments in lexicographic (zgl_idx, zwhp_idx) order.
std::vector<RegionAssignment> enumerate_assignments();

enum class Sense { LessEqual, Equal, GreaterEqual };

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

// max c^T x  s.t.  A x (sense) b,  lower <= x <= upper.
// The constraint matrix is dense and row-major.
struct LinearProgram {
  std::vector<double> objective_coeffs;
  std::vector<double> constraint_matrix;
  std::vector<Sense> constraint_senses;
  std::vector<double> rhs;
  std::vector<double> variable_lower_bounds;
  std::vector<double> variable_upper_bounds;
  std::vector<std::string> variable_names;

  std::size_t num_variables() const { return objective_coeffs.size(); }
  std::size_t num_constraints() const { return rhs.size(); }

  double coeff(std::size_t row, std::size_t col) const {
    return constraint_matrix[row * num_variables() + col];
  }

  std::size_t add_variable(std::string name, double lower, double upper, double cost = 0.0);

  // Appends a row given as (column, coefficient) pairs.
  std::size_t add_constraint(const std::vector<std::pair<std::size_t, double>>& terms,
                             Sense sense, double rhs_value);

  // Throws InvalidInput when the vector sizes disagree.
  void validate() const;
};

// Column layout of the early-fixed well LP.
namespace lp_layout {
inline constexpr std::size_t theta(std::size_t k, std::size_t j) { return k * kBreakpoints + j; }
inline constexpr std::size_t eta_gl(std::size_t k) { return kBreakpoints * kBreakpoints + k; }
inline constexpr std::size_t eta_whp(std::size_t j) {
  return kBreakpoints * kBreakpoints + kBreakpoints + j;
}
inline constexpr std::size_t kQgl = kBreakpoints * kBreakpoints + 2 * kBreakpoints;
inline constexpr std::size_t kWhp = kQgl + 1;
inline constexpr std::size_t kQLiquid = kQgl + 2;
inline constexpr std::size_t kQOil = kQgl + 3;
inline constexpr std::size_t kQWater = kQgl + 4;
inline constexpr std::size_t kQGas = kQgl + 5;
inline constexpr std::size_t kNumVariables = kQgl + 6;
}  // namespace lp_layout

/// Builds P(params, z): the piecewise-linear well model with its operating
/// region fixed to z.
///
/// The convex-combination weights theta span the whole grid; the marginals
/// eta outside the window selected by z are pinned to zero, which replaces
/// the SOS2 requirement. Phase flows follow the separator split and the lift
/// gas is capped by params.qgl_max. The objective maximizes oil flow.
///
/// Throws InvalidInput when z lies outside Z.
LinearProgram build_early_fixed_lp(const ProblemParams& params, const FlowTable& table,
                                   const RegionAssignment& z);

// One constraint per line, e.g. `c3: +1 theta_0_0 +1 theta_0_1 = 1`.
std::string dump_lp(const LinearProgram& lp);

}  // namespace gaslift
