#include "gaslift/formulation.hpp"

#include <cmath>
#include <sstream>

#include "gaslift/error.hpp"

namespace gaslift {

bool is_valid(const RegionAssignment& z) {
  constexpr int n = static_cast<int>(kIntervals);
  return z.zgl_idx >= 0 && z.zgl_idx < n && z.zwhp_idx >= 0 && z.zwhp_idx < n;
}

std::size_t assignment_index(const RegionAssignment& z) {
  if (!is_valid(z)) throw InvalidInput("region assignment outside Z");
  return static_cast<std::size_t>(z.zgl_idx) * kIntervals + static_cast<std::size_t>(z.zwhp_idx);
}

std::vector<RegionAssignment> enumerate_assignments() {
  std::vector<RegionAssignment> out;
  out.reserve(kAssignmentCount);
  for (int k = 0; k < static_cast<int>(kIntervals); ++k) {
    for (int j = 0; j < static_cast<int>(kIntervals); ++j) out.push_back({k, j});
  }
  return out;
}

std::size_t LinearProgram::add_variable(std::string name, double lower, double upper,
                                        double cost) {
  const std::size_t old_cols = num_variables();
  if (old_cols > 0 && num_constraints() > 0) {
    std::vector<double> widened(num_constraints() * (old_cols + 1), 0.0);
    for (std::size_t r = 0; r < num_constraints(); ++r) {
      for (std::size_t c = 0; c < old_cols; ++c) {
        widened[r * (old_cols + 1) + c] = constraint_matrix[r * old_cols + c];
      }
    }
    constraint_matrix = std::move(widened);
  } else if (num_constraints() > 0) {
    constraint_matrix.assign(num_constraints(), 0.0);
  }
  objective_coeffs.push_back(cost);
  variable_lower_bounds.push_back(lower);
  variable_upper_bounds.push_back(upper);
  variable_names.push_back(std::move(name));
  return old_cols;
}

std::size_t LinearProgram::add_constraint(
    const std::vector<std::pair<std::size_t, double>>& terms, Sense sense, double rhs_value) {
  const std::size_t n = num_variables();
  const std::size_t row = num_constraints();
  constraint_matrix.resize((row + 1) * n, 0.0);
  for (const auto& [col, value] : terms) {
    if (col >= n) throw InvalidInput("constraint references unknown column");
    constraint_matrix[row * n + col] += value;
  }
  constraint_senses.push_back(sense);
  rhs.push_back(rhs_value);
  return row;
}

void LinearProgram::validate() const {
  const std::size_t n = num_variables();
  const std::size_t m = num_constraints();
  if (constraint_matrix.size() != n * m || constraint_senses.size() != m ||
      variable_lower_bounds.size() != n || variable_upper_bounds.size() != n ||
      (!variable_names.empty() && variable_names.size() != n)) {
    throw InvalidInput("linear program dimensions are inconsistent");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (variable_lower_bounds[i] > variable_upper_bounds[i]) {
      throw InvalidInput("variable lower bound exceeds upper bound");
    }
  }
}

LinearProgram build_early_fixed_lp(const ProblemParams& params, const FlowTable& table,
                                   const RegionAssignment& z) {
  if (!is_valid(z)) {
    throw InvalidInput("region assignment (" + std::to_string(z.zgl_idx) + ", " +
                       std::to_string(z.zwhp_idx) + ") outside Z");
  }
  namespace L = lp_layout;
  const auto& grid = table.grid;

  LinearProgram lp;
  for (std::size_t k = 0; k < kBreakpoints; ++k) {
    for (std::size_t j = 0; j < kBreakpoints; ++j) {
      lp.add_variable("theta_" + std::to_string(k) + "_" + std::to_string(j), 0.0, kInfinity);
    }
  }
  for (std::size_t k = 0; k < kBreakpoints; ++k) {
    lp.add_variable("eta_gl_" + std::to_string(k), 0.0, kInfinity);
  }
  for (std::size_t j = 0; j < kBreakpoints; ++j) {
    lp.add_variable("eta_whp_" + std::to_string(j), 0.0, kInfinity);
  }
  lp.add_variable("q_gl", 0.0, kInfinity);
  lp.add_variable("whp", 0.0, kInfinity);
  // Liquid and phase flows go negative when the window only touches
  // infeasible breakpoints.
  lp.add_variable("q_l", -kInfinity, kInfinity);
  lp.add_variable("q_oil", -kInfinity, kInfinity, 1.0);
  lp.add_variable("q_water", -kInfinity, kInfinity);
  lp.add_variable("q_gas", -kInfinity, kInfinity);

  using Terms = std::vector<std::pair<std::size_t, double>>;
  Terms qgl_row{{L::kQgl, -1.0}}, whp_row{{L::kWhp, -1.0}}, ql_row{{L::kQLiquid, -1.0}}, sum_row;
  for (std::size_t k = 0; k < kBreakpoints; ++k) {
    for (std::size_t j = 0; j < kBreakpoints; ++j) {
      const std::size_t t = L::theta(k, j);
      qgl_row.emplace_back(t, grid.qgl_points[k]);
      whp_row.emplace_back(t, grid.whp_points[j]);
      ql_row.emplace_back(t, table.q_liq[k][j]);
      sum_row.emplace_back(t, 1.0);
    }
  }
  lp.add_constraint(qgl_row, Sense::Equal, 0.0);
  lp.add_constraint(whp_row, Sense::Equal, 0.0);
  lp.add_constraint(ql_row, Sense::Equal, 0.0);
  lp.add_constraint(sum_row, Sense::Equal, 1.0);

  for (std::size_t k = 0; k < kBreakpoints; ++k) {
    Terms row{{L::eta_gl(k), -1.0}};
    for (std::size_t j = 0; j < kBreakpoints; ++j) row.emplace_back(L::theta(k, j), 1.0);
    lp.add_constraint(row, Sense::Equal, 0.0);
  }
  for (std::size_t j = 0; j < kBreakpoints; ++j) {
    Terms row{{L::eta_whp(j), -1.0}};
    for (std::size_t k = 0; k < kBreakpoints; ++k) row.emplace_back(L::theta(k, j), 1.0);
    lp.add_constraint(row, Sense::Equal, 0.0);
  }

  // Early fixing: only the two marginals bounding the chosen window survive.
  const auto gl = static_cast<std::size_t>(z.zgl_idx);
  const auto wp = static_cast<std::size_t>(z.zwhp_idx);
  for (std::size_t k = 0; k < kBreakpoints; ++k) {
    if (k != gl && k != gl + 1) lp.add_constraint({{L::eta_gl(k), 1.0}}, Sense::Equal, 0.0);
  }
  for (std::size_t j = 0; j < kBreakpoints; ++j) {
    if (j != wp && j != wp + 1) lp.add_constraint({{L::eta_whp(j), 1.0}}, Sense::Equal, 0.0);
  }

  const double oil_share = 1.0 - params.bsw;
  lp.add_constraint({{L::kQOil, 1.0}, {L::kQLiquid, -oil_share}}, Sense::Equal, 0.0);
  lp.add_constraint({{L::kQWater, 1.0}, {L::kQLiquid, -params.bsw}}, Sense::Equal, 0.0);
  lp.add_constraint({{L::kQGas, 1.0}, {L::kQLiquid, -oil_share * params.gor}}, Sense::Equal, 0.0);

  lp.add_constraint({{L::kQgl, 1.0}}, Sense::LessEqual, params.qgl_max);
  return lp;
}

std::string dump_lp(const LinearProgram& lp) {
  auto name = [&](std::size_t c) {
    return lp.variable_names.empty() ? "x" + std::to_string(c) : lp.variable_names[c];
  };
  auto term = [&](std::ostringstream& os, double v, std::size_t c) {
    os << (v < 0 ? " -" : " +") << std::fabs(v) << ' ' << name(c);
  };
  std::ostringstream os;
  os.precision(17);
  os << "maximize:";
  for (std::size_t c = 0; c < lp.num_variables(); ++c) {
    if (lp.objective_coeffs[c] != 0.0) term(os, lp.objective_coeffs[c], c);
  }
  os << '\n';
  for (std::size_t r = 0; r < lp.num_constraints(); ++r) {
    os << 'c' << r << ':';
    for (std::size_t c = 0; c < lp.num_variables(); ++c) {
      if (lp.coeff(r, c) != 0.0) term(os, lp.coeff(r, c), c);
    }
    switch (lp.constraint_senses[r]) {
      case Sense::LessEqual: os << " <= "; break;
      case Sense::Equal: os << " = "; break;
      case Sense::GreaterEqual: os << " >= "; break;
    }
    os << lp.rhs[r] << '\n';
  }
  for (std::size_t c = 0; c < lp.num_variables(); ++c) {
    os << "bound: " << lp.variable_lower_bounds[c] << " <= " << name(c)
       << " <= " << lp.variable_upper_bounds[c] << '\n';
  }
  return os.str();
}

}  // namespace gaslift
