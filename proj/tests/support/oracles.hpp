#pragma once

// Reference implementations used only by the tests. None of them share code
// with the library paths they check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <vector>

#include "gaslift/formulation.hpp"
#include "gaslift/neural.hpp"
#include "gaslift/well_model.hpp"

namespace gaslift::testing {

// Solves the square system M x = v by Gaussian elimination with partial
// pivoting; nullopt when M is (numerically) singular.
inline std::optional<std::vector<double>> solve_square(std::vector<std::vector<double>> m,
                                                       std::vector<double> v) {
  const std::size_t n = v.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::fabs(m[r][col]) > std::fabs(m[piv][col])) piv = r;
    }
    if (std::fabs(m[piv][col]) < 1e-10) return std::nullopt;
    std::swap(m[piv], m[col]);
    std::swap(v[piv], v[col]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      const double f = m[r][col] / m[col][col];
      for (std::size_t c = col; c < n; ++c) m[r][c] -= f * m[col][c];
      v[r] -= f * v[col];
    }
  }
  for (std::size_t i = 0; i < n; ++i) v[i] /= m[i][i];
  return v;
}

// Maximum of a small LP by enumerating every basic solution: each choice of
// n linearly independent active constraints (rows or finite bounds, with all
// equalities always active). Assumes the feasible set is a pointed
// polyhedron; nullopt means no feasible vertex exists.
inline std::optional<double> brute_force_lp_max(const LinearProgram& lp, double tol = 1e-7) {
  const std::size_t n = lp.num_variables();
  struct Row {
    std::vector<double> a;
    Sense sense;
    double b;
  };
  std::vector<Row> eqs, ineqs;
  for (std::size_t r = 0; r < lp.num_constraints(); ++r) {
    Row row{std::vector<double>(n), lp.constraint_senses[r], lp.rhs[r]};
    for (std::size_t c = 0; c < n; ++c) row.a[c] = lp.coeff(r, c);
    (row.sense == Sense::Equal ? eqs : ineqs).push_back(row);
  }
  for (std::size_t c = 0; c < n; ++c) {
    std::vector<double> unit(n, 0.0);
    unit[c] = 1.0;
    if (std::isfinite(lp.variable_lower_bounds[c])) {
      ineqs.push_back({unit, Sense::GreaterEqual, lp.variable_lower_bounds[c]});
    }
    if (std::isfinite(lp.variable_upper_bounds[c])) {
      ineqs.push_back({unit, Sense::LessEqual, lp.variable_upper_bounds[c]});
    }
  }
  if (eqs.size() > n) return std::nullopt;
  const std::size_t pick = n - eqs.size();
  if (pick > ineqs.size()) return std::nullopt;

  auto feasible = [&](const std::vector<double>& x) {
    auto lhs = [&](const Row& row) {
      double s = 0.0;
      for (std::size_t c = 0; c < n; ++c) s += row.a[c] * x[c];
      return s;
    };
    for (const Row& row : eqs) {
      if (std::fabs(lhs(row) - row.b) > tol) return false;
    }
    for (const Row& row : ineqs) {
      const double s = lhs(row);
      if (row.sense == Sense::LessEqual && s > row.b + tol) return false;
      if (row.sense == Sense::GreaterEqual && s < row.b - tol) return false;
    }
    return true;
  };

  std::optional<double> best;
  std::vector<bool> mask(ineqs.size(), false);
  std::fill(mask.begin(), mask.begin() + static_cast<std::ptrdiff_t>(pick), true);
  do {
    std::vector<std::vector<double>> m;
    std::vector<double> v;
    for (const Row& row : eqs) {
      m.push_back(row.a);
      v.push_back(row.b);
    }
    for (std::size_t i = 0; i < ineqs.size(); ++i) {
      if (mask[i]) {
        m.push_back(ineqs[i].a);
        v.push_back(ineqs[i].b);
      }
    }
    const auto x = solve_square(m, v);
    if (!x || !feasible(*x)) continue;
    double obj = 0.0;
    for (std::size_t c = 0; c < n; ++c) obj += lp.objective_coeffs[c] * (*x)[c];
    if (!best || obj > *best) best = obj;
  } while (std::prev_permutation(mask.begin(), mask.end()));
  return best;
}

// Random LP that is feasible (contains x0) and bounded (x >= lower and
// sum(x) <= cap), with mixed row senses and some finite upper bounds.
inline LinearProgram random_bounded_lp(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> dim(1, 8);
  std::uniform_real_distribution<double> coef(-5.0, 5.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto n = static_cast<std::size_t>(dim(rng));
  const auto m = static_cast<std::size_t>(dim(rng));

  LinearProgram lp;
  std::vector<double> x0(n);
  for (std::size_t c = 0; c < n; ++c) {
    const double lower = unit(rng) < 0.2 ? -2.0 : 0.0;
    x0[c] = lower + 4.0 * unit(rng);
    const double upper = unit(rng) < 0.3 ? x0[c] + 3.0 * unit(rng) : kInfinity;
    lp.add_variable("x" + std::to_string(c), lower, upper, coef(rng));
  }
  std::vector<std::pair<std::size_t, double>> cap;
  double cap_rhs = 0.0;
  for (std::size_t c = 0; c < n; ++c) {
    cap.emplace_back(c, 1.0);
    cap_rhs += x0[c];
  }
  lp.add_constraint(cap, Sense::LessEqual, cap_rhs + 1.0 + 4.0 * unit(rng));
  int equalities = 0;
  for (std::size_t r = 1; r < m; ++r) {
    std::vector<std::pair<std::size_t, double>> terms;
    double ax = 0.0;
    for (std::size_t c = 0; c < n; ++c) {
      const double a = std::round(coef(rng) * 4.0) / 4.0;
      terms.emplace_back(c, a);
      ax += a * x0[c];
    }
    const double roll = unit(rng);
    if (roll < 0.15 && equalities + 1 < static_cast<int>(n)) {
      ++equalities;
      lp.add_constraint(terms, Sense::Equal, ax);
    } else if (roll < 0.55) {
      lp.add_constraint(terms, Sense::GreaterEqual, ax - 3.0 * unit(rng));
    } else {
      lp.add_constraint(terms, Sense::LessEqual, ax + 3.0 * unit(rng));
    }
  }
  return lp;
}

// Optimum of an early-fixed LP derived directly from geometry: only the four
// corners of the window carry weight, so optimal solutions put weight on a
// single corner under the gas cap or on two corners whose mix meets the cap.
inline std::optional<double> window_oracle(const ProblemParams& params, const FlowTable& table,
                                           const RegionAssignment& z) {
  struct Corner {
    double qgl;
    double q_liq;
  };
  std::vector<Corner> corners;
  for (int dk = 0; dk < 2; ++dk) {
    for (int dj = 0; dj < 2; ++dj) {
      const auto k = static_cast<std::size_t>(z.zgl_idx + dk);
      const auto j = static_cast<std::size_t>(z.zwhp_idx + dj);
      corners.push_back({table.grid.qgl_points[k], table.q_liq[k][j]});
    }
  }
  std::optional<double> best;
  auto offer = [&](double liquid) {
    const double oil = liquid * (1.0 - params.bsw);
    if (!best || oil > *best) best = oil;
  };
  for (const Corner& c : corners) {
    if (c.qgl <= params.qgl_max) offer(c.q_liq);
  }
  for (const Corner& lo : corners) {
    for (const Corner& hi : corners) {
      if (lo.qgl <= params.qgl_max && hi.qgl > params.qgl_max) {
        const double w = (params.qgl_max - lo.qgl) / (hi.qgl - lo.qgl);
        offer((1.0 - w) * lo.q_liq + w * hi.q_liq);
      }
    }
  }
  return best;
}

// Central differences of `loss` with respect to every weight and bias.
inline nn::Gradients finite_difference_gradients(nn::MlpModel model,
                                                 const std::function<double(const nn::MlpModel&)>& loss,
                                                 double h = 1e-5) {
  nn::Gradients g = nn::Gradients::zeros_like(model);
  for (std::size_t l = 0; l < model.layers.size(); ++l) {
    auto probe = [&](std::vector<double>& params, std::vector<double>& out) {
      for (std::size_t i = 0; i < params.size(); ++i) {
        const double keep = params[i];
        params[i] = keep + h;
        const double up = loss(model);
        params[i] = keep - h;
        const double down = loss(model);
        params[i] = keep;
        out[i] = (up - down) / (2.0 * h);
      }
    };
    probe(model.layers[l].weights, g.layers[l].weights);
    probe(model.layers[l].bias, g.layers[l].bias);
  }
  return g;
}

// max |a - n| / max(|a|, |n|, floor) over all parameters.
inline double max_relative_error(const nn::Gradients& analytic, const nn::Gradients& numeric,
                                 double floor = 1e-6) {
  double worst = 0.0;
  auto scan = [&](const std::vector<double>& a, const std::vector<double>& b) {
    for (std::size_t i = 0; i < a.size(); ++i) {
      const double denom = std::max({std::fabs(a[i]), std::fabs(b[i]), floor});
      worst = std::max(worst, std::fabs(a[i] - b[i]) / denom);
    }
  };
  for (std::size_t l = 0; l < analytic.layers.size(); ++l) {
    scan(analytic.layers[l].weights, numeric.layers[l].weights);
    scan(analytic.layers[l].bias, numeric.layers[l].bias);
  }
  return worst;
}

// Small network with 1-3 hidden layers, random widths and an identity input
// normalizer; the last layer matches the requested head.
inline nn::MlpModel random_network(std::mt19937_64& rng, nn::Head head) {
  std::uniform_int_distribution<std::size_t> width(2, 6), depth(1, 3);
  std::vector<std::size_t> sizes{width(rng)};
  const std::size_t hidden = depth(rng);
  for (std::size_t i = 0; i < hidden; ++i) sizes.push_back(width(rng));
  sizes.push_back(head.kind == nn::Head::Kind::TwoSoftmax5 ? 2 * kIntervals : 1);
  std::vector<nn::FeatureScaling> identity(sizes.front());
  return nn::make_mlp(sizes, head, identity, 0.0, rng());
}

}  // namespace gaslift::testing
