#include "gaslift/well_model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gaslift/error.hpp"

namespace gaslift {

void validate(const ProblemParams& params) {
  auto in = [](double v, double lo, double hi) { return v >= lo && v <= hi; };
  if (!in(params.bsw, kBswMin, kBswMax)) {
    throw InvalidInput("bsw must lie in [0.5, 1.0], got " + std::to_string(params.bsw));
  }
  if (!in(params.gor, kGorMin, kGorMax)) {
    throw InvalidInput("gor must lie in [0, 300], got " + std::to_string(params.gor));
  }
  if (!in(params.qgl_max, kQglMaxMin, kQglMaxMax)) {
    throw InvalidInput("qgl_max must lie in [4000, 12500], got " +
                       std::to_string(params.qgl_max));
  }
}

void validate(const BreakpointGrid& grid) {
  auto increasing = [](const auto& pts) {
    return std::adjacent_find(pts.begin(), pts.end(),
                              [](double a, double b) { return !(a < b); }) == pts.end();
  };
  if (!increasing(grid.qgl_points) || !increasing(grid.whp_points)) {
    throw InvalidInput("breakpoints must be strictly increasing");
  }
}

BreakpointGrid default_grid() {
  BreakpointGrid grid;
  for (std::size_t i = 0; i < kBreakpoints; ++i) {
    const double n = static_cast<double>(i + 1);
    grid.qgl_points[i] = 2500.0 * n - 2500.0;
    grid.whp_points[i] = 14.0 * n - 4.0;
  }
  return grid;
}

double synthetic_liquid_flow(double qgl, double whp, double bsw, double gor) {
  const double min_gas = std::max(0.0, 125.0 * (whp - 40.0));
  if (qgl < min_gas) return kInfeasibleFlow;
  const double lift = 1.0 - std::exp(-(qgl + 10.0 * gor) / 4000.0);
  const double backpressure = 1.0 - whp / 120.0;
  const double derate = 1.1 - 0.4 * bsw;
  return 1200.0 * lift * backpressure * derate;
}

FlowTable build_flow_table(const ProblemParams& params, const BreakpointGrid& grid) {
  validate(params);
  validate(grid);
  FlowTable table{grid, {}};
  for (std::size_t k = 0; k < kBreakpoints; ++k) {
    for (std::size_t j = 0; j < kBreakpoints; ++j) {
      table.q_liq[k][j] =
          synthetic_liquid_flow(grid.qgl_points[k], grid.whp_points[j], params.bsw, params.gor);
    }
  }
  return table;
}

}  // namespace gaslift
