#include <gtest/gtest.h>

#include <cmath>

#include "gaslift/error.hpp"
#include "gaslift/well_model.hpp"

namespace gaslift {
namespace {

// Independent transcription of the closed form, evaluated term by term.
double hand_flow(double qgl, double whp, double bsw, double gor) {
  const double gas_term = 1.0 - std::exp(-(qgl + 10.0 * gor) / 4000.0);
  const double pressure_term = 1.0 - whp / 120.0;
  const double cut_term = 1.1 - 0.4 * bsw;
  return 1200.0 * gas_term * pressure_term * cut_term;
}

TEST(WellModel, ZeroLiftGasZeroGorGivesZero) {
  EXPECT_DOUBLE_EQ(synthetic_liquid_flow(0.0, 10.0, 0.5, 0.0), 0.0);
}

TEST(WellModel, HighPressureWithoutEnoughGasIsInfeasible) {
  EXPECT_EQ(synthetic_liquid_flow(2500.0, 80.0, 0.7, 100.0), kInfeasibleFlow);
  EXPECT_EQ(synthetic_liquid_flow(4999.0, 80.0, 0.7, 100.0), kInfeasibleFlow);
  EXPECT_GT(synthetic_liquid_flow(5000.0, 80.0, 0.7, 100.0), 0.0);
}

TEST(WellModel, ClosedFormAtFullGas) {
  // 1200 * (1 - e^-3.375) * (11/12) * 0.9
  const double expected = 1200.0 * (1.0 - std::exp(-3.375)) * (11.0 / 12.0) * 0.9;
  EXPECT_NEAR(synthetic_liquid_flow(12500.0, 10.0, 0.5, 100.0), expected, 1e-12);
  EXPECT_NEAR(expected, 956.1, 0.05);
}

TEST(WellModel, MatchesHandEvaluationOnAGrid) {
  for (double qgl = 0.0; qgl <= 12500.0; qgl += 625.0) {
    for (double whp = 5.0; whp < 120.0; whp += 7.5) {
      const double value = synthetic_liquid_flow(qgl, whp, 0.8, 150.0);
      if (qgl < std::max(0.0, 125.0 * (whp - 40.0))) {
        EXPECT_EQ(value, kInfeasibleFlow);
      } else {
        EXPECT_NEAR(value, hand_flow(qgl, whp, 0.8, 150.0), 1e-9);
      }
    }
  }
}

TEST(WellModel, MonotoneInGasAndPressure) {
  double prev = -2.0;
  for (double qgl = 0.0; qgl <= 12500.0; qgl += 250.0) {
    const double v = synthetic_liquid_flow(qgl, 30.0, 0.6, 80.0);
    EXPECT_GE(v, prev);
    prev = v;
  }
  prev = 1e9;
  for (double whp = 1.0; whp <= 40.0; whp += 1.0) {
    const double v = synthetic_liquid_flow(8000.0, whp, 0.6, 80.0);
    EXPECT_LE(v, prev);
    prev = v;
  }
}

TEST(WellModel, DecreasingInWaterCutIncreasingInGor) {
  EXPECT_GT(synthetic_liquid_flow(6000.0, 24.0, 0.5, 50.0),
            synthetic_liquid_flow(6000.0, 24.0, 0.9, 50.0));
  EXPECT_LT(synthetic_liquid_flow(6000.0, 24.0, 0.5, 50.0),
            synthetic_liquid_flow(6000.0, 24.0, 0.5, 51.0));
}

TEST(WellModel, DefaultGridValues) {
  const BreakpointGrid grid = default_grid();
  EXPECT_EQ(grid.whp_points[0], 10.0);
  EXPECT_EQ(grid.whp_points[5], 80.0);
  EXPECT_EQ(grid.qgl_points[2], 5000.0);
  for (std::size_t i = 0; i < kBreakpoints; ++i) {
    EXPECT_EQ(grid.qgl_points[i], 2500.0 * static_cast<double>(i));
    EXPECT_EQ(grid.whp_points[i], 10.0 + 14.0 * static_cast<double>(i));
  }
}

TEST(WellModel, FlowTableCorners) {
  const ProblemParams params{0.5, 100.0, 12500.0};
  const FlowTable table = build_flow_table(params, default_grid());
  EXPECT_DOUBLE_EQ(table.q_liq[0][0], synthetic_liquid_flow(0.0, 10.0, 0.5, 100.0));
  EXPECT_NEAR(table.q_liq[5][0], 956.1, 0.05);
  EXPECT_EQ(table.q_liq[0][5], kInfeasibleFlow);

  const FlowTable no_gor = build_flow_table({0.7, 0.0, 9000.0}, default_grid());
  EXPECT_EQ(no_gor.q_liq[0][0], 0.0);
}

TEST(WellModel, FlowTableEntriesFollowIndexConvention) {
  const ProblemParams params{0.65, 210.0, 7000.0};
  const BreakpointGrid grid = default_grid();
  const FlowTable table = build_flow_table(params, grid);
  EXPECT_EQ(table.grid, grid);
  for (std::size_t k = 0; k < kBreakpoints; ++k) {
    for (std::size_t j = 0; j < kBreakpoints; ++j) {
      EXPECT_EQ(table.q_liq[k][j],
                synthetic_liquid_flow(grid.qgl_points[k], grid.whp_points[j], params.bsw,
                                      params.gor));
    }
  }
}

TEST(WellModel, ValidationRejectsBadInputs) {
  EXPECT_THROW(validate(ProblemParams{0.4, 100.0, 8000.0}), InvalidInput);
  EXPECT_THROW(validate(ProblemParams{0.6, 301.0, 8000.0}), InvalidInput);
  EXPECT_THROW(validate(ProblemParams{0.6, 100.0, 3999.0}), InvalidInput);
  EXPECT_THROW(validate(ProblemParams{0.6, std::nan(""), 8000.0}), InvalidInput);
  EXPECT_NO_THROW(validate(ProblemParams{1.0, 0.0, 12500.0}));

  BreakpointGrid grid = default_grid();
  grid.qgl_points[3] = grid.qgl_points[2];
  EXPECT_THROW(validate(grid), InvalidInput);
  EXPECT_THROW(build_flow_table({0.6, 100.0, 8000.0}, grid), InvalidInput);
}

}  // namespace
}  // namespace gaslift
