#pragma once

#include <array>
#include <cstddef>

namespace gaslift {

inline constexpr std::size_t kBreakpoints = 6;
inline constexpr std::size_t kIntervals = kBreakpoints - 1;

// Box of admissible instance parameters.
inline constexpr double kBswMin = 0.5;
inline constexpr double kBswMax = 1.0;
inline constexpr double kGorMin = 0.0;
inline constexpr double kGorMax = 300.0;
inline constexpr double kQglMaxMin = 4000.0;
inline constexpr double kQglMaxMax = 12500.0;

// Marker stored in a FlowTable for (qgl, whp) combinations the well cannot
// operate at.
inline constexpr double kInfeasibleFlow = -1.0;

// Instance parameters: water cut, gas-oil ratio and available lift gas.
struct ProblemParams {
  double bsw = kBswMin;
  double gor = kGorMin;
  double qgl_max = kQglMaxMax;

  friend bool operator==(const ProblemParams&, const ProblemParams&) = default;
};

// Throws InvalidInput when any field leaves the admissible box.
void validate(const ProblemParams& params);

struct BreakpointGrid {
  std::array<double, kBreakpoints> qgl_points{};
  std::array<double, kBreakpoints> whp_points{};

  friend bool operator==(const BreakpointGrid&, const BreakpointGrid&) = default;
};

// Throws InvalidInput unless both axes are strictly increasing.
void validate(const BreakpointGrid& grid);

// Liquid flow at every breakpoint pair; q_liq[k][j] pairs qgl_points[k] with
// whp_points[j].
struct FlowTable {
  BreakpointGrid grid;
  std::array<std::array<double, kBreakpoints>, kBreakpoints> q_liq{};

  friend bool operator==(const FlowTable&, const FlowTable&) = default;
};

/// Lift gas 0..12500 in steps of 2500, wellhead pressure 10..80 in steps
/// of 14.
BreakpointGrid default_grid();

/// Deterministic stand-in for the well simulator.
///
/// The well can operate only when qgl >= max(0, 125 * (whp - 40)); elsewhere
/// the result is kInfeasibleFlow. On the feasible set the liquid flow is
///
///   1200 * (1 - exp(-(qgl + 10 gor) / 4000)) * (1 - whp / 120) * (1.1 - 0.4 bsw)
///
/// which saturates in qgl, decays linearly with whp and is derated by the
/// water cut. Requires qgl >= 0 and whp in (0, 120).
double synthetic_liquid_flow(double qgl, double whp, double bsw, double gor);

FlowTable build_flow_table(const ProblemParams& params, const BreakpointGrid& grid);

}  // namespace gaslift
