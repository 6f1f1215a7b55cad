#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "gaslift/formulation.hpp"
#include "gaslift/neural.hpp"
#include "gaslift/well_model.hpp"

namespace gaslift {

struct SupRecord {
  ProblemParams params;
  RegionAssignment z_star;
  double objective_star = 0.0;

  friend bool operator==(const SupRecord&, const SupRecord&) = default;
};

struct WeakRecord {
  ProblemParams params;
  RegionAssignment z_hat;
  double p = 0.0;  // kInfeasibleFlow when the early-fixed LP is infeasible

  friend bool operator==(const WeakRecord&, const WeakRecord&) = default;
};

struct TrainConfig {
  double learning_rate = 1e-3;
  int batch_size = 64;
  int epochs = 100;
  std::uint64_t seed = 0;
  double split_ratio = 0.8;

  void validate() const;
};

TrainConfig supervised_defaults();
TrainConfig surrogate_defaults();
TrainConfig weak_defaults();

// splitmix64 of (seed, stream); used to fan one top-level seed out into
// independent streams.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

// bsw ~ U(0.5, 1), gor ~ N(100, 25) clamped to [0, 300],
// qgl_max ~ U(4000, 12500).
std::vector<ProblemParams> sample_params(std::size_t count, std::uint64_t seed);

// Labels every instance with the enumeration oracle.
std::vector<SupRecord> build_dsup(std::span<const ProblemParams> params_list,
                                  const BreakpointGrid& grid = default_grid());

// Per instance, `candidates_per_instance` distinct assignments drawn
// uniformly from Z, each scored by its early-fixed LP.
std::vector<WeakRecord> build_dweak(std::span<const ProblemParams> params_list,
                                    std::size_t candidates_per_instance, std::uint64_t seed,
                                    const BreakpointGrid& grid = default_grid());

struct DataSplit {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

// Random permutation of 0..n-1; the first round(n * ratio) indices train.
DataSplit split_indices(std::size_t n, double ratio, std::uint64_t seed);

template <typename T>
std::vector<T> select(std::span<const T> items, std::span<const std::size_t> indices) {
  std::vector<T> out;
  out.reserve(indices.size());
  for (std::size_t i : indices) out.push_back(items[i]);
  return out;
}

struct TrainResult {
  nn::MlpModel model;
  // Mean objective over the training data before the first update, then
  // after each epoch. Loss for supervised/surrogate, surrogate score for weak.
  std::vector<double> history;
};

TrainResult train_supervised(std::span<const SupRecord> train_set, const TrainConfig& config);

TrainResult train_surrogate(std::span<const WeakRecord> train_set, const TrainConfig& config);

/// Trains an early-fixing model to maximize a frozen surrogate's score of its
/// relaxed (softmax) assignment.
TrainResult train_weak(std::span<const ProblemParams> train_params,
                       const nn::MlpModel& surrogate, const TrainConfig& config);

// Lowest lift gas and lowest wellhead pressure interval.
RegionAssignment baseline_assignment();

// Surrogate input: raw params followed by a (possibly relaxed) assignment.
std::vector<double> surrogate_input(const ProblemParams& params,
                                    std::span<const double> assignment);

std::vector<double> model_input(const ProblemParams& params);

}  // namespace gaslift
