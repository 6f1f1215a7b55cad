#include "gaslift/training.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "gaslift/error.hpp"
#include "gaslift/exact.hpp"
#include "random.hpp"

namespace gaslift {

namespace {

// Sub-streams fanned out from TrainConfig::seed.
constexpr std::uint64_t kInitStream = 1;
constexpr std::uint64_t kShuffleStream = 2;
constexpr std::uint64_t kDropoutStream = 3;

std::vector<std::size_t> iota_indices(std::size_t n) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  return idx;
}

// Runs `epochs` passes of shuffled mini-batches. `accumulate` adds the
// batch-mean gradient of one sample into the running total and `evaluate`
// returns the tracked metric over the full training set.
template <typename Accumulate, typename Evaluate>
TrainResult run_epochs(nn::MlpModel model, std::size_t n, const TrainConfig& config,
                       Accumulate&& accumulate, Evaluate&& evaluate) {
  config.validate();
  if (n == 0) throw InvalidInput("training set is empty");
  TrainResult result;
  nn::AdamState adam = nn::make_adam(model, config.learning_rate);
  detail::Rng shuffle_rng(derive_seed(config.seed, kShuffleStream));
  const std::uint64_t dropout_seed = derive_seed(config.seed, kDropoutStream);
  std::uint64_t sample_counter = 0;

  result.history.push_back(evaluate(model));
  std::vector<std::size_t> order = iota_indices(n);
  const auto batch = static_cast<std::size_t>(config.batch_size);
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    shuffle_rng.shuffle(order);
    for (std::size_t start = 0; start < n; start += batch) {
      const std::size_t stop = std::min(n, start + batch);
      const double weight = 1.0 / static_cast<double>(stop - start);
      nn::Gradients total = nn::Gradients::zeros_like(model);
      for (std::size_t b = start; b < stop; ++b) {
        const std::uint64_t sample_seed = detail::splitmix64(dropout_seed ^ sample_counter++);
        accumulate(model, order[b], weight, sample_seed, total);
      }
      nn::adam_step(adam, model, total);
    }
    result.history.push_back(evaluate(model));
  }
  result.model = std::move(model);
  return result;
}

}  // namespace

void TrainConfig::validate() const {
  if (!(learning_rate > 0.0)) throw InvalidInput("learning_rate must be positive");
  if (batch_size <= 0) throw InvalidInput("batch_size must be positive");
  if (epochs < 0) throw InvalidInput("epochs must be nonnegative");
  if (!(split_ratio > 0.0 && split_ratio < 1.0)) {
    throw InvalidInput("split_ratio must lie strictly between 0 and 1");
  }
}

TrainConfig supervised_defaults() { return {1e-3, 64, 1000, 0, 0.8}; }
TrainConfig surrogate_defaults() { return {1e-3, 1024, 20, 0, 0.8}; }
TrainConfig weak_defaults() { return {1e-2, 64, 100, 0, 0.8}; }

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  return detail::splitmix64(detail::splitmix64(seed) ^ (stream * 0xd1342543de82ef95ULL));
}

std::vector<ProblemParams> sample_params(std::size_t count, std::uint64_t seed) {
  if (count == 0) throw InvalidInput("count must be positive");
  detail::Rng rng(seed);
  std::vector<ProblemParams> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    ProblemParams p;
    p.bsw = rng.uniform(kBswMin, kBswMax);
    p.gor = std::clamp(rng.normal(100.0, 25.0), kGorMin, kGorMax);
    p.qgl_max = rng.uniform(kQglMaxMin, kQglMaxMax);
    out.push_back(p);
  }
  return out;
}

std::vector<SupRecord> build_dsup(std::span<const ProblemParams> params_list,
                                  const BreakpointGrid& grid) {
  std::vector<SupRecord> out;
  out.reserve(params_list.size());
  for (const ProblemParams& params : params_list) {
    const FlowTable table = build_flow_table(params, grid);
    const ExactResult exact = solve_exact(params, table);
    out.push_back({params, exact.best_assignment, exact.best_objective});
  }
  return out;
}

std::vector<WeakRecord> build_dweak(std::span<const ProblemParams> params_list,
                                    std::size_t candidates_per_instance, std::uint64_t seed,
                                    const BreakpointGrid& grid) {
  if (candidates_per_instance == 0 || candidates_per_instance > kAssignmentCount) {
    throw InvalidInput("candidates_per_instance must lie in [1, 25]");
  }
  const std::vector<RegionAssignment> all = enumerate_assignments();
  detail::Rng rng(seed);
  std::vector<WeakRecord> out;
  out.reserve(params_list.size() * candidates_per_instance);
  for (const ProblemParams& params : params_list) {
    const FlowTable table = build_flow_table(params, grid);
    // Partial Fisher-Yates: the first `candidates_per_instance` slots are a
    // uniform sample without replacement.
    std::vector<std::size_t> pool = iota_indices(all.size());
    for (std::size_t i = 0; i < candidates_per_instance; ++i) {
      const std::size_t pick = i + static_cast<std::size_t>(rng.below(pool.size() - i));
      std::swap(pool[i], pool[pick]);
      const RegionAssignment& z = all[pool[i]];
      const std::optional<double> p = objective_for(params, table, z);
      out.push_back({params, z, p.value_or(kInfeasibleFlow)});
    }
  }
  return out;
}

DataSplit split_indices(std::size_t n, double ratio, std::uint64_t seed) {
  if (!(ratio > 0.0 && ratio < 1.0)) throw InvalidInput("split ratio must lie in (0, 1)");
  std::vector<std::size_t> order = iota_indices(n);
  detail::Rng rng(seed);
  rng.shuffle(order);
  const auto n_train = static_cast<std::size_t>(std::llround(static_cast<double>(n) * ratio));
  DataSplit split;
  split.train.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train));
  split.test.assign(order.begin() + static_cast<std::ptrdiff_t>(n_train), order.end());
  return split;
}

std::vector<double> model_input(const ProblemParams& params) {
  return {params.bsw, params.gor, params.qgl_max};
}

std::vector<double> surrogate_input(const ProblemParams& params,
                                    std::span<const double> assignment) {
  if (assignment.size() != 2 * kIntervals) throw InvalidInput("assignment must have 10 entries");
  std::vector<double> in = model_input(params);
  in.insert(in.end(), assignment.begin(), assignment.end());
  return in;
}

TrainResult train_supervised(std::span<const SupRecord> train_set, const TrainConfig& config) {
  auto accumulate = [&](const nn::MlpModel& model, std::size_t i, double weight, std::uint64_t,
                        nn::Gradients& total) {
    const SupRecord& rec = train_set[i];
    const auto cache = nn::forward(model, model_input(rec.params));
    const auto upstream = nn::loss_bce_two_heads_grad(cache.output, rec.z_star);
    total.add_scaled(nn::backward(model, cache, upstream), weight);
  };
  auto evaluate = [&](const nn::MlpModel& model) {
    double sum = 0.0;
    for (const SupRecord& rec : train_set) {
      sum += nn::loss_bce_two_heads(nn::predict(model, model_input(rec.params)), rec.z_star);
    }
    return sum / static_cast<double>(train_set.size());
  };
  return run_epochs(nn::make_early_fixing_model(derive_seed(config.seed, kInitStream)),
                    train_set.size(), config, accumulate, evaluate);
}

TrainResult train_surrogate(std::span<const WeakRecord> train_set, const TrainConfig& config) {
  auto input_of = [](const WeakRecord& rec) {
    const auto z = nn::one_hot(rec.z_hat);
    return surrogate_input(rec.params, z);
  };
  auto accumulate = [&](const nn::MlpModel& model, std::size_t i, double weight,
                        std::uint64_t sample_seed, nn::Gradients& total) {
    const WeakRecord& rec = train_set[i];
    const auto cache = nn::forward(model, input_of(rec), /*training=*/true, sample_seed);
    const double upstream = nn::loss_squared_grad(cache.output[0], rec.p);
    total.add_scaled(nn::backward(model, cache, std::span(&upstream, 1)), weight);
  };
  auto evaluate = [&](const nn::MlpModel& model) {
    double sum = 0.0;
    for (const WeakRecord& rec : train_set) {
      sum += nn::loss_squared(nn::predict(model, input_of(rec))[0], rec.p);
    }
    return sum / static_cast<double>(train_set.size());
  };
  return run_epochs(nn::make_surrogate_model(derive_seed(config.seed, kInitStream)),
                    train_set.size(), config, accumulate, evaluate);
}

TrainResult train_weak(std::span<const ProblemParams> train_params, const nn::MlpModel& surrogate,
                       const TrainConfig& config) {
  surrogate.validate();
  if (surrogate.input_size() != 3 + 2 * kIntervals || surrogate.output_size() != 1) {
    throw InvalidInput("surrogate must map 13 inputs to one score");
  }
  auto accumulate = [&](const nn::MlpModel& model, std::size_t i, double weight, std::uint64_t,
                        nn::Gradients& total) {
    const ProblemParams& params = train_params[i];
    const auto heuristic = nn::forward(model, model_input(params));
    const auto score = nn::forward(surrogate, surrogate_input(params, heuristic.output));
    // Ascent on the score: descend on its negation.
    const double upstream = -1.0;
    const nn::Gradients through = nn::backward(surrogate, score, std::span(&upstream, 1));
    const std::span<const double> dz = std::span(through.input).subspan(3);
    total.add_scaled(nn::backward(model, heuristic, dz), weight);
  };
  auto evaluate = [&](const nn::MlpModel& model) {
    double sum = 0.0;
    for (const ProblemParams& params : train_params) {
      const auto relaxed = nn::predict(model, model_input(params));
      sum += nn::predict(surrogate, surrogate_input(params, relaxed))[0];
    }
    return sum / static_cast<double>(train_params.size());
  };
  return run_epochs(nn::make_early_fixing_model(derive_seed(config.seed, kInitStream)),
                    train_params.size(), config, accumulate, evaluate);
}

RegionAssignment baseline_assignment() { return {0, 0}; }

}  // namespace gaslift
