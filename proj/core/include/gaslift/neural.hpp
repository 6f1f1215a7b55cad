#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "gaslift/formulation.hpp"
#include "gaslift/well_model.hpp"

namespace gaslift::nn {

enum class Activation { ReLU, Identity };

// Output transform applied to the last layer's pre-activation.
struct Head {
  enum class Kind { TwoSoftmax5, ScalarScaled };
  Kind kind = Kind::TwoSoftmax5;
  double factor = 1.0;  // ScalarScaled only

  static Head two_softmax5() { return {Kind::TwoSoftmax5, 1.0}; }
  static Head scalar_scaled(double factor) { return {Kind::ScalarScaled, factor}; }

  friend bool operator==(const Head&, const Head&) = default;
};

// x -> (clamp(x, lower, upper) - offset) / scale
struct FeatureScaling {
  double offset = 0.0;
  double scale = 1.0;
  double lower = -kInfinity;
  double upper = kInfinity;

  friend bool operator==(const FeatureScaling&, const FeatureScaling&) = default;
};

struct DenseLayer {
  std::size_t inputs = 0;
  std::size_t outputs = 0;
  Activation activation = Activation::Identity;
  std::vector<double> weights;  // outputs x inputs, row-major
  std::vector<double> bias;

  friend bool operator==(const DenseLayer&, const DenseLayer&) = default;
};

struct MlpModel {
  std::vector<FeatureScaling> input_normalizer;
  std::vector<DenseLayer> layers;
  Head head;
  double dropout_prob = 0.0;

  std::size_t input_size() const { return layers.empty() ? 0 : layers.front().inputs; }
  std::size_t output_size() const;
  std::vector<std::size_t> layer_sizes() const;
  std::size_t parameter_count() const;

  // Throws InvalidInput when shapes do not chain or the head does not fit.
  void validate() const;

  friend bool operator==(const MlpModel&, const MlpModel&) = default;
};

/// Builds a model with ReLU hidden layers and an identity last layer.
/// Weights and biases are drawn from U(-1/sqrt(fan_in), 1/sqrt(fan_in)).
MlpModel make_mlp(const std::vector<std::size_t>& layer_sizes, Head head,
                  std::vector<FeatureScaling> normalizer, double dropout_prob,
                  std::uint64_t seed);

// Min-max scaling of (bsw, gor, qgl_max) onto [0, 1], clamped to the box.
std::vector<FeatureScaling> parameter_normalizer();

// parameter_normalizer() followed by 10 identity features for z.
std::vector<FeatureScaling> surrogate_normalizer();

// 3 -> 25 -> 25 -> two softmax-5 heads.
MlpModel make_early_fixing_model(std::uint64_t seed);

// 13 -> 10 -> 10 -> 10 -> 1, output scaled by 2000, dropout 0.2.
MlpModel make_surrogate_model(std::uint64_t seed);

inline constexpr double kSurrogateOutputScale = 2000.0;
inline constexpr double kSurrogateDropout = 0.2;

struct ForwardCache {
  std::vector<double> input;
  std::vector<double> normalized_input;
  // Per layer: pre-activation, post-activation (after dropout) and the
  // dropout multiplier (empty when dropout was inactive).
  std::vector<std::vector<double>> pre_activations;
  std::vector<std::vector<double>> activations;
  std::vector<std::vector<double>> dropout_masks;
  std::vector<double> output;
};

/// Runs the network. Dropout is applied to hidden layers only when
/// training is set, with survivors scaled by 1 / (1 - p); the mask is a pure
/// function of rng_seed.
ForwardCache forward(const MlpModel& model, std::span<const double> input,
                     bool training = false, std::uint64_t rng_seed = 0);

std::vector<double> predict(const MlpModel& model, std::span<const double> input);

struct LayerGradient {
  std::vector<double> weights;
  std::vector<double> bias;
};

struct Gradients {
  std::vector<LayerGradient> layers;
  // Gradient with respect to the raw (unnormalized) input.
  std::vector<double> input;

  static Gradients zeros_like(const MlpModel& model);
  void add_scaled(const Gradients& other, double scale);
};

/// Reverse pass through head, layers, dropout masks and input scaling.
/// upstream is dLoss/dOutput for the cached forward pass.
Gradients backward(const MlpModel& model, const ForwardCache& cache,
                   std::span<const double> upstream);

std::array<double, 2 * kIntervals> one_hot(const RegionAssignment& z);

// Sum of binary cross-entropies over both heads, natural log, inputs clamped
// to [1e-12, 1 - 1e-12].
double loss_bce_two_heads(std::span<const double> pred, const RegionAssignment& target);
std::vector<double> loss_bce_two_heads_grad(std::span<const double> pred,
                                            const RegionAssignment& target);

double loss_squared(double pred, double target);
double loss_squared_grad(double pred, double target);

// Per-head argmax, ties toward the lower index.
RegionAssignment round_assignment(std::span<const double> pred);

struct AdamState {
  long step_count = 0;
  std::vector<LayerGradient> first_moment;
  std::vector<LayerGradient> second_moment;
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

AdamState make_adam(const MlpModel& model, double learning_rate);

// One bias-corrected Adam update of every weight and bias.
void adam_step(AdamState& state, MlpModel& model, const Gradients& grads);

}  // namespace gaslift::nn
