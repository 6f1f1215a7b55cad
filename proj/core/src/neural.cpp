#include "gaslift/neural.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gaslift/error.hpp"
#include "random.hpp"

namespace gaslift::nn {

namespace {

constexpr std::size_t kHeadWidth = kIntervals;
constexpr double kProbClamp = 1e-12;

void softmax_inplace(std::span<double> v) {
  const double top = *std::max_element(v.begin(), v.end());
  double sum = 0.0;
  for (double& x : v) {
    x = std::exp(x - top);
    sum += x;
  }
  for (double& x : v) x /= sum;
}

double clamp_prob(double p) { return std::clamp(p, kProbClamp, 1.0 - kProbClamp); }

}  // namespace

std::size_t MlpModel::output_size() const {
  if (layers.empty()) return 0;
  return head.kind == Head::Kind::TwoSoftmax5 ? layers.back().outputs : 1;
}

std::vector<std::size_t> MlpModel::layer_sizes() const {
  std::vector<std::size_t> sizes;
  if (layers.empty()) return sizes;
  sizes.push_back(layers.front().inputs);
  for (const auto& layer : layers) sizes.push_back(layer.outputs);
  return sizes;
}

std::size_t MlpModel::parameter_count() const {
  std::size_t count = 0;
  for (const auto& layer : layers) count += layer.weights.size() + layer.bias.size();
  return count;
}

void MlpModel::validate() const {
  if (layers.empty()) throw InvalidInput("model has no layers");
  for (std::size_t l = 0; l < layers.size(); ++l) {
    const auto& layer = layers[l];
    if (layer.inputs == 0 || layer.outputs == 0 ||
        layer.weights.size() != layer.inputs * layer.outputs ||
        layer.bias.size() != layer.outputs) {
      throw InvalidInput("layer " + std::to_string(l) + " has inconsistent shapes");
    }
    if (l > 0 && layers[l - 1].outputs != layer.inputs) {
      throw InvalidInput("layer " + std::to_string(l) + " does not chain with its predecessor");
    }
  }
  if (input_normalizer.size() != input_size()) {
    throw InvalidInput("normalizer size does not match the input layer");
  }
  if (head.kind == Head::Kind::TwoSoftmax5 && layers.back().outputs != 2 * kHeadWidth) {
    throw InvalidInput("two-softmax head needs a 10-wide last layer");
  }
  if (head.kind == Head::Kind::ScalarScaled && layers.back().outputs != 1) {
    throw InvalidInput("scalar head needs a 1-wide last layer");
  }
  if (!(dropout_prob >= 0.0 && dropout_prob < 1.0)) {
    throw InvalidInput("dropout probability must lie in [0, 1)");
  }
  for (const auto& f : input_normalizer) {
    if (!(f.scale > 0.0) || f.lower > f.upper) throw InvalidInput("invalid feature scaling");
  }
}

MlpModel make_mlp(const std::vector<std::size_t>& layer_sizes, Head head,
                  std::vector<FeatureScaling> normalizer, double dropout_prob,
                  std::uint64_t seed) {
  if (layer_sizes.size() < 2) throw InvalidInput("need at least input and output sizes");
  detail::Rng rng(seed);
  MlpModel model;
  model.input_normalizer = std::move(normalizer);
  model.head = head;
  model.dropout_prob = dropout_prob;
  for (std::size_t l = 0; l + 1 < layer_sizes.size(); ++l) {
    DenseLayer layer;
    layer.inputs = layer_sizes[l];
    layer.outputs = layer_sizes[l + 1];
    layer.activation = (l + 2 == layer_sizes.size()) ? Activation::Identity : Activation::ReLU;
    const double bound = 1.0 / std::sqrt(static_cast<double>(layer.inputs));
    layer.weights.resize(layer.inputs * layer.outputs);
    layer.bias.resize(layer.outputs);
    for (double& w : layer.weights) w = rng.uniform(-bound, bound);
    for (double& b : layer.bias) b = rng.uniform(-bound, bound);
    model.layers.push_back(std::move(layer));
  }
  model.validate();
  return model;
}

std::vector<FeatureScaling> parameter_normalizer() {
  return {
      {kBswMin, kBswMax - kBswMin, kBswMin, kBswMax},
      {kGorMin, kGorMax - kGorMin, kGorMin, kGorMax},
      {kQglMaxMin, kQglMaxMax - kQglMaxMin, kQglMaxMin, kQglMaxMax},
  };
}

std::vector<FeatureScaling> surrogate_normalizer() {
  auto features = parameter_normalizer();
  features.resize(features.size() + 2 * kHeadWidth, FeatureScaling{});
  return features;
}

MlpModel make_early_fixing_model(std::uint64_t seed) {
  return make_mlp({3, 25, 25, 2 * kHeadWidth}, Head::two_softmax5(), parameter_normalizer(), 0.0,
                  seed);
}

MlpModel make_surrogate_model(std::uint64_t seed) {
  return make_mlp({3 + 2 * kHeadWidth, 10, 10, 10, 1}, Head::scalar_scaled(kSurrogateOutputScale),
                  surrogate_normalizer(), kSurrogateDropout, seed);
}

ForwardCache forward(const MlpModel& model, std::span<const double> input, bool training,
                     std::uint64_t rng_seed) {
  if (input.size() != model.input_size()) {
    throw InvalidInput("input has " + std::to_string(input.size()) + " features, model expects " +
                       std::to_string(model.input_size()));
  }
  ForwardCache cache;
  cache.input.assign(input.begin(), input.end());
  cache.normalized_input.resize(input.size());
  for (std::size_t i = 0; i < input.size(); ++i) {
    const auto& f = model.input_normalizer[i];
    cache.normalized_input[i] = (std::clamp(input[i], f.lower, f.upper) - f.offset) / f.scale;
  }

  const bool dropout = training && model.dropout_prob > 0.0;
  const double keep_scale = 1.0 / (1.0 - model.dropout_prob);
  detail::Rng rng(rng_seed);

  const std::size_t depth = model.layers.size();
  cache.pre_activations.resize(depth);
  cache.activations.resize(depth);
  cache.dropout_masks.resize(depth);
  const std::vector<double>* h = &cache.normalized_input;
  for (std::size_t l = 0; l < depth; ++l) {
    const DenseLayer& layer = model.layers[l];
    auto& pre = cache.pre_activations[l];
    auto& post = cache.activations[l];
    pre.assign(layer.bias.begin(), layer.bias.end());
    for (std::size_t o = 0; o < layer.outputs; ++o) {
      const double* row = &layer.weights[o * layer.inputs];
      double acc = 0.0;
      for (std::size_t i = 0; i < layer.inputs; ++i) acc += row[i] * (*h)[i];
      pre[o] += acc;
    }
    post = pre;
    if (layer.activation == Activation::ReLU) {
      for (double& v : post) v = std::max(0.0, v);
    }
    if (dropout && l + 1 < depth) {
      auto& mask = cache.dropout_masks[l];
      mask.resize(layer.outputs);
      for (std::size_t o = 0; o < layer.outputs; ++o) {
        mask[o] = rng.uniform() < model.dropout_prob ? 0.0 : keep_scale;
        post[o] *= mask[o];
      }
    }
    h = &post;
  }

  cache.output = *h;
  if (model.head.kind == Head::Kind::TwoSoftmax5) {
    softmax_inplace(std::span(cache.output).first(kHeadWidth));
    softmax_inplace(std::span(cache.output).subspan(kHeadWidth, kHeadWidth));
  } else {
    cache.output[0] *= model.head.factor;
  }
  return cache;
}

std::vector<double> predict(const MlpModel& model, std::span<const double> input) {
  return forward(model, input).output;
}

Gradients Gradients::zeros_like(const MlpModel& model) {
  Gradients g;
  g.layers.reserve(model.layers.size());
  for (const auto& layer : model.layers) {
    g.layers.push_back({std::vector<double>(layer.weights.size(), 0.0),
                        std::vector<double>(layer.bias.size(), 0.0)});
  }
  g.input.assign(model.input_size(), 0.0);
  return g;
}

void Gradients::add_scaled(const Gradients& other, double scale) {
  for (std::size_t l = 0; l < layers.size(); ++l) {
    for (std::size_t i = 0; i < layers[l].weights.size(); ++i) {
      layers[l].weights[i] += scale * other.layers[l].weights[i];
    }
    for (std::size_t i = 0; i < layers[l].bias.size(); ++i) {
      layers[l].bias[i] += scale * other.layers[l].bias[i];
    }
  }
  for (std::size_t i = 0; i < input.size(); ++i) input[i] += scale * other.input[i];
}

Gradients backward(const MlpModel& model, const ForwardCache& cache,
                   std::span<const double> upstream) {
  if (upstream.size() != cache.output.size()) {
    throw InvalidInput("upstream gradient does not match the model output");
  }
  Gradients grads = Gradients::zeros_like(model);

  std::vector<double> g(upstream.begin(), upstream.end());
  if (model.head.kind == Head::Kind::TwoSoftmax5) {
    for (std::size_t head = 0; head < 2; ++head) {
      const std::size_t base = head * kHeadWidth;
      double dot = 0.0;
      for (std::size_t i = 0; i < kHeadWidth; ++i) dot += cache.output[base + i] * g[base + i];
      for (std::size_t i = 0; i < kHeadWidth; ++i) {
        g[base + i] = cache.output[base + i] * (g[base + i] - dot);
      }
    }
  } else {
    g[0] *= model.head.factor;
  }

  for (std::size_t l = model.layers.size(); l-- > 0;) {
    const DenseLayer& layer = model.layers[l];
    const auto& mask = cache.dropout_masks[l];
    const auto& pre = cache.pre_activations[l];
    for (std::size_t o = 0; o < layer.outputs; ++o) {
      if (!mask.empty()) g[o] *= mask[o];
      if (layer.activation == Activation::ReLU && pre[o] <= 0.0) g[o] = 0.0;
    }
    const std::vector<double>& h_in = l == 0 ? cache.normalized_input : cache.activations[l - 1];
    auto& gw = grads.layers[l].weights;
    auto& gb = grads.layers[l].bias;
    std::vector<double> g_in(layer.inputs, 0.0);
    for (std::size_t o = 0; o < layer.outputs; ++o) {
      const double go = g[o];
      gb[o] = go;
      if (go == 0.0) continue;
      const double* row = &layer.weights[o * layer.inputs];
      double* grow = &gw[o * layer.inputs];
      for (std::size_t i = 0; i < layer.inputs; ++i) {
        grow[i] = go * h_in[i];
        g_in[i] += go * row[i];
      }
    }
    g = std::move(g_in);
  }

  for (std::size_t i = 0; i < grads.input.size(); ++i) {
    const auto& f = model.input_normalizer[i];
    const double x = cache.input[i];
    grads.input[i] = (x < f.lower || x > f.upper) ? 0.0 : g[i] / f.scale;
  }
  return grads;
}

std::array<double, 2 * kIntervals> one_hot(const RegionAssignment& z) {
  if (!is_valid(z)) throw InvalidInput("region assignment outside Z");
  std::array<double, 2 * kIntervals> v{};
  v[static_cast<std::size_t>(z.zgl_idx)] = 1.0;
  v[kHeadWidth + static_cast<std::size_t>(z.zwhp_idx)] = 1.0;
  return v;
}

double loss_bce_two_heads(std::span<const double> pred, const RegionAssignment& target) {
  if (pred.size() != 2 * kHeadWidth) throw InvalidInput("prediction must have 10 entries");
  const auto t = one_hot(target);
  double loss = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const double p = clamp_prob(pred[i]);
    loss -= t[i] * std::log(p) + (1.0 - t[i]) * std::log(1.0 - p);
  }
  return loss;
}

std::vector<double> loss_bce_two_heads_grad(std::span<const double> pred,
                                            const RegionAssignment& target) {
  if (pred.size() != 2 * kHeadWidth) throw InvalidInput("prediction must have 10 entries");
  const auto t = one_hot(target);
  std::vector<double> g(pred.size());
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const double p = clamp_prob(pred[i]);
    g[i] = -t[i] / p + (1.0 - t[i]) / (1.0 - p);
  }
  return g;
}

double loss_squared(double pred, double target) {
  const double d = pred - target;
  return d * d;
}

double loss_squared_grad(double pred, double target) { return 2.0 * (pred - target); }

RegionAssignment round_assignment(std::span<const double> pred) {
  if (pred.size() != 2 * kHeadWidth) throw InvalidInput("prediction must have 10 entries");
  auto argmax = [](std::span<const double> head) {
    // max_element returns the first maximum, i.e. the lowest index on ties.
    return static_cast<int>(std::max_element(head.begin(), head.end()) - head.begin());
  };
  return {argmax(pred.first(kHeadWidth)), argmax(pred.subspan(kHeadWidth, kHeadWidth))};
}

AdamState make_adam(const MlpModel& model, double learning_rate) {
  AdamState state;
  state.learning_rate = learning_rate;
  const Gradients zeros = Gradients::zeros_like(model);
  state.first_moment = zeros.layers;
  state.second_moment = zeros.layers;
  return state;
}

void adam_step(AdamState& state, MlpModel& model, const Gradients& grads) {
  if (state.first_moment.size() != model.layers.size() ||
      grads.layers.size() != model.layers.size()) {
    throw InvalidInput("Adam state does not match the model");
  }
  ++state.step_count;
  const double t = static_cast<double>(state.step_count);
  const double correction1 = 1.0 - std::pow(state.beta1, t);
  const double correction2 = 1.0 - std::pow(state.beta2, t);
  auto update = [&](std::vector<double>& param, const std::vector<double>& grad,
                    std::vector<double>& m, std::vector<double>& v) {
    if (param.size() != grad.size() || param.size() != m.size()) {
      throw InvalidInput("Adam tensor shapes do not match");
    }
    for (std::size_t i = 0; i < param.size(); ++i) {
      m[i] = state.beta1 * m[i] + (1.0 - state.beta1) * grad[i];
      v[i] = state.beta2 * v[i] + (1.0 - state.beta2) * grad[i] * grad[i];
      const double m_hat = m[i] / correction1;
      const double v_hat = v[i] / correction2;
      param[i] -= state.learning_rate * m_hat / (std::sqrt(v_hat) + state.epsilon);
    }
  };
  for (std::size_t l = 0; l < model.layers.size(); ++l) {
    update(model.layers[l].weights, grads.layers[l].weights, state.first_moment[l].weights,
           state.second_moment[l].weights);
    update(model.layers[l].bias, grads.layers[l].bias, state.first_moment[l].bias,
           state.second_moment[l].bias);
  }
}

}  // namespace gaslift::nn
