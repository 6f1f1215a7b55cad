#include "gaslift/serialization.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "gaslift/error.hpp"

namespace gaslift {

namespace {

using nlohmann::json;

std::string shortest(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view field) {
  double v = 0.0;
  const auto res = std::from_chars(field.data(), field.data() + field.size(), v);
  if (res.ec != std::errc{} || res.ptr != field.data() + field.size()) {
    throw InvalidInput("not a number: '" + std::string(field) + "'");
  }
  return v;
}

int parse_int(std::string_view field) {
  int v = 0;
  const auto res = std::from_chars(field.data(), field.data() + field.size(), v);
  if (res.ec != std::errc{} || res.ptr != field.data() + field.size()) {
    throw InvalidInput("not an integer: '" + std::string(field) + "'");
  }
  return v;
}

// Yields the comma-separated fields of every non-empty line after the
// header, which must match `header` exactly.
std::vector<std::vector<std::string_view>> parse_csv(std::string_view text,
                                                     std::string_view header) {
  std::vector<std::vector<std::string_view>> rows;
  bool seen_header = false;
  while (!text.empty()) {
    const std::size_t eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (!seen_header) {
      if (line != header) throw InvalidInput("unexpected CSV header '" + std::string(line) + "'");
      seen_header = true;
      continue;
    }
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = line.find(',', start);
      fields.push_back(line.substr(start, comma - start));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (fields.size() != 6) throw InvalidInput("CSV row needs 6 fields");
    rows.push_back(std::move(fields));
  }
  if (!seen_header) throw InvalidInput("CSV is missing its header");
  return rows;
}

json bound_to_json(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

double bound_from_json(const json& j, double if_null) {
  return j.is_null() ? if_null : j.get<double>();
}

const char* activation_name(nn::Activation a) {
  return a == nn::Activation::ReLU ? "relu" : "identity";
}

nn::Activation activation_from(const std::string& name) {
  if (name == "relu") return nn::Activation::ReLU;
  if (name == "identity") return nn::Activation::Identity;
  throw InvalidInput("unknown activation '" + name + "'");
}

template <typename Fn>
auto guarded(std::string_view what, Fn&& fn) {
  try {
    return fn();
  } catch (const json::exception& e) {
    throw InvalidInput("malformed " + std::string(what) + ": " + e.what());
  }
}

}  // namespace

std::string flow_table_to_json(const FlowTable& table) {
  json j;
  j["qgl_points"] = table.grid.qgl_points;
  j["whp_points"] = table.grid.whp_points;
  j["q_liq"] = table.q_liq;
  return j.dump() + "\n";
}

FlowTable flow_table_from_json(std::string_view text) {
  return guarded("flow table", [&] {
    const json j = json::parse(text);
    FlowTable t;
    t.grid.qgl_points = j.at("qgl_points").get<std::array<double, kBreakpoints>>();
    t.grid.whp_points = j.at("whp_points").get<std::array<double, kBreakpoints>>();
    t.q_liq = j.at("q_liq").get<std::array<std::array<double, kBreakpoints>, kBreakpoints>>();
    return t;
  });
}

std::string model_to_json(const nn::MlpModel& model) {
  json j;
  j["layer_sizes"] = model.layer_sizes();
  if (model.head.kind == nn::Head::Kind::TwoSoftmax5) {
    j["head"] = {{"type", "two_softmax5"}};
  } else {
    j["head"] = {{"type", "scalar_scaled"}, {"factor", model.head.factor}};
  }
  j["dropout_prob"] = model.dropout_prob;
  json norm = json::array();
  for (const auto& f : model.input_normalizer) {
    norm.push_back({{"offset", f.offset},
                    {"scale", f.scale},
                    {"lower", bound_to_json(f.lower)},
                    {"upper", bound_to_json(f.upper)}});
  }
  j["input_normalizer"] = norm;
  json layers = json::array();
  for (const auto& layer : model.layers) {
    layers.push_back({{"shape", {layer.outputs, layer.inputs}},
                      {"activation", activation_name(layer.activation)},
                      {"weights", layer.weights},
                      {"bias", layer.bias}});
  }
  j["layers"] = layers;
  return j.dump() + "\n";
}

nn::MlpModel model_from_json(std::string_view text) {
  nn::MlpModel model = guarded("model", [&] {
    const json j = json::parse(text);
    nn::MlpModel m;
    const json& head = j.at("head");
    const auto type = head.at("type").get<std::string>();
    if (type == "two_softmax5") {
      m.head = nn::Head::two_softmax5();
    } else if (type == "scalar_scaled") {
      m.head = nn::Head::scalar_scaled(head.at("factor").get<double>());
    } else {
      throw InvalidInput("unknown head type '" + type + "'");
    }
    m.dropout_prob = j.at("dropout_prob").get<double>();
    for (const json& f : j.at("input_normalizer")) {
      m.input_normalizer.push_back({f.at("offset").get<double>(), f.at("scale").get<double>(),
                                    bound_from_json(f.at("lower"), -kInfinity),
                                    bound_from_json(f.at("upper"), kInfinity)});
    }
    for (const json& l : j.at("layers")) {
      nn::DenseLayer layer;
      const auto shape = l.at("shape").get<std::array<std::size_t, 2>>();
      layer.outputs = shape[0];
      layer.inputs = shape[1];
      layer.activation = activation_from(l.at("activation").get<std::string>());
      layer.weights = l.at("weights").get<std::vector<double>>();
      layer.bias = l.at("bias").get<std::vector<double>>();
      m.layers.push_back(std::move(layer));
    }
    if (j.at("layer_sizes").get<std::vector<std::size_t>>() != m.layer_sizes()) {
      throw InvalidInput("layer_sizes disagree with the layer shapes");
    }
    return m;
  });
  model.validate();
  return model;
}

std::string train_config_to_json(const TrainConfig& config) {
  json j;
  j["learning_rate"] = config.learning_rate;
  j["batch_size"] = config.batch_size;
  j["epochs"] = config.epochs;
  j["seed"] = config.seed;
  j["split_ratio"] = config.split_ratio;
  return j.dump(2) + "\n";
}

TrainConfig train_config_from_json(std::string_view text, const TrainConfig& defaults) {
  TrainConfig config = guarded("train config", [&] {
    const json j = json::parse(text);
    TrainConfig c = defaults;
    c.learning_rate = j.value("learning_rate", c.learning_rate);
    c.batch_size = j.value("batch_size", c.batch_size);
    c.epochs = j.value("epochs", c.epochs);
    c.seed = j.value("seed", c.seed);
    c.split_ratio = j.value("split_ratio", c.split_ratio);
    return c;
  });
  config.validate();
  return config;
}

std::string dsup_to_csv(const std::vector<SupRecord>& records) {
  std::string out(kDsupHeader);
  out += '\n';
  for (const SupRecord& r : records) {
    out += shortest(r.params.bsw) + ',' + shortest(r.params.gor) + ',' +
           shortest(r.params.qgl_max) + ',' + std::to_string(r.z_star.zgl_idx) + ',' +
           std::to_string(r.z_star.zwhp_idx) + ',' + shortest(r.objective_star) + '\n';
  }
  return out;
}

std::vector<SupRecord> dsup_from_csv(std::string_view text) {
  std::vector<SupRecord> out;
  for (const auto& f : parse_csv(text, kDsupHeader)) {
    SupRecord r;
    r.params = {parse_double(f[0]), parse_double(f[1]), parse_double(f[2])};
    r.z_star = {parse_int(f[3]), parse_int(f[4])};
    r.objective_star = parse_double(f[5]);
    validate(r.params);
    if (!is_valid(r.z_star)) throw InvalidInput("D_sup row has an assignment outside Z");
    out.push_back(r);
  }
  return out;
}

std::string dweak_to_csv(const std::vector<WeakRecord>& records) {
  std::string out(kDweakHeader);
  out += '\n';
  for (const WeakRecord& r : records) {
    out += shortest(r.params.bsw) + ',' + shortest(r.params.gor) + ',' +
           shortest(r.params.qgl_max) + ',' + std::to_string(r.z_hat.zgl_idx) + ',' +
           std::to_string(r.z_hat.zwhp_idx) + ',' + shortest(r.p) + '\n';
  }
  return out;
}

std::vector<WeakRecord> dweak_from_csv(std::string_view text) {
  std::vector<WeakRecord> out;
  for (const auto& f : parse_csv(text, kDweakHeader)) {
    WeakRecord r;
    r.params = {parse_double(f[0]), parse_double(f[1]), parse_double(f[2])};
    r.z_hat = {parse_int(f[3]), parse_int(f[4])};
    r.p = parse_double(f[5]);
    validate(r.params);
    if (!is_valid(r.z_hat)) throw InvalidInput("D_weak row has an assignment outside Z");
    out.push_back(r);
  }
  return out;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInput("cannot write " + path.string());
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
}

}  // namespace gaslift
