#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "gaslift/bench.hpp"
#include "gaslift/error.hpp"
#include "gaslift/exact.hpp"
#include "gaslift/serialization.hpp"
#include "gaslift/training.hpp"

namespace fs = std::filesystem;
using namespace gaslift;

namespace {

constexpr int kExitInvalid = 2;

struct Dataset {
  std::vector<SupRecord> dsup;
  std::vector<WeakRecord> dweak;
  DataSplit sup_split;
  DataSplit weak_split;
};

std::vector<std::size_t> indices_from(const nlohmann::json& j, const char* key, std::size_t n) {
  std::vector<std::size_t> out = j.at(key).get<std::vector<std::size_t>>();
  for (std::size_t i : out) {
    if (i >= n) throw InvalidInput(std::string("split index out of range in ") + key);
  }
  return out;
}

Dataset load_dataset(const fs::path& dir) {
  Dataset data;
  data.dsup = dsup_from_csv(read_file(dir / "dsup.csv"));
  data.dweak = dweak_from_csv(read_file(dir / "dweak.csv"));
  try {
    const auto j = nlohmann::json::parse(read_file(dir / "split.json"));
    data.sup_split = {indices_from(j, "dsup_train", data.dsup.size()),
                      indices_from(j, "dsup_test", data.dsup.size())};
    data.weak_split = {indices_from(j, "dweak_train", data.dweak.size()),
                       indices_from(j, "dweak_test", data.dweak.size())};
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("malformed split.json: ") + e.what());
  }
  if (data.sup_split.test.empty()) throw InvalidInput("D_sup test split is empty");
  return data;
}

TrainConfig load_config(const std::string& path, TrainConfig defaults,
                        std::optional<std::uint64_t> seed) {
  TrainConfig cfg = path.empty() ? defaults : train_config_from_json(read_file(path), defaults);
  if (seed) cfg.seed = *seed;
  cfg.validate();
  return cfg;
}

void print(const std::string& text) { std::cout << text << std::flush; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Early-fixing heuristics for a gas-lifted oil well"};
  app.require_subcommand(1);

  std::string format = "json";
  auto add_format = [&](CLI::App* cmd) {
    cmd->add_option("--format", format, "Report format")
        ->check(CLI::IsMember({"json", "text"}));
  };

  double bsw = 0.0, gor = 0.0;
  std::string out;
  auto* simulate = app.add_subcommand("simulate-well", "Tabulate the well at every breakpoint");
  simulate->add_option("--bsw", bsw, "Water cut")->required();
  simulate->add_option("--gor", gor, "Gas-oil ratio")->required();
  simulate->add_option("--out", out, "Output JSON file")->required();

  std::size_t n_instances = 500, candidates = 12;
  std::uint64_t data_seed = 0;
  std::string data_dir;
  double split_ratio = 0.8;
  auto* gen = app.add_subcommand("gen-data", "Sample instances and label D_sup and D_weak");
  gen->add_option("--n", n_instances, "Number of instances")->check(CLI::PositiveNumber);
  gen->add_option("--seed", data_seed, "Seed for instances, candidates and splits");
  gen->add_option("--candidates", candidates, "Assignments scored per instance")
      ->check(CLI::Range(1, 25));
  gen->add_option("--split", split_ratio, "Training share of each split")
      ->check(CLI::Range(0.01, 0.99));
  gen->add_option("--out-dir", data_dir, "Output directory")->required();

  std::string config_path, surrogate_path;
  std::optional<std::uint64_t> train_seed;
  auto add_train = [&](const char* name, const char* help) {
    auto* cmd = app.add_subcommand(name, help);
    cmd->add_option("--data", data_dir, "Directory written by gen-data")->required();
    cmd->add_option("--config", config_path, "JSON training config");
    cmd->add_option("--seed", train_seed, "Seed for initialization, shuffling and dropout");
    cmd->add_option("--out", out, "Output weights JSON")->required();
    return cmd;
  };
  auto* train_sup = add_train("train-sup", "Train the supervised early-fixing model");
  auto* train_sur = add_train("train-surrogate", "Train the surrogate on D_weak");
  auto* train_weak_cmd = add_train("train-weak", "Train the early-fixing model through a surrogate");
  train_weak_cmd->add_option("--surrogate", surrogate_path, "Trained surrogate JSON")->required();

  std::string model_path, dump_path;
  bool baseline = false;
  auto* eval = app.add_subcommand("eval", "Evaluate a heuristic on the D_sup test split");
  eval->add_option("--model", model_path, "Early-fixing model JSON");
  eval->add_option("--data", data_dir, "Directory written by gen-data")->required();
  eval->add_flag("--baseline", baseline, "Evaluate the constant lowest-interval assignment");
  eval->add_option("--dump-lp", dump_path, "Write the early-fixed LP of every test instance");
  add_format(eval);

  int reps = 5;
  auto* bench = app.add_subcommand("bench", "Time exact solving against early fixing");
  bench->add_option("--model", model_path, "Early-fixing model JSON")->required();
  bench->add_option("--data", data_dir, "Directory written by gen-data")->required();
  bench->add_option("--reps", reps, "Repetitions per instance (median)");
  add_format(bench);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInvalid;
  }

  try {
    if (*simulate) {
      const FlowTable table = build_flow_table({bsw, gor, kQglMaxMax}, default_grid());
      write_file(out, flow_table_to_json(table));
    } else if (*gen) {
      const auto params = sample_params(n_instances, derive_seed(data_seed, 1));
      const auto dsup = build_dsup(params);
      const auto dweak = build_dweak(params, candidates, derive_seed(data_seed, 2));
      const DataSplit sup_split = split_indices(dsup.size(), split_ratio, derive_seed(data_seed, 3));
      const DataSplit weak_split =
          split_indices(dweak.size(), split_ratio, derive_seed(data_seed, 4));
      nlohmann::json split;
      split["seed"] = data_seed;
      split["dsup_train"] = sup_split.train;
      split["dsup_test"] = sup_split.test;
      split["dweak_train"] = weak_split.train;
      split["dweak_test"] = weak_split.test;
      const fs::path dir(data_dir);
      write_file(dir / "dsup.csv", dsup_to_csv(dsup));
      write_file(dir / "dweak.csv", dweak_to_csv(dweak));
      write_file(dir / "split.json", split.dump() + "\n");
      std::fprintf(stderr, "wrote %zu D_sup and %zu D_weak records to %s\n", dsup.size(),
                   dweak.size(), data_dir.c_str());
    } else if (*train_sup) {
      const Dataset data = load_dataset(data_dir);
      const TrainConfig cfg = load_config(config_path, supervised_defaults(), train_seed);
      const auto train = select<SupRecord>(data.dsup, data.sup_split.train);
      write_file(out, model_to_json(train_supervised(train, cfg).model));
    } else if (*train_sur) {
      const Dataset data = load_dataset(data_dir);
      const TrainConfig cfg = load_config(config_path, surrogate_defaults(), train_seed);
      const auto train = select<WeakRecord>(data.dweak, data.weak_split.train);
      const TrainResult result = train_surrogate(train, cfg);
      const auto test = select<WeakRecord>(data.dweak, data.weak_split.test);
      if (!test.empty()) {
        const SurrogateReport report = evaluate_surrogate(result.model, test);
        std::fprintf(stderr, "held-out feasibility accuracy %.4f, MAE on feasible %.2f\n",
                     report.feasibility_accuracy, report.mae_feasible);
      }
      write_file(out, model_to_json(result.model));
    } else if (*train_weak_cmd) {
      const Dataset data = load_dataset(data_dir);
      const TrainConfig cfg = load_config(config_path, weak_defaults(), train_seed);
      const nn::MlpModel surrogate = model_from_json(read_file(surrogate_path));
      std::vector<ProblemParams> params;
      for (std::size_t i : data.sup_split.train) params.push_back(data.dsup[i].params);
      write_file(out, model_to_json(train_weak(params, surrogate, cfg).model));
    } else if (*eval) {
      if (baseline == !model_path.empty()) {
        throw InvalidInput("eval needs exactly one of --model or --baseline");
      }
      const Dataset data = load_dataset(data_dir);
      const auto test = select<SupRecord>(data.dsup, data.sup_split.test);
      std::optional<nn::MlpModel> model;
      if (!baseline) model = model_from_json(read_file(model_path));
      const Predictor predictor =
          model ? model_predictor(*model) : constant_predictor(baseline_assignment());
      if (!dump_path.empty()) {
        std::string dump;
        for (std::size_t i = 0; i < test.size(); ++i) {
          const auto& rec = test[i];
          const RegionAssignment z = predictor(rec.params);
          const FlowTable table = build_flow_table(rec.params, default_grid());
          dump += "# test instance " + std::to_string(i) + ", z = (" +
                  std::to_string(z.zgl_idx) + ", " + std::to_string(z.zwhp_idx) + ")\n";
          dump += dump_lp(build_early_fixed_lp(rec.params, table, z));
        }
        write_file(dump_path, dump);
      }
      const EvalReport report = evaluate_heuristic(predictor, test);
      const std::string label = baseline ? "Baseline" : fs::path(model_path).stem().string();
      print(emit_report(report, parse_format(format), label));
    } else if (*bench) {
      const Dataset data = load_dataset(data_dir);
      const nn::MlpModel model = model_from_json(read_file(model_path));
      std::vector<ProblemParams> params;
      for (const auto& rec : data.dsup) params.push_back(rec.params);
      print(emit_report(benchmark_runtime(model, params, reps), parse_format(format)));
    }
  } catch (const InvalidInput& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitInvalid;
  } catch (const AllInfeasible& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
