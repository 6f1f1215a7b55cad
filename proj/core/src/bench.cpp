#include "gaslift/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "gaslift/error.hpp"
#include "gaslift/exact.hpp"

namespace gaslift {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start, Clock::time_point stop) {
  return std::chrono::duration<double, std::milli>(stop - start).count();
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t mid = v.size() / 2;
  return v.size() % 2 == 1 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
}

// Keeps timed results observable so the solves are not elided.
volatile double g_sink = 0.0;

std::string percent(double fraction) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f%%", 100.0 * fraction);
  return buf;
}

}  // namespace

Predictor model_predictor(const nn::MlpModel& model) {
  return [&model](const ProblemParams& params) {
    return nn::round_assignment(nn::predict(model, model_input(params)));
  };
}

Predictor constant_predictor(RegionAssignment z) {
  return [z](const ProblemParams&) { return z; };
}

EvalReport evaluate_heuristic(const Predictor& predictor, std::span<const SupRecord> test_records,
                              const BreakpointGrid& grid) {
  if (test_records.empty()) throw InvalidInput("test set is empty");
  EvalReport report;
  double head_hits = 0.0;
  double bit_hits = 0.0;
  double exact_hits = 0.0;
  double infeasible = 0.0;
  double gap_sum = 0.0;
  for (const SupRecord& rec : test_records) {
    const RegionAssignment z = predictor(rec.params);
    const bool gl_ok = z.zgl_idx == rec.z_star.zgl_idx;
    const bool whp_ok = z.zwhp_idx == rec.z_star.zwhp_idx;
    head_hits += (gl_ok ? 1.0 : 0.0) + (whp_ok ? 1.0 : 0.0);
    // A wrong interval flips two of that head's five bits.
    bit_hits += 2.0 * kIntervals - (gl_ok ? 0.0 : 2.0) - (whp_ok ? 0.0 : 2.0);
    exact_hits += (gl_ok && whp_ok) ? 1.0 : 0.0;

    const FlowTable table = build_flow_table(rec.params, grid);
    const std::optional<double> value = objective_for(rec.params, table, z);
    if (!value) {
      infeasible += 1.0;
    } else if (rec.objective_star > 0.0) {
      gap_sum += (rec.objective_star - *value) / rec.objective_star;
      ++report.n_gap_instances;
    } else {
      ++report.n_zero_optimum;
    }
  }
  const double n = static_cast<double>(test_records.size());
  report.n_instances = static_cast<int>(test_records.size());
  report.per_head_accuracy = head_hits / (2.0 * n);
  report.per_bit_accuracy = bit_hits / (2.0 * kIntervals * n);
  report.exact_match_accuracy = exact_hits / n;
  report.infeasible_rate = infeasible / n;
  report.mean_objective_gap =
      report.n_gap_instances > 0 ? gap_sum / static_cast<double>(report.n_gap_instances) : 0.0;
  return report;
}

EvalReport evaluate_heuristic(const nn::MlpModel& model, std::span<const SupRecord> test_records,
                              const BreakpointGrid& grid) {
  return evaluate_heuristic(model_predictor(model), test_records, grid);
}

EvalReport aggregate(std::span<const EvalReport> reports) {
  if (reports.empty()) throw InvalidInput("nothing to aggregate");
  EvalReport mean;
  const double k = static_cast<double>(reports.size());
  double gap_instances = 0.0;
  double zero_optimum = 0.0;
  for (const EvalReport& r : reports) {
    mean.per_head_accuracy += r.per_head_accuracy / k;
    mean.per_bit_accuracy += r.per_bit_accuracy / k;
    mean.exact_match_accuracy += r.exact_match_accuracy / k;
    mean.infeasible_rate += r.infeasible_rate / k;
    mean.mean_objective_gap += r.mean_objective_gap / k;
    gap_instances += r.n_gap_instances / k;
    zero_optimum += r.n_zero_optimum / k;
  }
  mean.n_instances = reports.front().n_instances;
  mean.n_gap_instances = static_cast<int>(std::lround(gap_instances));
  mean.n_zero_optimum = static_cast<int>(std::lround(zero_optimum));
  mean.seeds_aggregated = static_cast<int>(reports.size());
  return mean;
}

SurrogateReport evaluate_surrogate(const nn::MlpModel& surrogate,
                                   std::span<const WeakRecord> records) {
  if (records.empty()) throw InvalidInput("record set is empty");
  SurrogateReport report;
  double sign_hits = 0.0;
  double abs_err = 0.0;
  double abs_target = 0.0;
  int feasible = 0;
  for (const WeakRecord& rec : records) {
    const auto z = nn::one_hot(rec.z_hat);
    const double pred = nn::predict(surrogate, surrogate_input(rec.params, z))[0];
    sign_hits += ((pred < 0.0) == (rec.p < 0.0)) ? 1.0 : 0.0;
    if (rec.p >= 0.0) {
      abs_err += std::abs(pred - rec.p);
      abs_target += std::abs(rec.p);
      ++feasible;
    }
  }
  report.n_records = static_cast<int>(records.size());
  report.feasibility_accuracy = sign_hits / static_cast<double>(records.size());
  if (feasible > 0) {
    report.mae_feasible = abs_err / feasible;
    report.mean_abs_target = abs_target / feasible;
  }
  return report;
}

TimingReport benchmark_runtime(const nn::MlpModel& model, std::span<const ProblemParams> instances,
                               int repetitions, const BreakpointGrid& grid) {
  if (repetitions < 3) throw InvalidInput("benchmark_runtime needs at least 3 repetitions");
  if (instances.empty()) throw InvalidInput("no instances to benchmark");
  const std::vector<RegionAssignment> all = enumerate_assignments();
  const auto reps = static_cast<std::size_t>(repetitions);
  double exact_total = 0.0;
  double lp_total = 0.0;
  double inference_total = 0.0;

  for (const ProblemParams& params : instances) {
    const FlowTable table = build_flow_table(params, grid);
    std::vector<LinearProgram> programs;
    programs.reserve(all.size());
    for (const RegionAssignment& z : all) programs.push_back(build_early_fixed_lp(params, table, z));
    const std::vector<double> input = model_input(params);
    const RegionAssignment fixed = nn::round_assignment(nn::predict(model, input));
    const LinearProgram& fixed_lp = programs[assignment_index(fixed)];

    auto time_exact = [&] {
      const auto start = Clock::now();
      double best = -kInfinity;
      for (const LinearProgram& lp : programs) {
        const Solution sol = solve(lp);
        if (sol.status == SolveStatus::Optimal) best = std::max(best, sol.objective);
      }
      const auto stop = Clock::now();
      g_sink = best;
      return elapsed_ms(start, stop);
    };
    auto time_lp = [&] {
      const auto start = Clock::now();
      const Solution sol = solve(fixed_lp);
      const auto stop = Clock::now();
      g_sink = sol.objective;
      return elapsed_ms(start, stop);
    };
    auto time_inference = [&] {
      const auto start = Clock::now();
      const RegionAssignment z = nn::round_assignment(nn::predict(model, input));
      const auto stop = Clock::now();
      g_sink = z.zgl_idx + z.zwhp_idx;
      return elapsed_ms(start, stop);
    };

    // Warm-up pass, then timed repetitions.
    time_exact();
    time_lp();
    time_inference();
    std::vector<double> exact_ms, lp_ms, inference_ms;
    for (std::size_t r = 0; r < reps; ++r) {
      exact_ms.push_back(time_exact());
      lp_ms.push_back(time_lp());
      inference_ms.push_back(time_inference());
    }
    exact_total += median(exact_ms);
    lp_total += median(lp_ms);
    inference_total += median(inference_ms);
  }

  const double n = static_cast<double>(instances.size());
  TimingReport report;
  report.mean_exact_ms = exact_total / n;
  report.mean_lp_ms = lp_total / n;
  report.mean_inference_ms = inference_total / n;
  report.runtime_reduction =
      1.0 - (report.mean_lp_ms + report.mean_inference_ms) / report.mean_exact_ms;
  report.n_instances = static_cast<int>(instances.size());
  report.repetitions = repetitions;
  return report;
}

ReportFormat parse_format(std::string_view name) {
  if (name == "json") return ReportFormat::Json;
  if (name == "text") return ReportFormat::Text;
  throw InvalidInput("unknown report format '" + std::string(name) + "'");
}

std::string emit_report(const EvalReport& report, ReportFormat format, std::string_view label) {
  if (report.n_instances <= 0) throw InvalidInput("refusing to emit an empty report");
  if (format == ReportFormat::Json) {
    nlohmann::ordered_json j;
    j["per_head_accuracy"] = report.per_head_accuracy;
    j["per_bit_accuracy"] = report.per_bit_accuracy;
    j["exact_match_accuracy"] = report.exact_match_accuracy;
    j["infeasible_rate"] = report.infeasible_rate;
    j["mean_objective_gap"] = report.mean_objective_gap;
    j["n_instances"] = report.n_instances;
    j["n_gap_instances"] = report.n_gap_instances;
    j["n_zero_optimum"] = report.n_zero_optimum;
    j["seeds_aggregated"] = report.seeds_aggregated;
    return j.dump(2) + "\n";
  }
  char line[160];
  std::ostringstream os;
  std::snprintf(line, sizeof line, "%-20s %10s %12s %15s\n", "Model", "Accuracy", "Infeasible",
                "Objective gap");
  os << line;
  std::snprintf(line, sizeof line, "%-20.20s %10s %12s %15s\n", std::string(label).c_str(),
                percent(report.per_head_accuracy).c_str(), percent(report.infeasible_rate).c_str(),
                percent(report.mean_objective_gap).c_str());
  os << line;
  os << "\nexact-match accuracy: " << percent(report.exact_match_accuracy)
     << "\nper-bit accuracy:     " << percent(report.per_bit_accuracy)
     << "\ninstances:            " << report.n_instances << " (" << report.n_gap_instances
     << " in gap, " << report.n_zero_optimum << " zero-optimum)"
     << "\nseeds aggregated:     " << report.seeds_aggregated << "\n";
  return os.str();
}

std::string emit_report(const TimingReport& report, ReportFormat format) {
  if (report.n_instances <= 0) throw InvalidInput("refusing to emit an empty report");
  if (format == ReportFormat::Json) {
    nlohmann::ordered_json j;
    j["exact_method"] = report.exact_method;
    j["mean_exact_ms"] = report.mean_exact_ms;
    j["mean_lp_ms"] = report.mean_lp_ms;
    j["mean_inference_ms"] = report.mean_inference_ms;
    j["runtime_reduction"] = report.runtime_reduction;
    j["n_instances"] = report.n_instances;
    j["repetitions"] = report.repetitions;
    return j.dump(2) + "\n";
  }
  char line[160];
  std::ostringstream os;
  std::snprintf(line, sizeof line, "%-34s %12s\n", "Stage", "Mean [ms]");
  os << line;
  std::snprintf(line, sizeof line, "%-34s %12.4f\n", ("exact (" + report.exact_method + ")").c_str(),
                report.mean_exact_ms);
  os << line;
  std::snprintf(line, sizeof line, "%-34s %12.4f\n", "early-fixed LP", report.mean_lp_ms);
  os << line;
  std::snprintf(line, sizeof line, "%-34s %12.4f\n", "model inference", report.mean_inference_ms);
  os << line;
  std::snprintf(line, sizeof line, "%-34s %12.4f\n", "early fixing total",
                report.mean_lp_ms + report.mean_inference_ms);
  os << line;
  os << "\nruntime reduction: " << percent(report.runtime_reduction) << " over "
     << report.n_instances << " instances, median of " << report.repetitions
     << " repetitions each\n";
  return os.str();
}

EvalReport eval_report_from_json(std::string_view text) {
  try {
    const auto j = nlohmann::json::parse(text);
    EvalReport r;
    r.per_head_accuracy = j.at("per_head_accuracy").get<double>();
    r.per_bit_accuracy = j.at("per_bit_accuracy").get<double>();
    r.exact_match_accuracy = j.at("exact_match_accuracy").get<double>();
    r.infeasible_rate = j.at("infeasible_rate").get<double>();
    r.mean_objective_gap = j.at("mean_objective_gap").get<double>();
    r.n_instances = j.at("n_instances").get<int>();
    r.n_gap_instances = j.at("n_gap_instances").get<int>();
    r.n_zero_optimum = j.at("n_zero_optimum").get<int>();
    r.seeds_aggregated = j.at("seeds_aggregated").get<int>();
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("malformed eval report: ") + e.what());
  }
}

TimingReport timing_report_from_json(std::string_view text) {
  try {
    const auto j = nlohmann::json::parse(text);
    TimingReport r;
    r.exact_method = j.at("exact_method").get<std::string>();
    r.mean_exact_ms = j.at("mean_exact_ms").get<double>();
    r.mean_lp_ms = j.at("mean_lp_ms").get<double>();
    r.mean_inference_ms = j.at("mean_inference_ms").get<double>();
    r.runtime_reduction = j.at("runtime_reduction").get<double>();
    r.n_instances = j.at("n_instances").get<int>();
    r.repetitions = j.at("repetitions").get<int>();
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("malformed timing report: ") + e.what());
  }
}

}  // namespace gaslift
