#pragma once

#include <functional>
#include <span>
#include <string>
#include <string_view>

#include "gaslift/formulation.hpp"
#include "gaslift/neural.hpp"
#include "gaslift/training.hpp"

namespace gaslift {

struct EvalReport {
  double per_head_accuracy = 0.0;
  double per_bit_accuracy = 0.0;
  double exact_match_accuracy = 0.0;
  double infeasible_rate = 0.0;
  // Mean of (P(pi) - P(pi, z_hat)) / P(pi) over instances that stay feasible
  // and have P(pi) > 0.
  double mean_objective_gap = 0.0;
  int n_instances = 0;
  int n_gap_instances = 0;
  int n_zero_optimum = 0;
  int seeds_aggregated = 1;

  friend bool operator==(const EvalReport&, const EvalReport&) = default;
};

struct TimingReport {
  std::string exact_method = "enumeration-25-lp";
  double mean_exact_ms = 0.0;
  double mean_lp_ms = 0.0;
  double mean_inference_ms = 0.0;
  double runtime_reduction = 0.0;
  int n_instances = 0;
  int repetitions = 0;

  friend bool operator==(const TimingReport&, const TimingReport&) = default;
};

struct SurrogateReport {
  // Share of records where (prediction < 0) agrees with (p < 0).
  double feasibility_accuracy = 0.0;
  double mae_feasible = 0.0;
  double mean_abs_target = 0.0;
  int n_records = 0;
};

using Predictor = std::function<RegionAssignment(const ProblemParams&)>;

Predictor model_predictor(const nn::MlpModel& model);
Predictor constant_predictor(RegionAssignment z);

EvalReport evaluate_heuristic(const Predictor& predictor, std::span<const SupRecord> test_records,
                              const BreakpointGrid& grid = default_grid());
EvalReport evaluate_heuristic(const nn::MlpModel& model, std::span<const SupRecord> test_records,
                              const BreakpointGrid& grid = default_grid());

// Field-wise mean; seeds_aggregated becomes reports.size().
EvalReport aggregate(std::span<const EvalReport> reports);

SurrogateReport evaluate_surrogate(const nn::MlpModel& surrogate,
                                   std::span<const WeakRecord> records);

/// Times exact enumeration, the early-fixed LP at the model's assignment and
/// model inference separately. Each instance takes the median over
/// `repetitions` runs; the report averages over instances. LPs are built
/// before the clock starts. Throws InvalidInput for repetitions < 3.
TimingReport benchmark_runtime(const nn::MlpModel& model, std::span<const ProblemParams> instances,
                               int repetitions, const BreakpointGrid& grid = default_grid());

enum class ReportFormat { Json, Text };

// Throws InvalidInput for anything but "json" or "text".
ReportFormat parse_format(std::string_view name);

// Throws InvalidInput for a report with no instances.
std::string emit_report(const EvalReport& report, ReportFormat format,
                        std::string_view label = "Model");
std::string emit_report(const TimingReport& report, ReportFormat format);

EvalReport eval_report_from_json(std::string_view text);
TimingReport timing_report_from_json(std::string_view text);

}  // namespace gaslift
