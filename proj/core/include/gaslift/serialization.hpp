#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "gaslift/neural.hpp"
#include "gaslift/training.hpp"
#include "gaslift/well_model.hpp"

namespace gaslift {

// {"qgl_points": [...], "whp_points": [...], "q_liq": [[...], ...]}
std::string flow_table_to_json(const FlowTable& table);
FlowTable flow_table_from_json(std::string_view text);

// Layer list with shape headers and row-major weights, plus normalizer,
// head and dropout. Doubles are written in shortest round-trip form.
std::string model_to_json(const nn::MlpModel& model);
nn::MlpModel model_from_json(std::string_view text);

std::string train_config_to_json(const TrainConfig& config);
// Missing keys keep the values of `defaults`.
TrainConfig train_config_from_json(std::string_view text, const TrainConfig& defaults);

inline constexpr std::string_view kDsupHeader = "bsw,gor,qgl_max,zgl_idx,zwhp_idx,objective";
inline constexpr std::string_view kDweakHeader = "bsw,gor,qgl_max,zgl_idx,zwhp_idx,p";

std::string dsup_to_csv(const std::vector<SupRecord>& records);
std::vector<SupRecord> dsup_from_csv(std::string_view text);
std::string dweak_to_csv(const std::vector<WeakRecord>& records);
std::vector<WeakRecord> dweak_from_csv(std::string_view text);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace gaslift
