#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "hoegkit/encoders.hpp"
#include "hoegkit/features.hpp"
#include "hoegkit/model.hpp"
#include "hoegkit/train.hpp"
#include "json.hpp"

namespace hoegkit {

inline constexpr int kGraphSchemaVersion = 1;
inline constexpr int kCheckpointSchemaVersion = 1;

// Encoded graph documents (see docs/graph-schema.md):
//   matrices are {"rows": r, "cols": c, "data": [row-major values]}
//   adjacency matrices are 2 x m: row 0 holds sources, row 1 targets.
std::string serialize_hoeg(const Hoeg& graph);
Hoeg parse_hoeg(std::string_view json_text);

std::string serialize_efg(const Efg& graph);
Efg parse_efg(std::string_view json_text);

nlohmann::json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const nlohmann::json& j, const std::string& what);

nlohmann::json to_json(const FeatureConfig& cfg);
FeatureConfig feature_config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const NormalizationStats& stats);
NormalizationStats normalization_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ModelConfig& cfg);
ModelConfig model_config_from_json(const nlohmann::json& j, ModelConfig base = {});
nlohmann::json to_json(const TrainReport& report);

/// Versioned checkpoint: model parameters with shape headers plus the fitted
/// feature configuration and statistics needed to encode new data.
struct Checkpoint {
  std::string encoder;
  ModelConfig model_config;
  FeatureConfig features;
  NormalizationStats stats;
  ModelParams params;
};

std::string serialize_checkpoint(const Checkpoint& ckpt);
Checkpoint parse_checkpoint(std::string_view json_text);

/// One row of the wide metrics table (train / validation / test errors plus timings).
struct MetricsRow {
  std::string dataset;
  std::string model;
  std::string config;
  std::optional<Metrics> train;
  std::optional<Metrics> validation;
  std::optional<Metrics> test;
  double fit_seconds = 0.0;
  double predict_seconds = 0.0;
};

inline constexpr const char* kMetricsHeader =
    "dataset,model,config,train_mae,train_mse,validation_mae,validation_mse,test_mae,test_mse,"
    "fit_seconds,predict_seconds";

/// Absent splits leave their cells blank.
void write_metrics_csv(std::ostream& out, const std::vector<MetricsRow>& rows);

}  // namespace hoegkit
