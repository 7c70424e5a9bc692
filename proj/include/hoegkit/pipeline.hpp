#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hoegkit/encoders.hpp"
#include "hoegkit/extraction.hpp"
#include "hoegkit/features.hpp"
#include "hoegkit/graph_io.hpp"
#include "hoegkit/model.hpp"
#include "hoegkit/ocel.hpp"
#include "hoegkit/train.hpp"
#include "json.hpp"

namespace hoegkit {

enum class EncoderKind { efg, hoeg, efg_ss };
const char* to_string(EncoderKind kind);
EncoderKind parse_encoder(const std::string& text);

/// Everything one pipeline run needs; round-trips through JSON.
struct RunConfig {
  std::string input;
  std::string dataset;
  std::string extraction = "cc";
  std::array<double, 3> splits{0.7, 0.15, 0.15};
  std::uint64_t seed = 0;
  bool chronological_split = false;
  EncoderKind encoder = EncoderKind::hoeg;
  FeatureFlags features;
  bool zero_fill_numeric = false;
  std::size_t subgraph_size = 4;
  ModelConfig model;
  std::string out = ".";
  std::optional<std::string> prefix;

  bool operator==(const RunConfig&) const = default;
};

nlohmann::json to_json(const RunConfig& cfg);
/// Missing keys keep their defaults.
RunConfig run_config_from_json(const nlohmann::json& j);

/// Extracted, split, fitted and encoded dataset.
///
/// `views` point into the owned graph storage; the object is move-only so they stay valid.
struct PreparedData {
  EventLog log;
  std::vector<ProcessExecution> executions;
  SplitAssignment splits;
  FeatureConfig features;
  NormalizationStats stats;
  EncoderKind encoder = EncoderKind::hoeg;
  std::vector<Hoeg> hoegs;
  std::vector<Efg> efgs;
  /// Owning execution of every graph (differs from the graph index for efg_ss).
  std::vector<std::size_t> graph_execution;
  std::vector<GraphView> views;
  std::array<std::vector<std::size_t>, 3> graph_split;

  PreparedData() = default;
  PreparedData(PreparedData&&) = default;
  PreparedData& operator=(PreparedData&&) = default;
  PreparedData(const PreparedData&) = delete;
  PreparedData& operator=(const PreparedData&) = delete;

  const std::vector<std::size_t>& graphs_in(Split split) const {
    return graph_split[static_cast<std::size_t>(split)];
  }
  Signature signature() const;
  bool pooled() const { return encoder == EncoderKind::efg_ss; }
};

struct FittedFeatures {
  FeatureConfig features;
  NormalizationStats stats;
};

/// Extracts executions (dropping event-less ones), assigns splits, fits features on the
/// training split unless `fitted` is given, and encodes every execution.
PreparedData prepare(EventLog log, const RunConfig& cfg,
                     const std::optional<FittedFeatures>& fitted = std::nullopt);

struct TrainOutcome {
  Checkpoint checkpoint;
  TrainReport report;
  MetricsRow model_row;
  MetricsRow median_row;
};

std::string config_label(const ModelConfig& model);

/// Trains the configured model and the median baseline and evaluates both on every split.
TrainOutcome run_training(const PreparedData& data, const RunConfig& cfg);

/// Evaluates trained parameters on all splits of prepared data.
MetricsRow evaluate_model(const PreparedData& data, const ModelParams& params, const RunConfig& cfg);

}  // namespace hoegkit
