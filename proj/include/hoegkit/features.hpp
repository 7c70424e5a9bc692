#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "hoegkit/extraction.hpp"
#include "hoegkit/matrix.hpp"
#include "hoegkit/ocel.hpp"

namespace hoegkit {

// Event feature layout, in this order:
//   activity one-hot (training vocabulary + one trailing "unknown" slot)
//   elapsed seconds since the execution's first event, standardized
//   seconds since the preceding event of the execution (0 for the first), standardized
//   distinct object types referenced by strictly preceding events (raw count)
//   numeric event attributes, standardized, sorted by name; missing values encode as 0
struct FeatureFlags {
  bool activity_onehot = true;
  bool elapsed_time = true;
  bool previous_delta = true;
  bool previous_type_count = true;
  bool numeric_event_attrs = true;

  bool operator==(const FeatureFlags&) const = default;
};

struct ObjectTypeSchema {
  std::vector<std::string> numeric_attrs;
  /// Categorical attribute -> sorted vocabulary. Unseen categories encode as all zeros.
  std::map<std::string, std::vector<std::string>> categorical_attrs;

  std::size_t dim() const;
  bool operator==(const ObjectTypeSchema&) const = default;
};

struct FeatureConfig {
  FeatureFlags flags;
  bool zero_fill_numeric = false;
  std::vector<std::string> activity_vocab;
  std::vector<std::string> event_numeric_attrs;
  std::map<std::string, ObjectTypeSchema> object_schemas;

  std::size_t event_dim() const;
  /// 0 for types without training objects.
  std::size_t object_dim(const std::string& type) const;
  bool operator==(const FeatureConfig&) const = default;
};

struct MeanStd {
  double mean = 0.0;
  double std = 1.0;

  double standardize(double x) const { return (x - mean) / std; }
  bool operator==(const MeanStd&) const = default;
};

struct NormalizationStats {
  MeanStd target;
  MeanStd elapsed;
  MeanStd delta;
  std::map<std::string, MeanStd> event_attrs;
  std::map<std::string, std::map<std::string, MeanStd>> object_attrs;

  bool operator==(const NormalizationStats&) const = default;
};

/// Population mean/std; std falls back to 1.0 below 1e-12.
MeanStd fit_mean_std(std::vector<double> values);

/// Per-event quantities derived from the execution order.
struct EventContext {
  std::size_t event = 0;  // log position
  double elapsed = 0.0;
  double delta = 0.0;
  double remaining = 0.0;
  std::size_t previous_type_count = 0;
};

std::vector<EventContext> event_contexts(const ProcessExecution& execution, const EventLog& log);

/// Seconds from the event to the last event of the execution.
double remaining_time(const ProcessExecution& execution, const std::string& event_id,
                      const EventLog& log);

/// Vocabularies and schemas from the training executions only.
FeatureConfig fit_feature_config(const EventLog& log, const std::vector<const ProcessExecution*>& train,
                                 const FeatureFlags& flags = {}, bool zero_fill_numeric = false);

NormalizationStats fit_normalization(const EventLog& log,
                                     const std::vector<const ProcessExecution*>& train,
                                     const FeatureConfig& cfg);

/// Objects referenced by the given events, deduplicated, in log declaration order.
std::vector<std::size_t> referenced_objects(const EventLog& log, const std::vector<std::size_t>& events);

/// Feature matrix (event_dim x n) for the execution's events, in execution order.
Matrix event_feature_matrix(const ProcessExecution& execution, const EventLog& log,
                            const FeatureConfig& cfg, const NormalizationStats& stats);

std::vector<double> event_feature_vector(const ProcessExecution& execution, const std::string& event_id,
                                         const EventLog& log, const FeatureConfig& cfg,
                                         const NormalizationStats& stats);

/// Throws std::invalid_argument on a missing attribute unless zero-fill covers it.
std::vector<double> object_feature_vector(const ObjectInstance& object, const FeatureConfig& cfg,
                                          const NormalizationStats& stats);

enum class Split { train, validation, test };
const char* to_string(Split split);

struct SplitAssignment {
  std::vector<Split> of_execution;
  std::array<double, 3> ratios{};
  std::uint64_t seed = 0;

  std::vector<std::size_t> indices(Split split) const;
  std::size_t count(Split split) const;
};

/// Seeded shuffle, then partition by ratio (largest remainder). Every split with a
/// nonzero ratio receives at least one execution. `chronological` skips the shuffle so
/// the earliest executions train.
SplitAssignment assign_splits(std::size_t num_executions, const std::array<double, 3>& ratios,
                              std::uint64_t seed, bool chronological = false);

/// Fisher-Yates with a rejection-sampled bounded draw; stable across standard libraries.
void seeded_shuffle(std::vector<std::size_t>& items, std::uint64_t seed);

}  // namespace hoegkit
