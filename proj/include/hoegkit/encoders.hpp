#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "hoegkit/extraction.hpp"
#include "hoegkit/features.hpp"
#include "hoegkit/matrix.hpp"

namespace hoegkit {

inline constexpr const char* kEventNodeType = "event";
inline constexpr const char* kFollows = "follows";
inline constexpr const char* kInteracts = "interacts";

/// Semantic triple (subject, predicate, object) naming an edge type.
struct EdgeType {
  std::string subject;
  std::string predicate;
  std::string object;

  auto operator<=>(const EdgeType&) const = default;
  bool operator==(const EdgeType&) const = default;
};

std::string to_string(const EdgeType& et);

/// A 2 x m adjacency matrix stored as its two rows.
struct EdgeIndex {
  std::vector<std::size_t> source;
  std::vector<std::size_t> target;

  std::size_t size() const { return source.size(); }
  void push(std::size_t s, std::size_t t) {
    source.push_back(s);
    target.push_back(t);
  }
  bool operator==(const EdgeIndex&) const = default;
};

/// Heterogeneous object-event graph of one execution.
///
/// Feature matrices are features x nodes. Node type 0 is always "event" and edge
/// type 0 is always (event, follows, event); object types follow in log order, each
/// with one (type, interacts, event) edge type directed object -> event.
struct Hoeg {
  std::vector<std::string> node_types;
  std::vector<EdgeType> edge_types;
  std::vector<Matrix> features;
  std::vector<EdgeIndex> adjacency;
  std::vector<std::vector<std::string>> node_ids;
  std::vector<double> targets;
  /// Optional per-edge-type features, keyed by edge type position.
  std::map<std::size_t, Matrix> edge_features;

  std::size_t node_type_index(const std::string& type) const;
  std::size_t edge_type_index(const EdgeType& et) const;
  const Matrix& features_of(const std::string& type) const;
  const EdgeIndex& adjacency_of(const EdgeType& et) const;
  const Matrix* edge_features_of(const EdgeType& et) const;
  /// Column of an entity within its node type.
  std::optional<std::size_t> column_of(const std::string& type, const std::string& id) const;
  std::size_t num_events() const { return features.empty() ? 0 : features.front().cols(); }

  bool operator==(const Hoeg&) const = default;
};

/// Homogeneous event feature graph.
struct Efg {
  Matrix features;
  EdgeIndex adjacency;
  std::vector<double> targets;
  std::vector<std::string> node_ids;

  std::size_t num_events() const { return features.cols(); }
  bool operator==(const Efg&) const = default;
};

/// Window of k chronologically consecutive events of one execution.
struct SubgraphSample {
  std::size_t execution = 0;
  std::vector<std::size_t> columns;
  double target = 0.0;

  bool operator==(const SubgraphSample&) const = default;
};

/// Standardized remaining-time targets in execution order.
std::vector<double> standardized_targets(const ProcessExecution& execution, const EventLog& log,
                                         const NormalizationStats& stats);

/// Encodes the execution, optionally truncated after `prefix` (inclusive).
Efg encode_efg(const ProcessExecution& execution, const EventLog& log, const FeatureConfig& cfg,
               const NormalizationStats& stats, const std::optional<std::string>& prefix = std::nullopt);

Hoeg encode_hoeg(const ProcessExecution& execution, const EventLog& log, const FeatureConfig& cfg,
                 const NormalizationStats& stats,
                 const std::optional<std::string>& prefix = std::nullopt);

/// max(0, n - k + 1) windows; window i covers events i..i+k-1.
std::vector<SubgraphSample> subgraph_samples(const Efg& efg, std::size_t k = 4,
                                             std::size_t execution = 0);

/// The sample as a standalone graph: selected columns, internal edges re-indexed,
/// and a single target.
Efg materialize_sample(const Efg& efg, const SubgraphSample& sample);

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

std::vector<std::string> event_feature_names(const FeatureConfig& cfg);

/// One row per event (execution order, then event order): features then target.
Table efg_to_table(const std::vector<Efg>& graphs, const std::vector<std::string>& feature_names);

void write_csv(std::ostream& out, const Table& table);

}  // namespace hoegkit
