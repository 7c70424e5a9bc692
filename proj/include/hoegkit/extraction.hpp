#pragma once

#include <cstddef>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "hoegkit/ocel.hpp"

namespace hoegkit {

/// Disjoint-set forest with path halving and union by size.
class UnionFind {
 public:
  explicit UnionFind(std::size_t n);

  std::size_t find(std::size_t x);
  /// Returns false when both already share a set.
  bool unite(std::size_t a, std::size_t b);
  std::size_t size() const { return parent_.size(); }

 private:
  std::vector<std::size_t> parent_;
  std::vector<std::size_t> set_size_;
};

/// Undirected co-reference graph over objects.
struct ObjectGraph {
  std::set<std::string> nodes;
  /// Each pair is stored with `first < second`.
  std::set<std::pair<std::string, std::string>> edges;
};

ObjectGraph build_object_graph(const EventLog& log);

/// Adjacency lists over object positions; neighbours sorted, no self loops.
std::vector<std::vector<std::size_t>> object_adjacency(const EventLog& log);

/// A process execution: the event graph induced by a connected object subset.
///
/// Events and edges are expressed as positions in the originating log.
struct ProcessExecution {
  std::vector<std::string> object_ids;  // sorted
  std::vector<std::size_t> events;      // log order
  std::vector<std::pair<std::size_t, std::size_t>> edges;  // sorted, deduplicated

  bool operator==(const ProcessExecution&) const = default;
};

struct ConnectedComponents {};
struct LeadingType {
  std::string type;
};
using ExtractionStrategy = std::variant<ConnectedComponents, LeadingType>;

/// Parses "cc" / "connected-components" or "leading:<type>".
ExtractionStrategy parse_strategy(const std::string& text);
std::string to_string(const ExtractionStrategy& strategy);

/// One execution per connected component of the object graph, ordered by earliest event.
std::vector<ProcessExecution> extract_connected_components(const EventLog& log);

/// One execution per object of `leading`.
///
/// Every other object joins the execution of its nearest leading object in the
/// object graph; equal distances go to the lexicographically smallest leading id.
/// Objects unreachable from every leading object belong to no execution.
std::vector<ProcessExecution> extract_leading_type(const EventLog& log, const std::string& leading);

std::vector<ProcessExecution> extract(const EventLog& log, const ExtractionStrategy& strategy);

std::size_t count_cases(const EventLog& log, const ExtractionStrategy& strategy);

/// Builds the execution induced by `object_positions`: every event of those objects plus their directly-follows edges.
ProcessExecution make_execution(const EventLog& log, std::vector<std::size_t> object_positions);

}  // namespace hoegkit
