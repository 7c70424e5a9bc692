#include "hoegkit/encoders.hpp"

#include <algorithm>
#include <iomanip>
#include <limits>
#include <stdexcept>
#include <unordered_map>

namespace hoegkit {
namespace {

/// Execution columns kept for an optional prefix (all columns when absent).
std::size_t retained_count(const ProcessExecution& execution, const EventLog& log,
                           const std::optional<std::string>& prefix) {
  if (!prefix) return execution.events.size();
  if (!log.has_event(*prefix)) throw std::invalid_argument("unknown prefix event '" + *prefix + "'");
  const std::size_t ei = log.event_index(*prefix);
  auto it = std::lower_bound(execution.events.begin(), execution.events.end(), ei);
  if (it == execution.events.end() || *it != ei) {
    throw std::invalid_argument("prefix event '" + *prefix + "' is not part of the execution");
  }
  return static_cast<std::size_t>(it - execution.events.begin()) + 1;
}

EdgeIndex follows_edges(const ProcessExecution& execution, std::size_t kept) {
  std::unordered_map<std::size_t, std::size_t> column;
  for (std::size_t c = 0; c < kept; ++c) column.emplace(execution.events[c], c);
  EdgeIndex edges;
  for (auto [a, b] : execution.edges) {
    auto ia = column.find(a);
    auto ib = column.find(b);
    if (ia != column.end() && ib != column.end()) edges.push(ia->second, ib->second);
  }
  return edges;
}

std::vector<std::size_t> first_columns(std::size_t n) {
  std::vector<std::size_t> cols(n);
  for (std::size_t i = 0; i < n; ++i) cols[i] = i;
  return cols;
}

}  // namespace

std::string to_string(const EdgeType& et) {
  return "(" + et.subject + ", " + et.predicate + ", " + et.object + ")";
}

std::size_t Hoeg::node_type_index(const std::string& type) const {
  auto it = std::find(node_types.begin(), node_types.end(), type);
  if (it == node_types.end()) throw std::out_of_range("unknown node type '" + type + "'");
  return static_cast<std::size_t>(it - node_types.begin());
}

std::size_t Hoeg::edge_type_index(const EdgeType& et) const {
  auto it = std::find(edge_types.begin(), edge_types.end(), et);
  if (it == edge_types.end()) throw std::out_of_range("unknown edge type " + to_string(et));
  return static_cast<std::size_t>(it - edge_types.begin());
}

const Matrix& Hoeg::features_of(const std::string& type) const {
  return features.at(node_type_index(type));
}

const EdgeIndex& Hoeg::adjacency_of(const EdgeType& et) const {
  return adjacency.at(edge_type_index(et));
}

const Matrix* Hoeg::edge_features_of(const EdgeType& et) const {
  auto it = edge_features.find(edge_type_index(et));
  return it == edge_features.end() ? nullptr : &it->second;
}

std::optional<std::size_t> Hoeg::column_of(const std::string& type, const std::string& id) const {
  const auto& ids = node_ids.at(node_type_index(type));
  auto it = std::find(ids.begin(), ids.end(), id);
  if (it == ids.end()) return std::nullopt;
  return static_cast<std::size_t>(it - ids.begin());
}

std::vector<double> standardized_targets(const ProcessExecution& execution, const EventLog& log,
                                         const NormalizationStats& stats) {
  std::vector<double> out;
  for (const auto& ctx : event_contexts(execution, log)) out.push_back(stats.target.standardize(ctx.remaining));
  return out;
}

Efg encode_efg(const ProcessExecution& execution, const EventLog& log, const FeatureConfig& cfg,
               const NormalizationStats& stats, const std::optional<std::string>& prefix) {
  const std::size_t kept = retained_count(execution, log, prefix);
  Efg g;
  const auto cols = first_columns(kept);
  g.features = select_columns(event_feature_matrix(execution, log, cfg, stats), cols);
  g.adjacency = follows_edges(execution, kept);
  auto targets = standardized_targets(execution, log, stats);
  g.targets.assign(targets.begin(), targets.begin() + static_cast<std::ptrdiff_t>(kept));
  for (std::size_t c = 0; c < kept; ++c) g.node_ids.push_back(log.event(execution.events[c]).id);
  return g;
}

Hoeg encode_hoeg(const ProcessExecution& execution, const EventLog& log, const FeatureConfig& cfg,
                 const NormalizationStats& stats, const std::optional<std::string>& prefix) {
  const Efg base = encode_efg(execution, log, cfg, stats, prefix);
  const std::size_t kept = base.num_events();

  Hoeg h;
  h.node_types.push_back(kEventNodeType);
  h.edge_types.push_back({kEventNodeType, kFollows, kEventNodeType});
  h.features.push_back(base.features);
  h.adjacency.push_back(base.adjacency);
  h.node_ids.push_back(base.node_ids);
  h.targets = base.targets;

  std::vector<std::size_t> retained(execution.events.begin(),
                                    execution.events.begin() + static_cast<std::ptrdiff_t>(kept));
  const auto objects = referenced_objects(log, retained);

  std::unordered_map<std::size_t, std::size_t> object_column;
  for (const auto& type : log.object_types()) {
    std::vector<std::size_t> members;
    for (std::size_t oi : objects) {
      if (log.object(oi).type_name == type) members.push_back(oi);
    }
    Matrix x(cfg.object_dim(type), members.size());
    std::vector<std::string> ids;
    for (std::size_t c = 0; c < members.size(); ++c) {
      const ObjectInstance& o = log.object(members[c]);
      if (x.rows() > 0) x.set_column(c, object_feature_vector(o, cfg, stats));
      ids.push_back(o.id);
      object_column.emplace(members[c], c);
    }
    h.node_types.push_back(type);
    h.features.push_back(std::move(x));
    h.node_ids.push_back(std::move(ids));
    h.edge_types.push_back({type, kInteracts, kEventNodeType});
    h.adjacency.emplace_back();
  }

  for (std::size_t col = 0; col < kept; ++col) {
    for (std::size_t oi : log.event_objects(retained[col])) {
      const std::size_t t = h.node_type_index(log.object(oi).type_name);
      // Edge type t mirrors node type t for object types.
      h.adjacency[t].push(object_column.at(oi), col);
    }
  }
  return h;
}

std::vector<SubgraphSample> subgraph_samples(const Efg& efg, std::size_t k, std::size_t execution) {
  if (k == 0) throw std::invalid_argument("subgraph size must be at least 1");
  std::vector<SubgraphSample> out;
  const std::size_t n = efg.num_events();
  if (n < k) return out;
  for (std::size_t i = 0; i + k <= n; ++i) {
    SubgraphSample s;
    s.execution = execution;
    s.columns = first_columns(k);
    for (auto& c : s.columns) c += i;
    s.target = efg.targets.at(i + k - 1);
    out.push_back(std::move(s));
  }
  return out;
}

Efg materialize_sample(const Efg& efg, const SubgraphSample& sample) {
  Efg g;
  g.features = select_columns(efg.features, sample.columns);
  std::unordered_map<std::size_t, std::size_t> local;
  for (std::size_t i = 0; i < sample.columns.size(); ++i) {
    local.emplace(sample.columns[i], i);
    g.node_ids.push_back(efg.node_ids.at(sample.columns[i]));
  }
  for (std::size_t e = 0; e < efg.adjacency.size(); ++e) {
    auto a = local.find(efg.adjacency.source[e]);
    auto b = local.find(efg.adjacency.target[e]);
    if (a != local.end() && b != local.end()) g.adjacency.push(a->second, b->second);
  }
  g.targets = {sample.target};
  return g;
}

std::vector<std::string> event_feature_names(const FeatureConfig& cfg) {
  std::vector<std::string> names;
  if (cfg.flags.activity_onehot) {
    for (const auto& a : cfg.activity_vocab) names.push_back("activity=" + a);
    names.push_back("activity=<unknown>");
  }
  if (cfg.flags.elapsed_time) names.push_back("elapsed_time");
  if (cfg.flags.previous_delta) names.push_back("previous_delta");
  if (cfg.flags.previous_type_count) names.push_back("previous_type_count");
  if (cfg.flags.numeric_event_attrs) {
    for (const auto& a : cfg.event_numeric_attrs) names.push_back("attr:" + a);
  }
  return names;
}

Table efg_to_table(const std::vector<Efg>& graphs, const std::vector<std::string>& feature_names) {
  Table t;
  t.header = feature_names;
  t.header.push_back("target");
  for (const auto& g : graphs) {
    if (g.features.rows() != feature_names.size()) {
      throw std::invalid_argument("efg_to_table: feature dimension does not match header");
    }
    for (std::size_t c = 0; c < g.num_events(); ++c) {
      auto row = g.features.column(c);
      row.push_back(g.targets.at(c));
      t.rows.push_back(std::move(row));
    }
  }
  return t;
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

void write_csv(std::ostream& out, const Table& table) {
  for (std::size_t i = 0; i < table.header.size(); ++i) {
    out << (i ? "," : "") << csv_field(table.header[i]);
  }
  out << '\n';
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
    out << '\n';
  }
}

}  // namespace hoegkit
