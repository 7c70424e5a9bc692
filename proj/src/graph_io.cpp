#include "hoegkit/graph_io.hpp"

#include <iomanip>
#include <limits>
#include <stdexcept>

namespace hoegkit {

using nlohmann::json;

namespace {

json edge_type_to_json(const EdgeType& et) { return json::array({et.subject, et.predicate, et.object}); }

EdgeType edge_type_from_json(const json& j) {
  if (!j.is_array() || j.size() != 3) throw std::invalid_argument("edge type must be a 3-element array");
  return {j[0].get<std::string>(), j[1].get<std::string>(), j[2].get<std::string>()};
}

json adjacency_to_json(const EdgeIndex& edges) {
  std::vector<std::size_t> data = edges.source;
  data.insert(data.end(), edges.target.begin(), edges.target.end());
  return {{"rows", 2}, {"cols", edges.size()}, {"data", data}};
}

EdgeIndex adjacency_from_json(const json& j, const std::string& what) {
  const auto rows = j.at("rows").get<std::size_t>();
  const auto cols = j.at("cols").get<std::size_t>();
  const auto data = j.at("data").get<std::vector<std::size_t>>();
  if (rows != 2 || data.size() != 2 * cols) {
    throw std::invalid_argument(what + ": adjacency must be 2 x cols with 2 * cols entries");
  }
  EdgeIndex e;
  e.source.assign(data.begin(), data.begin() + static_cast<std::ptrdiff_t>(cols));
  e.target.assign(data.begin() + static_cast<std::ptrdiff_t>(cols), data.end());
  return e;
}

void check_version(const json& doc, const char* kind, int version) {
  if (doc.value("kind", "") != kind) {
    throw std::invalid_argument(std::string("document is not of kind '") + kind + "'");
  }
  if (doc.value("schema_version", -1) != version) {
    throw std::invalid_argument("unsupported schema_version");
  }
}

void check_edges(const EdgeIndex& edges, std::size_t sources, std::size_t targets, const std::string& what) {
  for (std::size_t e = 0; e < edges.size(); ++e) {
    if (edges.source[e] >= sources || edges.target[e] >= targets) {
      throw std::invalid_argument(what + ": adjacency index out of range");
    }
  }
}

json mean_std_to_json(const MeanStd& m) { return {{"mean", m.mean}, {"std", m.std}}; }
MeanStd mean_std_from_json(const json& j) { return {j.at("mean").get<double>(), j.at("std").get<double>()}; }

json metrics_to_json(const Metrics& m) {
  return {{"mae", m.mae}, {"mse", m.mse}, {"count", m.count}, {"predict_seconds", m.predict_seconds}};
}

}  // namespace

json matrix_to_json(const Matrix& m) {
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", m.values()}};
}

Matrix matrix_from_json(const json& j, const std::string& what) {
  try {
    return Matrix(j.at("rows").get<std::size_t>(), j.at("cols").get<std::size_t>(),
                  j.at("data").get<std::vector<double>>());
  } catch (const std::exception& e) {
    throw std::invalid_argument(what + ": " + e.what());
  }
}

std::string serialize_hoeg(const Hoeg& graph) {
  json doc;
  doc["schema_version"] = kGraphSchemaVersion;
  doc["kind"] = "hoeg";
  doc["node_types"] = graph.node_types;
  doc["edge_types"] = json::array();
  for (const auto& et : graph.edge_types) doc["edge_types"].push_back(edge_type_to_json(et));
  doc["features"] = json::array();
  for (std::size_t t = 0; t < graph.node_types.size(); ++t) {
    json m = matrix_to_json(graph.features[t]);
    m["node_type"] = graph.node_types[t];
    m["ids"] = graph.node_ids[t];
    doc["features"].push_back(std::move(m));
  }
  doc["adjacency"] = json::array();
  for (std::size_t r = 0; r < graph.edge_types.size(); ++r) {
    json a = adjacency_to_json(graph.adjacency[r]);
    a["edge_type"] = edge_type_to_json(graph.edge_types[r]);
    doc["adjacency"].push_back(std::move(a));
  }
  doc["edge_features"] = json::array();
  for (const auto& [r, m] : graph.edge_features) {
    json f = matrix_to_json(m);
    f["edge_type"] = edge_type_to_json(graph.edge_types.at(r));
    doc["edge_features"].push_back(std::move(f));
  }
  doc["targets"] = graph.targets;
  return doc.dump(1) + "\n";
}

Hoeg parse_hoeg(std::string_view json_text) {
  const json doc = json::parse(json_text.begin(), json_text.end());
  check_version(doc, "hoeg", kGraphSchemaVersion);
  Hoeg h;
  h.node_types = doc.at("node_types").get<std::vector<std::string>>();
  for (const auto& et : doc.at("edge_types")) h.edge_types.push_back(edge_type_from_json(et));

  const auto& feats = doc.at("features");
  if (feats.size() != h.node_types.size()) throw std::invalid_argument("one feature matrix per node type required");
  for (std::size_t t = 0; t < feats.size(); ++t) {
    if (feats[t].at("node_type").get<std::string>() != h.node_types[t]) {
      throw std::invalid_argument("feature matrices out of node type order");
    }
    h.features.push_back(matrix_from_json(feats[t], "features[" + h.node_types[t] + "]"));
    h.node_ids.push_back(feats[t].at("ids").get<std::vector<std::string>>());
    if (h.node_ids.back().size() != h.features.back().cols()) {
      throw std::invalid_argument("features[" + h.node_types[t] + "]: id count differs from columns");
    }
  }
  const auto& adj = doc.at("adjacency");
  if (adj.size() != h.edge_types.size()) throw std::invalid_argument("one adjacency matrix per edge type required");
  for (std::size_t r = 0; r < adj.size(); ++r) {
    const auto& et = h.edge_types[r];
    if (edge_type_from_json(adj[r].at("edge_type")) != et) {
      throw std::invalid_argument("adjacency matrices out of edge type order");
    }
    h.adjacency.push_back(adjacency_from_json(adj[r], "adjacency" + to_string(et)));
    check_edges(h.adjacency.back(), h.features.at(h.node_type_index(et.subject)).cols(),
                h.features.at(h.node_type_index(et.object)).cols(), "adjacency" + to_string(et));
  }
  if (auto it = doc.find("edge_features"); it != doc.end()) {
    for (const auto& f : *it) {
      const auto et = edge_type_from_json(f.at("edge_type"));
      h.edge_features.emplace(h.edge_type_index(et), matrix_from_json(f, "edge_features" + to_string(et)));
    }
  }
  h.targets = doc.at("targets").get<std::vector<double>>();
  if (h.targets.size() != h.num_events()) throw std::invalid_argument("one target per event node required");
  return h;
}

std::string serialize_efg(const Efg& graph) {
  json doc;
  doc["schema_version"] = kGraphSchemaVersion;
  doc["kind"] = "efg";
  doc["features"] = matrix_to_json(graph.features);
  doc["ids"] = graph.node_ids;
  doc["adjacency"] = adjacency_to_json(graph.adjacency);
  doc["targets"] = graph.targets;
  return doc.dump(1) + "\n";
}

Efg parse_efg(std::string_view json_text) {
  const json doc = json::parse(json_text.begin(), json_text.end());
  check_version(doc, "efg", kGraphSchemaVersion);
  Efg g;
  g.features = matrix_from_json(doc.at("features"), "features");
  g.node_ids = doc.at("ids").get<std::vector<std::string>>();
  g.adjacency = adjacency_from_json(doc.at("adjacency"), "adjacency");
  g.targets = doc.at("targets").get<std::vector<double>>();
  check_edges(g.adjacency, g.num_events(), g.num_events(), "adjacency");
  if (g.node_ids.size() != g.num_events()) throw std::invalid_argument("ids: count differs from columns");
  return g;
}

json to_json(const FeatureConfig& cfg) {
  json schemas = json::object();
  for (const auto& [type, s] : cfg.object_schemas) {
    schemas[type] = {{"numeric", s.numeric_attrs}, {"categorical", s.categorical_attrs}};
  }
  return {{"flags",
           {{"activity_onehot", cfg.flags.activity_onehot},
            {"elapsed_time", cfg.flags.elapsed_time},
            {"previous_delta", cfg.flags.previous_delta},
            {"previous_type_count", cfg.flags.previous_type_count},
            {"numeric_event_attrs", cfg.flags.numeric_event_attrs}}},
          {"zero_fill_numeric", cfg.zero_fill_numeric},
          {"activity_vocab", cfg.activity_vocab},
          {"event_numeric_attrs", cfg.event_numeric_attrs},
          {"object_schemas", schemas}};
}

FeatureConfig feature_config_from_json(const json& j) {
  FeatureConfig cfg;
  const auto& f = j.at("flags");
  cfg.flags.activity_onehot = f.at("activity_onehot").get<bool>();
  cfg.flags.elapsed_time = f.at("elapsed_time").get<bool>();
  cfg.flags.previous_delta = f.at("previous_delta").get<bool>();
  cfg.flags.previous_type_count = f.at("previous_type_count").get<bool>();
  cfg.flags.numeric_event_attrs = f.at("numeric_event_attrs").get<bool>();
  cfg.zero_fill_numeric = j.at("zero_fill_numeric").get<bool>();
  cfg.activity_vocab = j.at("activity_vocab").get<std::vector<std::string>>();
  cfg.event_numeric_attrs = j.at("event_numeric_attrs").get<std::vector<std::string>>();
  for (const auto& [type, s] : j.at("object_schemas").items()) {
    ObjectTypeSchema schema;
    schema.numeric_attrs = s.at("numeric").get<std::vector<std::string>>();
    schema.categorical_attrs = s.at("categorical").get<std::map<std::string, std::vector<std::string>>>();
    cfg.object_schemas.emplace(type, std::move(schema));
  }
  return cfg;
}

json to_json(const NormalizationStats& stats) {
  json event_attrs = json::object();
  for (const auto& [name, ms] : stats.event_attrs) event_attrs[name] = mean_std_to_json(ms);
  json object_attrs = json::object();
  for (const auto& [type, attrs] : stats.object_attrs) {
    json per_type = json::object();
    for (const auto& [name, ms] : attrs) per_type[name] = mean_std_to_json(ms);
    object_attrs[type] = std::move(per_type);
  }
  return {{"target", mean_std_to_json(stats.target)},
          {"elapsed", mean_std_to_json(stats.elapsed)},
          {"delta", mean_std_to_json(stats.delta)},
          {"event_attrs", event_attrs},
          {"object_attrs", object_attrs}};
}

NormalizationStats normalization_from_json(const json& j) {
  NormalizationStats s;
  s.target = mean_std_from_json(j.at("target"));
  s.elapsed = mean_std_from_json(j.at("elapsed"));
  s.delta = mean_std_from_json(j.at("delta"));
  for (const auto& [name, ms] : j.at("event_attrs").items()) s.event_attrs.emplace(name, mean_std_from_json(ms));
  for (const auto& [type, attrs] : j.at("object_attrs").items()) {
    auto& per_type = s.object_attrs[type];
    for (const auto& [name, ms] : attrs.items()) per_type.emplace(name, mean_std_from_json(ms));
  }
  return s;
}

json to_json(const ModelConfig& cfg) {
  return {{"hidden_dim", cfg.hidden_dim},
          {"learning_rate", cfg.learning_rate},
          {"mp_layers", cfg.mp_layers},
          {"post_layers", cfg.post_layers},
          {"dropout", cfg.dropout},
          {"batch_size", cfg.batch_size},
          {"max_epochs", cfg.max_epochs},
          {"early_stop_patience", cfg.early_stop_patience},
          {"seed", cfg.seed},
          {"train_loss", to_string(cfg.train_loss)},
          {"stopping_loss", to_string(cfg.stopping_loss)}};
}

ModelConfig model_config_from_json(const json& j, ModelConfig cfg) {
  if (j.contains("hidden_dim")) cfg.hidden_dim = j["hidden_dim"].get<std::size_t>();
  if (j.contains("learning_rate")) cfg.learning_rate = j["learning_rate"].get<double>();
  if (j.contains("mp_layers")) cfg.mp_layers = j["mp_layers"].get<std::size_t>();
  if (j.contains("post_layers")) cfg.post_layers = j["post_layers"].get<std::size_t>();
  if (j.contains("dropout")) cfg.dropout = j["dropout"].get<double>();
  if (j.contains("batch_size")) cfg.batch_size = j["batch_size"].get<std::size_t>();
  if (j.contains("max_epochs")) cfg.max_epochs = j["max_epochs"].get<std::size_t>();
  if (j.contains("early_stop_patience")) cfg.early_stop_patience = j["early_stop_patience"].get<std::size_t>();
  if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("train_loss")) cfg.train_loss = parse_loss_kind(j["train_loss"].get<std::string>());
  if (j.contains("stopping_loss")) cfg.stopping_loss = parse_loss_kind(j["stopping_loss"].get<std::string>());
  return cfg;
}

json to_json(const TrainReport& r) {
  return {{"initial_train_loss", r.initial_train_loss},
          {"initial_validation_loss", r.initial_validation_loss},
          {"train_loss", r.train_loss},
          {"validation_loss", r.validation_loss},
          {"best_epoch", r.best_epoch},
          {"epochs_run", r.epochs_run},
          {"fit_seconds", r.fit_seconds},
          {"predict_seconds", r.predict_seconds},
          {"train", metrics_to_json(r.train_metrics)},
          {"validation", metrics_to_json(r.validation_metrics)},
          {"test", metrics_to_json(r.test_metrics)}};
}

std::string serialize_checkpoint(const Checkpoint& ckpt) {
  const ModelParams& p = ckpt.params;
  json sig;
  sig["node_types"] = p.signature.node_types;
  sig["feature_dims"] = p.signature.feature_dims;
  sig["target_type"] = p.signature.target_type;
  sig["relations"] = json::array();
  for (const auto& r : p.signature.relations) {
    sig["relations"].push_back({{"name", r.name}, {"source_type", r.source_type}, {"target_type", r.target_type}});
  }
  json tensors = json::array();
  const auto names = p.tensor_names();
  const auto ts = p.tensors();
  for (std::size_t k = 0; k < ts.size(); ++k) {
    json m = matrix_to_json(*ts[k]);
    m["name"] = names[k];
    tensors.push_back(std::move(m));
  }
  json doc;
  doc["schema_version"] = kCheckpointSchemaVersion;
  doc["kind"] = "checkpoint";
  doc["encoder"] = ckpt.encoder;
  doc["model_config"] = to_json(ckpt.model_config);
  doc["features"] = to_json(ckpt.features);
  doc["normalization"] = to_json(ckpt.stats);
  doc["signature"] = sig;
  doc["hidden_dim"] = p.hidden_dim;
  doc["pooled"] = p.pooled;
  doc["tensors"] = tensors;
  return doc.dump(1) + "\n";
}

Checkpoint parse_checkpoint(std::string_view json_text) {
  const json doc = json::parse(json_text.begin(), json_text.end());
  check_version(doc, "checkpoint", kCheckpointSchemaVersion);
  Checkpoint ckpt;
  ckpt.encoder = doc.at("encoder").get<std::string>();
  ckpt.model_config = model_config_from_json(doc.at("model_config"));
  ckpt.features = feature_config_from_json(doc.at("features"));
  ckpt.stats = normalization_from_json(doc.at("normalization"));

  Signature sig;
  const auto& js = doc.at("signature");
  sig.node_types = js.at("node_types").get<std::vector<std::string>>();
  sig.feature_dims = js.at("feature_dims").get<std::vector<std::size_t>>();
  sig.target_type = js.at("target_type").get<std::size_t>();
  for (const auto& r : js.at("relations")) {
    sig.relations.push_back({r.at("name").get<std::string>(), r.at("source_type").get<std::size_t>(),
                             r.at("target_type").get<std::size_t>()});
  }
  ModelConfig shape = ckpt.model_config;
  shape.hidden_dim = doc.at("hidden_dim").get<std::size_t>();
  ckpt.params = init_params(sig, shape, doc.at("pooled").get<bool>());

  const auto names = ckpt.params.tensor_names();
  auto ts = ckpt.params.tensors();
  const auto& jt = doc.at("tensors");
  if (jt.size() != ts.size()) throw std::invalid_argument("checkpoint: tensor count mismatch");
  for (std::size_t k = 0; k < ts.size(); ++k) {
    if (jt[k].at("name").get<std::string>() != names[k]) {
      throw std::invalid_argument("checkpoint: expected tensor " + names[k]);
    }
    Matrix m = matrix_from_json(jt[k], names[k]);
    require_shape(m, ts[k]->rows(), ts[k]->cols(), names[k]);
    *ts[k] = std::move(m);
  }
  return ckpt;
}

void write_metrics_csv(std::ostream& out, const std::vector<MetricsRow>& rows) {
  out << kMetricsHeader << '\n';
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  const auto cells = [&out](const std::optional<Metrics>& m) {
    if (m) {
      out << ',' << m->mae << ',' << m->mse;
    } else {
      out << ",,";
    }
  };
  for (const auto& r : rows) {
    out << r.dataset << ',' << r.model << ',' << r.config;
    cells(r.train);
    cells(r.validation);
    cells(r.test);
    out << ',' << r.fit_seconds << ',' << r.predict_seconds << '\n';
  }
}

}  // namespace hoegkit
