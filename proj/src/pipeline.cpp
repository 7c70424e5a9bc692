#include "hoegkit/pipeline.hpp"

#include <chrono>
#include <sstream>
#include <stdexcept>

namespace hoegkit {

using nlohmann::json;

const char* to_string(EncoderKind kind) {
  switch (kind) {
    case EncoderKind::efg:
      return "efg";
    case EncoderKind::hoeg:
      return "hoeg";
    case EncoderKind::efg_ss:
      return "efg_ss";
  }
  return "?";
}

EncoderKind parse_encoder(const std::string& text) {
  if (text == "efg") return EncoderKind::efg;
  if (text == "hoeg") return EncoderKind::hoeg;
  if (text == "efg_ss") return EncoderKind::efg_ss;
  throw std::invalid_argument("unknown encoder '" + text + "' (expected efg, hoeg or efg_ss)");
}

json to_json(const RunConfig& cfg) {
  json j = {{"input", cfg.input},
            {"dataset", cfg.dataset},
            {"extraction", cfg.extraction},
            {"splits", cfg.splits},
            {"seed", cfg.seed},
            {"chronological_split", cfg.chronological_split},
            {"encoder", to_string(cfg.encoder)},
            {"features",
             {{"activity_onehot", cfg.features.activity_onehot},
              {"elapsed_time", cfg.features.elapsed_time},
              {"previous_delta", cfg.features.previous_delta},
              {"previous_type_count", cfg.features.previous_type_count},
              {"numeric_event_attrs", cfg.features.numeric_event_attrs}}},
            {"zero_fill_numeric", cfg.zero_fill_numeric},
            {"subgraph_size", cfg.subgraph_size},
            {"model", to_json(cfg.model)},
            {"out", cfg.out}};
  j["prefix"] = cfg.prefix ? json(*cfg.prefix) : json(nullptr);
  return j;
}

RunConfig run_config_from_json(const json& j) {
  RunConfig cfg;
  cfg.input = j.value("input", cfg.input);
  cfg.dataset = j.value("dataset", cfg.dataset);
  cfg.extraction = j.value("extraction", cfg.extraction);
  if (j.contains("splits")) cfg.splits = j["splits"].get<std::array<double, 3>>();
  cfg.seed = j.value("seed", cfg.seed);
  cfg.chronological_split = j.value("chronological_split", cfg.chronological_split);
  if (j.contains("encoder")) cfg.encoder = parse_encoder(j["encoder"].get<std::string>());
  if (j.contains("features")) {
    const auto& f = j["features"];
    cfg.features.activity_onehot = f.value("activity_onehot", cfg.features.activity_onehot);
    cfg.features.elapsed_time = f.value("elapsed_time", cfg.features.elapsed_time);
    cfg.features.previous_delta = f.value("previous_delta", cfg.features.previous_delta);
    cfg.features.previous_type_count = f.value("previous_type_count", cfg.features.previous_type_count);
    cfg.features.numeric_event_attrs = f.value("numeric_event_attrs", cfg.features.numeric_event_attrs);
  }
  cfg.zero_fill_numeric = j.value("zero_fill_numeric", cfg.zero_fill_numeric);
  cfg.subgraph_size = j.value("subgraph_size", cfg.subgraph_size);
  if (j.contains("model")) cfg.model = model_config_from_json(j["model"], cfg.model);
  cfg.out = j.value("out", cfg.out);
  if (j.contains("prefix") && !j["prefix"].is_null()) cfg.prefix = j["prefix"].get<std::string>();
  return cfg;
}

Signature PreparedData::signature() const {
  if (encoder == EncoderKind::hoeg) {
    if (hoegs.empty()) throw std::invalid_argument("no encoded graphs");
    return signature_of(hoegs.front());
  }
  if (efgs.empty()) throw std::invalid_argument("no encoded graphs");
  return signature_of(efgs.front());
}

PreparedData prepare(EventLog log, const RunConfig& cfg, const std::optional<FittedFeatures>& fitted) {
  PreparedData data;
  data.log = std::move(log);
  data.encoder = cfg.encoder;
  for (auto& px : extract(data.log, parse_strategy(cfg.extraction))) {
    if (!px.events.empty()) data.executions.push_back(std::move(px));
  }
  data.splits = assign_splits(data.executions.size(), cfg.splits, cfg.seed, cfg.chronological_split);

  if (fitted) {
    data.features = fitted->features;
    data.stats = fitted->stats;
  } else {
    std::vector<const ProcessExecution*> train;
    for (std::size_t i : data.splits.indices(Split::train)) train.push_back(&data.executions[i]);
    data.features = fit_feature_config(data.log, train, cfg.features, cfg.zero_fill_numeric);
    data.stats = fit_normalization(data.log, train, data.features);
  }

  const auto& log_ref = data.log;
  for (std::size_t x = 0; x < data.executions.size(); ++x) {
    const auto& px = data.executions[x];
    switch (cfg.encoder) {
      case EncoderKind::hoeg:
        data.hoegs.push_back(encode_hoeg(px, log_ref, data.features, data.stats, cfg.prefix));
        data.graph_execution.push_back(x);
        break;
      case EncoderKind::efg:
        data.efgs.push_back(encode_efg(px, log_ref, data.features, data.stats, cfg.prefix));
        data.graph_execution.push_back(x);
        break;
      case EncoderKind::efg_ss: {
        const Efg full = encode_efg(px, log_ref, data.features, data.stats, cfg.prefix);
        for (const auto& s : subgraph_samples(full, cfg.subgraph_size, x)) {
          data.efgs.push_back(materialize_sample(full, s));
          data.graph_execution.push_back(x);
        }
        break;
      }
    }
  }
  const std::size_t n = cfg.encoder == EncoderKind::hoeg ? data.hoegs.size() : data.efgs.size();
  for (std::size_t g = 0; g < n; ++g) {
    data.views.push_back(cfg.encoder == EncoderKind::hoeg ? view_of(data.hoegs[g]) : view_of(data.efgs[g]));
    const Split s = data.splits.of_execution[data.graph_execution[g]];
    data.graph_split[static_cast<std::size_t>(s)].push_back(g);
  }
  return data;
}

std::string config_label(const ModelConfig& model) {
  std::ostringstream os;
  os << "hd=" << model.hidden_dim << ";lr=" << model.learning_rate;
  return os.str();
}

namespace {

std::optional<Metrics> metrics_if_any(const Predictor& p, const PreparedData& data, Split split) {
  const auto& subset = data.graphs_in(split);
  if (subset.empty()) return std::nullopt;
  return evaluate(p, data.views, subset);
}

}  // namespace

MetricsRow evaluate_model(const PreparedData& data, const ModelParams& params, const RunConfig& cfg) {
  const Predictor p = model_predictor(params);
  MetricsRow row;
  row.dataset = cfg.dataset;
  row.model = to_string(cfg.encoder);
  row.config = config_label(cfg.model);
  row.train = metrics_if_any(p, data, Split::train);
  row.validation = metrics_if_any(p, data, Split::validation);
  row.test = metrics_if_any(p, data, Split::test);
  row.predict_seconds = row.test ? row.test->predict_seconds : 0.0;
  return row;
}

TrainOutcome run_training(const PreparedData& data, const RunConfig& cfg) {
  TrainOutcome out;
  TrainResult trained = train(data.views, data.graphs_in(Split::train), data.graphs_in(Split::validation),
                              data.signature(), cfg.model, data.pooled());
  out.report = std::move(trained.report);
  out.model_row = evaluate_model(data, trained.params, cfg);
  out.model_row.fit_seconds = out.report.fit_seconds;
  out.report.predict_seconds = out.model_row.predict_seconds;
  if (out.model_row.train) out.report.train_metrics = *out.model_row.train;
  if (out.model_row.validation) out.report.validation_metrics = *out.model_row.validation;
  if (out.model_row.test) out.report.test_metrics = *out.model_row.test;

  const auto started = std::chrono::steady_clock::now();
  const auto baseline = MedianBaseline::fit(collect_targets(data.views, data.graphs_in(Split::train)));
  const double fit_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  const Predictor median_predictor = baseline.predictor();
  out.median_row.dataset = cfg.dataset;
  out.median_row.model = "median";
  out.median_row.config = "";
  out.median_row.train = metrics_if_any(median_predictor, data, Split::train);
  out.median_row.validation = metrics_if_any(median_predictor, data, Split::validation);
  out.median_row.test = metrics_if_any(median_predictor, data, Split::test);
  out.median_row.fit_seconds = fit_seconds;
  out.median_row.predict_seconds = out.median_row.test ? out.median_row.test->predict_seconds : 0.0;

  out.checkpoint.encoder = to_string(cfg.encoder);
  out.checkpoint.model_config = cfg.model;
  out.checkpoint.features = data.features;
  out.checkpoint.stats = data.stats;
  out.checkpoint.params = std::move(trained.params);
  return out;
}

}  // namespace hoegkit
