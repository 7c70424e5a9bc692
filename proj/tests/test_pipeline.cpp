#include <gtest/gtest.h>

#include <sstream>

#include "hoegkit/graph_io.hpp"
#include "hoegkit/ocel_io.hpp"
#include "hoegkit/pipeline.hpp"
#include "hoegkit/synthetic.hpp"

using namespace hoegkit;

namespace {

RunConfig small_config(EncoderKind encoder) {
  RunConfig cfg;
  cfg.dataset = "synthetic";
  cfg.seed = 9;
  cfg.encoder = encoder;
  cfg.model.hidden_dim = 8;
  cfg.model.max_epochs = 3;
  cfg.model.seed = 9;
  return cfg;
}

EventLog small_log(std::size_t executions = 30) {
  SyntheticOptions s;
  s.executions = executions;
  s.seed = 4;
  return make_synthetic_log(s);
}

std::string without_timing(const MetricsRow& row) {
  MetricsRow r = row;
  r.fit_seconds = 0.0;
  r.predict_seconds = 0.0;
  for (auto* m : {&r.train, &r.validation, &r.test}) {
    if (*m) (*m)->predict_seconds = 0.0;
  }
  std::ostringstream ss;
  write_metrics_csv(ss, {r});
  return ss.str();
}

}  // namespace

TEST(Synthetic, RemainingTimeIsLinearInElapsed) {
  const EventLog log = small_log(20);
  EXPECT_TRUE(validate(log).empty());
  const auto executions = extract_connected_components(log);
  ASSERT_EQ(executions.size(), 20u);
  for (const auto& px : executions) {
    EXPECT_GE(px.events.size(), 3u);
    EXPECT_LE(px.events.size(), 8u);
    for (const auto& c : event_contexts(px, log)) EXPECT_DOUBLE_EQ(c.elapsed + c.remaining, 5 * 86400.0);
  }
}

TEST(RunConfig, JsonRoundTrip) {
  RunConfig cfg = small_config(EncoderKind::efg_ss);
  cfg.input = "logs/x.jsonocel";
  cfg.extraction = "leading:order";
  cfg.splits = {0.56, 0.14, 0.30};
  cfg.features.previous_delta = false;
  cfg.prefix = "e9";
  cfg.model.learning_rate = 0.001;
  EXPECT_EQ(run_config_from_json(to_json(cfg)), cfg);
  EXPECT_EQ(run_config_from_json(nlohmann::json::object()), RunConfig{});
  EXPECT_THROW(run_config_from_json({{"encoder", "gcn"}}), std::invalid_argument);
}

TEST(Prepare, GraphsFollowExecutionSplits) {
  const RunConfig cfg = small_config(EncoderKind::hoeg);
  const PreparedData data = prepare(small_log(), cfg);
  EXPECT_EQ(data.hoegs.size(), 30u);
  EXPECT_EQ(data.views.size(), 30u);
  std::size_t total = 0;
  for (Split s : {Split::train, Split::validation, Split::test}) {
    for (std::size_t g : data.graphs_in(s)) EXPECT_EQ(data.splits.of_execution[data.graph_execution[g]], s);
    total += data.graphs_in(s).size();
  }
  EXPECT_EQ(total, 30u);
  EXPECT_EQ(data.graphs_in(Split::train).size(), 21u);
  EXPECT_FALSE(data.pooled());
}

TEST(Prepare, SubgraphEncoding) {
  const RunConfig cfg = small_config(EncoderKind::efg_ss);
  const PreparedData data = prepare(small_log(), cfg);
  std::size_t expected = 0;
  for (const auto& px : data.executions) expected += px.events.size() >= 4 ? px.events.size() - 3 : 0;
  EXPECT_EQ(data.efgs.size(), expected);
  for (const auto& g : data.efgs) {
    EXPECT_EQ(g.num_events(), 4u);
    EXPECT_EQ(g.targets.size(), 1u);
  }
  EXPECT_TRUE(data.pooled());
  EXPECT_EQ(data.signature().node_types, (std::vector<std::string>{"event"}));
}

TEST(Prepare, MovedDataKeepsViewsValid) {
  const RunConfig cfg = small_config(EncoderKind::efg);
  PreparedData a = prepare(small_log(), cfg);
  const auto before = a.views[3].features[0];
  PreparedData b = std::move(a);
  EXPECT_EQ(b.views[3].features[0], before);
  EXPECT_EQ(b.views[3].features[0], &b.efgs[3].features);
}

TEST(RunTraining, ProducesRowsAndCheckpoint) {
  const RunConfig cfg = small_config(EncoderKind::hoeg);
  const PreparedData data = prepare(small_log(), cfg);
  const TrainOutcome out = run_training(data, cfg);
  EXPECT_EQ(out.model_row.model, "hoeg");
  EXPECT_EQ(out.model_row.config, "hd=8;lr=0.01");
  EXPECT_EQ(out.median_row.model, "median");
  ASSERT_TRUE(out.model_row.test);
  EXPECT_GT(out.model_row.test->count, 0u);

  const Checkpoint back = parse_checkpoint(serialize_checkpoint(out.checkpoint));
  EXPECT_EQ(back.params, out.checkpoint.params);
  EXPECT_EQ(back.features, data.features);
  EXPECT_EQ(back.stats, data.stats);

  const PreparedData again = prepare(small_log(), cfg, FittedFeatures{back.features, back.stats});
  EXPECT_EQ(without_timing(evaluate_model(again, back.params, cfg)), without_timing(out.model_row));
}

TEST(RunTraining, Deterministic) {
  const RunConfig cfg = small_config(EncoderKind::efg);
  const TrainOutcome a = run_training(prepare(small_log(), cfg), cfg);
  const TrainOutcome b = run_training(prepare(small_log(), cfg), cfg);
  EXPECT_EQ(without_timing(a.model_row), without_timing(b.model_row));
  EXPECT_EQ(without_timing(a.median_row), without_timing(b.median_row));
}

TEST(MetricsCsv, WideLayout) {
  MetricsRow row;
  row.dataset = "d";
  row.model = "median";
  row.train = Metrics{1.0, 2.0, 3, 0.0};
  row.test = Metrics{0.5, 0.25, 3, 0.0};
  std::ostringstream ss;
  write_metrics_csv(ss, {row});
  std::istringstream lines(ss.str());
  std::string header, line;
  std::getline(lines, header);
  std::getline(lines, line);
  EXPECT_EQ(header, kMetricsHeader);
  EXPECT_EQ(std::count(line.begin(), line.end(), ','), 10);
  EXPECT_EQ(line.rfind("d,median,,1,2,,,0.5,0.25,", 0), 0u);
}
