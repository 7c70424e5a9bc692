#include <gtest/gtest.h>

#include <sstream>

#include "hoegkit/encoders.hpp"
#include "hoegkit/graph_io.hpp"
#include "hoegkit/ocel_io.hpp"

using namespace hoegkit;

namespace {

struct FixtureSetup {
  EventLog log = build_otc_fixture();
  ProcessExecution px = extract_connected_components(log).front();
  FeatureConfig cfg = fit_feature_config(log, {&px});
  NormalizationStats stats = fit_normalization(log, {&px}, cfg);
};

}  // namespace

TEST(Hoeg, PrefixDimensions) {
  FixtureSetup f;
  const Hoeg g = encode_hoeg(f.px, f.log, f.cfg, f.stats, "e9");
  EXPECT_EQ(g.node_types, (std::vector<std::string>{"event", "order", "item", "package", "delivery"}));
  const auto dims = [&](const char* t) {
    return std::make_pair(g.features_of(t).rows(), g.features_of(t).cols());
  };
  EXPECT_EQ(dims("event"), std::make_pair(f.cfg.event_dim(), std::size_t{9}));
  EXPECT_EQ(dims("order"), std::make_pair(std::size_t{1}, std::size_t{2}));
  EXPECT_EQ(dims("item"), std::make_pair(std::size_t{1}, std::size_t{3}));
  EXPECT_EQ(dims("package"), std::make_pair(std::size_t{2}, std::size_t{2}));
  EXPECT_EQ(dims("delivery"), std::make_pair(std::size_t{2}, std::size_t{1}));
  EXPECT_EQ(g.adjacency_of({"event", "follows", "event"}).size(), 10u);
  EXPECT_EQ(g.adjacency_of({"order", "interacts", "event"}).size(), 10u);
  EXPECT_EQ(g.adjacency_of({"item", "interacts", "event"}).size(), 9u);
  EXPECT_EQ(g.adjacency_of({"package", "interacts", "event"}).size(), 4u);
  EXPECT_EQ(g.adjacency_of({"delivery", "interacts", "event"}).size(), 1u);
  EXPECT_EQ(g.targets.size(), 9u);
  EXPECT_DOUBLE_EQ(g.targets.back(), f.stats.target.standardize(86400.0));
  EXPECT_EQ(g.column_of("item", "i2"), 1u);
  EXPECT_FALSE(g.column_of("item", "i9"));
  EXPECT_EQ(g.edge_features_of({"event", "follows", "event"}), nullptr);
}

TEST(Hoeg, InteractionEdgesPointAtReferencingEvents) {
  FixtureSetup f;
  const Hoeg g = encode_hoeg(f.px, f.log, f.cfg, f.stats);
  const std::size_t d = g.node_type_index("delivery");
  const auto& adj = g.adjacency[g.edge_type_index({"delivery", "interacts", "event"})];
  ASSERT_EQ(adj.size(), 2u);
  for (std::size_t k = 0; k < adj.size(); ++k) {
    EXPECT_EQ(g.node_ids[d][adj.source[k]], "d1");
    const std::string& e = g.node_ids[0][adj.target[k]];
    EXPECT_TRUE(e == "e9" || e == "e10");
  }
}

TEST(Hoeg, UnknownPrefixThrows) {
  FixtureSetup f;
  EXPECT_THROW(encode_hoeg(f.px, f.log, f.cfg, f.stats, "e42"), std::invalid_argument);
}

TEST(Efg, MatchesHoegEventPart) {
  FixtureSetup f;
  const Hoeg h = encode_hoeg(f.px, f.log, f.cfg, f.stats, "e9");
  const Efg e = encode_efg(f.px, f.log, f.cfg, f.stats, "e9");
  EXPECT_EQ(e.features, h.features_of("event"));
  EXPECT_EQ(e.adjacency, h.adjacency_of({"event", "follows", "event"}));
  EXPECT_EQ(e.targets, h.targets);
  EXPECT_EQ(e.node_ids, h.node_ids[0]);
}

TEST(Subgraphs, WindowCountAndTargets) {
  FixtureSetup f;
  const Efg e = encode_efg(f.px, f.log, f.cfg, f.stats);
  const auto samples = subgraph_samples(e, 4, 3);
  ASSERT_EQ(samples.size(), 7u);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    EXPECT_EQ(samples[i].execution, 3u);
    EXPECT_EQ(samples[i].columns, (std::vector<std::size_t>{i, i + 1, i + 2, i + 3}));
    EXPECT_EQ(samples[i].target, e.targets[i + 3]);
  }
  const Efg window = materialize_sample(e, samples[5]);
  EXPECT_EQ(window.num_events(), 4u);
  EXPECT_EQ(window.targets, (std::vector<double>{e.targets[8]}));
  EXPECT_EQ(window.node_ids, (std::vector<std::string>{"e6", "e7", "e8", "e9"}));
  for (std::size_t k = 0; k < window.adjacency.size(); ++k) {
    EXPECT_LT(window.adjacency.source[k], 4u);
    EXPECT_LT(window.adjacency.target[k], 4u);
  }
  EXPECT_EQ(window.adjacency.size(), 3u);
  EXPECT_TRUE(subgraph_samples(encode_efg(f.px, f.log, f.cfg, f.stats, "e3"), 4).empty());
  EXPECT_THROW(subgraph_samples(e, 0), std::invalid_argument);
}

TEST(Table, OneRowPerEvent) {
  FixtureSetup f;
  const Efg e = encode_efg(f.px, f.log, f.cfg, f.stats);
  const auto names = event_feature_names(f.cfg);
  ASSERT_EQ(names.size(), f.cfg.event_dim());
  const Table t = efg_to_table({e, e}, names);
  EXPECT_EQ(t.rows.size(), 20u);
  EXPECT_EQ(t.header.back(), "target");
  EXPECT_EQ(t.rows[3].back(), e.targets[3]);
  std::ostringstream csv;
  write_csv(csv, t);
  const std::string text = csv.str();
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 21);
}

TEST(GraphIo, HoegRoundTrip) {
  FixtureSetup f;
  const Hoeg g = encode_hoeg(f.px, f.log, f.cfg, f.stats, "e9");
  const std::string text = serialize_hoeg(g);
  EXPECT_EQ(parse_hoeg(text), g);
  EXPECT_EQ(serialize_hoeg(parse_hoeg(text)), text);
  EXPECT_THROW(parse_hoeg("{}"), std::exception);
  EXPECT_THROW(parse_hoeg(serialize_efg(encode_efg(f.px, f.log, f.cfg, f.stats))), std::exception);
}

TEST(GraphIo, EfgRoundTrip) {
  FixtureSetup f;
  const Efg e = encode_efg(f.px, f.log, f.cfg, f.stats);
  EXPECT_EQ(parse_efg(serialize_efg(e)), e);
}

TEST(GraphIo, ConfigAndStatsRoundTrip) {
  FixtureSetup f;
  EXPECT_EQ(feature_config_from_json(to_json(f.cfg)), f.cfg);
  EXPECT_EQ(normalization_from_json(to_json(f.stats)), f.stats);
  ModelConfig m;
  m.hidden_dim = 48;
  m.learning_rate = 0.001;
  m.seed = 77;
  const ModelConfig back = model_config_from_json(to_json(m));
  EXPECT_EQ(back.hidden_dim, 48u);
  EXPECT_EQ(back.learning_rate, 0.001);
  EXPECT_EQ(back.seed, 77u);
}
