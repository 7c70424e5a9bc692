#include <gtest/gtest.h>

#include "hoegkit/extraction.hpp"
#include "hoegkit/ocel_io.hpp"
#include "support.hpp"

using namespace hoegkit;

namespace {

std::vector<std::string> event_ids(const EventLog& log, const ProcessExecution& px) {
  std::vector<std::string> out;
  for (std::size_t e : px.events) out.push_back(log.event(e).id);
  return out;
}

}  // namespace

TEST(UnionFind, MergesSets) {
  UnionFind uf(5);
  EXPECT_TRUE(uf.unite(0, 1));
  EXPECT_TRUE(uf.unite(3, 4));
  EXPECT_FALSE(uf.unite(1, 0));
  EXPECT_EQ(uf.find(0), uf.find(1));
  EXPECT_NE(uf.find(0), uf.find(3));
  EXPECT_TRUE(uf.unite(1, 4));
  EXPECT_EQ(uf.find(0), uf.find(3));
  EXPECT_NE(uf.find(2), uf.find(0));
}

TEST(ObjectGraph, FixtureEdges) {
  const EventLog log = build_otc_fixture();
  const ObjectGraph g = build_object_graph(log);
  EXPECT_EQ(g.nodes.size(), 8u);
  EXPECT_TRUE(g.edges.count({"i1", "i2"}));
  EXPECT_TRUE(g.edges.count({"o1", "o2"}));
  EXPECT_TRUE(g.edges.count({"d1", "p1"}));
  EXPECT_FALSE(g.edges.count({"i2", "o2"}));
  for (const auto& [a, b] : g.edges) EXPECT_LT(a, b);
}

TEST(Extraction, FixtureIsOneComponent) {
  const EventLog log = build_otc_fixture();
  const auto cc = extract_connected_components(log);
  ASSERT_EQ(cc.size(), 1u);
  EXPECT_EQ(cc[0].object_ids.size(), 8u);
  EXPECT_EQ(cc[0].events.size(), 10u);
  EXPECT_EQ(cc[0].edges.size(), 11u);
  EXPECT_EQ(count_cases(log, ConnectedComponents{}), 1u);
}

TEST(Extraction, LeadingItem) {
  const EventLog log = build_otc_fixture();
  const auto px = extract_leading_type(log, "item");
  ASSERT_EQ(px.size(), 3u);
  EXPECT_EQ(px[0].object_ids, (std::vector<std::string>{"d1", "i1", "o1", "o2", "p1", "p2"}));
  EXPECT_EQ(event_ids(log, px[1]), (std::vector<std::string>{"e1"}));
  EXPECT_EQ(px[1].object_ids, (std::vector<std::string>{"i2"}));
  EXPECT_EQ(event_ids(log, px[2]), (std::vector<std::string>{"e3", "e6", "e8", "e9", "e10"}));
  EXPECT_THROW(extract_leading_type(log, "truck"), std::invalid_argument);
}

TEST(Extraction, LeadingTypeWithoutInstances) {
  EventLog log({[] {
                 Event e;
                 e.id = "e";
                 e.refs["t"] = {"x"};
                 return e;
               }()},
               {{"x", "t", {}}}, {"t", "u"});
  EXPECT_TRUE(extract_leading_type(log, "u").empty());
}

TEST(Extraction, ParseStrategy) {
  EXPECT_TRUE(std::holds_alternative<ConnectedComponents>(parse_strategy("cc")));
  EXPECT_TRUE(std::holds_alternative<ConnectedComponents>(parse_strategy("connected-components")));
  EXPECT_EQ(std::get<LeadingType>(parse_strategy("leading:item")).type, "item");
  EXPECT_EQ(to_string(parse_strategy("leading:item")), "leading:item");
  EXPECT_THROW(parse_strategy("leading:"), std::invalid_argument);
  EXPECT_THROW(parse_strategy("random"), std::invalid_argument);
}

TEST(Extraction, IsolatedObjectsGiveEmptyExecutions) {
  Event e;
  e.id = "e";
  e.refs["t"] = {"x"};
  const EventLog log({e}, {{"x", "t", {}}, {"lonely", "t", {}}});
  const auto cc = extract_connected_components(log);
  ASSERT_EQ(cc.size(), 2u);
  EXPECT_EQ(cc[0].object_ids, (std::vector<std::string>{"x"}));
  EXPECT_TRUE(cc[1].events.empty());
}

TEST(Extraction, MatchesBfsOracleOnRandomLogs) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 60; ++trial) {
    const EventLog log = testing_support::random_log(rng, {40, 80, 3, 3, 1});
    std::vector<testing_support::OracleComponent> got;
    for (const auto& px : extract_connected_components(log)) got.push_back(testing_support::as_oracle(log, px));
    std::sort(got.begin(), got.end());
    ASSERT_EQ(got, testing_support::oracle_components(log)) << "trial " << trial;
  }
}

TEST(Extraction, MakeExecutionEdgesStayInside) {
  const EventLog log = build_otc_fixture();
  const ProcessExecution px = make_execution(log, {log.object_index("i2")});
  EXPECT_EQ(event_ids(log, px), (std::vector<std::string>{"e1"}));
  EXPECT_TRUE(px.edges.empty());
  const ProcessExecution both = make_execution(log, {log.object_index("o2"), log.object_index("d1")});
  EXPECT_EQ(event_ids(log, both), (std::vector<std::string>{"e3", "e4", "e6", "e8", "e9", "e10"}));
  // Induced edges include (e3, e6), which comes from i3 although i3 is not in the object set.
  EXPECT_EQ(both.edges.size(), 6u);
  EXPECT_TRUE(std::count(both.edges.begin(), both.edges.end(),
                         std::make_pair(log.event_index("e3"), log.event_index("e6"))));
}
