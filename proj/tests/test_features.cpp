#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "hoegkit/features.hpp"
#include "hoegkit/ocel_io.hpp"

using namespace hoegkit;

namespace {

struct FixtureSetup {
  EventLog log = build_otc_fixture();
  ProcessExecution px = extract_connected_components(log).front();
  FeatureConfig cfg = fit_feature_config(log, {&px});
  NormalizationStats stats = fit_normalization(log, {&px}, cfg);
};

const EventContext& context_of(const std::vector<EventContext>& ctx, const EventLog& log, const std::string& id) {
  for (const auto& c : ctx) {
    if (log.event(c.event).id == id) return c;
  }
  throw std::out_of_range(id);
}

}  // namespace

TEST(MeanStd, PopulationStatistics) {
  const MeanStd m = fit_mean_std({1, 2, 3, 4});
  EXPECT_DOUBLE_EQ(m.mean, 2.5);
  EXPECT_DOUBLE_EQ(m.std, std::sqrt(1.25));
  EXPECT_DOUBLE_EQ(fit_mean_std({5, 5, 5}).std, 1.0);
  EXPECT_DOUBLE_EQ(fit_mean_std({5, 5, 5}).standardize(7), 2.0);
}

TEST(EventContexts, FixtureTimings) {
  FixtureSetup f;
  const auto ctx = event_contexts(f.px, f.log);
  ASSERT_EQ(ctx.size(), 10u);
  const auto& e1 = context_of(ctx, f.log, "e1");
  const auto& e5 = context_of(ctx, f.log, "e5");
  const auto& e9 = context_of(ctx, f.log, "e9");
  const auto& e10 = context_of(ctx, f.log, "e10");
  EXPECT_EQ(e1.elapsed, 0.0);
  EXPECT_EQ(e1.delta, 0.0);
  EXPECT_EQ(e1.remaining, 3 * 86400.0);
  EXPECT_EQ(e5.elapsed, 86400.0);
  EXPECT_EQ(e5.delta, 86400.0);
  EXPECT_EQ(e9.elapsed, 2 * 86400.0);
  EXPECT_EQ(e9.remaining, 86400.0);
  EXPECT_EQ(e10.remaining, 0.0);
  EXPECT_EQ(e1.previous_type_count, 0u);
  EXPECT_EQ(context_of(ctx, f.log, "e2").previous_type_count, 2u);
  EXPECT_EQ(e9.previous_type_count, 3u);
  EXPECT_EQ(e10.previous_type_count, 4u);
}

TEST(EventContexts, RemainingTimeMatchesLastMinusCurrent) {
  FixtureSetup f;
  const Timestamp last = f.log.event(f.px.events.back()).timestamp;
  for (std::size_t e : f.px.events) {
    const auto& ev = f.log.event(e);
    EXPECT_EQ(remaining_time(f.px, ev.id, f.log), seconds_between(ev.timestamp, last));
  }
  const ProcessExecution i2 = make_execution(f.log, {f.log.object_index("i2")});
  EXPECT_THROW(remaining_time(i2, "e9", f.log), std::invalid_argument);
}

TEST(FeatureConfig, FittedFromFixture) {
  FixtureSetup f;
  EXPECT_EQ(f.cfg.activity_vocab, (std::vector<std::string>{"Confirm delivery", "Pack item", "Pay order",
                                                             "Pick item", "Place order", "Ship package"}));
  EXPECT_TRUE(f.cfg.event_numeric_attrs.empty());
  EXPECT_EQ(f.cfg.event_dim(), 7u + 3u);
  EXPECT_EQ(f.cfg.object_dim("order"), 1u);
  EXPECT_EQ(f.cfg.object_dim("item"), 1u);
  EXPECT_EQ(f.cfg.object_dim("package"), 2u);
  EXPECT_EQ(f.cfg.object_dim("delivery"), 2u);
  EXPECT_EQ(f.cfg.object_dim("truck"), 0u);
  EXPECT_EQ(f.cfg.object_schemas.at("package").categorical_attrs.at("Size"),
            (std::vector<std::string>{"medium"}));

  FeatureFlags flags;
  flags.activity_onehot = false;
  flags.previous_type_count = false;
  EXPECT_EQ(fit_feature_config(f.log, {&f.px}, flags).event_dim(), 2u);
}

TEST(FeatureConfig, EventVectorLayout) {
  FixtureSetup f;
  const auto v = event_feature_vector(f.px, "e9", f.log, f.cfg, f.stats);
  ASSERT_EQ(v.size(), f.cfg.event_dim());
  for (std::size_t k = 0; k < 7; ++k) EXPECT_EQ(v[k], k == 5 ? 1.0 : 0.0);
  EXPECT_DOUBLE_EQ(v[7], f.stats.elapsed.standardize(2 * 86400.0));
  EXPECT_DOUBLE_EQ(v[8], f.stats.delta.standardize(86400.0));
  EXPECT_EQ(v[9], 3.0);

  const Matrix m = event_feature_matrix(f.px, f.log, f.cfg, f.stats);
  EXPECT_EQ(m.rows(), f.cfg.event_dim());
  EXPECT_EQ(m.cols(), 10u);
  EXPECT_EQ(m.column(8), v);
}

TEST(FeatureConfig, UnknownActivityUsesTrailingSlot) {
  FixtureSetup f;
  FeatureConfig narrow = f.cfg;
  narrow.activity_vocab = {"Place order"};
  const auto v = event_feature_vector(f.px, "e9", f.log, narrow, f.stats);
  EXPECT_EQ(v[0], 0.0);
  EXPECT_EQ(v[1], 1.0);
}

TEST(ObjectFeatures, StandardizedAndOneHot) {
  FixtureSetup f;
  const auto& p1 = f.log.object(f.log.object_index("p1"));
  EXPECT_EQ(object_feature_vector(p1, f.cfg, f.stats), (std::vector<double>{1.0, 1.0}));
  ObjectInstance odd = p1;
  odd.attrs["Size"] = std::string("huge");
  EXPECT_EQ(object_feature_vector(odd, f.cfg, f.stats), (std::vector<double>{1.0, 0.0}));
  ObjectInstance missing = p1;
  missing.attrs.erase("Weight");
  EXPECT_THROW(object_feature_vector(missing, f.cfg, f.stats), std::invalid_argument);
  FeatureConfig zero = f.cfg;
  zero.zero_fill_numeric = true;
  EXPECT_EQ(object_feature_vector(missing, zero, f.stats)[0], 0.0);
}

TEST(Normalization, TargetStatistics) {
  FixtureSetup f;
  std::vector<double> remaining;
  for (const auto& c : event_contexts(f.px, f.log)) remaining.push_back(c.remaining);
  EXPECT_EQ(f.stats.target, fit_mean_std(remaining));
  EXPECT_THROW(fit_normalization(f.log, {}, f.cfg), std::invalid_argument);
}

TEST(Splits, LargestRemainder) {
  const auto s = assign_splits(10, {0.7, 0.15, 0.15}, 3);
  EXPECT_EQ(s.count(Split::train), 7u);
  EXPECT_EQ(s.count(Split::validation) + s.count(Split::test), 3u);
  EXPECT_GE(s.count(Split::validation), 1u);
  EXPECT_GE(s.count(Split::test), 1u);

  const auto big = assign_splits(100, {0.56, 0.14, 0.30}, 1);
  EXPECT_EQ(big.count(Split::train), 56u);
  EXPECT_EQ(big.count(Split::validation), 14u);
  EXPECT_EQ(big.count(Split::test), 30u);
}

TEST(Splits, MinimumOnePerNonzeroSplit) {
  const auto s = assign_splits(3, {0.9, 0.05, 0.05}, 0);
  EXPECT_EQ(s.count(Split::train), 1u);
  EXPECT_EQ(s.count(Split::validation), 1u);
  EXPECT_EQ(s.count(Split::test), 1u);
  EXPECT_EQ(assign_splits(4, {1.0, 0.0, 0.0}, 0).count(Split::train), 4u);
  EXPECT_THROW(assign_splits(2, {0.8, 0.1, 0.1}, 0), std::invalid_argument);
  EXPECT_THROW(assign_splits(10, {0.8, 0.1, 0.2}, 0), std::invalid_argument);
  EXPECT_THROW(assign_splits(10, {1.2, -0.1, -0.1}, 0), std::invalid_argument);
}

TEST(Splits, SeededAndChronological) {
  const auto a = assign_splits(50, {0.7, 0.15, 0.15}, 11);
  const auto b = assign_splits(50, {0.7, 0.15, 0.15}, 11);
  const auto c = assign_splits(50, {0.7, 0.15, 0.15}, 12);
  EXPECT_EQ(a.of_execution, b.of_execution);
  EXPECT_NE(a.of_execution, c.of_execution);
  const auto chrono = assign_splits(10, {0.6, 0.2, 0.2}, 11, true);
  EXPECT_EQ(chrono.indices(Split::train), (std::vector<std::size_t>{0, 1, 2, 3, 4, 5}));
  EXPECT_EQ(chrono.indices(Split::test), (std::vector<std::size_t>{8, 9}));
}

TEST(Splits, ShuffleIsPermutation) {
  std::vector<std::size_t> items(100);
  std::iota(items.begin(), items.end(), 0);
  auto shuffled = items;
  seeded_shuffle(shuffled, 99);
  auto again = items;
  seeded_shuffle(again, 99);
  EXPECT_EQ(shuffled, again);
  EXPECT_NE(shuffled, items);
  std::sort(shuffled.begin(), shuffled.end());
  EXPECT_EQ(shuffled, items);
}
