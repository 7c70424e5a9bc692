#include "hoegkit/features.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <set>
#include <stdexcept>

namespace hoegkit {
namespace {

constexpr double kMinStd = 1e-12;

/// Numeric view of an attribute value; timestamps count as epoch seconds.
bool numeric_value(const AttributeValue& v, double& out) {
  if (const auto* d = std::get_if<double>(&v)) {
    out = *d;
    return true;
  }
  if (const auto* t = std::get_if<Timestamp>(&v)) {
    out = static_cast<double>(t->time_since_epoch().count()) / 1000.0;
    return true;
  }
  return false;
}

std::vector<std::size_t> train_events(const std::vector<const ProcessExecution*>& train) {
  std::vector<std::size_t> events;
  for (const auto* px : train) events.insert(events.end(), px->events.begin(), px->events.end());
  std::sort(events.begin(), events.end());
  events.erase(std::unique(events.begin(), events.end()), events.end());
  return events;
}

}  // namespace

std::size_t ObjectTypeSchema::dim() const {
  std::size_t d = numeric_attrs.size();
  for (const auto& [name, vocab] : categorical_attrs) d += vocab.size();
  return d;
}

std::size_t FeatureConfig::event_dim() const {
  std::size_t d = 0;
  if (flags.activity_onehot) d += activity_vocab.size() + 1;
  if (flags.elapsed_time) ++d;
  if (flags.previous_delta) ++d;
  if (flags.previous_type_count) ++d;
  if (flags.numeric_event_attrs) d += event_numeric_attrs.size();
  return d;
}

std::size_t FeatureConfig::object_dim(const std::string& type) const {
  auto it = object_schemas.find(type);
  return it == object_schemas.end() ? 0 : it->second.dim();
}

MeanStd fit_mean_std(std::vector<double> values) {
  MeanStd out;
  if (values.empty()) return out;
  // Sorted summation makes the result independent of execution order.
  std::sort(values.begin(), values.end());
  double sum = 0.0;
  for (double v : values) sum += v;
  out.mean = sum / static_cast<double>(values.size());
  double sq = 0.0;
  for (double v : values) sq += (v - out.mean) * (v - out.mean);
  const double std = std::sqrt(sq / static_cast<double>(values.size()));
  out.std = std < kMinStd ? 1.0 : std;
  return out;
}

std::vector<EventContext> event_contexts(const ProcessExecution& execution, const EventLog& log) {
  std::vector<EventContext> out;
  out.reserve(execution.events.size());
  if (execution.events.empty()) return out;
  const Timestamp first = log.event(execution.events.front()).timestamp;
  const Timestamp last = log.event(execution.events.back()).timestamp;
  std::set<std::string> seen_types;
  Timestamp previous = first;
  for (std::size_t ei : execution.events) {
    const Event& e = log.event(ei);
    EventContext ctx;
    ctx.event = ei;
    ctx.elapsed = seconds_between(first, e.timestamp);
    ctx.delta = seconds_between(previous, e.timestamp);
    ctx.remaining = seconds_between(e.timestamp, last);
    ctx.previous_type_count = seen_types.size();
    for (std::size_t oi : log.event_objects(ei)) seen_types.insert(log.object(oi).type_name);
    previous = e.timestamp;
    out.push_back(ctx);
  }
  return out;
}

double remaining_time(const ProcessExecution& execution, const std::string& event_id,
                      const EventLog& log) {
  const std::size_t ei = log.event_index(event_id);
  if (!std::binary_search(execution.events.begin(), execution.events.end(), ei)) {
    throw std::invalid_argument("event '" + event_id + "' is not part of the execution");
  }
  return seconds_between(log.event(ei).timestamp, log.event(execution.events.back()).timestamp);
}

std::vector<std::size_t> referenced_objects(const EventLog& log, const std::vector<std::size_t>& events) {
  std::vector<std::size_t> out;
  for (std::size_t ei : events) {
    const auto& objs = log.event_objects(ei);
    out.insert(out.end(), objs.begin(), objs.end());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

FeatureConfig fit_feature_config(const EventLog& log, const std::vector<const ProcessExecution*>& train,
                                 const FeatureFlags& flags, bool zero_fill_numeric) {
  FeatureConfig cfg;
  cfg.flags = flags;
  cfg.zero_fill_numeric = zero_fill_numeric;

  const auto events = train_events(train);
  std::set<std::string> activities;
  std::set<std::string> numeric_names;
  for (std::size_t ei : events) {
    const Event& e = log.event(ei);
    activities.insert(e.activity);
    for (const auto& [name, v] : e.attrs) {
      double x;
      if (numeric_value(v, x)) numeric_names.insert(name);
    }
  }
  cfg.activity_vocab.assign(activities.begin(), activities.end());
  cfg.event_numeric_attrs.assign(numeric_names.begin(), numeric_names.end());

  std::map<std::string, std::set<std::string>> numeric_by_type;
  std::map<std::string, std::map<std::string, std::set<std::string>>> categories_by_type;
  for (std::size_t oi : referenced_objects(log, events)) {
    const ObjectInstance& o = log.object(oi);
    numeric_by_type[o.type_name];
    categories_by_type[o.type_name];
    for (const auto& [name, v] : o.attrs) {
      double x;
      if (numeric_value(v, x)) {
        numeric_by_type[o.type_name].insert(name);
      } else {
        categories_by_type[o.type_name][name].insert(std::get<std::string>(v));
      }
    }
  }
  for (const auto& [type, names] : numeric_by_type) {
    ObjectTypeSchema schema;
    schema.numeric_attrs.assign(names.begin(), names.end());
    for (const auto& [name, vocab] : categories_by_type[type]) {
      schema.categorical_attrs.emplace(name, std::vector<std::string>(vocab.begin(), vocab.end()));
    }
    cfg.object_schemas.emplace(type, std::move(schema));
  }
  return cfg;
}

NormalizationStats fit_normalization(const EventLog& log,
                                     const std::vector<const ProcessExecution*>& train,
                                     const FeatureConfig& cfg) {
  NormalizationStats stats;
  std::vector<double> targets, elapsed, delta;
  for (const auto* px : train) {
    for (const auto& ctx : event_contexts(*px, log)) {
      targets.push_back(ctx.remaining);
      elapsed.push_back(ctx.elapsed);
      delta.push_back(ctx.delta);
    }
  }
  if (targets.empty()) throw std::invalid_argument("fit_normalization: empty training split");
  stats.target = fit_mean_std(targets);
  stats.elapsed = fit_mean_std(elapsed);
  stats.delta = fit_mean_std(delta);

  const auto events = train_events(train);
  for (const auto& name : cfg.event_numeric_attrs) {
    std::vector<double> values;
    for (std::size_t ei : events) {
      auto it = log.event(ei).attrs.find(name);
      double x;
      if (it != log.event(ei).attrs.end() && numeric_value(it->second, x)) values.push_back(x);
    }
    stats.event_attrs.emplace(name, fit_mean_std(values));
  }

  std::map<std::string, std::map<std::string, std::vector<double>>> object_values;
  for (std::size_t oi : referenced_objects(log, events)) {
    const ObjectInstance& o = log.object(oi);
    auto sit = cfg.object_schemas.find(o.type_name);
    if (sit == cfg.object_schemas.end()) continue;
    for (const auto& name : sit->second.numeric_attrs) {
      auto it = o.attrs.find(name);
      double x = 0.0;
      if (it != o.attrs.end() && numeric_value(it->second, x)) {
        object_values[o.type_name][name].push_back(x);
      } else if (cfg.zero_fill_numeric) {
        object_values[o.type_name][name].push_back(0.0);
      }
    }
  }
  for (const auto& [type, schema] : cfg.object_schemas) {
    auto& per_type = stats.object_attrs[type];
    for (const auto& name : schema.numeric_attrs) {
      per_type.emplace(name, fit_mean_std(object_values[type][name]));
    }
  }
  return stats;
}

Matrix event_feature_matrix(const ProcessExecution& execution, const EventLog& log,
                            const FeatureConfig& cfg, const NormalizationStats& stats) {
  const auto contexts = event_contexts(execution, log);
  Matrix x(cfg.event_dim(), contexts.size());
  for (std::size_t col = 0; col < contexts.size(); ++col) {
    const EventContext& ctx = contexts[col];
    const Event& e = log.event(ctx.event);
    std::size_t row = 0;
    if (cfg.flags.activity_onehot) {
      auto it = std::lower_bound(cfg.activity_vocab.begin(), cfg.activity_vocab.end(), e.activity);
      const bool known = it != cfg.activity_vocab.end() && *it == e.activity;
      const std::size_t slot = known ? static_cast<std::size_t>(it - cfg.activity_vocab.begin())
                                     : cfg.activity_vocab.size();
      x(row + slot, col) = 1.0;
      row += cfg.activity_vocab.size() + 1;
    }
    if (cfg.flags.elapsed_time) x(row++, col) = stats.elapsed.standardize(ctx.elapsed);
    if (cfg.flags.previous_delta) x(row++, col) = stats.delta.standardize(ctx.delta);
    if (cfg.flags.previous_type_count) x(row++, col) = static_cast<double>(ctx.previous_type_count);
    if (cfg.flags.numeric_event_attrs) {
      for (const auto& name : cfg.event_numeric_attrs) {
        auto it = e.attrs.find(name);
        double v;
        if (it != e.attrs.end() && numeric_value(it->second, v)) {
          auto sit = stats.event_attrs.find(name);
          x(row, col) = sit == stats.event_attrs.end() ? v : sit->second.standardize(v);
        }
        ++row;
      }
    }
  }
  return x;
}

std::vector<double> event_feature_vector(const ProcessExecution& execution, const std::string& event_id,
                                         const EventLog& log, const FeatureConfig& cfg,
                                         const NormalizationStats& stats) {
  const std::size_t ei = log.event_index(event_id);
  auto it = std::lower_bound(execution.events.begin(), execution.events.end(), ei);
  if (it == execution.events.end() || *it != ei) {
    throw std::invalid_argument("event '" + event_id + "' is not part of the execution");
  }
  return event_feature_matrix(execution, log, cfg, stats)
      .column(static_cast<std::size_t>(it - execution.events.begin()));
}

std::vector<double> object_feature_vector(const ObjectInstance& object, const FeatureConfig& cfg,
                                          const NormalizationStats& stats) {
  auto sit = cfg.object_schemas.find(object.type_name);
  if (sit == cfg.object_schemas.end()) return {};
  const ObjectTypeSchema& schema = sit->second;
  std::vector<double> out;
  out.reserve(schema.dim());

  const auto type_stats = stats.object_attrs.find(object.type_name);
  for (const auto& name : schema.numeric_attrs) {
    auto it = object.attrs.find(name);
    double v = 0.0;
    if (it == object.attrs.end() || !numeric_value(it->second, v)) {
      if (!cfg.zero_fill_numeric) {
        throw std::invalid_argument("object '" + object.id + "' lacks numeric attribute '" + name + "'");
      }
      out.push_back(0.0);
      continue;
    }
    if (type_stats != stats.object_attrs.end()) {
      if (auto ms = type_stats->second.find(name); ms != type_stats->second.end()) {
        v = ms->second.standardize(v);
      }
    }
    out.push_back(v);
  }
  for (const auto& [name, vocab] : schema.categorical_attrs) {
    auto it = object.attrs.find(name);
    const std::string* label = it == object.attrs.end() ? nullptr : std::get_if<std::string>(&it->second);
    if (!label) {
      throw std::invalid_argument("object '" + object.id + "' lacks categorical attribute '" + name + "'");
    }
    for (const auto& category : vocab) out.push_back(category == *label ? 1.0 : 0.0);
  }
  return out;
}

const char* to_string(Split split) {
  switch (split) {
    case Split::train:
      return "train";
    case Split::validation:
      return "validation";
    case Split::test:
      return "test";
  }
  return "?";
}

std::vector<std::size_t> SplitAssignment::indices(Split split) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < of_execution.size(); ++i) {
    if (of_execution[i] == split) out.push_back(i);
  }
  return out;
}

std::size_t SplitAssignment::count(Split split) const {
  return static_cast<std::size_t>(std::count(of_execution.begin(), of_execution.end(), split));
}

void seeded_shuffle(std::vector<std::size_t>& items, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  for (std::size_t i = items.size(); i > 1; --i) {
    const std::uint64_t bound = i;
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t r;
    do {
      r = rng();
    } while (r >= limit);
    std::swap(items[i - 1], items[static_cast<std::size_t>(r % bound)]);
  }
}

SplitAssignment assign_splits(std::size_t num_executions, const std::array<double, 3>& ratios,
                              std::uint64_t seed, bool chronological) {
  double sum = 0.0;
  std::size_t nonzero = 0;
  for (double r : ratios) {
    if (r < 0.0 || !std::isfinite(r)) throw std::invalid_argument("split ratios must be non-negative");
    sum += r;
    if (r > 0.0) ++nonzero;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw std::invalid_argument("split ratios must sum to 1");
  if (num_executions < nonzero) {
    throw std::invalid_argument("need at least " + std::to_string(nonzero) + " executions, got " +
                                std::to_string(num_executions));
  }

  // Largest remainder apportionment.
  std::array<std::size_t, 3> sizes{};
  std::array<double, 3> remainders{};
  std::size_t assigned = 0;
  for (std::size_t k = 0; k < 3; ++k) {
    const double exact = ratios[k] * static_cast<double>(num_executions);
    const double whole = std::floor(exact + 1e-9);
    sizes[k] = static_cast<std::size_t>(whole);
    remainders[k] = std::max(0.0, exact - whole);
    assigned += sizes[k];
  }
  while (assigned < num_executions) {
    std::size_t best = 0;
    for (std::size_t k = 1; k < 3; ++k) {
      if (remainders[k] > remainders[best]) best = k;
    }
    ++sizes[best];
    remainders[best] = -1.0;
    ++assigned;
  }
  for (std::size_t k = 0; k < 3; ++k) {
    if (ratios[k] > 0.0 && sizes[k] == 0) {
      const auto donor = static_cast<std::size_t>(std::max_element(sizes.begin(), sizes.end()) - sizes.begin());
      --sizes[donor];
      ++sizes[k];
    }
  }

  std::vector<std::size_t> order(num_executions);
  for (std::size_t i = 0; i < num_executions; ++i) order[i] = i;
  if (!chronological) seeded_shuffle(order, seed);

  SplitAssignment out;
  out.ratios = ratios;
  out.seed = seed;
  out.of_execution.assign(num_executions, Split::train);
  std::size_t pos = 0;
  const std::array<Split, 3> kinds = {Split::train, Split::validation, Split::test};
  for (std::size_t k = 0; k < 3; ++k) {
    for (std::size_t i = 0; i < sizes[k]; ++i) out.of_execution[order[pos++]] = kinds[k];
  }
  return out;
}

}  // namespace hoegkit
