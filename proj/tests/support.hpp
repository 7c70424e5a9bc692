#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <queue>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "hoegkit/encoders.hpp"
#include "hoegkit/extraction.hpp"
#include "hoegkit/model.hpp"
#include "hoegkit/ocel.hpp"

namespace testing_support {

using hoegkit::Event;
using hoegkit::EventLog;
using hoegkit::ObjectInstance;

struct RandomLogOptions {
  std::size_t max_objects = 200;
  std::size_t max_events = 400;
  std::size_t max_types = 3;
  std::size_t max_refs = 3;
  std::size_t min_events = 1;
};

// Random log: numeric attribute "a" on every object, numeric "cost" on every event,
// timestamps drawn with frequent ties.
inline EventLog random_log(std::mt19937_64& rng, const RandomLogOptions& opt = {}) {
  auto draw = [&rng](std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
  };
  const std::size_t n_types = draw(1, opt.max_types);
  const std::size_t n_objects = draw(1, opt.max_objects);
  const std::size_t n_events = draw(opt.min_events, opt.max_events);
  std::normal_distribution<double> normal(0.0, 1.0);

  std::vector<ObjectInstance> objects;
  for (std::size_t i = 0; i < n_objects; ++i) {
    const std::string type = "t" + std::to_string(draw(0, n_types - 1));
    objects.push_back({"obj" + std::to_string(i), type, {{"a", normal(rng)}}});
  }
  const char* activities[] = {"A", "B", "C", "D"};
  std::vector<Event> events;
  for (std::size_t i = 0; i < n_events; ++i) {
    Event e;
    e.id = "ev" + std::to_string(i);
    e.activity = activities[draw(0, 3)];
    e.timestamp = hoegkit::make_timestamp(2024, 1, 1) + std::chrono::seconds(draw(0, 50) * 60);
    e.attrs.emplace("cost", normal(rng));
    const std::size_t refs = draw(1, std::min(opt.max_refs, n_objects));
    for (std::size_t r = 0; r < refs; ++r) {
      const auto& o = objects[draw(0, n_objects - 1)];
      e.refs[o.type_name].push_back(o.id);
    }
    events.push_back(std::move(e));
  }
  std::vector<std::string> types;
  for (std::size_t t = 0; t < n_types; ++t) types.push_back("t" + std::to_string(t));
  return EventLog(std::move(events), std::move(objects), types);
}

// Independent component finder: adjacency from raw event references, plain BFS.
struct OracleComponent {
  std::set<std::string> objects;
  std::set<std::string> events;
  std::set<std::pair<std::string, std::string>> edges;
  bool operator<(const OracleComponent& o) const { return objects < o.objects; }
  bool operator==(const OracleComponent& o) const {
    return objects == o.objects && events == o.events && edges == o.edges;
  }
};

inline std::vector<OracleComponent> oracle_components(const EventLog& log) {
  std::map<std::string, std::set<std::string>> adj;
  std::map<std::string, std::vector<const Event*>> events_of;
  for (const auto& o : log.objects()) adj[o.id];
  for (const auto& e : log.events()) {
    std::vector<std::string> ids;
    for (const auto& [type, list] : e.refs) ids.insert(ids.end(), list.begin(), list.end());
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    for (const auto& a : ids) {
      events_of[a].push_back(&e);
      for (const auto& b : ids) {
        if (a != b) adj[a].insert(b);
      }
    }
  }
  std::set<std::string> seen;
  std::vector<OracleComponent> out;
  for (const auto& [start, unused] : adj) {
    if (seen.count(start)) continue;
    OracleComponent c;
    std::queue<std::string> q;
    q.push(start);
    seen.insert(start);
    while (!q.empty()) {
      const std::string cur = q.front();
      q.pop();
      c.objects.insert(cur);
      for (const auto& n : adj[cur]) {
        if (seen.insert(n).second) q.push(n);
      }
    }
    for (const auto& o : c.objects) {
      auto evs = events_of[o];
      std::sort(evs.begin(), evs.end(), [](const Event* a, const Event* b) {
        return std::tie(a->timestamp, a->id) < std::tie(b->timestamp, b->id);
      });
      for (std::size_t i = 0; i < evs.size(); ++i) {
        c.events.insert(evs[i]->id);
        if (i > 0) c.edges.emplace(evs[i - 1]->id, evs[i]->id);
      }
    }
    out.push_back(std::move(c));
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline OracleComponent as_oracle(const EventLog& log, const hoegkit::ProcessExecution& px) {
  OracleComponent c;
  c.objects.insert(px.object_ids.begin(), px.object_ids.end());
  for (std::size_t e : px.events) c.events.insert(log.event(e).id);
  for (const auto& [a, b] : px.edges) c.edges.emplace(log.event(a).id, log.event(b).id);
  return c;
}

// Small HOEG over every object of a random log (at most 6 events and 3 object types).
inline hoegkit::Hoeg toy_hoeg(std::mt19937_64& rng) {
  const EventLog log = random_log(rng, {5, 6, 3, 3, 2});
  std::vector<std::size_t> all(log.num_objects());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  const hoegkit::ProcessExecution px = hoegkit::make_execution(log, all);
  const auto cfg = hoegkit::fit_feature_config(log, {&px});
  const auto stats = hoegkit::fit_normalization(log, {&px}, cfg);
  return hoegkit::encode_hoeg(px, log, cfg, stats);
}

inline double naive_mse(const hoegkit::GraphView& g, const hoegkit::ModelParams& p) {
  const auto pred = hoegkit::forward(g, p);
  double s = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) s += (pred[i] - g.targets[i]) * (pred[i] - g.targets[i]);
  return s / static_cast<double>(pred.size());
}

// Relative error of every analytic partial derivative against a central difference.
inline std::vector<double> gradient_errors(const hoegkit::GraphView& g, hoegkit::ModelParams params,
                                           double eps = 1e-5) {
  // Zero biases put featureless nodes exactly on the PReLU kink, where central differences are meaningless.
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> jitter(-0.5, 0.5);
  const auto names = params.tensor_names();
  const auto tensors = params.tensors();
  for (std::size_t t = 0; t < tensors.size(); ++t) {
    if (names[t].find("bias") == std::string::npos) continue;
    for (double& v : tensors[t]->data()) v += jitter(rng);
  }
  hoegkit::ModelParams grads = hoegkit::zeros_like(params);
  hoegkit::loss_and_gradient(g, params, hoegkit::LossKind::mse, static_cast<double>(g.targets.size()), grads);
  std::vector<double> errors;
  auto ps = params.tensors();
  auto gs = grads.tensors();
  for (std::size_t t = 0; t < ps.size(); ++t) {
    auto pd = ps[t]->data();
    auto gd = gs[t]->data();
    for (std::size_t i = 0; i < pd.size(); ++i) {
      const double saved = pd[i];
      pd[i] = saved + eps;
      const double up = naive_mse(g, params);
      pd[i] = saved - eps;
      const double down = naive_mse(g, params);
      pd[i] = saved;
      const double numeric = (up - down) / (2.0 * eps);
      const double scale = std::max({std::abs(numeric), std::abs(gd[i]), 1e-6});
      errors.push_back(std::abs(numeric - gd[i]) / scale);
    }
  }
  return errors;
}

}  // namespace testing_support
