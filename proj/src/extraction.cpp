#include "hoegkit/extraction.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>

namespace hoegkit {

UnionFind::UnionFind(std::size_t n) : parent_(n), set_size_(n, 1) {
  std::iota(parent_.begin(), parent_.end(), std::size_t{0});
}

std::size_t UnionFind::find(std::size_t x) {
  while (parent_[x] != x) {
    parent_[x] = parent_[parent_[x]];
    x = parent_[x];
  }
  return x;
}

bool UnionFind::unite(std::size_t a, std::size_t b) {
  a = find(a);
  b = find(b);
  if (a == b) return false;
  if (set_size_[a] < set_size_[b]) std::swap(a, b);
  parent_[b] = a;
  set_size_[a] += set_size_[b];
  return true;
}

ObjectGraph build_object_graph(const EventLog& log) {
  ObjectGraph g;
  for (const auto& o : log.objects()) g.nodes.insert(o.id);
  for (std::size_t ei = 0; ei < log.num_events(); ++ei) {
    const auto& objs = log.event_objects(ei);
    for (std::size_t i = 0; i < objs.size(); ++i) {
      for (std::size_t j = i + 1; j < objs.size(); ++j) {
        std::string a = log.object(objs[i]).id;
        std::string b = log.object(objs[j]).id;
        if (a == b) continue;
        if (b < a) std::swap(a, b);
        g.edges.emplace(std::move(a), std::move(b));
      }
    }
  }
  return g;
}

std::vector<std::vector<std::size_t>> object_adjacency(const EventLog& log) {
  std::vector<std::vector<std::size_t>> adj(log.num_objects());
  for (std::size_t ei = 0; ei < log.num_events(); ++ei) {
    const auto& objs = log.event_objects(ei);
    for (std::size_t a : objs) {
      for (std::size_t b : objs) {
        if (a != b) adj[a].push_back(b);
      }
    }
  }
  for (auto& n : adj) {
    std::sort(n.begin(), n.end());
    n.erase(std::unique(n.begin(), n.end()), n.end());
  }
  return adj;
}

ExtractionStrategy parse_strategy(const std::string& text) {
  if (text == "cc" || text == "connected-components") return ConnectedComponents{};
  const std::string prefix = "leading:";
  if (text.rfind(prefix, 0) == 0 && text.size() > prefix.size()) {
    return LeadingType{text.substr(prefix.size())};
  }
  throw std::invalid_argument("unknown extraction strategy '" + text + "'");
}

std::string to_string(const ExtractionStrategy& strategy) {
  if (const auto* lt = std::get_if<LeadingType>(&strategy)) return "leading:" + lt->type;
  return "cc";
}

ProcessExecution make_execution(const EventLog& log, std::vector<std::size_t> object_positions) {
  ProcessExecution px;
  std::sort(object_positions.begin(), object_positions.end());
  object_positions.erase(std::unique(object_positions.begin(), object_positions.end()),
                         object_positions.end());

  for (std::size_t oi : object_positions) {
    px.object_ids.push_back(log.object(oi).id);
    const auto& seq = log.sigma(oi);
    px.events.insert(px.events.end(), seq.begin(), seq.end());
  }
  std::sort(px.object_ids.begin(), px.object_ids.end());
  std::sort(px.events.begin(), px.events.end());
  px.events.erase(std::unique(px.events.begin(), px.events.end()), px.events.end());

  // conn_L restricted to the event set: a pair (a, b) is consecutive in sigma(o) for
  // some o in obj(a), so scanning the successor of each member event suffices.
  const auto member = [&px](std::size_t ei) {
    return std::binary_search(px.events.begin(), px.events.end(), ei);
  };
  for (std::size_t ei : px.events) {
    for (std::size_t oi : log.event_objects(ei)) {
      const auto& seq = log.sigma(oi);
      auto it = std::lower_bound(seq.begin(), seq.end(), ei);
      if (it != seq.end() && std::next(it) != seq.end() && member(*std::next(it))) {
        px.edges.emplace_back(ei, *std::next(it));
      }
    }
  }
  std::sort(px.edges.begin(), px.edges.end());
  px.edges.erase(std::unique(px.edges.begin(), px.edges.end()), px.edges.end());
  return px;
}

namespace {

void order_executions(std::vector<ProcessExecution>& xs) {
  // Log positions already encode (timestamp, id); empty executions go last.
  std::stable_sort(xs.begin(), xs.end(), [](const ProcessExecution& a, const ProcessExecution& b) {
    const auto first = [](const ProcessExecution& p) {
      return p.events.empty() ? std::numeric_limits<std::size_t>::max() : p.events.front();
    };
    return first(a) < first(b);
  });
}

}  // namespace

std::vector<ProcessExecution> extract_connected_components(const EventLog& log) {
  UnionFind uf(log.num_objects());
  for (std::size_t ei = 0; ei < log.num_events(); ++ei) {
    const auto& objs = log.event_objects(ei);
    for (std::size_t i = 1; i < objs.size(); ++i) uf.unite(objs[0], objs[i]);
  }

  std::map<std::size_t, std::vector<std::size_t>> components;
  for (std::size_t oi = 0; oi < log.num_objects(); ++oi) {
    // Repeated declarations of an id are not separate objects.
    if (log.object_index(log.object(oi).id) != oi) continue;
    components[uf.find(oi)].push_back(oi);
  }

  std::vector<ProcessExecution> out;
  out.reserve(components.size());
  for (auto& [root, members] : components) out.push_back(make_execution(log, std::move(members)));
  order_executions(out);
  return out;
}

std::vector<ProcessExecution> extract_leading_type(const EventLog& log, const std::string& leading) {
  if (!log.has_object_type(leading)) {
    throw std::invalid_argument("unknown object type '" + leading + "'");
  }
  std::vector<std::size_t> seeds = log.objects_of_type(leading);
  std::sort(seeds.begin(), seeds.end(), [&](std::size_t a, std::size_t b) {
    return log.object(a).id < log.object(b).id;
  });
  if (seeds.empty()) return {};

  const auto adj = object_adjacency(log);
  constexpr std::size_t kUnset = std::numeric_limits<std::size_t>::max();
  // owner[o] indexes `seeds`; smaller index means smaller leading id.
  std::vector<std::size_t> owner(log.num_objects(), kUnset);
  std::vector<std::size_t> dist(log.num_objects(), kUnset);
  std::vector<std::size_t> frontier;
  for (std::size_t s = 0; s < seeds.size(); ++s) {
    owner[seeds[s]] = s;
    dist[seeds[s]] = 0;
    frontier.push_back(seeds[s]);
  }
  // Level-synchronous BFS: every node of a level has its final owner before the
  // next level is expanded, so ties resolve to the minimum owner.
  for (std::size_t level = 0; !frontier.empty(); ++level) {
    std::vector<std::size_t> next;
    for (std::size_t v : frontier) {
      for (std::size_t u : adj[v]) {
        if (dist[u] == kUnset) {
          dist[u] = level + 1;
          owner[u] = owner[v];
          next.push_back(u);
        } else if (dist[u] == level + 1 && owner[v] < owner[u]) {
          owner[u] = owner[v];
        }
      }
    }
    frontier = std::move(next);
  }

  std::vector<std::vector<std::size_t>> groups(seeds.size());
  for (std::size_t oi = 0; oi < log.num_objects(); ++oi) {
    if (owner[oi] != kUnset && log.object_index(log.object(oi).id) == oi) {
      groups[owner[oi]].push_back(oi);
    }
  }
  std::vector<ProcessExecution> out;
  out.reserve(groups.size());
  for (auto& g : groups) out.push_back(make_execution(log, std::move(g)));
  order_executions(out);
  return out;
}

std::vector<ProcessExecution> extract(const EventLog& log, const ExtractionStrategy& strategy) {
  if (const auto* lt = std::get_if<LeadingType>(&strategy)) return extract_leading_type(log, lt->type);
  return extract_connected_components(log);
}

std::size_t count_cases(const EventLog& log, const ExtractionStrategy& strategy) {
  return extract(log, strategy).size();
}

}  // namespace hoegkit
