#include "hoegkit/synthetic.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace hoegkit {

EventLog make_synthetic_log(const SyntheticOptions& options) {
  if (options.min_events < 2 || options.max_events < options.min_events) {
    throw std::invalid_argument("synthetic log needs 2 <= min_events <= max_events");
  }
  std::mt19937_64 rng(options.seed);
  std::uniform_int_distribution<std::size_t> event_count(options.min_events, options.max_events);
  std::uniform_int_distribution<int> item_count(1, 2);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const std::vector<std::string> middle_activities = {"Check", "Approve", "Ship", "Invoice"};
  const auto duration_ms = static_cast<std::int64_t>(options.duration_seconds * 1000.0);

  std::vector<Event> events;
  std::vector<ObjectInstance> objects;
  const Timestamp base = make_timestamp(2023, 1, 1);
  for (std::size_t k = 0; k < options.executions; ++k) {
    const std::string tag = "x" + std::to_string(k);
    const std::string order_id = tag + "_order";
    objects.push_back({order_id, "order",
                       {{"Priority", std::floor(unit(rng) * 5.0)},
                        {"Channel", std::string(unit(rng) < 0.5 ? "web" : "store")}}});
    std::vector<std::string> items;
    const int n_items = item_count(rng);
    for (int j = 0; j < n_items; ++j) {
      items.push_back(tag + "_item" + std::to_string(j));
      objects.push_back({items.back(), "item", {{"Price", std::round(unit(rng) * 1000.0) / 10.0}}});
    }

    const std::size_t n = event_count(rng);
    const Timestamp start = base + std::chrono::milliseconds(
                                       static_cast<std::int64_t>(unit(rng) * 300.0 * 86400.0) * 1000);
    std::vector<std::int64_t> offsets = {0, duration_ms};
    while (offsets.size() < n) {
      offsets.push_back(static_cast<std::int64_t>(unit(rng) * static_cast<double>(duration_ms)));
    }
    std::sort(offsets.begin(), offsets.end());

    for (std::size_t i = 0; i < n; ++i) {
      Event e;
      e.id = tag + "_e" + std::to_string(i);
      e.timestamp = start + std::chrono::milliseconds(offsets[i]);
      if (i == 0) {
        e.activity = "Create";
      } else if (i + 1 == n) {
        e.activity = "Close";
      } else {
        e.activity = middle_activities[static_cast<std::size_t>(unit(rng) * 4.0) % 4];
      }
      e.attrs.emplace("Cost", std::round(unit(rng) * 500.0));
      e.refs["order"] = {order_id};
      for (const auto& item : items) {
        if (items.size() == 1 || unit(rng) < 0.6) e.refs["item"].push_back(item);
      }
      events.push_back(std::move(e));
    }
  }
  return EventLog(std::move(events), std::move(objects), {"order", "item"});
}

}  // namespace hoegkit
