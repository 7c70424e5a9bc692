#include "hoegkit/ocel.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace hoegkit {

EventLog::EventLog(std::vector<Event> events, std::vector<ObjectInstance> objects,
                   std::vector<std::string> declared_types)
    : events_(std::move(events)), objects_(std::move(objects)) {
  for (auto& e : events_) {
    std::size_t total_refs = 0;
    for (auto& [type, ids] : e.refs) {
      std::sort(ids.begin(), ids.end());
      ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
      total_refs += ids.size();
    }
    if (total_refs == 0) {
      throw std::invalid_argument("event '" + e.id + "' references no objects");
    }
  }
  std::stable_sort(events_.begin(), events_.end(), [](const Event& a, const Event& b) {
    if (a.timestamp != b.timestamp) return a.timestamp < b.timestamp;
    return a.id < b.id;
  });

  for (std::size_t i = 0; i < events_.size(); ++i) event_pos_.emplace(events_[i].id, i);
  for (std::size_t i = 0; i < objects_.size(); ++i) object_pos_.emplace(objects_[i].id, i);

  for (auto& t : declared_types) {
    if (std::find(object_types_.begin(), object_types_.end(), t) == object_types_.end()) {
      object_types_.push_back(std::move(t));
    }
  }
  for (const auto& o : objects_) {
    if (std::find(object_types_.begin(), object_types_.end(), o.type_name) == object_types_.end()) {
      object_types_.push_back(o.type_name);
    }
  }

  sigma_.assign(objects_.size(), {});
  event_objects_.assign(events_.size(), {});
  for (std::size_t ei = 0; ei < events_.size(); ++ei) {
    auto& objs = event_objects_[ei];
    for (const auto& [type, ids] : events_[ei].refs) {
      for (const auto& id : ids) {
        auto it = object_pos_.find(id);
        if (it != object_pos_.end()) objs.push_back(it->second);
      }
    }
    std::sort(objs.begin(), objs.end());
    objs.erase(std::unique(objs.begin(), objs.end()), objs.end());
    for (std::size_t oi : objs) sigma_[oi].push_back(ei);
  }
}

std::size_t EventLog::event_index(const std::string& id) const {
  auto it = event_pos_.find(id);
  if (it == event_pos_.end()) throw std::out_of_range("unknown event '" + id + "'");
  return it->second;
}

std::size_t EventLog::object_index(const std::string& id) const {
  auto it = object_pos_.find(id);
  if (it == object_pos_.end()) throw std::out_of_range("unknown object '" + id + "'");
  return it->second;
}

bool EventLog::has_object_type(const std::string& type) const {
  return std::find(object_types_.begin(), object_types_.end(), type) != object_types_.end();
}

std::vector<std::string> EventLog::sigma(const std::string& object_id) const {
  std::vector<std::string> out;
  for (std::size_t ei : sigma_.at(object_index(object_id))) out.push_back(events_[ei].id);
  return out;
}

std::vector<std::size_t> EventLog::objects_of_type(const std::string& type) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < objects_.size(); ++i) {
    if (objects_[i].type_name == type && object_pos_.at(objects_[i].id) == i) out.push_back(i);
  }
  return out;
}

std::set<std::string> objects_of_event(const EventLog& log, const std::string& event_id) {
  std::set<std::string> out;
  for (std::size_t oi : log.event_objects(log.event_index(event_id))) out.insert(log.object(oi).id);
  return out;
}

std::vector<std::pair<std::size_t, std::size_t>> directly_follows_indices(const EventLog& log) {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t oi = 0; oi < log.num_objects(); ++oi) {
    const auto& seq = log.sigma(oi);
    for (std::size_t i = 1; i < seq.size(); ++i) pairs.emplace_back(seq[i - 1], seq[i]);
  }
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
  return pairs;
}

std::set<std::pair<std::string, std::string>> directly_follows(const EventLog& log) {
  std::set<std::pair<std::string, std::string>> out;
  for (auto [a, b] : directly_follows_indices(log)) out.emplace(log.event(a).id, log.event(b).id);
  return out;
}

std::string to_string(const AttributeValue& value) {
  if (const auto* d = std::get_if<double>(&value)) {
    std::ostringstream os;
    os << *d;
    return os.str();
  }
  if (const auto* s = std::get_if<std::string>(&value)) return *s;
  return format_timestamp(std::get<Timestamp>(value));
}

namespace {

void check_attrs(const std::string& entity, const AttributeMap& attrs,
                 std::vector<Violation>& out) {
  for (const auto& [name, value] : attrs) {
    if (const auto* d = std::get_if<double>(&value); d && !std::isfinite(*d)) {
      out.push_back({entity, "attribute '" + name + "' is not finite"});
    }
  }
}

}  // namespace

std::vector<Violation> validate(const EventLog& log, const ValidateOptions& options) {
  std::vector<Violation> out;

  std::set<std::string> seen_events;
  for (std::size_t ei = 0; ei < log.num_events(); ++ei) {
    const Event& e = log.event(ei);
    if (e.id.empty()) out.push_back({"<event #" + std::to_string(ei) + ">", "empty event id"});
    if (!seen_events.insert(e.id).second) out.push_back({e.id, "duplicate event id"});
    check_attrs(e.id, e.attrs, out);
    for (const auto& [type, ids] : e.refs) {
      for (const auto& oid : ids) {
        if (!log.has_object(oid)) {
          out.push_back({e.id, "references unknown object '" + oid + "'"});
        } else if (log.object(log.object_index(oid)).type_name != type) {
          out.push_back({e.id, "references object '" + oid + "' under type '" + type +
                                   "' but it has type '" +
                                   log.object(log.object_index(oid)).type_name + "'"});
        }
      }
    }
    if (log.event_objects(ei).empty()) {
      out.push_back({e.id, "event references no known object"});
    }
  }

  std::set<std::string> seen_objects;
  // Per type: attribute name -> value kind index (0 number, 1 category, 2 timestamp).
  std::map<std::string, std::map<std::string, std::size_t>> schema;
  std::map<std::string, std::set<std::string>> mixed;
  for (const auto& o : log.objects()) {
    if (o.id.empty()) out.push_back({"<object>", "empty object id"});
    if (!seen_objects.insert(o.id).second) {
      out.push_back({o.id, "object declared more than once (type '" + o.type_name + "')"});
      continue;
    }
    if (o.type_name.empty()) out.push_back({o.id, "empty object type"});
    if (o.type_name == "event") out.push_back({o.id, "object type name 'event' is reserved"});
    check_attrs(o.id, o.attrs, out);
    auto& type_schema = schema[o.type_name];
    for (const auto& [name, value] : o.attrs) {
      auto [it, inserted] = type_schema.emplace(name, value.index());
      if (!inserted && it->second != value.index() && mixed[o.type_name].insert(name).second) {
        out.push_back({o.type_name, "attribute '" + name + "' mixes value kinds"});
      }
    }
  }

  std::set<std::string> reported;
  for (const auto& o : log.objects()) {
    if (!reported.insert(o.id).second) continue;
    for (const auto& [name, kind] : schema[o.type_name]) {
      if (o.attrs.count(name)) continue;
      if (options.zero_fill_numeric && kind == 0) continue;
      out.push_back({o.id, "missing attribute '" + name + "' required by type '" + o.type_name + "'"});
    }
  }
  return out;
}

}  // namespace hoegkit
