#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

#include "hoegkit/time.hpp"

namespace hoegkit {

/// An attribute value: a finite number, a category label, or a timestamp.
using AttributeValue = std::variant<double, std::string, Timestamp>;
using AttributeMap = std::map<std::string, AttributeValue>;

inline bool is_number(const AttributeValue& v) { return std::holds_alternative<double>(v); }
inline bool is_category(const AttributeValue& v) { return std::holds_alternative<std::string>(v); }

struct Event {
  std::string id;
  std::string activity;
  Timestamp timestamp{};
  AttributeMap attrs;
  /// Object references keyed by object type; each id list is kept sorted and unique.
  std::map<std::string, std::vector<std::string>> refs;

  bool operator==(const Event&) const = default;
};

struct ObjectInstance {
  std::string id;
  std::string type_name;
  AttributeMap attrs;

  bool operator==(const ObjectInstance&) const = default;
};

/// Immutable object-centric event log.
///
/// Events are stored in the total order (timestamp, id). Each object maps to the
/// ordered sequence of events that reference it. Objects keep their declaration
/// order; object types are ordered by declaration (explicit list first, then first
/// appearance among the objects).
///
/// Construction only rejects events without any object reference. Every other
/// integrity rule (dangling references, duplicate ids, schema gaps) is reported by
/// `validate()` so that broken input can be inspected.
class EventLog {
 public:
  EventLog() = default;
  EventLog(std::vector<Event> events, std::vector<ObjectInstance> objects,
           std::vector<std::string> declared_types = {});

  std::size_t num_events() const { return events_.size(); }
  std::size_t num_objects() const { return objects_.size(); }

  const std::vector<Event>& events() const { return events_; }
  const Event& event(std::size_t index) const { return events_.at(index); }
  const std::vector<ObjectInstance>& objects() const { return objects_; }
  const ObjectInstance& object(std::size_t index) const { return objects_.at(index); }
  const std::vector<std::string>& object_types() const { return object_types_; }

  /// Position of the event in log order; throws std::out_of_range for unknown ids.
  std::size_t event_index(const std::string& id) const;
  /// Position of the object (first declaration); throws std::out_of_range for unknown ids.
  std::size_t object_index(const std::string& id) const;
  bool has_event(const std::string& id) const { return event_pos_.count(id) != 0; }
  bool has_object(const std::string& id) const { return object_pos_.count(id) != 0; }
  bool has_object_type(const std::string& type) const;

  /// sigma(o) as log positions.
  const std::vector<std::size_t>& sigma(std::size_t object) const { return sigma_.at(object); }
  /// sigma(o) as event ids.
  std::vector<std::string> sigma(const std::string& object_id) const;

  /// Known objects referenced by an event, as object positions in ascending order.
  const std::vector<std::size_t>& event_objects(std::size_t event) const {
    return event_objects_.at(event);
  }

  /// Objects of one type, in declaration order.
  std::vector<std::size_t> objects_of_type(const std::string& type) const;

  bool operator==(const EventLog& other) const {
    return events_ == other.events_ && objects_ == other.objects_ &&
           object_types_ == other.object_types_;
  }

 private:
  std::vector<Event> events_;
  std::vector<ObjectInstance> objects_;
  std::vector<std::string> object_types_;
  std::unordered_map<std::string, std::size_t> event_pos_;
  std::unordered_map<std::string, std::size_t> object_pos_;
  std::vector<std::vector<std::size_t>> sigma_;
  std::vector<std::vector<std::size_t>> event_objects_;
};

/// obj(e): ids of every object whose event sequence contains `event_id`.
std::set<std::string> objects_of_event(const EventLog& log, const std::string& event_id);

/// conn_L as pairs of log positions, deduplicated and sorted.
std::vector<std::pair<std::size_t, std::size_t>> directly_follows_indices(const EventLog& log);

/// conn_L as pairs of event ids.
std::set<std::pair<std::string, std::string>> directly_follows(const EventLog& log);

struct Violation {
  std::string entity;
  std::string rule;

  bool operator==(const Violation&) const = default;
};

struct ValidateOptions {
  /// Tolerate missing numeric object attributes (they are encoded as zero).
  bool zero_fill_numeric = false;
};

/// Checks every integrity rule of the log model. Empty result means valid.
std::vector<Violation> validate(const EventLog& log, const ValidateOptions& options = {});

std::string to_string(const AttributeValue& value);

}  // namespace hoegkit
