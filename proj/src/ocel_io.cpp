#include "hoegkit/ocel_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"

namespace hoegkit {
namespace {

using ojson = nlohmann::ordered_json;

const std::set<std::string> kTopLevelKeys = {"ocel:events", "ocel:objects", "ocel:global-log",
                                             "ocel:global-event", "ocel:global-object"};
const std::set<std::string> kEventKeys = {"ocel:activity", "ocel:timestamp", "ocel:omap",
                                          "ocel:vmap"};
const std::set<std::string> kObjectKeys = {"ocel:type", "ocel:ovmap"};

bool looks_like_datetime(const std::string& s) {
  // Date-only strings stay categorical; a time part is required.
  return s.size() > 10 && (s[10] == 'T' || s[10] == ' ') && parse_timestamp(s).has_value();
}

AttributeMap read_attributes(const ojson& map, const std::string& owner, ParseReport& report) {
  AttributeMap attrs;
  if (!map.is_object()) throw ParseError(owner + ": attribute map is not a JSON object");
  for (const auto& [name, value] : map.items()) {
    if (value.is_number()) {
      const double d = value.get<double>();
      if (!std::isfinite(d)) throw ParseError(owner + ": attribute '" + name + "' is not finite");
      attrs.emplace(name, d);
    } else if (value.is_boolean()) {
      report.warnings.push_back(owner + ": boolean attribute '" + name + "' read as 0/1");
      attrs.emplace(name, value.get<bool>() ? 1.0 : 0.0);
    } else if (value.is_string()) {
      auto s = value.get<std::string>();
      if (looks_like_datetime(s)) {
        attrs.emplace(name, *parse_timestamp(s));
      } else {
        attrs.emplace(name, std::move(s));
      }
    } else {
      report.warnings.push_back(owner + ": attribute '" + name + "' has unsupported JSON type, skipped");
    }
  }
  return attrs;
}

const ojson& require(const ojson& parent, const std::string& key, const std::string& owner) {
  auto it = parent.find(key);
  if (it == parent.end()) throw ParseError(owner + ": missing mandatory key '" + key + "'");
  return *it;
}

void warn_unknown_keys(const ojson& entry, const std::set<std::string>& known,
                       const std::string& owner, ParseReport& report) {
  for (const auto& [key, value] : entry.items()) {
    if (!known.count(key)) report.warnings.push_back(owner + ": unknown key '" + key + "' ignored");
  }
}

ojson attributes_to_json(const AttributeMap& attrs) {
  ojson out = ojson::object();
  for (const auto& [name, value] : attrs) {
    if (const auto* d = std::get_if<double>(&value)) {
      out[name] = *d;
    } else if (const auto* s = std::get_if<std::string>(&value)) {
      out[name] = *s;
    } else {
      out[name] = format_timestamp(std::get<Timestamp>(value));
    }
  }
  return out;
}

}  // namespace

ParsedLog parse_ocel(std::string_view json_text, const ParseOptions& options) {
  ojson doc;
  try {
    doc = ojson::parse(json_text.begin(), json_text.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("document: top level is not a JSON object");

  ParseReport report;
  const auto& jevents = require(doc, "ocel:events", "document");
  const auto& jobjects = require(doc, "ocel:objects", "document");
  const auto& jglobal = require(doc, "ocel:global-log", "document");
  warn_unknown_keys(doc, kTopLevelKeys, "document", report);
  if (!jevents.is_object()) throw ParseError("document: 'ocel:events' is not a JSON object");
  if (!jobjects.is_object()) throw ParseError("document: 'ocel:objects' is not a JSON object");

  std::vector<std::string> declared_types;
  if (jglobal.is_object()) {
    if (auto it = jglobal.find("ocel:object-types"); it != jglobal.end() && it->is_array()) {
      for (const auto& t : *it) {
        if (t.is_string()) declared_types.push_back(t.get<std::string>());
      }
    }
  }

  std::vector<ObjectInstance> objects;
  std::map<std::string, std::string> type_of;
  for (const auto& [id, entry] : jobjects.items()) {
    const std::string owner = "object '" + id + "'";
    if (!entry.is_object()) throw ParseError(owner + ": entry is not a JSON object");
    const auto& jtype = require(entry, "ocel:type", owner);
    if (!jtype.is_string()) throw ParseError(owner + ": 'ocel:type' is not a string");
    ObjectInstance o;
    o.id = id;
    o.type_name = jtype.get<std::string>();
    if (auto it = entry.find("ocel:ovmap"); it != entry.end()) {
      o.attrs = read_attributes(*it, owner, report);
    } else {
      throw ParseError(owner + ": missing mandatory key 'ocel:ovmap'");
    }
    warn_unknown_keys(entry, kObjectKeys, owner, report);
    type_of.emplace(o.id, o.type_name);
    objects.push_back(std::move(o));
  }

  std::vector<Event> events;
  for (const auto& [id, entry] : jevents.items()) {
    const std::string owner = "event '" + id + "'";
    if (!entry.is_object()) throw ParseError(owner + ": entry is not a JSON object");
    Event e;
    e.id = id;
    const auto& jact = require(entry, "ocel:activity", owner);
    if (!jact.is_string()) throw ParseError(owner + ": 'ocel:activity' is not a string");
    e.activity = jact.get<std::string>();

    const auto& jts = require(entry, "ocel:timestamp", owner);
    const auto ts = jts.is_string() ? parse_timestamp(jts.get<std::string>()) : std::nullopt;
    if (!ts) throw ParseError(owner + ": unparseable timestamp " + jts.dump());
    e.timestamp = *ts;

    const auto& jomap = require(entry, "ocel:omap", owner);
    if (!jomap.is_array()) throw ParseError(owner + ": 'ocel:omap' is not an array");
    for (const auto& jref : jomap) {
      if (!jref.is_string()) throw ParseError(owner + ": non-string object reference");
      const auto ref = jref.get<std::string>();
      auto it = type_of.find(ref);
      if (it == type_of.end()) {
        if (options.strict_references) {
          throw ParseError(owner + ": references undeclared object '" + ref + "'");
        }
        e.refs[""].push_back(ref);
      } else {
        e.refs[it->second].push_back(ref);
      }
    }
    e.attrs = read_attributes(require(entry, "ocel:vmap", owner), owner, report);
    warn_unknown_keys(entry, kEventKeys, owner, report);
    events.push_back(std::move(e));
  }
  if (events.empty()) report.warnings.push_back("empty log");

  ParsedLog out;
  try {
    out.log = EventLog(std::move(events), std::move(objects), std::move(declared_types));
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what());
  }
  report.events = out.log.num_events();
  report.objects = out.log.num_objects();
  report.types = out.log.object_types().size();
  out.report = std::move(report);
  return out;
}

ParsedLog read_ocel_file(const std::string& path, const ParseOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_ocel(buf.str(), options);
}

std::string serialize_ocel(const EventLog& log) {
  ojson doc = ojson::object();
  std::set<std::string> attribute_names;
  for (const auto& e : log.events()) {
    for (const auto& [name, v] : e.attrs) attribute_names.insert(name);
  }
  for (const auto& o : log.objects()) {
    for (const auto& [name, v] : o.attrs) attribute_names.insert(name);
  }
  doc["ocel:global-event"] = {{"ocel:activity", "__INVALID__"}};
  doc["ocel:global-object"] = {{"ocel:type", "__INVALID__"}};
  doc["ocel:global-log"] = {{"ocel:version", "1.0"},
                            {"ocel:ordering", "timestamp"},
                            {"ocel:attribute-names", attribute_names},
                            {"ocel:object-types", log.object_types()}};

  ojson events = ojson::object();
  for (const auto& e : log.events()) {
    ojson omap = ojson::array();
    for (const auto& [type, ids] : e.refs) {
      for (const auto& id : ids) omap.push_back(id);
    }
    events[e.id] = {{"ocel:activity", e.activity},
                    {"ocel:timestamp", format_timestamp(e.timestamp)},
                    {"ocel:omap", omap},
                    {"ocel:vmap", attributes_to_json(e.attrs)}};
  }
  doc["ocel:events"] = std::move(events);

  ojson objects = ojson::object();
  for (const auto& o : log.objects()) {
    objects[o.id] = {{"ocel:type", o.type_name}, {"ocel:ovmap", attributes_to_json(o.attrs)}};
  }
  doc["ocel:objects"] = std::move(objects);
  return doc.dump(2) + "\n";
}

EventLog build_otc_fixture() {
  struct Row {
    const char* id;
    const char* activity;
    unsigned month;
    unsigned day;
    const char* resource;
    std::vector<std::string> orders, items, packages, deliveries;
  };
  const std::vector<Row> rows = {
      {"e1", "Place order", 1, 30, "CloudServiceA", {"o1"}, {"i1", "i2"}, {}, {}},
      {"e2", "Pay order", 1, 30, "CloudServiceA", {"o1"}, {}, {}, {}},
      {"e3", "Place order", 1, 30, "CloudServiceB", {"o2"}, {"i3"}, {}, {}},
      {"e4", "Pay order", 1, 30, "CloudServiceB", {"o2"}, {}, {}, {}},
      {"e5", "Pick item", 1, 31, "WarehouseTeamX", {"o1"}, {"i1"}, {}, {}},
      {"e6", "Pick item", 1, 31, "WarehouseTeamX", {"o2"}, {"i3"}, {}, {}},
      {"e7", "Pack item", 1, 31, "WarehouseTeamX", {"o1"}, {"i1"}, {"p1"}, {}},
      {"e8", "Pack item", 1, 31, "WarehouseTeamX", {"o2"}, {"i3"}, {"p2"}, {}},
      {"e9", "Ship package", 2, 1, "WarehouseTeamY", {"o1", "o2"}, {"i1", "i3"}, {"p1", "p2"}, {"d1"}},
      {"e10", "Confirm delivery", 2, 2, "PostalServiceP", {"o1", "o2"}, {"i1", "i3"}, {"p1", "p2"}, {"d1"}},
  };

  std::vector<Event> events;
  for (const auto& r : rows) {
    Event e;
    e.id = r.id;
    e.activity = r.activity;
    e.timestamp = make_timestamp(2023, r.month, r.day, 12);
    e.attrs.emplace("Resource", std::string(r.resource));
    const auto put = [&e](const char* type, const std::vector<std::string>& ids) {
      if (!ids.empty()) e.refs[type] = ids;
    };
    put("order", r.orders);
    put("item", r.items);
    put("package", r.packages);
    put("delivery", r.deliveries);
    events.push_back(std::move(e));
  }

  std::vector<ObjectInstance> objects = {
      {"o1", "order", {{"Urgency", 1.0}}},
      {"o2", "order", {{"Urgency", 3.0}}},
      {"i1", "item", {{"Discount", 33.0}}},
      {"i2", "item", {{"Discount", 0.0}}},
      {"i3", "item", {{"Discount", 25.0}}},
      {"p1", "package", {{"Weight", 3.5}, {"Size", std::string("medium")}}},
      {"p2", "package", {{"Weight", 3.0}, {"Size", std::string("medium")}}},
      {"d1", "delivery", {{"Route length", std::string("short")}, {"No. stops", 5.0}}},
  };
  return EventLog(std::move(events), std::move(objects), {"order", "item", "package", "delivery"});
}

LogStats log_stats(const EventLog& log, const ExtractionStrategy& strategy) {
  LogStats s;
  s.events = log.num_events();
  std::set<std::string> event_attrs;
  std::size_t interactions = 0;
  for (std::size_t ei = 0; ei < log.num_events(); ++ei) {
    for (const auto& [name, v] : log.event(ei).attrs) event_attrs.insert(name);
    interactions += log.event_objects(ei).size();
  }
  s.event_attrs = event_attrs.size();

  std::set<std::string> ids;
  std::set<std::pair<std::string, std::string>> object_attrs;
  for (const auto& o : log.objects()) {
    ids.insert(o.id);
    for (const auto& [name, v] : o.attrs) object_attrs.emplace(o.type_name, name);
  }
  s.objects = ids.size();
  s.object_types = log.object_types().size();
  s.object_attrs = object_attrs.size();
  s.cases = log.num_events() == 0 ? 0 : count_cases(log, strategy);
  s.mean_object_interactions_per_event =
      s.events == 0 ? 0.0 : static_cast<double>(interactions) / static_cast<double>(s.events);
  return s;
}

std::string format_stats_row(const LogStats& stats) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), "events=%zu objects=%zu types=%zu cases=%zu mean_interactions=%.2f",
                stats.events, stats.objects, stats.object_types, stats.cases,
                stats.mean_object_interactions_per_event);
  return buf;
}

}  // namespace hoegkit
