#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "hoegkit/extraction.hpp"
#include "hoegkit/ocel.hpp"

namespace hoegkit {

/// Raised for malformed or inconsistent OCEL documents; the message names the offending entity.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ParseReport {
  std::vector<std::string> warnings;
  std::size_t events = 0;
  std::size_t objects = 0;
  std::size_t types = 0;
};

struct ParseOptions {
  /// When false, references to undeclared objects are kept (under an empty type key)
  /// so that `validate()` can report them instead of failing the parse.
  bool strict_references = true;
};

struct ParsedLog {
  EventLog log;
  ParseReport report;
};

/// Reads a JSON-OCEL 1.0 document.
ParsedLog parse_ocel(std::string_view json_text, const ParseOptions& options = {});
ParsedLog read_ocel_file(const std::string& path, const ParseOptions& options = {});

/// Canonical JSON-OCEL 1.0 text: events in log order, objects in declaration order,
/// two-space indentation. Byte-identical for equal logs.
std::string serialize_ocel(const EventLog& log);

/// The ten-event order-to-cash running example (four object types, eight objects).
/// Every event happens at 12:00:00 UTC on its table date.
EventLog build_otc_fixture();

struct LogStats {
  std::size_t events = 0;
  std::size_t event_attrs = 0;
  std::size_t objects = 0;
  std::size_t object_types = 0;
  std::size_t object_attrs = 0;
  std::size_t cases = 0;
  double mean_object_interactions_per_event = 0.0;
};

LogStats log_stats(const EventLog& log, const ExtractionStrategy& strategy = ConnectedComponents{});

/// "events=10 objects=8 types=4 cases=1 mean_interactions=3.10"
std::string format_stats_row(const LogStats& stats);

}  // namespace hoegkit
