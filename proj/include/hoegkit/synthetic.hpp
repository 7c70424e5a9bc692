#pragma once

#include <cstddef>
#include <cstdint>

#include "hoegkit/ocel.hpp"

namespace hoegkit {

/// Generator for logs of independent executions with a fixed total duration, so the
/// remaining time of every event equals `duration_seconds - elapsed`.
///
/// Each execution owns one "order" object (numeric Priority, categorical Channel) and
/// one or two "item" objects (numeric Price); every event references the order and a
/// random non-empty subset of the items.
struct SyntheticOptions {
  std::size_t executions = 200;
  std::size_t min_events = 3;
  std::size_t max_events = 8;
  double duration_seconds = 5.0 * 86400.0;
  std::uint64_t seed = 1;
};

EventLog make_synthetic_log(const SyntheticOptions& options);

}  // namespace hoegkit
