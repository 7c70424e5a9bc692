#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <string_view>

namespace hoegkit {

/// UTC instant with millisecond precision.
using Timestamp = std::chrono::sys_time<std::chrono::milliseconds>;

/// Parses an ISO-8601 date or date-time.
///
/// Accepted shapes: `YYYY-MM-DD`, `YYYY-MM-DD[T ]HH:MM[:SS[.fraction]]` with an
/// optional `Z`, `±HH:MM` or `±HHMM` suffix. A missing offset means UTC.
/// Fractions finer than a millisecond are truncated.
std::optional<Timestamp> parse_timestamp(std::string_view text);

/// Formats as `YYYY-MM-DDTHH:MM:SS.mmm+00:00`.
std::string format_timestamp(Timestamp ts);

/// Signed difference `later - earlier` in seconds.
inline double seconds_between(Timestamp earlier, Timestamp later) {
  return static_cast<double>((later - earlier).count()) / 1000.0;
}

Timestamp make_timestamp(int year, unsigned month, unsigned day, int hour = 0, int minute = 0,
                         int second = 0, int millisecond = 0);

}  // namespace hoegkit
