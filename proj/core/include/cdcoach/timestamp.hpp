#pragma once

#include <chrono>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

namespace cdcoach {

using Timestamp = std::chrono::sys_time<std::chrono::milliseconds>;
using Clock = std::function<Timestamp()>;

Timestamp nowUtc();

/// Formats as `YYYY-MM-DDTHH:MM:SS.mmmZ`.
std::string formatTimestamp(Timestamp ts);

/// Accepts the format produced by formatTimestamp; the fractional part may
/// have 0-3 digits.
std::optional<Timestamp> parseTimestamp(std::string_view text);

}  // namespace cdcoach
