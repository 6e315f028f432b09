#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace trajkit::timeutil {

struct CivilDate {
  std::int64_t year = 1970;
  unsigned month = 1;  // 1..12
  unsigned day = 1;    // 1..31
};

// Proleptic Gregorian calendar <-> days since 1970-01-01.
std::int64_t days_from_civil(std::int64_t year, unsigned month, unsigned day) noexcept;
CivilDate civil_from_days(std::int64_t days) noexcept;

// Floor division of epoch seconds into whole days.
std::int64_t floor_days(std::int64_t epoch_seconds) noexcept;

enum class TimestampFormat { Epoch, Iso8601 };

// Classifies a non-empty timestamp literal by its shape, not its validity.
TimestampFormat detect_format(std::string_view text) noexcept;

// "YYYY-MM-DDTHH:MM:SS" with an optional trailing "Z", interpreted as UTC.
std::optional<std::int64_t> parse_iso8601(std::string_view text) noexcept;
// Optional sign followed by decimal digits.
std::optional<std::int64_t> parse_epoch(std::string_view text) noexcept;
std::optional<std::int64_t> parse_timestamp(std::string_view text, TimestampFormat format) noexcept;

// "YYYY-MM-DDTHH:MM:SSZ".
std::string format_iso8601(std::int64_t epoch_seconds);

}  // namespace trajkit::timeutil
