#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "trajkit/frame.hpp"
#include "trajkit/parallel.hpp"

namespace trajkit {

namespace column_names {
inline constexpr const char* kDate = "date";
inline constexpr const char* kTime = "time_of_day";
inline constexpr const char* kDayOfWeek = "day_of_week";
inline constexpr const char* kIsWeekend = "is_weekend";
inline constexpr const char* kHour = "hour";
inline constexpr const char* kTimeBucket = "time_bucket";
}  // namespace column_names

// Six four-hour buckets covering the UTC day, half-open on the right.
enum class TimeBucket { LateNight, EarlyMorning, Morning, Noon, Evening, Night };

std::string_view to_string(TimeBucket bucket);
TimeBucket time_bucket_for_hour(int hour);

struct TemporalFeatureSet {
  std::string date;  // YYYY-MM-DD
  std::string time;  // HH:MM:SS
  int day_of_week = 0;  // 0 = Monday ... 6 = Sunday
  bool is_weekend = false;
  int hour = 0;
  TimeBucket bucket = TimeBucket::LateNight;
};

// UTC calendar decomposition of an epoch timestamp.
TemporalFeatureSet temporal_features_of(std::int64_t epoch_seconds);

TrajectoryFrame create_temporal_features(const TrajectoryFrame& frame, const ExecConfig& cfg);

struct DurationRow {
  std::int64_t start_time = 0;
  std::int64_t end_time = 0;
  std::int64_t duration = 0;

  bool operator==(const DurationRow&) const = default;
};

std::vector<Keyed<DurationRow>> trajectory_duration(const TrajectoryFrame& frame, const ExecConfig& cfg);

}  // namespace trajkit
