#include "trajkit/temporal.hpp"

#include <cstdio>

#include "trajkit/timeutil.hpp"

namespace trajkit {

std::string_view to_string(TimeBucket bucket) {
  switch (bucket) {
    case TimeBucket::LateNight: return "LateNight";
    case TimeBucket::EarlyMorning: return "EarlyMorning";
    case TimeBucket::Morning: return "Morning";
    case TimeBucket::Noon: return "Noon";
    case TimeBucket::Evening: return "Evening";
    case TimeBucket::Night: return "Night";
  }
  return "LateNight";
}

TimeBucket time_bucket_for_hour(int hour) { return static_cast<TimeBucket>(hour / 4); }

TemporalFeatureSet temporal_features_of(std::int64_t t) {
  const std::int64_t days = timeutil::floor_days(t);
  const auto secs = static_cast<int>(t - days * 86400);
  const auto date = timeutil::civil_from_days(days);
  TemporalFeatureSet f;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04lld-%02u-%02u", static_cast<long long>(date.year), date.month, date.day);
  f.date = buf;
  f.hour = secs / 3600;
  std::snprintf(buf, sizeof buf, "%02d:%02d:%02d", f.hour, (secs / 60) % 60, secs % 60);
  f.time = buf;
  // 1970-01-01 was a Thursday (3 with Monday = 0).
  f.day_of_week = static_cast<int>(((days % 7) + 7 + 3) % 7);
  f.is_weekend = f.day_of_week >= 5;
  f.bucket = time_bucket_for_hour(f.hour);
  return f;
}

TrajectoryFrame create_temporal_features(const TrajectoryFrame& frame, const ExecConfig& cfg) {
  auto op = [](const TrajectorySegment& seg, SegmentContext&) {
    const auto times = times_of(seg.rows);
    const std::size_t n = times.size();
    std::vector<std::string> date(n), time(n), bucket(n);
    std::vector<std::int64_t> dow(n), hour(n);
    std::vector<std::uint8_t> weekend(n);
    for (std::size_t i = 0; i < n; ++i) {
      auto f = temporal_features_of(times[i]);
      date[i] = std::move(f.date);
      time[i] = std::move(f.time);
      dow[i] = f.day_of_week;
      weekend[i] = f.is_weekend;
      hour[i] = f.hour;
      bucket[i] = std::string(to_string(f.bucket));
    }
    Table out = seg.rows;
    out.set_column({column_names::kDate, ValueKind::String, true}, Column::strings(std::move(date)));
    out.set_column({column_names::kTime, ValueKind::String, true}, Column::strings(std::move(time)));
    out.set_column({column_names::kDayOfWeek, ValueKind::Integer, true}, Column::integers(std::move(dow)));
    out.set_column({column_names::kIsWeekend, ValueKind::Boolean, true}, Column::booleans(std::move(weekend)));
    out.set_column({column_names::kHour, ValueKind::Integer, true}, Column::integers(std::move(hour)));
    out.set_column({column_names::kTimeBucket, ValueKind::String, true}, Column::strings(std::move(bucket)));
    return out;
  };
  if (frame.empty()) {
    Table t = frame.table();
    t.set_column({column_names::kDate, ValueKind::String, true}, Column(ValueKind::String, 0));
    t.set_column({column_names::kTime, ValueKind::String, true}, Column(ValueKind::String, 0));
    t.set_column({column_names::kDayOfWeek, ValueKind::Integer, true}, Column(ValueKind::Integer, 0));
    t.set_column({column_names::kIsWeekend, ValueKind::Boolean, true}, Column(ValueKind::Boolean, 0));
    t.set_column({column_names::kHour, ValueKind::Integer, true}, Column(ValueKind::Integer, 0));
    t.set_column({column_names::kTimeBucket, ValueKind::String, true}, Column(ValueKind::String, 0));
    return assemble_trusted(std::move(t));
  }
  return map_segments(frame, op, cfg);
}

std::vector<Keyed<DurationRow>> trajectory_duration(const TrajectoryFrame& frame, const ExecConfig& cfg) {
  return reduce_segments<DurationRow>(
      frame,
      [](const TrajectorySegment& seg, SegmentContext&) {
        const auto times = times_of(seg.rows);
        return DurationRow{times.front(), times.back(), times.back() - times.front()};
      },
      cfg);
}

}  // namespace trajkit
