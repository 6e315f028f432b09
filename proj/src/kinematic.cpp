#include "trajkit/kinematic.hpp"

#include <algorithm>

#include "trajkit/error.hpp"
#include "trajkit/geo.hpp"

namespace trajkit {

namespace {

using Series = std::vector<std::optional<double>>;

// Backward difference of `values` over the time steps; null if either operand is null.
Series backward_rate(const Series& values, std::span<const std::int64_t> times) {
  Series out(values.size());
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] && values[i - 1]) {
      out[i] = (*values[i] - *values[i - 1]) / static_cast<double>(times[i] - times[i - 1]);
    }
  }
  return out;
}

void set_series(Table& table, const char* name, const Series& values) {
  table.set_column({name, ValueKind::Float, true}, Column::floats(values));
}

}  // namespace

std::vector<std::optional<double>> consecutive_speeds(std::span<const double> lats, std::span<const double> lons,
                                                      std::span<const std::int64_t> times) {
  Series speed(lats.size());
  for (std::size_t i = 1; i < lats.size(); ++i) {
    const double d = geo::haversine_m(lats[i - 1], lons[i - 1], lats[i], lons[i]);
    speed[i] = d / static_cast<double>(times[i] - times[i - 1]);
  }
  return speed;
}

KinematicColumns compute_kinematics(std::span<const double> lats, std::span<const double> lons,
                                    std::span<const std::int64_t> times) {
  const std::size_t n = lats.size();
  KinematicColumns k;
  k.distance_prev.resize(n);
  k.cum_distance.resize(n);
  k.distance_from_start.resize(n);
  k.speed.resize(n);
  k.bearing.resize(n);
  k.bearing_rate.resize(n);
  if (n == 0) {
    k.acceleration.resize(0);
    k.jerk.resize(0);
    k.rate_of_bearing_rate.resize(0);
    return k;
  }
  k.cum_distance[0] = 0.0;
  k.distance_from_start[0] = 0.0;
  double total = 0.0;
  for (std::size_t i = 1; i < n; ++i) {
    const double d = geo::haversine_m(lats[i - 1], lons[i - 1], lats[i], lons[i]);
    const auto dt = static_cast<double>(times[i] - times[i - 1]);
    total += d;
    k.distance_prev[i] = d;
    k.cum_distance[i] = total;
    k.distance_from_start[i] = geo::haversine_m(lats[0], lons[0], lats[i], lons[i]);
    k.speed[i] = d / dt;
    k.bearing[i] = geo::initial_bearing_deg(lats[i - 1], lons[i - 1], lats[i], lons[i]);
    if (i >= 2 && k.bearing[i] && k.bearing[i - 1]) {
      k.bearing_rate[i] = geo::wrap_delta_deg(*k.bearing[i - 1], *k.bearing[i]) / dt;
    }
  }
  k.acceleration = backward_rate(k.speed, times);
  k.jerk = backward_rate(k.acceleration, times);
  k.rate_of_bearing_rate = backward_rate(k.bearing_rate, times);
  return k;
}

TrajectoryFrame create_kinematic_features(const TrajectoryFrame& frame, const ExecConfig& cfg) {
  auto op = [](const TrajectorySegment& seg, SegmentContext&) {
    const auto k = compute_kinematics(lats_of(seg.rows), lons_of(seg.rows), times_of(seg.rows));
    Table out = seg.rows;
    set_series(out, column_names::kDistancePrev, k.distance_prev);
    set_series(out, column_names::kCumDistance, k.cum_distance);
    set_series(out, column_names::kDistanceFromStart, k.distance_from_start);
    set_series(out, column_names::kSpeed, k.speed);
    set_series(out, column_names::kAcceleration, k.acceleration);
    set_series(out, column_names::kJerk, k.jerk);
    set_series(out, column_names::kBearing, k.bearing);
    set_series(out, column_names::kBearingRate, k.bearing_rate);
    set_series(out, column_names::kRateOfBearingRate, k.rate_of_bearing_rate);
    return out;
  };
  if (frame.empty()) {
    // Keep the output schema stable for empty inputs.
    Table t = frame.table();
    for (const char* name :
         {column_names::kDistancePrev, column_names::kCumDistance, column_names::kDistanceFromStart,
          column_names::kSpeed, column_names::kAcceleration, column_names::kJerk, column_names::kBearing,
          column_names::kBearingRate, column_names::kRateOfBearingRate}) {
      t.set_column({name, ValueKind::Float, true}, Column(ValueKind::Float, 0));
    }
    return assemble_trusted(std::move(t));
  }
  return map_segments(frame, op, cfg);
}

std::vector<double> distance_from_point(const TrajectoryFrame& frame, double ref_lat, double ref_lon,
                                        const ExecConfig& cfg) {
  if (!(ref_lat >= -90.0 && ref_lat <= 90.0) || !(ref_lon >= -180.0 && ref_lon <= 180.0)) {
    throw ConfigError("reference point out of range");
  }
  std::vector<double> out(frame.num_rows());
  const auto lats = frame.lats();
  const auto lons = frame.lons();
  const auto bounds = segment_bounds(frame);
  parallel_for(bounds.size(), cfg.worker_count, [&](std::size_t s) {
    for (std::size_t i = bounds[s].begin; i < bounds[s].end; ++i) {
      out[i] = geo::haversine_m(lats[i], lons[i], ref_lat, ref_lon);
    }
  });
  return out;
}

TrajectoryFrame add_distance_from_point(const TrajectoryFrame& frame, double ref_lat, double ref_lon,
                                        const std::string& column_name, const ExecConfig& cfg) {
  auto values = distance_from_point(frame, ref_lat, ref_lon, cfg);
  return frame.with_column({column_name, ValueKind::Float, true}, Column::floats(std::move(values)));
}

KinematicStats kinematic_stats_of(std::span<const double> lats, std::span<const double> lons,
                                  std::span<const std::int64_t> times) {
  KinematicStats s;
  s.points = lats.size();
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 1; i < lats.size(); ++i) {
    const double d = geo::haversine_m(lats[i - 1], lons[i - 1], lats[i], lons[i]);
    const double v = d / static_cast<double>(times[i] - times[i - 1]);
    s.total_distance += d;
    s.min_speed = s.min_speed ? std::min(*s.min_speed, v) : v;
    s.max_speed = s.max_speed ? std::max(*s.max_speed, v) : v;
    sum += v;
    ++count;
  }
  if (count > 0) s.mean_speed = sum / static_cast<double>(count);
  return s;
}

std::vector<Keyed<KinematicStats>> kinematic_stats(const TrajectoryFrame& frame, const ExecConfig& cfg) {
  return reduce_segments<KinematicStats>(
      frame,
      [](const TrajectorySegment& seg, SegmentContext&) {
        return kinematic_stats_of(lats_of(seg.rows), lons_of(seg.rows), times_of(seg.rows));
      },
      cfg);
}

}  // namespace trajkit
