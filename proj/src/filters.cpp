#include "trajkit/filters.hpp"

#include <algorithm>
#include <cmath>

#include "trajkit/error.hpp"
#include "trajkit/geo.hpp"

namespace trajkit {

void HampelParams::validate() const {
  if (half_window < 1) throw ConfigError("hampel half window must be at least 1");
  if (!(n_sigmas > 0.0) || !std::isfinite(n_sigmas)) throw ConfigError("hampel n_sigmas must be positive");
  if (target_column.empty()) throw ConfigError("hampel target column is required");
}

namespace {

// Median of a non-empty buffer; reorders the buffer.
double median_inplace(std::vector<double>& buf) {
  const std::size_t mid = buf.size() / 2;
  std::nth_element(buf.begin(), buf.begin() + static_cast<std::ptrdiff_t>(mid), buf.end());
  const double hi = buf[mid];
  if (buf.size() % 2 == 1) return hi;
  const double lo = *std::max_element(buf.begin(), buf.begin() + static_cast<std::ptrdiff_t>(mid));
  return (lo + hi) / 2.0;
}

std::vector<Keyed<std::size_t>> removed_counts(const TrajectoryFrame& before, const TrajectoryFrame& after) {
  const auto in = segment_bounds(before);
  const auto out = segment_bounds(after);
  std::vector<Keyed<std::size_t>> removed;
  removed.reserve(in.size());
  std::size_t j = 0;
  for (const auto& b : in) {
    std::size_t kept = 0;
    if (j < out.size() && out[j].traj_id == b.traj_id) {
      kept = out[j].end - out[j].begin;
      ++j;
    }
    removed.push_back({b.traj_id, (b.end - b.begin) - kept});
  }
  return removed;
}

void require_numeric_column(const TrajectoryFrame& frame, const std::string& name) {
  const auto idx = frame.table().find(name);
  if (!idx) throw ConfigError("unknown column '" + name + "'");
  if (!frame.table().column(*idx).is_numeric()) {
    throw ConfigError("column '" + name + "' is " + std::string(to_string(frame.schema()[*idx].kind)) +
                      ", not numeric");
  }
}

}  // namespace

std::vector<bool> hampel_mask(std::span<const std::optional<double>> series, const HampelParams& params) {
  if (params.half_window < 1) throw ConfigError("hampel half window must be at least 1");
  if (!(params.n_sigmas > 0.0)) throw ConfigError("hampel n_sigmas must be positive");
  const std::size_t n = series.size();
  const std::size_t k = params.half_window;
  std::vector<bool> mask(n, false);
  std::vector<double> window;
  window.reserve(2 * k + 1);
  for (std::size_t i = 0; i < n; ++i) {
    if (!series[i]) continue;
    const std::size_t lo = i >= k ? i - k : 0;
    const std::size_t hi = std::min(n, i + k + 1);
    window.clear();
    for (std::size_t j = lo; j < hi; ++j) {
      if (series[j]) window.push_back(*series[j]);
    }
    const double med = median_inplace(window);
    for (double& v : window) v = std::abs(v - med);
    const double scale = kMadScale * median_inplace(window);
    mask[i] = std::abs(*series[i] - med) > params.n_sigmas * scale;
  }
  return mask;
}

std::vector<std::optional<double>> numeric_series(const Table& table, const std::string& column) {
  const auto idx = table.find(column);
  if (!idx) throw ConfigError("unknown column '" + column + "'");
  const Column& col = table.column(*idx);
  if (!col.is_numeric()) {
    throw ConfigError("column '" + column + "' is " + std::string(to_string(col.kind())) + ", not numeric");
  }
  std::vector<std::optional<double>> out(col.size());
  for (std::size_t i = 0; i < col.size(); ++i) out[i] = col.numeric(i);
  return out;
}

FilterResult filter_hampel(const TrajectoryFrame& frame, const HampelParams& params, const ExecConfig& cfg) {
  params.validate();
  require_numeric_column(frame, params.target_column);
  auto op = [&params](const TrajectorySegment& seg, SegmentContext&) {
    const auto series = numeric_series(seg.rows, params.target_column);
    const auto mask = hampel_mask(series, params);
    std::vector<std::size_t> keep;
    keep.reserve(mask.size());
    for (std::size_t i = 0; i < mask.size(); ++i) {
      if (!mask[i]) keep.push_back(i);
    }
    return keep.size() == mask.size() ? seg.rows : seg.rows.take(keep);
  };
  TrajectoryFrame out = map_segments(frame, op, cfg);
  auto removed = removed_counts(frame, out);
  return {std::move(out), std::move(removed)};
}

void SpeedBounds::validate() const {
  if (!min_speed && !max_speed) throw ConfigError("speed filter needs at least one bound");
  if (min_speed && (!std::isfinite(*min_speed) || *min_speed < 0.0)) {
    throw ConfigError("min_speed must be a finite value >= 0");
  }
  if (max_speed && std::isnan(*max_speed)) throw ConfigError("max_speed must be a number");
  if (min_speed && max_speed && *max_speed <= *min_speed) throw ConfigError("max_speed must exceed min_speed");
  if (max_speed && !min_speed && *max_speed <= 0.0) throw ConfigError("max_speed must exceed min_speed (0)");
}

TrajectoryFrame filter_by_speed(const TrajectoryFrame& frame, const SpeedBounds& bounds, const ExecConfig& cfg) {
  bounds.validate();
  auto op = [&bounds](const TrajectorySegment& seg, SegmentContext&) {
    const auto lats = lats_of(seg.rows);
    const auto lons = lons_of(seg.rows);
    const auto times = times_of(seg.rows);
    std::vector<std::size_t> keep;
    keep.reserve(lats.size());
    for (std::size_t i = 0; i < lats.size(); ++i) {
      if (!keep.empty()) {
        // Measured from the last retained point, so the output itself obeys the bounds.
        const std::size_t p = keep.back();
        const double v = geo::haversine_m(lats[p], lons[p], lats[i], lons[i]) / static_cast<double>(times[i] - times[p]);
        if (bounds.min_speed && v < *bounds.min_speed) continue;
        if (bounds.max_speed && v > *bounds.max_speed) continue;
      }
      keep.push_back(i);
    }
    return keep.size() == lats.size() ? seg.rows : seg.rows.take(keep);
  };
  return map_segments(frame, op, cfg);
}

TrajectoryFrame filter_by_time_range(const TrajectoryFrame& frame, std::int64_t start, std::int64_t end,
                                     const ExecConfig& cfg) {
  if (start > end) throw ConfigError("time filter start must not exceed end");
  auto op = [start, end](const TrajectorySegment& seg, SegmentContext&) {
    const auto times = times_of(seg.rows);
    // Times are sorted, so the retained rows form one contiguous run.
    const auto first = std::lower_bound(times.begin(), times.end(), start);
    const auto last = std::upper_bound(times.begin(), times.end(), end);
    const auto b = static_cast<std::size_t>(first - times.begin());
    const auto e = static_cast<std::size_t>(std::max(first, last) - times.begin());
    return seg.rows.slice(b, e);
  };
  return map_segments(frame, op, cfg);
}

std::vector<TrajectoryPoint> remove_duplicate_points(std::vector<TrajectoryPoint> points, std::size_t* removed) {
  std::vector<TrajectoryPoint> out;
  out.reserve(points.size());
  std::size_t dropped = 0;
  for (auto& p : points) {
    if (!out.empty()) {
      const auto& q = out.back();
      if (q.traj_id == p.traj_id && q.timestamp == p.timestamp && q.lat == p.lat && q.lon == p.lon) {
        ++dropped;
        continue;
      }
    }
    out.push_back(std::move(p));
  }
  if (removed) *removed = dropped;
  return out;
}

FilterResult remove_duplicates(const TrajectoryFrame& frame, const ExecConfig& cfg) {
  auto op = [](const TrajectorySegment& seg, SegmentContext&) {
    const auto lats = lats_of(seg.rows);
    const auto lons = lons_of(seg.rows);
    const auto times = times_of(seg.rows);
    std::vector<std::size_t> keep;
    keep.reserve(lats.size());
    for (std::size_t i = 0; i < lats.size(); ++i) {
      if (!keep.empty()) {
        const std::size_t p = keep.back();
        if (times[p] == times[i] && lats[p] == lats[i] && lons[p] == lons[i]) continue;
      }
      keep.push_back(i);
    }
    return keep.size() == lats.size() ? seg.rows : seg.rows.take(keep);
  };
  TrajectoryFrame out = map_segments(frame, op, cfg);
  auto removed = removed_counts(frame, out);
  return {std::move(out), std::move(removed)};
}

TrajectoryFrame drop_short_trajectories(const TrajectoryFrame& frame, std::size_t min_points, const ExecConfig& cfg) {
  if (min_points < 1) throw ConfigError("min_points must be at least 1");
  auto op = [min_points](const TrajectorySegment& seg, SegmentContext&) {
    return seg.rows.num_rows() >= min_points ? seg.rows : seg.rows.slice(0, 0);
  };
  return map_segments(frame, op, cfg);
}

}  // namespace trajkit
