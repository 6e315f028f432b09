#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "trajkit/frame.hpp"
#include "trajkit/parallel.hpp"

namespace trajkit {

// Gaussian consistency factor applied to the median absolute deviation.
inline constexpr double kMadScale = 1.4826;

struct HampelParams {
  std::size_t half_window = 3;  // window = 2 * half_window + 1
  double n_sigmas = 3.0;
  std::string target_column;

  void validate() const;
};

/// Hampel identifier over a series with nulls.
///
/// The window of index i covers positions [i - k, i + k] clipped to the
/// series; null entries are excluded from every window and are never
/// flagged. With m the window median and S = 1.4826 * median(|x_j - m|),
/// x_i is an outlier iff |x_i - m| > n_sigmas * S (strict).
std::vector<bool> hampel_mask(std::span<const std::optional<double>> series, const HampelParams& params);

// Extracts a numeric column (Integer or Float) as an optional series.
std::vector<std::optional<double>> numeric_series(const Table& table, const std::string& column);

struct FilterResult {
  TrajectoryFrame frame;
  std::vector<Keyed<std::size_t>> removed;  // one entry per input trajectory
};

FilterResult filter_hampel(const TrajectoryFrame& frame, const HampelParams& params, const ExecConfig& cfg);

struct SpeedBounds {
  std::optional<double> min_speed;  // m/s
  std::optional<double> max_speed;  // m/s

  void validate() const;
};

// Keeps the first point of each trajectory, then every point whose speed
// from the last kept point lies within the bounds. Speeds are always
// computed from coordinates, so every consecutive pair of the result obeys
// the bounds.
TrajectoryFrame filter_by_speed(const TrajectoryFrame& frame, const SpeedBounds& bounds, const ExecConfig& cfg);

// Keeps rows with start <= t <= end.
TrajectoryFrame filter_by_time_range(const TrajectoryFrame& frame, std::int64_t start, std::int64_t end,
                                     const ExecConfig& cfg);

/// Drops points identical in (lat, lon, timestamp) to the preceding point of
/// the same trajectory, keeping the first occurrence. Operates on canonically
/// sorted rows; on a validated frame there are no timestamp ties, so the
/// count is zero there and exact duplicates are collapsed by build_frame.
std::vector<TrajectoryPoint> remove_duplicate_points(std::vector<TrajectoryPoint> sorted_points,
                                                     std::size_t* removed = nullptr);
FilterResult remove_duplicates(const TrajectoryFrame& frame, const ExecConfig& cfg);

TrajectoryFrame drop_short_trajectories(const TrajectoryFrame& frame, std::size_t min_points, const ExecConfig& cfg);

}  // namespace trajkit
