#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "trajkit/frame.hpp"
#include "trajkit/parallel.hpp"

namespace trajkit {

namespace column_names {
inline constexpr const char* kDistancePrev = "distance_prev";
inline constexpr const char* kCumDistance = "cum_distance";
inline constexpr const char* kDistanceFromStart = "distance_from_start";
inline constexpr const char* kSpeed = "speed";
inline constexpr const char* kAcceleration = "acceleration";
inline constexpr const char* kJerk = "jerk";
inline constexpr const char* kBearing = "bearing";
inline constexpr const char* kBearingRate = "bearing_rate";
inline constexpr const char* kRateOfBearingRate = "rate_of_bearing_rate";
inline constexpr const char* kDistanceFromPoint = "distance_from_point";
}  // namespace column_names

/// Kinematic columns of one trajectory. Each vector has one entry per point;
/// nullopt marks undefined leading values.
struct KinematicColumns {
  std::vector<std::optional<double>> distance_prev;
  std::vector<std::optional<double>> cum_distance;
  std::vector<std::optional<double>> distance_from_start;
  std::vector<std::optional<double>> speed;
  std::vector<std::optional<double>> acceleration;
  std::vector<std::optional<double>> jerk;
  std::vector<std::optional<double>> bearing;
  std::vector<std::optional<double>> bearing_rate;
  std::vector<std::optional<double>> rate_of_bearing_rate;
};

// Backward differences over one trajectory's points (timestamps strictly increasing).
KinematicColumns compute_kinematics(std::span<const double> lats, std::span<const double> lons,
                                    std::span<const std::int64_t> times);

// Consecutive-point speeds in m/s; entry 0 is nullopt.
std::vector<std::optional<double>> consecutive_speeds(std::span<const double> lats, std::span<const double> lons,
                                                      std::span<const std::int64_t> times);

// Appends (or overwrites) the nine kinematic columns.
TrajectoryFrame create_kinematic_features(const TrajectoryFrame& frame, const ExecConfig& cfg);

// Per-row haversine distance to a reference point; throws ConfigError on out-of-range reference.
std::vector<double> distance_from_point(const TrajectoryFrame& frame, double ref_lat, double ref_lon,
                                        const ExecConfig& cfg);
TrajectoryFrame add_distance_from_point(const TrajectoryFrame& frame, double ref_lat, double ref_lon,
                                        const std::string& column_name, const ExecConfig& cfg);

struct KinematicStats {
  std::optional<double> min_speed;
  std::optional<double> mean_speed;
  std::optional<double> max_speed;
  double total_distance = 0.0;
  std::size_t points = 0;

  bool operator==(const KinematicStats&) const = default;
};

// Computed from coordinates, independent of any existing feature columns.
KinematicStats kinematic_stats_of(std::span<const double> lats, std::span<const double> lons,
                                  std::span<const std::int64_t> times);
std::vector<Keyed<KinematicStats>> kinematic_stats(const TrajectoryFrame& frame, const ExecConfig& cfg);

}  // namespace trajkit
