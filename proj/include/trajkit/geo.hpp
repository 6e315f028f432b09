#pragma once

#include <optional>

namespace trajkit::geo {

// Mean Earth radius in meters.
inline constexpr double kEarthRadiusM = 6371000.0;
inline constexpr double kPi = 3.14159265358979323846;

constexpr double to_radians(double deg) noexcept { return deg * kPi / 180.0; }
constexpr double to_degrees(double rad) noexcept { return rad * 180.0 / kPi; }

/// Great-circle distance in meters on the mean-radius sphere.
double haversine_m(double lat1, double lon1, double lat2, double lon2) noexcept;

/// Initial great-circle heading from point 1 toward point 2, degrees
/// clockwise from north in [0, 360). nullopt when the points coincide.
std::optional<double> initial_bearing_deg(double lat1, double lon1, double lat2, double lon2) noexcept;

// Angular difference to - from wrapped into (-180, 180].
double wrap_delta_deg(double from, double to) noexcept;

struct PlanarPoint {
  double x = 0.0;  // meters east of the origin
  double y = 0.0;  // meters north of the origin
};

/// Equirectangular projection about a fixed origin:
/// x = R * dlon * cos(lat0), y = R * dlat (radians).
class LocalPlanarFrame {
 public:
  LocalPlanarFrame(double origin_lat, double origin_lon) noexcept;

  PlanarPoint to_plane(double lat, double lon) const noexcept;
  void to_geo(PlanarPoint p, double& lat, double& lon) const noexcept;

 private:
  double lat0_;
  double lon0_;
  double cos_lat0_;
};

double planar_distance(PlanarPoint a, PlanarPoint b) noexcept;

}  // namespace trajkit::geo
