#include "trajkit/geo.hpp"

#include <algorithm>
#include <cmath>

namespace trajkit::geo {

double haversine_m(double lat1, double lon1, double lat2, double lon2) noexcept {
  const double phi1 = to_radians(lat1);
  const double phi2 = to_radians(lat2);
  const double s_dphi = std::sin((phi2 - phi1) / 2.0);
  const double s_dlam = std::sin(to_radians(lon2 - lon1) / 2.0);
  const double a = s_dphi * s_dphi + std::cos(phi1) * std::cos(phi2) * s_dlam * s_dlam;
  return 2.0 * kEarthRadiusM * std::asin(std::clamp(std::sqrt(a), -1.0, 1.0));
}

std::optional<double> initial_bearing_deg(double lat1, double lon1, double lat2, double lon2) noexcept {
  if (lat1 == lat2 && lon1 == lon2) return std::nullopt;
  const double phi1 = to_radians(lat1);
  const double phi2 = to_radians(lat2);
  const double dlam = to_radians(lon2 - lon1);
  const double y = std::sin(dlam) * std::cos(phi2);
  const double x = std::cos(phi1) * std::sin(phi2) - std::sin(phi1) * std::cos(phi2) * std::cos(dlam);
  double deg = to_degrees(std::atan2(y, x));
  deg = std::fmod(deg + 360.0, 360.0);
  // fmod can return exactly 360 for tiny negative inputs after rounding.
  if (deg >= 360.0) deg -= 360.0;
  return deg;
}

double wrap_delta_deg(double from, double to) noexcept {
  double d = std::fmod(to - from, 360.0);
  if (d > 180.0) d -= 360.0;
  if (d <= -180.0) d += 360.0;
  return d;
}

LocalPlanarFrame::LocalPlanarFrame(double origin_lat, double origin_lon) noexcept
    : lat0_(origin_lat), lon0_(origin_lon), cos_lat0_(std::cos(to_radians(origin_lat))) {}

PlanarPoint LocalPlanarFrame::to_plane(double lat, double lon) const noexcept {
  return {kEarthRadiusM * to_radians(lon - lon0_) * cos_lat0_, kEarthRadiusM * to_radians(lat - lat0_)};
}

void LocalPlanarFrame::to_geo(PlanarPoint p, double& lat, double& lon) const noexcept {
  lat = lat0_ + to_degrees(p.y / kEarthRadiusM);
  lon = lon0_ + to_degrees(p.x / (kEarthRadiusM * cos_lat0_));
}

double planar_distance(PlanarPoint a, PlanarPoint b) noexcept { return std::hypot(a.x - b.x, a.y - b.y); }

}  // namespace trajkit::geo
