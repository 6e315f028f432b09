#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "trajkit/frame.hpp"
#include "trajkit/parallel.hpp"

namespace trajkit {

namespace column_names {
inline constexpr const char* kNearestPoiId = "nearest_poi_id";
inline constexpr const char* kNearestPoiDistance = "nearest_poi_distance";
inline constexpr const char* kInsidePrefix = "inside_";
}  // namespace column_names

struct LonLat {
  double lon = 0.0;
  double lat = 0.0;

  bool operator==(const LonLat&) const = default;
};

/// Polygon with holes in lon/lat degrees; ring 0 is the exterior. Rings are
/// implicitly closed (the first vertex is not repeated).
struct PolygonGeometry {
  std::string name;
  std::vector<std::vector<LonLat>> rings;

  // Throws ValidationError for rings with fewer than three distinct vertices.
  void validate() const;
};

struct PointOfInterest {
  std::string poi_id;
  std::string name;
  double lat = 0.0;
  double lon = 0.0;
};

struct SemanticLayer {
  std::vector<PolygonGeometry> polygons;
  std::vector<PointOfInterest> pois;

  // Ring validity, coordinate bounds, and uniqueness of polygon names and POI ids.
  void validate() const;
  const PolygonGeometry& polygon(const std::string& name) const;
};

/// Even-odd ray casting over all rings, lon/lat treated as planar. Points on
/// any ring edge or vertex count as inside.
bool point_in_polygon(double lat, double lon, const PolygonGeometry& poly);

struct VisitCount {
  std::string polygon;
  std::size_t entries = 0;  // maximal runs of inside points
};

struct VisitResult {
  TrajectoryFrame frame;  // with one inside_<name> column per polygon
  std::vector<Keyed<std::vector<VisitCount>>> visits;
};

VisitResult visited_locations(const TrajectoryFrame& frame, const SemanticLayer& layer, const ExecConfig& cfg);

// True iff every point of the trajectory is inside the polygon.
std::vector<Keyed<bool>> trajectory_inside(const TrajectoryFrame& frame, const PolygonGeometry& poly,
                                           const ExecConfig& cfg);

struct NearestPoi {
  std::size_t index = 0;  // into the POI list
  double distance_m = 0.0;
};

/// Nearest POI by haversine distance, ties broken by the smallest poi_id.
///
/// Small sets are scanned exhaustively; above kPoiIndexThreshold POIs are
/// bucketed into uniform latitude bands and scanned outward from the query
/// band until the band's latitude separation exceeds the best distance.
/// Both paths return identical results.
class PoiIndex {
 public:
  static constexpr std::size_t kPoiIndexThreshold = 10000;

  // Throws ConfigError for an empty set.
  explicit PoiIndex(std::vector<PointOfInterest> pois, bool force_banded = false);

  NearestPoi nearest(double lat, double lon) const;
  NearestPoi nearest_brute_force(double lat, double lon) const;
  const std::vector<PointOfInterest>& pois() const noexcept { return pois_; }
  bool banded() const noexcept { return !bands_.empty(); }

 private:
  std::size_t band_of(double lat) const;
  void consider(std::size_t idx, double lat, double lon, NearestPoi& best, bool& have) const;

  std::vector<PointOfInterest> pois_;
  double band_height_deg_ = 0.0;
  std::vector<std::vector<std::size_t>> bands_;
};

// Adds nearest_poi_id and nearest_poi_distance (meters).
TrajectoryFrame nearest_poi(const TrajectoryFrame& frame, const std::vector<PointOfInterest>& pois,
                            const ExecConfig& cfg);

struct IntersectResult {
  bool intersects = false;
  std::vector<LonLat> crossings;  // inside the polygon, sorted by (lat, lon)
};

/// Planar crossings between the two polylines that fall inside `poly`.
/// Collinear overlaps contribute only the two ends of the shared stretch.
IntersectResult trajectories_intersect_inside(const TrajectoryFrame& frame, const std::string& id_a,
                                              const std::string& id_b, const PolygonGeometry& poly);

}  // namespace trajkit
