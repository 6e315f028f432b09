#include "trajkit/semantic.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <tuple>

#include "trajkit/error.hpp"
#include "trajkit/geo.hpp"

namespace trajkit {

void PolygonGeometry::validate() const {
  if (rings.empty()) throw ValidationError("polygon '" + name + "' has no rings");
  for (std::size_t r = 0; r < rings.size(); ++r) {
    std::set<std::pair<double, double>> distinct;
    for (const auto& v : rings[r]) {
      if (!(v.lat >= -90.0 && v.lat <= 90.0) || !(v.lon >= -180.0 && v.lon <= 180.0)) {
        throw ValidationError("polygon '" + name + "' ring " + std::to_string(r) + " has an out-of-range vertex");
      }
      distinct.insert({v.lon, v.lat});
    }
    if (distinct.size() < 3) {
      throw ValidationError("polygon '" + name + "' ring " + std::to_string(r) +
                            " has fewer than 3 distinct vertices");
    }
  }
}

void SemanticLayer::validate() const {
  std::set<std::string> names;
  for (const auto& p : polygons) {
    p.validate();
    if (!names.insert(p.name).second) throw ValidationError("duplicate polygon name '" + p.name + "'");
  }
  std::set<std::string> ids;
  for (const auto& p : pois) {
    if (!(p.lat >= -90.0 && p.lat <= 90.0) || !(p.lon >= -180.0 && p.lon <= 180.0)) {
      throw ValidationError("POI '" + p.poi_id + "' coordinates out of range");
    }
    if (!ids.insert(p.poi_id).second) throw ValidationError("duplicate poi_id '" + p.poi_id + "'");
  }
}

const PolygonGeometry& SemanticLayer::polygon(const std::string& name) const {
  for (const auto& p : polygons) {
    if (p.name == name) return p;
  }
  throw ConfigError("layer has no polygon named '" + name + "'");
}

namespace {

double cross(double ax, double ay, double bx, double by) { return ax * by - ay * bx; }

bool within_box(double x, double y, const LonLat& a, const LonLat& b) {
  return x >= std::min(a.lon, b.lon) && x <= std::max(a.lon, b.lon) && y >= std::min(a.lat, b.lat) &&
         y <= std::max(a.lat, b.lat);
}

bool on_segment(double x, double y, const LonLat& a, const LonLat& b) {
  return cross(b.lon - a.lon, b.lat - a.lat, x - a.lon, y - a.lat) == 0.0 && within_box(x, y, a, b);
}

}  // namespace

bool point_in_polygon(double lat, double lon, const PolygonGeometry& poly) {
  const double x = lon;
  const double y = lat;
  bool inside = false;
  for (const auto& ring : poly.rings) {
    const std::size_t n = ring.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
      const auto& a = ring[i];
      const auto& b = ring[j];
      if (on_segment(x, y, a, b)) return true;
      if ((a.lat > y) != (b.lat > y)) {
        const double x_cross = (b.lon - a.lon) * (y - a.lat) / (b.lat - a.lat) + a.lon;
        if (x < x_cross) inside = !inside;
      }
    }
  }
  return inside;
}

VisitResult visited_locations(const TrajectoryFrame& frame, const SemanticLayer& layer, const ExecConfig& cfg) {
  layer.validate();
  std::vector<std::string> columns;
  for (const auto& p : layer.polygons) columns.push_back(column_names::kInsidePrefix + p.name);

  auto op = [&](const TrajectorySegment& seg, SegmentContext&) {
    const auto lats = lats_of(seg.rows);
    const auto lons = lons_of(seg.rows);
    Table out = seg.rows;
    for (std::size_t p = 0; p < layer.polygons.size(); ++p) {
      std::vector<std::uint8_t> flags(lats.size());
      for (std::size_t i = 0; i < lats.size(); ++i) flags[i] = point_in_polygon(lats[i], lons[i], layer.polygons[p]);
      out.set_column({columns[p], ValueKind::Boolean, true}, Column::booleans(std::move(flags)));
    }
    return out;
  };
  TrajectoryFrame out;
  if (frame.empty()) {
    Table t = frame.table();
    for (const auto& c : columns) t.set_column({c, ValueKind::Boolean, true}, Column(ValueKind::Boolean, 0));
    out = assemble_trusted(std::move(t));
  } else {
    out = map_segments(frame, op, cfg);
  }

  std::vector<std::size_t> col_idx;
  for (const auto& c : columns) col_idx.push_back(*out.table().find(c));
  auto visits = reduce_segments<std::vector<VisitCount>>(
      out,
      [&](const TrajectorySegment& seg, SegmentContext&) {
        std::vector<VisitCount> counts;
        for (std::size_t p = 0; p < columns.size(); ++p) {
          const auto& flags = seg.rows.column(col_idx[p]).as_booleans();
          std::size_t runs = 0;
          for (std::size_t i = 0; i < flags.size(); ++i) {
            if (flags[i] && (i == 0 || !flags[i - 1])) ++runs;
          }
          counts.push_back({layer.polygons[p].name, runs});
        }
        return counts;
      },
      cfg);
  return {std::move(out), std::move(visits)};
}

std::vector<Keyed<bool>> trajectory_inside(const TrajectoryFrame& frame, const PolygonGeometry& poly,
                                           const ExecConfig& cfg) {
  poly.validate();
  return reduce_segments<bool>(
      frame,
      [&poly](const TrajectorySegment& seg, SegmentContext&) {
        const auto lats = lats_of(seg.rows);
        const auto lons = lons_of(seg.rows);
        for (std::size_t i = 0; i < lats.size(); ++i) {
          if (!point_in_polygon(lats[i], lons[i], poly)) return false;
        }
        return true;
      },
      cfg);
}

PoiIndex::PoiIndex(std::vector<PointOfInterest> pois, bool force_banded) : pois_(std::move(pois)) {
  if (pois_.empty()) throw ConfigError("POI set is empty");
  if (!force_banded && pois_.size() <= kPoiIndexThreshold) return;
  const auto bands = std::max<std::size_t>(1, static_cast<std::size_t>(std::sqrt(static_cast<double>(pois_.size()))));
  band_height_deg_ = 180.0 / static_cast<double>(bands);
  bands_.resize(bands);
  for (std::size_t i = 0; i < pois_.size(); ++i) bands_[band_of(pois_[i].lat)].push_back(i);
}

std::size_t PoiIndex::band_of(double lat) const {
  const auto b = static_cast<std::size_t>(std::max(0.0, (lat + 90.0) / band_height_deg_));
  return std::min(b, bands_.size() - 1);
}

void PoiIndex::consider(std::size_t idx, double lat, double lon, NearestPoi& best, bool& have) const {
  const auto& p = pois_[idx];
  const double d = geo::haversine_m(lat, lon, p.lat, p.lon);
  if (!have || d < best.distance_m || (d == best.distance_m && p.poi_id < pois_[best.index].poi_id)) {
    best = {idx, d};
    have = true;
  }
}

NearestPoi PoiIndex::nearest_brute_force(double lat, double lon) const {
  NearestPoi best;
  bool have = false;
  for (std::size_t i = 0; i < pois_.size(); ++i) consider(i, lat, lon, best, have);
  return best;
}

NearestPoi PoiIndex::nearest(double lat, double lon) const {
  if (bands_.empty()) return nearest_brute_force(lat, lon);
  NearestPoi best;
  bool have = false;
  const std::size_t home = band_of(lat);
  // Lower bound on the distance to any point of a band: meridional arc to its
  // nearest latitude, shrunk slightly so rounding never prunes a tie.
  auto lower_bound_m = [&](std::size_t band) {
    const double lo = -90.0 + band_height_deg_ * static_cast<double>(band);
    const double hi = lo + band_height_deg_;
    const double sep = lat < lo ? lo - lat : (lat > hi ? lat - hi : 0.0);
    return std::max(0.0, geo::kEarthRadiusM * geo::to_radians(sep) * (1.0 - 1e-9) - 1e-6);
  };
  for (std::size_t step = 0;; ++step) {
    bool any_band = false;
    for (int dir : {-1, 1}) {
      if (step == 0 && dir == 1) continue;
      const auto band = static_cast<std::ptrdiff_t>(home) + dir * static_cast<std::ptrdiff_t>(step);
      if (band < 0 || band >= static_cast<std::ptrdiff_t>(bands_.size())) continue;
      any_band = true;
      const auto b = static_cast<std::size_t>(band);
      if (have && lower_bound_m(b) > best.distance_m) continue;
      for (std::size_t idx : bands_[b]) consider(idx, lat, lon, best, have);
    }
    if (!any_band) break;
    // Bands further out are at least as far as the current ring.
    if (have) {
      const bool down_done = home < step || lower_bound_m(home - step) > best.distance_m;
      const bool up_done = home + step >= bands_.size() || lower_bound_m(home + step) > best.distance_m;
      if (down_done && up_done) break;
    }
  }
  return best;
}

TrajectoryFrame nearest_poi(const TrajectoryFrame& frame, const std::vector<PointOfInterest>& pois,
                            const ExecConfig& cfg) {
  const PoiIndex index(pois);
  if (frame.empty()) {
    Table t = frame.table();
    t.set_column({column_names::kNearestPoiId, ValueKind::String, true}, Column(ValueKind::String, 0));
    t.set_column({column_names::kNearestPoiDistance, ValueKind::Float, true}, Column(ValueKind::Float, 0));
    return assemble_trusted(std::move(t));
  }
  auto op = [&index](const TrajectorySegment& seg, SegmentContext&) {
    const auto lats = lats_of(seg.rows);
    const auto lons = lons_of(seg.rows);
    std::vector<std::string> ids(lats.size());
    std::vector<double> dist(lats.size());
    for (std::size_t i = 0; i < lats.size(); ++i) {
      const auto hit = index.nearest(lats[i], lons[i]);
      ids[i] = index.pois()[hit.index].poi_id;
      dist[i] = hit.distance_m;
    }
    Table out = seg.rows;
    out.set_column({column_names::kNearestPoiId, ValueKind::String, true}, Column::strings(std::move(ids)));
    out.set_column({column_names::kNearestPoiDistance, ValueKind::Float, true}, Column::floats(std::move(dist)));
    return out;
  };
  return map_segments(frame, op, cfg);
}

namespace {

struct PlanarSegment {
  LonLat a;
  LonLat b;
};

bool less_point(const LonLat& p, const LonLat& q) { return std::tie(p.lon, p.lat) < std::tie(q.lon, q.lat); }

PlanarSegment oriented(LonLat a, LonLat b) { return less_point(b, a) ? PlanarSegment{b, a} : PlanarSegment{a, b}; }

bool less_segment(const PlanarSegment& s, const PlanarSegment& t) {
  return std::tie(s.a.lon, s.a.lat, s.b.lon, s.b.lat) < std::tie(t.a.lon, t.a.lat, t.b.lon, t.b.lat);
}

// Appends the crossing points of two segments. Arguments are put in a
// canonical order first so the result does not depend on which trajectory
// is passed first.
void crossings_of(PlanarSegment s, PlanarSegment t, std::vector<LonLat>& out) {
  s = oriented(s.a, s.b);
  t = oriented(t.a, t.b);
  if (less_segment(t, s)) std::swap(s, t);
  const double rx = s.b.lon - s.a.lon, ry = s.b.lat - s.a.lat;
  const double sx = t.b.lon - t.a.lon, sy = t.b.lat - t.a.lat;
  const double qpx = t.a.lon - s.a.lon, qpy = t.a.lat - s.a.lat;
  const double denom = cross(rx, ry, sx, sy);
  if (denom == 0.0) {
    if (cross(qpx, qpy, rx, ry) != 0.0) return;  // parallel, disjoint lines
    // Collinear: the ends of the overlapping stretch, i.e. endpoints lying on the other segment.
    for (const auto& p : {s.a, s.b}) {
      if (within_box(p.lon, p.lat, t.a, t.b)) out.push_back(p);
    }
    for (const auto& p : {t.a, t.b}) {
      if (within_box(p.lon, p.lat, s.a, s.b)) out.push_back(p);
    }
    return;
  }
  const double u_s = cross(qpx, qpy, sx, sy) / denom;
  const double u_t = cross(qpx, qpy, rx, ry) / denom;
  if (u_s < 0.0 || u_s > 1.0 || u_t < 0.0 || u_t > 1.0) return;
  out.push_back({s.a.lon + u_s * rx, s.a.lat + u_s * ry});
}

std::vector<PlanarSegment> polyline(const TrajectoryFrame& frame, const SegmentBounds& b) {
  const auto lats = frame.lats();
  const auto lons = frame.lons();
  std::vector<PlanarSegment> out;
  for (std::size_t i = b.begin + 1; i < b.end; ++i) {
    out.push_back({{lons[i - 1], lats[i - 1]}, {lons[i], lats[i]}});
  }
  return out;
}

}  // namespace

IntersectResult trajectories_intersect_inside(const TrajectoryFrame& frame, const std::string& id_a,
                                              const std::string& id_b, const PolygonGeometry& poly) {
  poly.validate();
  const auto bounds = segment_bounds(frame);
  auto find = [&](const std::string& id) -> const SegmentBounds& {
    auto it = std::lower_bound(bounds.begin(), bounds.end(), id,
                               [](const SegmentBounds& b, const std::string& key) { return b.traj_id < key; });
    if (it == bounds.end() || it->traj_id != id) throw ConfigError("unknown trajectory id '" + id + "'");
    if (it->end - it->begin < 2) throw ConfigError("trajectory '" + id + "' needs at least 2 points");
    return *it;
  };
  const auto line_a = polyline(frame, find(id_a));
  const auto line_b = polyline(frame, find(id_b));
  std::vector<LonLat> points;
  for (const auto& s : line_a) {
    for (const auto& t : line_b) crossings_of(s, t, points);
  }
  IntersectResult result;
  for (const auto& p : points) {
    if (point_in_polygon(p.lat, p.lon, poly)) result.crossings.push_back(p);
  }
  std::sort(result.crossings.begin(), result.crossings.end(),
            [](const LonLat& p, const LonLat& q) { return std::tie(p.lat, p.lon) < std::tie(q.lat, q.lon); });
  result.crossings.erase(std::unique(result.crossings.begin(), result.crossings.end()), result.crossings.end());
  result.intersects = !result.crossings.empty();
  return result;
}

}  // namespace trajkit
