#include "trajkit/interpolation.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "trajkit/error.hpp"
#include "trajkit/geo.hpp"
#include "trajkit/kinematic.hpp"

namespace trajkit {

std::vector<Gap> detect_gaps(std::span<const std::int64_t> times, std::int64_t interval) {
  if (interval <= 0) throw ConfigError("sampling_interval must be positive");
  std::vector<Gap> gaps;
  for (std::size_t i = 0; i + 1 < times.size(); ++i) {
    const std::int64_t t_a = times[i];
    const std::int64_t t_b = times[i + 1];
    if (t_b - t_a <= interval) continue;
    Gap g{i, t_a, t_b, {}};
    for (std::int64_t t = t_a + interval; t < t_b; t += interval) g.fill_times.push_back(t);
    gaps.push_back(std::move(g));
  }
  return gaps;
}

NaturalCubicSpline::NaturalCubicSpline(std::span<const double> x, std::span<const double> y)
    : x_(x.begin(), x.end()), y_(y.begin(), y.end()), m_(x.size(), 0.0) {
  if (x_.size() != y_.size()) throw ConfigError("spline: x and y lengths differ");
  if (x_.size() < 2) throw ConfigError("spline: at least two knots required");
  for (std::size_t i = 1; i < x_.size(); ++i) {
    if (!(x_[i] > x_[i - 1])) throw ConfigError("spline: knots must be strictly increasing");
  }
  const std::size_t n = x_.size();
  if (n < 3) return;
  // Thomas algorithm on the interior equations; M_0 = M_{n-1} = 0.
  const std::size_t m = n - 2;
  std::vector<double> diag(m), upper(m), rhs(m);
  for (std::size_t k = 0; k < m; ++k) {
    const std::size_t i = k + 1;
    const double h0 = x_[i] - x_[i - 1];
    const double h1 = x_[i + 1] - x_[i];
    diag[k] = 2.0 * (h0 + h1);
    upper[k] = h1;
    rhs[k] = 6.0 * ((y_[i + 1] - y_[i]) / h1 - (y_[i] - y_[i - 1]) / h0);
  }
  for (std::size_t k = 1; k < m; ++k) {
    const double lower = x_[k + 1] - x_[k];  // h_{i-1} for row i = k + 1
    const double w = lower / diag[k - 1];
    diag[k] -= w * upper[k - 1];
    rhs[k] -= w * rhs[k - 1];
  }
  m_[m] = rhs[m - 1] / diag[m - 1];
  for (std::size_t k = m - 1; k-- > 0;) m_[k + 1] = (rhs[k] - upper[k] * m_[k + 2]) / diag[k];
}

std::size_t NaturalCubicSpline::interval_of(double x) const {
  auto it = std::upper_bound(x_.begin(), x_.end(), x);
  std::size_t j = it == x_.begin() ? 0 : static_cast<std::size_t>(it - x_.begin()) - 1;
  return std::min(j, x_.size() - 2);
}

double NaturalCubicSpline::operator()(double x) const {
  const std::size_t j = interval_of(x);
  const double h = x_[j + 1] - x_[j];
  const double a = (x_[j + 1] - x) / h;
  const double b = (x - x_[j]) / h;
  return a * y_[j] + b * y_[j + 1] + ((a * a * a - a) * m_[j] + (b * b * b - b) * m_[j + 1]) * h * h / 6.0;
}

double NaturalCubicSpline::second_derivative(double x) const {
  const std::size_t j = interval_of(x);
  const double h = x_[j + 1] - x_[j];
  return ((x_[j + 1] - x) * m_[j] + (x - x_[j]) * m_[j + 1]) / h;
}

double kinematic_cubic(double p_a, double v_a, double p_b, double v_b, double T, double tau) noexcept {
  const double d = p_b - p_a - v_a * T;
  const double w = v_b - v_a;
  const double b = (3.0 * d - w * T) / (T * T);
  const double c = (w * T - 2.0 * d) / (T * T * T);
  return p_a + tau * (v_a + tau * (b + tau * c));
}

namespace {

struct Fill {
  double lat = 0.0;
  double lon = 0.0;
};

struct GapFill {
  std::vector<Fill> points;  // one per fill time
  bool fallback = false;
};

void set_flag_column(Table& out, const char* name, std::span<const std::size_t> plan,
                     const std::optional<Column>& existing, const std::vector<std::uint8_t>& inserted_values) {
  std::vector<std::uint8_t> flags(plan.size(), 0);
  std::size_t next_inserted = 0;
  for (std::size_t r = 0; r < plan.size(); ++r) {
    if (plan[r] == kNoRow) {
      flags[r] = inserted_values[next_inserted++];
    } else if (existing && !existing->is_null(r)) {
      flags[r] = existing->as_booleans()[r];
    }
  }
  out.set_column({name, ValueKind::Boolean, true}, Column::booleans(std::move(flags)));
}

// Interleaves the fills after each gap's left endpoint and rebuilds the core columns.
Table assemble(const TrajectorySegment& seg, std::span<const Gap> gaps, const std::vector<GapFill>& fills,
               bool with_fallback_column) {
  const Table& rows = seg.rows;
  const std::size_t n = rows.num_rows();
  std::vector<std::size_t> plan;
  std::vector<std::string> ids;
  std::vector<double> lats, lons;
  std::vector<std::int64_t> times;
  std::vector<std::uint8_t> fallback_flags;
  const auto src_lat = lats_of(rows);
  const auto src_lon = lons_of(rows);
  const auto src_t = times_of(rows);
  std::size_t total = n;
  for (const auto& g : gaps) total += g.fill_times.size();
  plan.reserve(total);
  lats.reserve(total);
  lons.reserve(total);
  times.reserve(total);
  std::size_t gi = 0;
  for (std::size_t i = 0; i < n; ++i) {
    plan.push_back(i);
    lats.push_back(src_lat[i]);
    lons.push_back(src_lon[i]);
    times.push_back(src_t[i]);
    if (gi < gaps.size() && gaps[gi].left == i) {
      const auto& g = gaps[gi];
      for (std::size_t k = 0; k < g.fill_times.size(); ++k) {
        plan.push_back(kNoRow);
        lats.push_back(fills[gi].points[k].lat);
        lons.push_back(fills[gi].points[k].lon);
        times.push_back(g.fill_times[k]);
        fallback_flags.push_back(fills[gi].fallback ? 1 : 0);
      }
      ++gi;
    }
  }
  ids.assign(plan.size(), seg.traj_id);

  Table out = rows.take(plan);
  const Schema& schema = rows.schema();
  out.set_column(schema[kIdColumn], Column::strings(std::move(ids)));
  out.set_column(schema[kLatColumn], Column::floats(std::move(lats)));
  out.set_column(schema[kLonColumn], Column::floats(std::move(lons)));
  out.set_column(schema[kTimeColumn], Column::integers(std::move(times), ValueKind::Timestamp));

  auto existing_flags = [&](const char* name) -> std::optional<Column> {
    const auto idx = out.find(name);
    if (!idx) return std::nullopt;
    if (out.column(*idx).kind() != ValueKind::Boolean) {
      throw ValidationError("existing column '" + std::string(name) + "' is not boolean");
    }
    return out.column(*idx);
  };
  const std::vector<std::uint8_t> all_true(fallback_flags.size(), 1);
  set_flag_column(out, column_names::kInterpolated, plan, existing_flags(column_names::kInterpolated), all_true);
  if (with_fallback_column) {
    set_flag_column(out, column_names::kFallback, plan, existing_flags(column_names::kFallback), fallback_flags);
  }
  return out;
}

GapFill linear_fill(const Gap& g, double lat_a, double lon_a, double lat_b, double lon_b) {
  GapFill f;
  const auto T = static_cast<double>(g.t_b - g.t_a);
  for (std::int64_t t : g.fill_times) {
    const double s = static_cast<double>(t - g.t_a) / T;
    f.points.push_back({lat_a + s * (lat_b - lat_a), lon_a + s * (lon_b - lon_a)});
  }
  return f;
}

double normalize_lon(double lon) {
  if (lon > 180.0) lon -= 360.0;
  if (lon < -180.0) lon += 360.0;
  return lon;
}

}  // namespace

Table interpolate_linear(const TrajectorySegment& seg, std::span<const Gap> gaps) {
  const auto lats = lats_of(seg.rows);
  const auto lons = lons_of(seg.rows);
  std::vector<GapFill> fills;
  for (const auto& g : gaps) fills.push_back(linear_fill(g, lats[g.left], lons[g.left], lats[g.left + 1], lons[g.left + 1]));
  return assemble(seg, gaps, fills, false);
}

Table interpolate_cubic(const TrajectorySegment& seg, std::span<const Gap> gaps) {
  const std::size_t n = seg.rows.num_rows();
  if (n < kCubicMinPoints) {
    throw ConfigError("cubic interpolation needs at least " + std::to_string(kCubicMinPoints) + " points, got " +
                      std::to_string(n));
  }
  const auto lats = lats_of(seg.rows);
  const auto lons = lons_of(seg.rows);
  const auto times = times_of(seg.rows);
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = static_cast<double>(times[i] - times[0]);
  const NaturalCubicSpline lat_spline(x, lats);
  const NaturalCubicSpline lon_spline(x, lons);
  std::vector<GapFill> fills;
  for (const auto& g : gaps) {
    GapFill f;
    for (std::int64_t t : g.fill_times) {
      const auto xt = static_cast<double>(t - times[0]);
      f.points.push_back({std::clamp(lat_spline(xt), -90.0, 90.0), normalize_lon(lon_spline(xt))});
    }
    fills.push_back(std::move(f));
  }
  return assemble(seg, gaps, fills, false);
}

Table interpolate_kinematic(const TrajectorySegment& seg, std::span<const Gap> gaps) {
  const auto lats = lats_of(seg.rows);
  const auto lons = lons_of(seg.rows);
  const auto times = times_of(seg.rows);
  const std::size_t n = lats.size();
  std::vector<GapFill> fills;
  for (const auto& g : gaps) {
    const std::size_t a = g.left;
    const std::size_t b = a + 1;
    const auto T = static_cast<double>(g.t_b - g.t_a);
    const double mean_lat = (lats[b] - lats[a]) / T;
    const double mean_lon = (lons[b] - lons[a]) / T;
    double va_lat = mean_lat, va_lon = mean_lon, vb_lat = mean_lat, vb_lon = mean_lon;
    if (a > 0) {
      const auto dt = static_cast<double>(times[a] - times[a - 1]);
      va_lat = (lats[a] - lats[a - 1]) / dt;
      va_lon = (lons[a] - lons[a - 1]) / dt;
    }
    if (b + 1 < n) {
      const auto dt = static_cast<double>(times[b + 1] - times[b]);
      vb_lat = (lats[b + 1] - lats[b]) / dt;
      vb_lon = (lons[b + 1] - lons[b]) / dt;
    }
    GapFill f;
    for (std::int64_t t : g.fill_times) {
      const auto tau = static_cast<double>(t - g.t_a);
      f.points.push_back({std::clamp(kinematic_cubic(lats[a], va_lat, lats[b], vb_lat, T, tau), -90.0, 90.0),
                          normalize_lon(kinematic_cubic(lons[a], va_lon, lons[b], vb_lon, T, tau))});
    }
    fills.push_back(std::move(f));
  }
  return assemble(seg, gaps, fills, false);
}

namespace {

double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

// Samples one gap; returns nullopt when rejection sampling is exhausted.
std::optional<std::vector<Fill>> sample_prism(const Gap& g, double lat_a, double lon_a, double lat_b, double lon_b,
                                              double vmax, std::mt19937_64& rng) {
  const geo::LocalPlanarFrame plane((lat_a + lat_b) / 2.0, (lon_a + lon_b) / 2.0);
  const geo::PlanarPoint end = plane.to_plane(lat_b, lon_b);
  geo::PlanarPoint prev = plane.to_plane(lat_a, lon_a);
  std::int64_t t_prev = g.t_a;
  std::vector<Fill> out;
  for (std::int64_t t : g.fill_times) {
    const double r1 = vmax * static_cast<double>(t - t_prev);
    const double r2 = vmax * static_cast<double>(g.t_b - t);
    const double x_lo = std::max(prev.x - r1, end.x - r2);
    const double x_hi = std::min(prev.x + r1, end.x + r2);
    const double y_lo = std::max(prev.y - r1, end.y - r2);
    const double y_hi = std::min(prev.y + r1, end.y + r2);
    if (x_lo > x_hi || y_lo > y_hi) return std::nullopt;
    bool found = false;
    geo::PlanarPoint p;
    for (int attempt = 0; attempt < kRandomWalkMaxAttempts; ++attempt) {
      p.x = x_lo + (x_hi - x_lo) * unit_uniform(rng);
      p.y = y_lo + (y_hi - y_lo) * unit_uniform(rng);
      if (geo::planar_distance(p, prev) <= r1 && geo::planar_distance(p, end) <= r2) {
        found = true;
        break;
      }
    }
    if (!found) return std::nullopt;
    Fill f;
    plane.to_geo(p, f.lat, f.lon);
    f.lat = std::clamp(f.lat, -90.0, 90.0);
    f.lon = normalize_lon(f.lon);
    out.push_back(f);
    prev = p;
    t_prev = t;
  }
  return out;
}

}  // namespace

Table interpolate_random_walk(const TrajectorySegment& seg, std::span<const Gap> gaps, std::optional<double> vmax,
                              std::uint64_t seed) {
  const auto lats = lats_of(seg.rows);
  const auto lons = lons_of(seg.rows);
  const auto times = times_of(seg.rows);
  if (vmax && !(*vmax > 0.0)) throw ConfigError("vmax must be positive");
  if (!gaps.empty() && !vmax) {
    double observed = 0.0;
    for (const auto& v : consecutive_speeds(lats, lons, times)) {
      if (v) observed = std::max(observed, *v);
    }
    if (!(observed > 0.0)) throw ConfigError("vmax cannot be derived: trajectory has no positive speed");
    vmax = kRandomWalkSpeedFactor * observed;
  }
  std::mt19937_64 rng(seed);
  std::vector<GapFill> fills;
  for (const auto& g : gaps) {
    const std::size_t a = g.left;
    const std::size_t b = a + 1;
    const double reach = *vmax * static_cast<double>(g.t_b - g.t_a);
    std::optional<std::vector<Fill>> sampled;
    if (reach >= geo::haversine_m(lats[a], lons[a], lats[b], lons[b])) {
      sampled = sample_prism(g, lats[a], lons[a], lats[b], lons[b], *vmax, rng);
    }
    if (sampled) {
      fills.push_back({std::move(*sampled), false});
    } else {
      GapFill f = linear_fill(g, lats[a], lons[a], lats[b], lons[b]);
      f.fallback = true;
      fills.push_back(std::move(f));
    }
  }
  return assemble(seg, gaps, fills, true);
}

std::string_view to_string(InterpMethod method) {
  switch (method) {
    case InterpMethod::Linear: return "linear";
    case InterpMethod::Cubic: return "cubic";
    case InterpMethod::Kinematic: return "kinematic";
    case InterpMethod::RandomWalk: return "random_walk";
  }
  return "linear";
}

InterpMethod parse_interp_method(std::string_view name) {
  for (auto m : {InterpMethod::Linear, InterpMethod::Cubic, InterpMethod::Kinematic, InterpMethod::RandomWalk}) {
    if (to_string(m) == name) return m;
  }
  throw ConfigError("unknown interpolation method '" + std::string(name) +
                    "'; valid methods: linear, cubic, kinematic, random_walk");
}

void InterpParams::validate() const {
  if (sampling_interval <= 0) throw ConfigError("sampling_interval must be positive");
  if (vmax && !(*vmax > 0.0)) throw ConfigError("vmax must be positive");
}

TrajectoryFrame interpolate(const TrajectoryFrame& frame, const InterpParams& params, const ExecConfig& cfg,
                            std::vector<SegmentWarning>* warnings) {
  params.validate();
  const bool with_fallback = params.method == InterpMethod::RandomWalk;
  if (frame.empty()) {
    Table t = frame.table();
    t.set_column({column_names::kInterpolated, ValueKind::Boolean, true}, Column(ValueKind::Boolean, 0));
    if (with_fallback) t.set_column({column_names::kFallback, ValueKind::Boolean, true}, Column(ValueKind::Boolean, 0));
    return assemble_trusted(std::move(t));
  }
  auto op = [&params, with_fallback](const TrajectorySegment& seg, SegmentContext& ctx) -> Table {
    const auto gaps = detect_gaps(times_of(seg.rows), params.sampling_interval);
    switch (params.method) {
      case InterpMethod::Linear: return interpolate_linear(seg, gaps);
      case InterpMethod::Kinematic: return interpolate_kinematic(seg, gaps);
      case InterpMethod::RandomWalk: return interpolate_random_walk(seg, gaps, params.vmax, ctx.stream_seed);
      case InterpMethod::Cubic:
        if (seg.rows.num_rows() < kCubicMinPoints && !params.strict) {
          if (!gaps.empty()) {
            ctx.warnings.push_back("cubic interpolation skipped: " + std::to_string(seg.rows.num_rows()) +
                                   " points (< " + std::to_string(kCubicMinPoints) + ")");
          }
          return assemble(seg, {}, {}, with_fallback);
        }
        return interpolate_cubic(seg, gaps);
    }
    return seg.rows;
  };
  return map_segments(frame, op, cfg, warnings);
}

}  // namespace trajkit
