#include "trajkit/frame.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <numeric>
#include <set>

#include "trajkit/error.hpp"
#include "trajkit/timeutil.hpp"

namespace trajkit {

std::string_view to_string(ValueKind kind) {
  switch (kind) {
    case ValueKind::String: return "string";
    case ValueKind::Integer: return "integer";
    case ValueKind::Float: return "float";
    case ValueKind::Timestamp: return "timestamp";
    case ValueKind::Boolean: return "boolean";
  }
  return "unknown";
}

namespace {

Column::Storage make_storage(ValueKind kind, std::size_t rows) {
  switch (kind) {
    case ValueKind::String: return std::vector<std::string>(rows);
    case ValueKind::Integer:
    case ValueKind::Timestamp: return std::vector<std::int64_t>(rows, 0);
    case ValueKind::Float: return std::vector<double>(rows, 0.0);
    case ValueKind::Boolean: return std::vector<std::uint8_t>(rows, 0);
  }
  return std::vector<std::string>(rows);
}

std::size_t storage_index(ValueKind kind) {
  switch (kind) {
    case ValueKind::String: return 0;
    case ValueKind::Integer:
    case ValueKind::Timestamp: return 1;
    case ValueKind::Float: return 2;
    case ValueKind::Boolean: return 3;
  }
  return 0;
}

template <class T>
T default_value() {
  return T{};
}

}  // namespace

Column::Column(ValueKind kind, std::size_t rows)
    : kind_(kind), values_(make_storage(kind, rows)), valid_(rows, 0) {}

Column::Column(ValueKind kind, Storage values, std::vector<std::uint8_t> valid)
    : kind_(kind), values_(std::move(values)), valid_(std::move(valid)) {
  if (values_.index() != storage_index(kind_)) {
    throw Error("column storage does not match kind " + std::string(to_string(kind_)));
  }
  std::visit(
      [this](auto& vec) {
        using T = typename std::decay_t<decltype(vec)>::value_type;
        if (vec.size() != valid_.size()) throw Error("column validity length mismatch");
        for (std::size_t i = 0; i < vec.size(); ++i) {
          if (valid_[i] == 0) vec[i] = default_value<T>();
        }
      },
      values_);
}

Column Column::strings(std::vector<std::string> values) {
  std::vector<std::uint8_t> valid(values.size(), 1);
  return Column(ValueKind::String, std::move(values), std::move(valid));
}

Column Column::integers(std::vector<std::int64_t> values, ValueKind kind) {
  std::vector<std::uint8_t> valid(values.size(), 1);
  return Column(kind, std::move(values), std::move(valid));
}

Column Column::floats(std::vector<double> values) {
  std::vector<std::uint8_t> valid(values.size(), 1);
  return Column(ValueKind::Float, std::move(values), std::move(valid));
}

Column Column::floats(std::vector<double> values, std::vector<std::uint8_t> valid) {
  return Column(ValueKind::Float, std::move(values), std::move(valid));
}

Column Column::floats(const std::vector<std::optional<double>>& values) {
  std::vector<double> v(values.size(), 0.0);
  std::vector<std::uint8_t> valid(values.size(), 0);
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i]) {
      v[i] = *values[i];
      valid[i] = 1;
    }
  }
  return Column(ValueKind::Float, std::move(v), std::move(valid));
}

Column Column::booleans(std::vector<std::uint8_t> values) {
  for (auto& b : values) b = b ? 1 : 0;
  std::vector<std::uint8_t> valid(values.size(), 1);
  return Column(ValueKind::Boolean, std::move(values), std::move(valid));
}

bool Column::has_nulls() const {
  return std::find(valid_.begin(), valid_.end(), std::uint8_t{0}) != valid_.end();
}

const std::vector<std::string>& Column::as_strings() const {
  if (auto* p = std::get_if<0>(&values_)) return *p;
  throw Error("column is " + std::string(to_string(kind_)) + ", not string");
}

const std::vector<std::int64_t>& Column::as_integers() const {
  if (auto* p = std::get_if<1>(&values_)) return *p;
  throw Error("column is " + std::string(to_string(kind_)) + ", not integer");
}

const std::vector<double>& Column::as_floats() const {
  if (auto* p = std::get_if<2>(&values_)) return *p;
  throw Error("column is " + std::string(to_string(kind_)) + ", not float");
}

const std::vector<std::uint8_t>& Column::as_booleans() const {
  if (auto* p = std::get_if<3>(&values_)) return *p;
  throw Error("column is " + std::string(to_string(kind_)) + ", not boolean");
}

std::optional<double> Column::numeric(std::size_t row) const {
  if (is_null(row)) return std::nullopt;
  if (kind_ == ValueKind::Float) return std::get<2>(values_)[row];
  if (kind_ == ValueKind::Integer) return static_cast<double>(std::get<1>(values_)[row]);
  throw Error("column is " + std::string(to_string(kind_)) + ", not numeric");
}

Column Column::take(std::span<const std::size_t> rows) const {
  Column out(kind_, rows.size());
  std::visit(
      [&](auto& dst) {
        const auto& src = std::get<std::decay_t<decltype(dst)>>(values_);
        for (std::size_t i = 0; i < rows.size(); ++i) {
          const std::size_t r = rows[i];
          if (r == kNoRow || valid_[r] == 0) continue;
          dst[i] = src[r];
          out.valid_[i] = 1;
        }
      },
      out.values_);
  return out;
}

Column Column::slice(std::size_t begin, std::size_t end) const {
  Column out(kind_, 0);
  std::visit(
      [&](auto& dst) {
        const auto& src = std::get<std::decay_t<decltype(dst)>>(values_);
        dst.assign(src.begin() + static_cast<std::ptrdiff_t>(begin), src.begin() + static_cast<std::ptrdiff_t>(end));
      },
      out.values_);
  out.valid_.assign(valid_.begin() + static_cast<std::ptrdiff_t>(begin),
                    valid_.begin() + static_cast<std::ptrdiff_t>(end));
  return out;
}

void Column::copy_into(Column& dst, std::size_t offset) const {
  if (dst.kind_ != kind_) throw Error("copy_into: column kind mismatch");
  if (offset + size() > dst.size()) throw Error("copy_into: destination too small");
  std::visit(
      [&](auto& out) {
        const auto& src = std::get<std::decay_t<decltype(out)>>(values_);
        std::copy(src.begin(), src.end(), out.begin() + static_cast<std::ptrdiff_t>(offset));
      },
      dst.values_);
  std::copy(valid_.begin(), valid_.end(), dst.valid_.begin() + static_cast<std::ptrdiff_t>(offset));
}

std::string Column::format(std::size_t row) const {
  if (is_null(row)) return {};
  switch (kind_) {
    case ValueKind::String: return std::get<0>(values_)[row];
    case ValueKind::Integer:
    case ValueKind::Timestamp: return std::to_string(std::get<1>(values_)[row]);
    case ValueKind::Boolean: return std::get<3>(values_)[row] ? "true" : "false";
    case ValueKind::Float: {
      char buf[32];
      const auto res = std::to_chars(buf, buf + sizeof buf, std::get<2>(values_)[row]);
      return std::string(buf, res.ptr);
    }
  }
  return {};
}

bool Column::operator==(const Column& other) const {
  if (kind_ != other.kind_ || valid_ != other.valid_) return false;
  if (kind_ != ValueKind::Float) return values_ == other.values_;
  const auto& a = std::get<2>(values_);
  const auto& b = std::get<2>(other.values_);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::bit_cast<std::uint64_t>(a[i]) != std::bit_cast<std::uint64_t>(b[i])) return false;
  }
  return true;
}

Table::Table(Schema schema, std::vector<Column> columns) : schema_(std::move(schema)), columns_(std::move(columns)) {
  if (schema_.size() != columns_.size()) throw Error("table schema and column count differ");
  rows_ = columns_.empty() ? 0 : columns_.front().size();
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    if (columns_[i].size() != rows_) throw Error("column '" + schema_[i].name + "' has a different length");
    if (columns_[i].kind() != schema_[i].kind) {
      throw Error("column '" + schema_[i].name + "' kind does not match its descriptor");
    }
  }
}

const Column& Table::column(std::string_view name) const {
  if (auto idx = find(name)) return columns_[*idx];
  throw ConfigError("unknown column '" + std::string(name) + "'");
}

std::optional<std::size_t> Table::find(std::string_view name) const {
  for (std::size_t i = 0; i < schema_.size(); ++i) {
    if (schema_[i].name == name) return i;
  }
  return std::nullopt;
}

void Table::set_column(ColumnDesc desc, Column column) {
  if (column.kind() != desc.kind) throw Error("column '" + desc.name + "' kind does not match its descriptor");
  if (!columns_.empty() && column.size() != rows_) {
    throw Error("column '" + desc.name + "' has " + std::to_string(column.size()) + " rows, table has " +
                std::to_string(rows_));
  }
  if (columns_.empty()) rows_ = column.size();
  if (auto idx = find(desc.name)) {
    schema_[*idx] = std::move(desc);
    columns_[*idx] = std::move(column);
  } else {
    schema_.push_back(std::move(desc));
    columns_.push_back(std::move(column));
  }
}

Table Table::take(std::span<const std::size_t> rows) const {
  std::vector<Column> cols;
  cols.reserve(columns_.size());
  for (const auto& c : columns_) cols.push_back(c.take(rows));
  return Table(schema_, std::move(cols));
}

Table Table::slice(std::size_t begin, std::size_t end) const {
  std::vector<Column> cols;
  cols.reserve(columns_.size());
  for (const auto& c : columns_) cols.push_back(c.slice(begin, end));
  Table out(schema_, std::move(cols));
  out.rows_ = end - begin;
  return out;
}

void ColumnMapping::validate() const {
  const std::set<std::string> names{id_col, lat_col, lon_col, time_col};
  if (id_col.empty() || lat_col.empty() || lon_col.empty() || time_col.empty()) {
    throw ConfigError("column mapping names must be non-empty");
  }
  if (names.size() != 4) throw ConfigError("column mapping must name four distinct columns");
}

Schema core_schema(const ColumnMapping& m) {
  return {{m.id_col, ValueKind::String, false},
          {m.lat_col, ValueKind::Float, false},
          {m.lon_col, ValueKind::Float, false},
          {m.time_col, ValueKind::Timestamp, false}};
}

std::span<const std::string> ids_of(const Table& t) { return t.column(kIdColumn).as_strings(); }
std::span<const double> lats_of(const Table& t) { return t.column(kLatColumn).as_floats(); }
std::span<const double> lons_of(const Table& t) { return t.column(kLonColumn).as_floats(); }
std::span<const std::int64_t> times_of(const Table& t) { return t.column(kTimeColumn).as_integers(); }

namespace {

Table empty_core_table(const ColumnMapping& mapping) {
  Schema schema = core_schema(mapping);
  std::vector<Column> cols;
  for (const auto& d : schema) cols.emplace_back(d.kind, 0);
  return Table(std::move(schema), std::move(cols));
}

bool valid_lat(double v) { return std::isfinite(v) && v >= -90.0 && v <= 90.0; }
bool valid_lon(double v) { return std::isfinite(v) && v >= -180.0 && v <= 180.0; }

struct CanonicalOrder {
  std::vector<std::size_t> rows;
  std::size_t duplicates = 0;
};

// Stable sort by (id, time) and collapse of exact duplicates. `describe`
// turns an input row index into a human-readable location.
template <class Describe>
CanonicalOrder canonical_order(std::span<const std::string> ids, std::span<const double> lats,
                               std::span<const double> lons, std::span<const std::int64_t> times,
                               Describe describe) {
  std::vector<std::size_t> order(ids.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (const int c = ids[a].compare(ids[b]); c != 0) return c < 0;
    return times[a] < times[b];
  });
  CanonicalOrder out;
  out.rows.reserve(order.size());
  for (std::size_t r : order) {
    if (!out.rows.empty()) {
      const std::size_t prev = out.rows.back();
      if (ids[prev] == ids[r] && times[prev] == times[r]) {
        if (lats[prev] == lats[r] && lons[prev] == lons[r]) {
          ++out.duplicates;
          continue;
        }
        throw ValidationError("conflicting fixes for trajectory '" + ids[r] + "' at timestamp " +
                              std::to_string(times[r]) + ": " + describe(prev) + " and " + describe(r));
      }
    }
    out.rows.push_back(r);
  }
  return out;
}

enum class Inferred { Integer, Float, Boolean, String };

Inferred infer_kind(const RawTable& raw, std::size_t col) {
  bool all_int = true, all_float = true, all_bool = true, any = false;
  for (const auto& row : raw.rows) {
    const std::string& s = row[col];
    if (s.empty()) continue;
    any = true;
    if (all_int) {
      std::int64_t v = 0;
      auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
      all_int = ec == std::errc{} && p == s.data() + s.size();
    }
    if (all_float) {
      double v = 0;
      auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
      all_float = ec == std::errc{} && p == s.data() + s.size();
    }
    if (all_bool) all_bool = s == "true" || s == "false";
    if (!all_int && !all_float && !all_bool) return Inferred::String;
  }
  if (!any) return Inferred::String;
  if (all_int) return Inferred::Integer;
  if (all_float) return Inferred::Float;
  if (all_bool) return Inferred::Boolean;
  return Inferred::String;
}

Column parse_extra(const RawTable& raw, std::size_t col, std::span<const std::size_t> order) {
  const Inferred kind = infer_kind(raw, col);
  const std::size_t n = order.size();
  std::vector<std::uint8_t> valid(n, 0);
  auto cell = [&](std::size_t i) -> const std::string& { return raw.rows[order[i]][col]; };
  switch (kind) {
    case Inferred::Integer: {
      std::vector<std::int64_t> v(n, 0);
      for (std::size_t i = 0; i < n; ++i) {
        const auto& s = cell(i);
        if (s.empty()) continue;
        std::from_chars(s.data(), s.data() + s.size(), v[i]);
        valid[i] = 1;
      }
      return Column(ValueKind::Integer, std::move(v), std::move(valid));
    }
    case Inferred::Float: {
      std::vector<double> v(n, 0.0);
      for (std::size_t i = 0; i < n; ++i) {
        const auto& s = cell(i);
        if (s.empty()) continue;
        std::from_chars(s.data(), s.data() + s.size(), v[i]);
        valid[i] = 1;
      }
      return Column(ValueKind::Float, std::move(v), std::move(valid));
    }
    case Inferred::Boolean: {
      std::vector<std::uint8_t> v(n, 0);
      for (std::size_t i = 0; i < n; ++i) {
        const auto& s = cell(i);
        if (s.empty()) continue;
        v[i] = s == "true";
        valid[i] = 1;
      }
      return Column(ValueKind::Boolean, std::move(v), std::move(valid));
    }
    case Inferred::String: break;
  }
  std::vector<std::string> v(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& s = cell(i);
    if (s.empty()) continue;
    v[i] = s;
    valid[i] = 1;
  }
  return Column(ValueKind::String, std::move(v), std::move(valid));
}

std::optional<double> parse_double(const std::string& s) {
  double v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

}  // namespace

TrajectoryFrame::TrajectoryFrame() : table_(empty_core_table(ColumnMapping{})) {}

TrajectoryFrame assemble_trusted(Table table) { return TrajectoryFrame(std::move(table), TrajectoryFrame::Trusted{}); }

void validate_frame_table(const Table& t) {
  if (t.num_columns() < kCoreColumnCount) throw ValidationError("frame needs the four core columns");
  static constexpr ValueKind kCoreKinds[] = {ValueKind::String, ValueKind::Float, ValueKind::Float,
                                             ValueKind::Timestamp};
  for (std::size_t c = 0; c < kCoreColumnCount; ++c) {
    const auto& d = t.schema()[c];
    if (d.kind != kCoreKinds[c] || d.nullable) {
      throw ValidationError("core column '" + d.name + "' must be non-nullable " +
                            std::string(to_string(kCoreKinds[c])));
    }
    if (t.column(c).has_nulls()) throw ValidationError("core column '" + d.name + "' contains nulls");
  }
  const auto ids = ids_of(t);
  const auto lats = lats_of(t);
  const auto lons = lons_of(t);
  const auto times = times_of(t);
  for (std::size_t i = 0; i < t.num_rows(); ++i) {
    if (!valid_lat(lats[i])) {
      throw ValidationError("row " + std::to_string(i) + ": latitude out of range [-90, 90]");
    }
    if (!valid_lon(lons[i])) {
      throw ValidationError("row " + std::to_string(i) + ": longitude out of range [-180, 180]");
    }
    if (i == 0) continue;
    const int c = ids[i - 1].compare(ids[i]);
    if (c > 0 || (c == 0 && times[i - 1] > times[i])) {
      throw ValidationError("row " + std::to_string(i) + ": rows not in (traj_id, timestamp) order");
    }
    if (c == 0 && times[i - 1] == times[i]) {
      throw ValidationError("row " + std::to_string(i) + ": duplicate timestamp in trajectory '" + ids[i] + "'");
    }
  }
}

TrajectoryFrame TrajectoryFrame::from_table(Table table) {
  validate_frame_table(table);
  return TrajectoryFrame(std::move(table), Trusted{});
}

TrajectoryFrame TrajectoryFrame::from_points(std::vector<TrajectoryPoint> points, BuildStats* stats) {
  const std::size_t n = points.size();
  std::vector<std::string> ids(n);
  std::vector<double> lats(n), lons(n);
  std::vector<std::int64_t> times(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!valid_lat(points[i].lat)) throw ValidationError("point " + std::to_string(i) + ": latitude out of range");
    if (!valid_lon(points[i].lon)) throw ValidationError("point " + std::to_string(i) + ": longitude out of range");
    ids[i] = std::move(points[i].traj_id);
    lats[i] = points[i].lat;
    lons[i] = points[i].lon;
    times[i] = points[i].timestamp;
  }
  const auto order = canonical_order(ids, lats, lons, times, [](std::size_t r) { return "point " + std::to_string(r); });
  if (stats) stats->duplicates_dropped = order.duplicates;
  std::vector<Column> cols;
  cols.push_back(Column::strings(std::move(ids)).take(order.rows));
  cols.push_back(Column::floats(std::move(lats)).take(order.rows));
  cols.push_back(Column::floats(std::move(lons)).take(order.rows));
  cols.push_back(Column::integers(std::move(times), ValueKind::Timestamp).take(order.rows));
  return from_table(Table(core_schema(ColumnMapping{}), std::move(cols)));
}

std::size_t TrajectoryFrame::num_trajectories() const {
  const auto id = ids();
  std::size_t count = 0;
  for (std::size_t i = 0; i < id.size(); ++i) {
    if (i == 0 || id[i] != id[i - 1]) ++count;
  }
  return count;
}

TrajectoryFrame TrajectoryFrame::with_column(ColumnDesc desc, Column column) const {
  if (auto idx = table_.find(desc.name); idx && *idx < kCoreColumnCount) {
    throw ConfigError("cannot overwrite core column '" + desc.name + "'");
  }
  Table t = table_;
  t.set_column(std::move(desc), std::move(column));
  return TrajectoryFrame(std::move(t), Trusted{});
}

TrajectoryFrame build_frame(const RawTable& raw, const ColumnMapping& mapping, BuildStats* stats) {
  mapping.validate();
  auto locate = [&](const std::string& name) {
    auto it = std::find(raw.header.begin(), raw.header.end(), name);
    if (it == raw.header.end()) throw ValidationError("mapped column '" + name + "' not found in input header");
    return static_cast<std::size_t>(it - raw.header.begin());
  };
  const std::size_t id_c = locate(mapping.id_col);
  const std::size_t lat_c = locate(mapping.lat_col);
  const std::size_t lon_c = locate(mapping.lon_col);
  const std::size_t time_c = locate(mapping.time_col);

  auto describe = [&](std::size_t r) {
    std::string s = "row " + std::to_string(r);
    if (r < raw.line_numbers.size()) s += " (line " + std::to_string(raw.line_numbers[r]) + ")";
    return s;
  };

  const std::size_t n = raw.rows.size();
  std::vector<std::string> ids(n);
  std::vector<double> lats(n), lons(n);
  std::vector<std::int64_t> times(n);
  std::optional<timeutil::TimestampFormat> format;
  for (std::size_t r = 0; r < n; ++r) {
    const auto& row = raw.rows[r];
    if (row.size() != raw.header.size()) {
      throw ValidationError(describe(r) + ": expected " + std::to_string(raw.header.size()) + " fields, got " +
                            std::to_string(row.size()));
    }
    ids[r] = row[id_c];
    if (ids[r].empty()) throw ValidationError(describe(r) + ": empty trajectory id");
    const auto lat = parse_double(row[lat_c]);
    if (!lat || !valid_lat(*lat)) {
      throw ValidationError(describe(r) + ": latitude '" + row[lat_c] + "' is not a finite value in [-90, 90]");
    }
    const auto lon = parse_double(row[lon_c]);
    if (!lon || !valid_lon(*lon)) {
      throw ValidationError(describe(r) + ": longitude '" + row[lon_c] + "' is not a finite value in [-180, 180]");
    }
    lats[r] = *lat;
    lons[r] = *lon;
    const std::string& ts = row[time_c];
    if (ts.empty()) throw ValidationError(describe(r) + ": empty timestamp");
    const auto this_format = timeutil::detect_format(ts);
    if (!format) format = this_format;
    if (this_format != *format) {
      throw ValidationError(describe(r) + ": timestamp '" + ts + "' mixes formats; column uses " +
                            (*format == timeutil::TimestampFormat::Epoch ? "epoch seconds" : "ISO-8601"));
    }
    const auto t = timeutil::parse_timestamp(ts, *format);
    if (!t) throw ValidationError(describe(r) + ": unparsable timestamp '" + ts + "'");
    times[r] = *t;
  }

  const auto order = canonical_order(ids, lats, lons, times, describe);
  if (stats) stats->duplicates_dropped = order.duplicates;

  Schema schema = core_schema(mapping);
  std::vector<Column> cols;
  cols.push_back(Column::strings(std::move(ids)).take(order.rows));
  cols.push_back(Column::floats(std::move(lats)).take(order.rows));
  cols.push_back(Column::floats(std::move(lons)).take(order.rows));
  cols.push_back(Column::integers(std::move(times), ValueKind::Timestamp).take(order.rows));
  for (std::size_t c = 0; c < raw.header.size(); ++c) {
    if (c == id_c || c == lat_c || c == lon_c || c == time_c) continue;
    Column col = parse_extra(raw, c, order.rows);
    schema.push_back({raw.header[c], col.kind(), true});
    cols.push_back(std::move(col));
  }
  return TrajectoryFrame::from_table(Table(std::move(schema), std::move(cols)));
}

std::vector<SegmentBounds> segment_bounds(const TrajectoryFrame& frame) {
  std::vector<SegmentBounds> out;
  const auto ids = frame.ids();
  std::size_t begin = 0;
  for (std::size_t i = 1; i <= ids.size(); ++i) {
    if (i == ids.size() || ids[i] != ids[begin]) {
      out.push_back({ids[begin], begin, i});
      begin = i;
    }
  }
  return out;
}

std::vector<TrajectorySegment> partition(const TrajectoryFrame& frame) {
  std::vector<TrajectorySegment> out;
  for (auto& b : segment_bounds(frame)) {
    out.push_back({std::move(b.traj_id), frame.table().slice(b.begin, b.end)});
  }
  return out;
}

TrajectoryFrame merge(std::vector<TrajectorySegment> segments, const Schema& schema) {
  std::sort(segments.begin(), segments.end(),
            [](const TrajectorySegment& a, const TrajectorySegment& b) { return a.traj_id < b.traj_id; });
  std::size_t total = 0;
  for (std::size_t i = 0; i < segments.size(); ++i) {
    const auto& s = segments[i];
    if (s.rows.schema() != schema) throw ConfigError("segment '" + s.traj_id + "' schema does not match");
    if (i > 0 && segments[i - 1].traj_id == s.traj_id) {
      throw ConfigError("duplicate trajectory id '" + s.traj_id + "' across segments");
    }
    for (const auto& id : ids_of(s.rows)) {
      if (id != s.traj_id) throw ValidationError("segment '" + s.traj_id + "' contains rows of '" + id + "'");
    }
    total += s.rows.num_rows();
  }
  std::vector<Column> cols;
  for (const auto& d : schema) cols.emplace_back(d.kind, total);
  std::size_t offset = 0;
  for (const auto& s : segments) {
    for (std::size_t c = 0; c < cols.size(); ++c) s.rows.column(c).copy_into(cols[c], offset);
    offset += s.rows.num_rows();
  }
  return TrajectoryFrame::from_table(Table(schema, std::move(cols)));
}

}  // namespace trajkit
