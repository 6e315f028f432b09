#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace trajkit {

enum class ValueKind : std::uint8_t { String, Integer, Float, Timestamp, Boolean };

std::string_view to_string(ValueKind kind);

struct ColumnDesc {
  std::string name;
  ValueKind kind = ValueKind::String;
  bool nullable = true;

  bool operator==(const ColumnDesc&) const = default;
};

using Schema = std::vector<ColumnDesc>;

// Row index meaning "no source row": Column::take fills the slot with null.
inline constexpr std::size_t kNoRow = std::numeric_limits<std::size_t>::max();

/// A typed value array with a validity mask.
///
/// Integer and Timestamp share int64 storage, Boolean uses one byte per
/// value. Null slots always hold the storage's default value so that two
/// columns compare equal exactly when their visible contents match.
class Column {
 public:
  using Storage = std::variant<std::vector<std::string>, std::vector<std::int64_t>,
                               std::vector<double>, std::vector<std::uint8_t>>;

  Column() : Column(ValueKind::String, 0) {}
  // All-null column of the given length.
  Column(ValueKind kind, std::size_t rows);
  Column(ValueKind kind, Storage values, std::vector<std::uint8_t> valid);

  static Column strings(std::vector<std::string> values);
  static Column integers(std::vector<std::int64_t> values, ValueKind kind = ValueKind::Integer);
  static Column floats(std::vector<double> values);
  static Column floats(std::vector<double> values, std::vector<std::uint8_t> valid);
  static Column floats(const std::vector<std::optional<double>>& values);
  static Column booleans(std::vector<std::uint8_t> values);

  ValueKind kind() const noexcept { return kind_; }
  std::size_t size() const noexcept { return valid_.size(); }
  bool is_null(std::size_t row) const { return valid_[row] == 0; }
  bool has_nulls() const;
  const std::vector<std::uint8_t>& validity() const noexcept { return valid_; }
  bool is_numeric() const noexcept { return kind_ == ValueKind::Integer || kind_ == ValueKind::Float; }

  const std::vector<std::string>& as_strings() const;
  const std::vector<std::int64_t>& as_integers() const;
  const std::vector<double>& as_floats() const;
  const std::vector<std::uint8_t>& as_booleans() const;

  // Integer or Float value as double; nullopt for null slots.
  std::optional<double> numeric(std::size_t row) const;

  Column take(std::span<const std::size_t> rows) const;
  Column slice(std::size_t begin, std::size_t end) const;
  // Copies this column into dst[offset, offset + size()). Kinds must match.
  void copy_into(Column& dst, std::size_t offset) const;

  // Textual cell value: empty for null, shortest round-trip form for floats.
  std::string format(std::size_t row) const;

  bool operator==(const Column& other) const;

 private:
  ValueKind kind_;
  Storage values_;
  std::vector<std::uint8_t> valid_;
};

/// Schema plus equally long columns.
class Table {
 public:
  Table() = default;
  Table(Schema schema, std::vector<Column> columns);

  const Schema& schema() const noexcept { return schema_; }
  std::size_t num_rows() const noexcept { return rows_; }
  std::size_t num_columns() const noexcept { return columns_.size(); }

  const Column& column(std::size_t index) const { return columns_.at(index); }
  const Column& column(std::string_view name) const;
  std::optional<std::size_t> find(std::string_view name) const;

  // Replaces the column with the same name or appends a new one.
  void set_column(ColumnDesc desc, Column column);

  Table take(std::span<const std::size_t> rows) const;
  Table slice(std::size_t begin, std::size_t end) const;

  bool operator==(const Table& other) const = default;

 private:
  Schema schema_;
  std::vector<Column> columns_;
  std::size_t rows_ = 0;
};

/// Source header names of the four core columns.
struct ColumnMapping {
  std::string id_col = "traj_id";
  std::string lat_col = "lat";
  std::string lon_col = "lon";
  std::string time_col = "time";

  // Throws ConfigError unless the four names are distinct and non-empty.
  void validate() const;
};

// Positions of the core columns in every frame and segment table.
inline constexpr std::size_t kIdColumn = 0;
inline constexpr std::size_t kLatColumn = 1;
inline constexpr std::size_t kLonColumn = 2;
inline constexpr std::size_t kTimeColumn = 3;
inline constexpr std::size_t kCoreColumnCount = 4;

Schema core_schema(const ColumnMapping& mapping);

// Core column accessors for frame or segment tables.
std::span<const std::string> ids_of(const Table& table);
std::span<const double> lats_of(const Table& table);
std::span<const double> lons_of(const Table& table);
std::span<const std::int64_t> times_of(const Table& table);

struct TrajectoryPoint {
  std::string traj_id;
  double lat = 0.0;
  double lon = 0.0;
  std::int64_t timestamp = 0;
};

struct BuildStats {
  std::size_t duplicates_dropped = 0;
};

/// Raw string records, e.g. a parsed CSV body.
struct RawTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  // Optional 1-based source line per row, used in error messages.
  std::vector<std::size_t> line_numbers;
};

/// Immutable, validated trajectory dataset.
///
/// Rows are sorted by (traj_id, timestamp) with no timestamp ties inside a
/// trajectory; the first four columns are id, lat, lon and time and never
/// hold nulls. Every other column is a feature column.
class TrajectoryFrame {
 public:
  TrajectoryFrame();

  // Validates an already ordered table; throws ValidationError on any violation.
  static TrajectoryFrame from_table(Table table);
  // Sorts and collapses exact duplicates before validating.
  static TrajectoryFrame from_points(std::vector<TrajectoryPoint> points, BuildStats* stats = nullptr);

  const Table& table() const noexcept { return table_; }
  const Schema& schema() const noexcept { return table_.schema(); }
  std::size_t num_rows() const noexcept { return table_.num_rows(); }
  bool empty() const noexcept { return table_.num_rows() == 0; }
  std::size_t num_trajectories() const;

  std::span<const std::string> ids() const { return ids_of(table_); }
  std::span<const double> lats() const { return lats_of(table_); }
  std::span<const double> lons() const { return lons_of(table_); }
  std::span<const std::int64_t> times() const { return times_of(table_); }

  // Copy with a feature column replaced or appended.
  TrajectoryFrame with_column(ColumnDesc desc, Column column) const;

  bool operator==(const TrajectoryFrame& other) const = default;

 private:
  struct Trusted {};
  TrajectoryFrame(Table table, Trusted) : table_(std::move(table)) {}

  friend TrajectoryFrame assemble_trusted(Table table);

  Table table_;
};

// Wraps a table whose invariants the caller has already established.
TrajectoryFrame assemble_trusted(Table table);

/// Checks every frame invariant; throws ValidationError naming the row.
void validate_frame_table(const Table& table);

/// Loads raw records: maps the four core columns, parses coordinates and
/// timestamps, infers kinds of the extra columns, sorts canonically and
/// collapses exact duplicates.
TrajectoryFrame build_frame(const RawTable& raw, const ColumnMapping& mapping, BuildStats* stats = nullptr);

/// One trajectory's rows in frame order.
struct TrajectorySegment {
  std::string traj_id;
  Table rows;
};

struct SegmentBounds {
  std::string traj_id;
  std::size_t begin = 0;
  std::size_t end = 0;
};

std::vector<SegmentBounds> segment_bounds(const TrajectoryFrame& frame);
std::vector<TrajectorySegment> partition(const TrajectoryFrame& frame);
TrajectoryFrame merge(std::vector<TrajectorySegment> segments, const Schema& schema);

}  // namespace trajkit
