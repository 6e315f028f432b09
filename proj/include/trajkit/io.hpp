#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

#include "trajkit/frame.hpp"
#include "trajkit/semantic.hpp"

namespace trajkit {

/// Comma-delimited, '"'-quoted CSV with a header row. CRLF and LF line
/// endings are accepted. Throws IoError on a row whose field count differs
/// from the header, naming the line.
RawTable parse_csv(std::istream& in);
RawTable parse_csv_text(std::string_view text);

/// Reads a trajectory CSV. The time column holds either integer epoch
/// seconds or ISO-8601 "YYYY-MM-DDTHH:MM:SS[Z]"; the first value fixes the
/// format for the whole column.
TrajectoryFrame read_csv(const std::filesystem::path& path, const ColumnMapping& mapping, BuildStats* stats = nullptr);

/// Header in schema order, nulls as empty fields, floats in shortest
/// round-trip form, timestamps as epoch seconds, LF line endings.
void write_csv(const TrajectoryFrame& frame, std::ostream& out);
void write_csv(const TrajectoryFrame& frame, const std::filesystem::path& path);
std::string to_csv_string(const TrajectoryFrame& frame);

/// GeoJSON FeatureCollection (or single Feature) holding Polygon features
/// with a "name" property and Point features with "poi_id" and optional
/// "name" properties. Other geometry types are rejected.
SemanticLayer parse_layer(std::string_view geojson_text);
SemanticLayer load_layer(const std::filesystem::path& path);

}  // namespace trajkit
