#include "trajkit/io.hpp"

#include <fstream>
#include <iterator>
#include <sstream>

#include "json.hpp"

#include "trajkit/error.hpp"

namespace trajkit {

RawTable parse_csv_text(std::string_view text) {
  RawTable table;
  std::vector<std::string> row;
  std::string field;
  std::size_t line = 1;
  std::size_t row_line = 1;
  bool in_quotes = false;
  bool field_started = false;  // distinguishes an empty line from a row with one empty field
  bool have_header = false;

  auto end_row = [&] {
    if (row.empty() && !field_started && field.empty()) return;  // blank line
    row.push_back(std::move(field));
    field.clear();
    if (!have_header) {
      table.header = std::move(row);
      have_header = true;
    } else {
      if (row.size() != table.header.size()) {
        throw IoError("line " + std::to_string(row_line) + ": expected " + std::to_string(table.header.size()) +
                      " fields, got " + std::to_string(row.size()));
      }
      table.rows.push_back(std::move(row));
      table.line_numbers.push_back(row_line);
    }
    row.clear();
    field_started = false;
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line;
        field.push_back(c);
      }
      continue;
    }
    switch (c) {
      case '"':
        in_quotes = true;
        field_started = true;
        break;
      case ',':
        row.push_back(std::move(field));
        field.clear();
        field_started = true;
        break;
      case '\r':
        if (i + 1 < text.size() && text[i + 1] == '\n') break;
        [[fallthrough]];
      case '\n':
        end_row();
        ++line;
        row_line = line;
        break;
      default:
        field.push_back(c);
        field_started = true;
    }
  }
  if (in_quotes) throw IoError("line " + std::to_string(row_line) + ": unterminated quoted field");
  end_row();
  if (!have_header) throw IoError("missing header row");
  return table;
}

RawTable parse_csv(std::istream& in) {
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_csv_text(text);
}

TrajectoryFrame read_csv(const std::filesystem::path& path, const ColumnMapping& mapping, BuildStats* stats) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  return build_frame(parse_csv(in), mapping, stats);
}

namespace {

void write_field(std::ostream& out, const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) {
    out << s;
    return;
  }
  out << '"';
  for (char c : s) {
    if (c == '"') out << '"';
    out << c;
  }
  out << '"';
}

}  // namespace

void write_csv(const TrajectoryFrame& frame, std::ostream& out) {
  const Table& t = frame.table();
  for (std::size_t c = 0; c < t.num_columns(); ++c) {
    if (c) out << ',';
    write_field(out, t.schema()[c].name);
  }
  out << '\n';
  for (std::size_t r = 0; r < t.num_rows(); ++r) {
    for (std::size_t c = 0; c < t.num_columns(); ++c) {
      if (c) out << ',';
      write_field(out, t.column(c).format(r));
    }
    out << '\n';
  }
}

void write_csv(const TrajectoryFrame& frame, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  write_csv(frame, out);
  out.flush();
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

std::string to_csv_string(const TrajectoryFrame& frame) {
  std::ostringstream out;
  write_csv(frame, out);
  return out.str();
}

namespace {

using nlohmann::json;

LonLat parse_position(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() < 2 || !j[0].is_number() || !j[1].is_number()) {
    throw IoError(where + ": position must be [lon, lat]");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

std::string string_property(const json& props, const char* key) {
  if (!props.is_object() || !props.contains(key)) return {};
  const auto& v = props.at(key);
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  return v.dump();
}

void add_feature(const json& feature, SemanticLayer& layer, std::size_t index) {
  const std::string where = "feature " + std::to_string(index);
  if (!feature.is_object() || feature.value("type", "") != "Feature") throw IoError(where + ": not a Feature");
  const json& geom = feature.contains("geometry") ? feature.at("geometry") : json();
  const json props = feature.contains("properties") ? feature.at("properties") : json::object();
  if (!geom.is_object()) throw IoError(where + ": missing geometry");
  const std::string type = geom.value("type", "");
  const json& coords = geom.contains("coordinates") ? geom.at("coordinates") : json();
  if (type == "Polygon") {
    PolygonGeometry poly;
    poly.name = string_property(props, "name");
    if (poly.name.empty()) throw IoError(where + ": Polygon needs a 'name' property");
    if (!coords.is_array()) throw IoError(where + ": Polygon coordinates must be an array of rings");
    for (const auto& ring_json : coords) {
      if (!ring_json.is_array()) throw IoError(where + ": ring must be an array of positions");
      std::vector<LonLat> ring;
      for (const auto& pos : ring_json) ring.push_back(parse_position(pos, where));
      if (ring.size() > 1 && ring.front() == ring.back()) ring.pop_back();
      poly.rings.push_back(std::move(ring));
    }
    layer.polygons.push_back(std::move(poly));
  } else if (type == "Point") {
    PointOfInterest poi;
    poi.poi_id = string_property(props, "poi_id");
    if (poi.poi_id.empty()) throw IoError(where + ": Point needs a 'poi_id' property");
    poi.name = string_property(props, "name");
    if (poi.name.empty()) poi.name = poi.poi_id;
    const LonLat p = parse_position(coords, where);
    poi.lat = p.lat;
    poi.lon = p.lon;
    layer.pois.push_back(std::move(poi));
  } else {
    throw IoError(where + ": unsupported geometry type '" + type + "' (expected Polygon or Point)");
  }
}

}  // namespace

SemanticLayer parse_layer(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::exception& e) {
    throw IoError(std::string("invalid GeoJSON: ") + e.what());
  }
  SemanticLayer layer;
  const std::string type = doc.is_object() ? doc.value("type", "") : "";
  if (type == "FeatureCollection") {
    if (!doc.contains("features") || !doc.at("features").is_array()) throw IoError("FeatureCollection has no features");
    std::size_t i = 0;
    for (const auto& f : doc.at("features")) add_feature(f, layer, i++);
  } else if (type == "Feature") {
    add_feature(doc, layer, 0);
  } else {
    throw IoError("unsupported GeoJSON root type '" + type + "'");
  }
  layer.validate();
  return layer;
}

SemanticLayer load_layer(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_layer(text);
}

}  // namespace trajkit
