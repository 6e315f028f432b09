#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"
#include "support.hpp"
#include "trajkit/error.hpp"
#include "trajkit/io.hpp"
#include "trajkit/kinematic.hpp"
#include "trajkit/temporal.hpp"
#include "trajkit/timeutil.hpp"

using namespace trajkit;
namespace fs = std::filesystem;

namespace {

fs::path temp_file(const std::string& name, const std::string& content) {
  const fs::path dir = fs::temp_directory_path() / "trajkit_io_test";
  fs::create_directories(dir);
  const fs::path p = dir / name;
  std::ofstream(p, std::ios::binary) << content;
  return p;
}

TrajectoryFrame read_text(const std::string& text, BuildStats* stats = nullptr) {
  return build_frame(parse_csv_text(text), {}, stats);
}

}  // namespace

TEST_CASE("CSV parsing") {
  auto raw = parse_csv_text("a,b,c\r\n1,\"x,y\",\"say \"\"hi\"\"\"\r\n\r\n2,,z\n");
  REQUIRE(raw.rows.size() == 2);
  CHECK(raw.rows[0][1] == "x,y");
  CHECK(raw.rows[0][2] == "say \"hi\"");
  CHECK(raw.rows[1][1].empty());
  CHECK(raw.line_numbers == std::vector<std::size_t>{2, 4});
  try {
    parse_csv_text("a,b\n1,2\n3\n");
    FAIL("expected IoError");
  } catch (const IoError& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_csv_text(""), IoError);
  CHECK_THROWS_AS(parse_csv_text("a,b\n\"1,2\n"), IoError);
}

TEST_CASE("ISO timestamps are converted to epoch seconds") {
  auto f = read_text(
      "traj_id,lat,lon,time\nA,1,1,2021-01-01T00:00:00\nA,1,1,2021-01-01T00:00:30Z\nA,1,1,2021-01-02T00:00:00\n");
  REQUIRE(f.num_rows() == 3);
  CHECK(f.times()[0] == 1609459200);
  CHECK(f.times()[1] == 1609459230);
  CHECK(f.times()[2] == 1609459200 + 86400);
}

TEST_CASE("mixed timestamp formats name the offending line") {
  try {
    auto raw = parse_csv_text("traj_id,lat,lon,time\nA,1,1,2021-01-01T00:00:00\nA,1,1,1609459200\n");
    build_frame(raw, {});
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
}

TEST_CASE("header-only file is an empty frame") {
  auto p = temp_file("empty.csv", "traj_id,lat,lon,time,speed\n");
  auto f = read_csv(p, {});
  CHECK(f.empty());
  CHECK(f.schema().size() == 5);
}

TEST_CASE("custom column mapping") {
  ColumnMapping m{"vessel", "y", "x", "ts"};
  auto f = build_frame(parse_csv_text("ts,x,y,vessel\n20,3,4,v1\n10,5,6,v1\n"), m);
  CHECK(f.schema()[0].name == "vessel");
  CHECK(f.lats()[0] == 6.0);
  CHECK(f.lons()[0] == 5.0);
  CHECK(to_csv_string(f) == "vessel,y,x,ts\nv1,6,5,10\nv1,4,3,20\n");
}

TEST_CASE("write then read round trip") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 20; ++trial) {
    auto f = testutil::synthetic_frame(1 + rng() % 5, 1 + rng() % 40, rng());
    f = create_temporal_features(create_kinematic_features(f, {2, 0}), {2, 0});
    const std::string text = to_csv_string(f);
    auto back = read_text(text);
    for (std::size_t c = 0; c < kCoreColumnCount; ++c) CHECK(back.table().column(c) == f.table().column(c));
    CHECK(to_csv_string(back) == text);
  }
}

TEST_CASE("core columns round-trip bit-exactly for arbitrary doubles") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> lat(-90, 90), lon(-180, 180);
  std::vector<TrajectoryPoint> pts;
  for (int i = 0; i < 2000; ++i) pts.push_back({"id" + std::to_string(i % 7), lat(rng), lon(rng), i * 3 - 1000});
  pts.push_back({"edge", -90.0, 180.0, 0});
  pts.push_back({"edge", 5e-324, -0.0, 1});
  auto f = testutil::frame_of(pts);
  CHECK(read_text(to_csv_string(f)).table() == f.table());
}

TEST_CASE("nulls become empty fields") {
  auto f = create_kinematic_features(testutil::frame_of({{"A", 0, 0, 0}, {"A", 0, 0.001, 10}}), {1, 0});
  std::istringstream lines(to_csv_string(f));
  std::string header, first, second;
  std::getline(lines, header);
  std::getline(lines, first);
  std::getline(lines, second);
  CHECK(header == "traj_id,lat,lon,time,distance_prev,cum_distance,distance_from_start,speed,acceleration,jerk,"
                  "bearing,bearing_rate,rate_of_bearing_rate");
  CHECK(first == "A,0,0,0,,0,0,,,,,,");
  CHECK(second.find(",,,") != std::string::npos);
}

TEST_CASE("file writes are deterministic") {
  auto f = create_kinematic_features(testutil::synthetic_frame(3, 20, 2), {2, 0});
  const fs::path a = fs::temp_directory_path() / "trajkit_io_test" / "a.csv";
  const fs::path b = fs::temp_directory_path() / "trajkit_io_test" / "b.csv";
  fs::create_directories(a.parent_path());
  write_csv(f, a);
  write_csv(f, b);
  std::ifstream ia(a, std::ios::binary), ib(b, std::ios::binary);
  std::stringstream sa, sb;
  sa << ia.rdbuf();
  sb << ib.rdbuf();
  CHECK(sa.str() == sb.str());
  CHECK(sa.str() == to_csv_string(f));
  CHECK_THROWS_AS(write_csv(f, fs::path("/nonexistent-dir/x.csv")), IoError);
  CHECK_THROWS_AS(read_csv("/nonexistent-dir/x.csv", {}), IoError);
}

TEST_CASE("quoted fields survive a round trip") {
  auto f = testutil::frame_of({{"a,b", 0, 0, 0}, {"q\"x", 0, 0, 0}});
  auto back = read_text(to_csv_string(f));
  CHECK(back.table() == f.table());
}

TEST_CASE("GeoJSON layer") {
  const std::string text = R"({"type":"FeatureCollection","features":[
    {"type":"Feature","properties":{"name":"park"},
     "geometry":{"type":"Polygon","coordinates":[[[0,0],[1,0],[1,1],[0,1],[0,0]]]}},
    {"type":"Feature","properties":{"poi_id":"cafe"},
     "geometry":{"type":"Point","coordinates":[2.5,1.5]}}]})";
  auto layer = parse_layer(text);
  REQUIRE(layer.polygons.size() == 1);
  CHECK(layer.polygons[0].rings[0].size() == 4);
  REQUIRE(layer.pois.size() == 1);
  CHECK(layer.pois[0].lon == 2.5);
  CHECK(layer.pois[0].lat == 1.5);
  CHECK(layer.pois[0].name == "cafe");

  CHECK_THROWS_AS(parse_layer(R"({"type":"Feature","properties":{"name":"l"},
      "geometry":{"type":"LineString","coordinates":[[0,0],[1,1]]}})"),
                  IoError);
  CHECK_THROWS_AS(parse_layer(R"({"type":"Feature","properties":{},
      "geometry":{"type":"Polygon","coordinates":[[[0,0],[1,0],[1,1]]]}})"),
                  IoError);
  CHECK_THROWS_AS(parse_layer(R"({"type":"Feature","properties":{"name":"d"},
      "geometry":{"type":"Polygon","coordinates":[[[0,0],[1,0],[0,0]]]}})"),
                  ValidationError);
  CHECK_THROWS_AS(parse_layer("{not json"), IoError);
}
