#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "support.hpp"
#include "trajkit/error.hpp"
#include "trajkit/filters.hpp"
#include "trajkit/geo.hpp"
#include "trajkit/kinematic.hpp"

using namespace trajkit;

namespace {

using Series = std::vector<std::optional<double>>;

HampelParams params(std::size_t k, double n) { return {k, n, "x"}; }

}  // namespace

TEST_CASE("hampel hand-computed example") {
  Series s{1, 1, 1, 10, 1, 1, 1};
  auto mask = hampel_mask(s, params(2, 3));
  CHECK(mask == std::vector<bool>{false, false, false, true, false, false, false});
}

TEST_CASE("constant series has no outliers") {
  Series s(25, 4.25);
  auto mask = hampel_mask(s, params(3, 3));
  CHECK(std::none_of(mask.begin(), mask.end(), [](bool b) { return b; }));
}

TEST_CASE("nulls are skipped and never flagged") {
  Series s{1, std::nullopt, 1, 50, std::nullopt, 1, 1};
  auto mask = hampel_mask(s, params(2, 3));
  CHECK_FALSE(mask[1]);
  CHECK_FALSE(mask[4]);
  CHECK(mask[3]);
  Series all_null(4);
  CHECK(hampel_mask(all_null, params(1, 3)) == std::vector<bool>(4, false));
}

TEST_CASE("hampel equals a naive oracle on random series") {
  std::mt19937_64 rng(1234);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 1 + rng() % 500;
    const std::size_t k = 1 + rng() % 6;
    const double ns = 0.5 + static_cast<double>(rng() % 6);
    const auto s = testutil::random_series(rng, n);
    REQUIRE(hampel_mask(s, params(k, ns)) == oracle::naive_hampel(s, k, ns));
  }
}

TEST_CASE("hampel mask is invariant under positive affine maps") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 100; ++trial) {
    const auto s = testutil::random_series(rng, 1 + rng() % 400);
    Series t = s;
    for (auto& v : t) {
      if (v) v = 2.5 * *v + 7.0;
    }
    REQUIRE(hampel_mask(s, params(3, 3)) == hampel_mask(t, params(3, 3)));
  }
}

TEST_CASE("filter_hampel on a frame") {
  std::vector<TrajectoryPoint> pts;
  for (int i = 0; i < 7; ++i) pts.push_back({"A", 0, 0, i});
  auto f = testutil::frame_of(pts);
  f = f.with_column({"x", ValueKind::Float, true}, Column::floats(std::vector<double>{1, 1, 1, 10, 1, 1, 1}));
  auto r = filter_hampel(f, params(2, 3), {2, 0});
  CHECK(r.frame.num_rows() == 6);
  REQUIRE(r.removed.size() == 1);
  CHECK(r.removed[0].value == 1);
  CHECK(std::find(r.frame.times().begin(), r.frame.times().end(), 3) == r.frame.times().end());

  auto flat = f.with_column({"x", ValueKind::Float, true}, Column::floats(std::vector<double>(7, 2.0)));
  CHECK(filter_hampel(flat, params(2, 3), {1, 0}).frame == flat);

  auto empty = filter_hampel(create_kinematic_features(TrajectoryFrame(), {1, 0}),
                             {3, 3, column_names::kDistancePrev}, {1, 0});
  CHECK(empty.frame.empty());

  CHECK_THROWS_AS(filter_hampel(f, {3, 3, "missing"}, {1, 0}), ConfigError);
  auto text = f.with_column({"s", ValueKind::String, true}, Column::strings(std::vector<std::string>(7, "a")));
  CHECK_THROWS_AS(filter_hampel(text, {3, 3, "s"}, {1, 0}), ConfigError);
  CHECK_THROWS_AS(HampelParams({0, 3, "x"}).validate(), ConfigError);
  CHECK_THROWS_AS(HampelParams({1, 0, "x"}).validate(), ConfigError);
}

TEST_CASE("speed filter") {
  const double dlon = geo::to_degrees(20.0 / geo::kEarthRadiusM);  // 2 m/s at 10 s steps
  std::vector<TrajectoryPoint> pts;
  for (int i = 0; i < 20; ++i) pts.push_back({"A", 0.0, dlon * i, 10 * i});
  auto steady = testutil::frame_of(pts);
  CHECK(filter_by_speed(steady, {0.0, 50.0}, {2, 0}) == steady);
  CHECK(filter_by_speed(steady, {0.0, std::numeric_limits<double>::infinity()}, {2, 0}) == steady);

  // A fix 100 km away after 10 s: 10,000 m/s.
  auto spiked = pts;
  spiked[10].lat = geo::to_degrees(100000.0 / geo::kEarthRadiusM);
  auto f = testutil::frame_of(spiked);
  const double v = geo::haversine_m(0, spiked[9].lon, spiked[10].lat, spiked[10].lon) / 10.0;
  CHECK(v > 9990.0);
  auto out = filter_by_speed(f, {0.0, 100.0}, {2, 0});
  CHECK(out.num_rows() == 19);
  CHECK(std::find(out.times().begin(), out.times().end(), 100) == out.times().end());
  auto speeds = consecutive_speeds(out.lats(), out.lons(), out.times());
  for (const auto& s : speeds) CHECK((!s || *s <= 100.0));

  CHECK_THROWS_AS(filter_by_speed(f, {5.0, 5.0}, {1, 0}), ConfigError);
  CHECK_THROWS_AS(filter_by_speed(f, {std::nullopt, std::nullopt}, {1, 0}), ConfigError);
  CHECK_THROWS_AS(filter_by_speed(f, {-1.0, 5.0}, {1, 0}), ConfigError);
}

TEST_CASE("time range filter") {
  auto f = testutil::frame_of({{"A", 0, 0, 1}, {"A", 0, 0, 2}, {"A", 0, 0, 3}, {"A", 0, 0, 4}, {"A", 0, 0, 5}});
  CHECK(filter_by_time_range(f, 0, 10, {1, 0}) == f);
  CHECK(filter_by_time_range(f, 20, 30, {1, 0}).empty());
  auto mid = filter_by_time_range(f, 2, 4, {1, 0});
  CHECK(std::vector<std::int64_t>(mid.times().begin(), mid.times().end()) == std::vector<std::int64_t>{2, 3, 4});
  CHECK_THROWS_AS(filter_by_time_range(f, 5, 4, {1, 0}), ConfigError);
}

TEST_CASE("duplicate removal") {
  std::size_t removed = 0;
  auto out = remove_duplicate_points({{"A", 1, 1, 1}, {"A", 1, 1, 1}, {"A", 1, 1, 1}, {"A", 2, 2, 2}}, &removed);
  CHECK(out.size() == 2);
  CHECK(removed == 2);
  out = remove_duplicate_points({{"A", 1, 1, 1}, {"B", 1, 1, 1}}, &removed);
  CHECK(out.size() == 2);
  CHECK(removed == 0);

  auto f = testutil::synthetic_frame(3, 10, 4);
  auto r = remove_duplicates(f, {2, 0});
  CHECK(r.frame == f);
  for (const auto& k : r.removed) CHECK(k.value == 0);
}

TEST_CASE("drop short trajectories") {
  std::vector<TrajectoryPoint> pts;
  for (int i = 0; i < 2; ++i) pts.push_back({"a", 0, 0, i});
  for (int i = 0; i < 3; ++i) pts.push_back({"b", 0, 0, i});
  for (int i = 0; i < 9; ++i) pts.push_back({"c", 0, 0, i});
  auto f = testutil::frame_of(pts);
  CHECK(drop_short_trajectories(f, 1, {2, 0}) == f);
  auto four = drop_short_trajectories(f, 4, {2, 0});
  CHECK(four.num_rows() == 9);
  CHECK(four.ids()[0] == "c");
  CHECK(drop_short_trajectories(f, 10, {2, 0}).empty());
  CHECK(drop_short_trajectories(f, 10, {2, 0}).schema() == f.schema());
  CHECK_THROWS_AS(drop_short_trajectories(f, 0, {1, 0}), ConfigError);
}

TEST_CASE("filters commute with partition") {
  auto f = create_kinematic_features(testutil::synthetic_frame(8, 60, 31), {1, 0});
  const HampelParams hp{3, 3, column_names::kDistancePrev};
  auto whole = filter_hampel(f, hp, {4, 0}).frame;
  std::vector<TrajectorySegment> parts;
  for (auto& seg : partition(f)) {
    auto one = filter_hampel(TrajectoryFrame::from_table(seg.rows), hp, {1, 0}).frame;
    parts.push_back({seg.traj_id, one.table()});
  }
  CHECK(merge(parts, f.schema()) == whole);
}
