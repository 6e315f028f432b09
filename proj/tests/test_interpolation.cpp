#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "support.hpp"
#include "trajkit/error.hpp"
#include "trajkit/geo.hpp"
#include "trajkit/interpolation.hpp"

using namespace trajkit;
namespace cn = trajkit::column_names;

namespace {

TrajectorySegment segment_of(std::vector<TrajectoryPoint> pts) {
  auto f = testutil::frame_of(std::move(pts));
  return {f.ids()[0], f.table()};
}

std::vector<std::int64_t> times_vec(const Table& t) {
  auto s = times_of(t);
  return {s.begin(), s.end()};
}

// Original rows must survive untouched, in order, with interpolated = false.
void check_originals_kept(const Table& in, const Table& out) {
  const auto flags = out.column(cn::kInterpolated).as_booleans();
  std::size_t j = 0;
  for (std::size_t r = 0; r < out.num_rows(); ++r) {
    if (flags[r]) continue;
    REQUIRE(j < in.num_rows());
    CHECK(lats_of(out)[r] == lats_of(in)[j]);
    CHECK(lons_of(out)[r] == lons_of(in)[j]);
    CHECK(times_of(out)[r] == times_of(in)[j]);
    ++j;
  }
  CHECK(j == in.num_rows());
}

}  // namespace

TEST_CASE("detect_gaps") {
  std::vector<std::int64_t> t{0, 30};
  auto g = detect_gaps(t, 10);
  REQUIRE(g.size() == 1);
  CHECK(g[0].fill_times == std::vector<std::int64_t>{10, 20});
  t = {0, 10};
  CHECK(detect_gaps(t, 10).empty());
  t = {0, 25};
  CHECK(detect_gaps(t, 10)[0].fill_times == std::vector<std::int64_t>{10, 20});
  t = {5, 7, 100};
  g = detect_gaps(t, 30);
  REQUIRE(g.size() == 1);
  CHECK(g[0].left == 1);
  CHECK(g[0].fill_times == std::vector<std::int64_t>{37, 67, 97});
  CHECK_THROWS_AS(detect_gaps(t, 0), ConfigError);
}

TEST_CASE("linear interpolation") {
  auto seg = segment_of({{"A", 0, 0, 0}, {"A", 0, 10, 100}});
  std::vector<std::int64_t> one{0, 100};
  auto gaps = detect_gaps(one, 50);
  auto out = interpolate_linear(seg, gaps);
  REQUIRE(out.num_rows() == 3);
  CHECK(lons_of(out)[1] == 5.0);
  CHECK(lats_of(out)[1] == 0.0);
  CHECK(out.column(cn::kInterpolated).as_booleans() == std::vector<std::uint8_t>{0, 1, 0});

  std::vector<Gap> near{{0, 0, 100, {1}}};
  out = interpolate_linear(seg, near);
  CHECK(std::abs(lons_of(out)[1] - 0.0) <= 0.1 + 1e-12);

  auto seg3 = segment_of({{"A", 0, 0, 0}, {"A", 1, 2, 50}, {"A", 2, 4, 100}});
  std::vector<std::int64_t> t3{0, 50, 100};
  out = interpolate_linear(seg3, detect_gaps(t3, 10));
  for (std::size_t r = 0; r < out.num_rows(); ++r) {
    const auto t = static_cast<double>(times_of(out)[r]);
    CHECK(lats_of(out)[r] == doctest::Approx(t / 50.0).epsilon(1e-12));
  }
  check_originals_kept(seg3.rows, out);
}

TEST_CASE("natural spline matches an independent slope-form solver") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0, 1);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 3 + rng() % 10;
    std::vector<double> x(n), y(n);
    double t = 0;
    for (std::size_t i = 0; i < n; ++i) {
      t += 1 + std::floor(u(rng) * 300);
      x[i] = t;
      y[i] = 45 + u(rng);
    }
    NaturalCubicSpline s(x, y);
    oracle::SlopeSpline o(x, y);
    for (std::size_t i = 0; i < n; ++i) REQUIRE(std::abs(s(x[i]) - y[i]) <= 1e-9);
    CHECK(std::abs(s.second_derivative(x.front())) <= 1e-12);
    CHECK(std::abs(s.second_derivative(x.back())) <= 1e-12);
    for (int k = 0; k < 50; ++k) {
      const double q = x.front() + (x.back() - x.front()) * u(rng);
      REQUIRE(std::abs(s(q) - o(q)) <= 1e-9);
    }
  }
}

TEST_CASE("cubic interpolation") {
  SUBCASE("affine data is reproduced") {
    std::vector<TrajectoryPoint> pts;
    for (std::int64_t t : {0, 40, 300, 310, 900}) pts.push_back({"L", 10.0 + 1e-4 * t, -20.0 - 3e-5 * t, t});
    auto seg = segment_of(pts);
    auto out = interpolate_cubic(seg, detect_gaps(times_of(seg.rows), 60));
    for (std::size_t r = 0; r < out.num_rows(); ++r) {
      const auto t = static_cast<double>(times_of(out)[r]);
      CHECK(std::abs(lats_of(out)[r] - (10.0 + 1e-4 * t)) <= 1e-9);
      CHECK(std::abs(lons_of(out)[r] - (-20.0 - 3e-5 * t)) <= 1e-9);
    }
    check_originals_kept(seg.rows, out);
  }
  SUBCASE("knots of synthetic trajectories survive exactly") {
    auto f = testutil::synthetic_frame(20, 50, 8);
    for (const auto& seg : partition(f)) {
      auto out = interpolate_cubic(seg, detect_gaps(times_of(seg.rows), 60));
      check_originals_kept(seg.rows, out);
      for (auto t : times_vec(out)) CHECK(t >= times_of(seg.rows).front());
    }
  }
  SUBCASE("fewer than four points") {
    auto seg = segment_of({{"S", 0, 0, 0}, {"S", 0, 1, 100}, {"S", 0, 2, 500}});
    CHECK_THROWS_AS(interpolate_cubic(seg, detect_gaps(times_of(seg.rows), 60)), ConfigError);
    auto f = testutil::frame_of({{"S", 0, 0, 0}, {"S", 0, 1, 100}, {"S", 0, 2, 500}});
    std::vector<SegmentWarning> warnings;
    auto lenient = interpolate(f, {InterpMethod::Cubic, 60, std::nullopt, false}, {1, 0}, &warnings);
    CHECK(lenient.num_rows() == 3);
    REQUIRE(warnings.size() == 1);
    CHECK(warnings[0].traj_id == "S");
    CHECK_THROWS_AS(interpolate(f, {InterpMethod::Cubic, 60, std::nullopt, true}, {1, 0}), SegmentError);
  }
}

TEST_CASE("kinematic cubic closed forms") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int i = 0; i < 1000; ++i) {
    const double pa = 45 + u(rng), pb = 45 + u(rng), va = 1e-4 * u(rng), vb = 1e-4 * u(rng);
    const double T = 60 + 600 * std::abs(u(rng));
    REQUIRE(std::abs(kinematic_cubic(pa, va, pb, vb, T, 0) - pa) <= 1e-9);
    REQUIRE(std::abs(kinematic_cubic(pa, va, pb, vb, T, T) - pb) <= 1e-9);
    const double h = 1e-4 * T;
    auto p = [&](double tau) { return kinematic_cubic(pa, va, pb, vb, T, tau); };
    REQUIRE(std::abs((p(h) - p(-h)) / (2 * h) - va) <= 1e-9);
    REQUIRE(std::abs((p(T + h) - p(T - h)) / (2 * h) - vb) <= 1e-9);
    const double v = (pb - pa) / T;
    const double tau = T * std::abs(u(rng));
    REQUIRE(std::abs(kinematic_cubic(pa, v, pb, v, T, tau) - (pa + v * tau)) <= 1e-9);
  }
  // v_b = -v_a, p_b = p_a: p(T/2) = p_a + v_a T / 4.
  CHECK(std::abs(kinematic_cubic(3.0, 0.2, 3.0, -0.2, 10.0, 5.0) - (3.0 + 0.2 * 10.0 / 4.0)) <= 1e-12);
}

TEST_CASE("kinematic interpolation on segments") {
  SUBCASE("constant velocity reduces to linear") {
    std::vector<TrajectoryPoint> pts;
    for (std::int64_t t : {0, 10, 20, 200, 210, 220}) pts.push_back({"K", 1e-5 * t, 2e-5 * t, t});
    auto seg = segment_of(pts);
    const auto gaps = detect_gaps(times_of(seg.rows), 30);
    auto kin = interpolate_kinematic(seg, gaps);
    auto lin = interpolate_linear(seg, gaps);
    REQUIRE(kin.num_rows() == lin.num_rows());
    for (std::size_t r = 0; r < kin.num_rows(); ++r) {
      CHECK(std::abs(lats_of(kin)[r] - lats_of(lin)[r]) <= 1e-9);
      CHECK(std::abs(lons_of(kin)[r] - lons_of(lin)[r]) <= 1e-9);
    }
  }
  SUBCASE("no neighbours: mean velocity, hence linear") {
    auto seg = segment_of({{"K", 0, 0, 0}, {"K", 1, 1, 100}});
    const auto gaps = detect_gaps(times_of(seg.rows), 25);
    auto kin = interpolate_kinematic(seg, gaps);
    auto lin = interpolate_linear(seg, gaps);
    for (std::size_t r = 0; r < kin.num_rows(); ++r) CHECK(std::abs(lats_of(kin)[r] - lats_of(lin)[r]) <= 1e-12);
  }
  SUBCASE("originals are kept") {
    auto f = testutil::synthetic_frame(5, 80, 5);
    for (const auto& seg : partition(f)) {
      check_originals_kept(seg.rows, interpolate_kinematic(seg, detect_gaps(times_of(seg.rows), 60)));
    }
  }
}

TEST_CASE("random walk") {
  auto f = testutil::synthetic_frame(10, 60, 42, false);

  SUBCASE("same seed and id give identical output") {
    for (const auto& seg : partition(f)) {
      const auto gaps = detect_gaps(times_of(seg.rows), 30);
      const auto seed = stream_seed(7, seg.traj_id);
      CHECK(interpolate_random_walk(seg, gaps, std::nullopt, seed) ==
            interpolate_random_walk(seg, gaps, std::nullopt, seed));
    }
    InterpParams p{InterpMethod::RandomWalk, 30, std::nullopt, false};
    CHECK(interpolate(f, p, {1, 7}) == interpolate(f, p, {8, 7}));
    CHECK_FALSE(interpolate(f, p, {1, 7}) == interpolate(f, p, {1, 8}));
  }

  SUBCASE("sampled points satisfy both disc constraints") {
    const double vmax = 8.0;
    std::size_t checked = 0;
    for (const auto& seg : partition(f)) {
      const auto gaps = detect_gaps(times_of(seg.rows), 20);
      auto out = interpolate_random_walk(seg, gaps, vmax, stream_seed(1, seg.traj_id));
      check_originals_kept(seg.rows, out);
      const auto lat = lats_of(out);
      const auto lon = lons_of(out);
      const auto t = times_of(out);
      const auto& interp = out.column(cn::kInterpolated).as_booleans();
      const auto& fb = out.column(cn::kFallback).as_booleans();
      std::size_t anchor = 0;
      for (std::size_t r = 0; r < out.num_rows(); ++r) {
        if (!interp[r]) {
          anchor = r;
          continue;
        }
        if (fb[r]) continue;
        std::size_t right = r;
        while (interp[right]) ++right;
        // Equirectangular frame about the gap midpoint.
        const double lat0 = (lat[anchor] + lat[right]) / 2, lon0 = (lon[anchor] + lon[right]) / 2;
        auto xy = [&](std::size_t i) {
          return std::pair{geo::kEarthRadiusM * geo::to_radians(lon[i] - lon0) * std::cos(geo::to_radians(lat0)),
                           geo::kEarthRadiusM * geo::to_radians(lat[i] - lat0)};
        };
        auto dist = [&](std::size_t i, std::size_t j) {
          auto [xi, yi] = xy(i);
          auto [xj, yj] = xy(j);
          return std::hypot(xi - xj, yi - yj);
        };
        const double r1 = vmax * static_cast<double>(t[r] - t[r - 1]);
        const double r2 = vmax * static_cast<double>(t[right] - t[r]);
        CHECK(dist(r, r - 1) <= r1 * (1 + 1e-6));
        CHECK(dist(r, right) <= r2 * (1 + 1e-6));
        ++checked;
      }
    }
    CHECK(checked > 500);
  }

  SUBCASE("infeasible vmax falls back to linear") {
    auto seg = segment_of({{"R", 0, 0, 0}, {"R", 0, 0.01, 100}});  // 1112 m in 100 s
    const auto gaps = detect_gaps(times_of(seg.rows), 10);
    auto out = interpolate_random_walk(seg, gaps, 5.0, 1);
    auto lin = interpolate_linear(seg, gaps);
    CHECK(lats_of(out).size() == lats_of(lin).size());
    for (std::size_t r = 0; r < out.num_rows(); ++r) {
      CHECK(lons_of(out)[r] == lons_of(lin)[r]);
      CHECK(out.column(cn::kFallback).as_booleans()[r] == out.column(cn::kInterpolated).as_booleans()[r]);
    }
  }

  SUBCASE("vmax errors") {
    auto seg = segment_of({{"R", 0, 0, 0}, {"R", 0, 0, 100}});
    const auto gaps = detect_gaps(times_of(seg.rows), 10);
    CHECK_THROWS_AS(interpolate_random_walk(seg, gaps, std::nullopt, 1), ConfigError);
    CHECK_THROWS_AS(interpolate_random_walk(seg, gaps, -1.0, 1), ConfigError);
    auto single = segment_of({{"R", 0, 0, 0}});
    CHECK(interpolate_random_walk(single, {}, std::nullopt, 1).num_rows() == 1);
  }
}

TEST_CASE("dispatcher") {
  CHECK(parse_interp_method("random_walk") == InterpMethod::RandomWalk);
  try {
    parse_interp_method("spline");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("linear, cubic, kinematic, random_walk") != std::string::npos);
  }
  auto f = testutil::synthetic_frame(6, 40, 10);
  for (auto m : {InterpMethod::Linear, InterpMethod::Cubic, InterpMethod::Kinematic, InterpMethod::RandomWalk}) {
    auto out = interpolate(f, {m, 60, m == InterpMethod::RandomWalk ? std::optional<double>(50.0) : std::nullopt, false},
                           {3, 0});
    validate_frame_table(out.table());
    std::size_t expected = 0;
    for (const auto& seg : partition(f)) {
      for (const auto& g : detect_gaps(times_of(seg.rows), 60)) expected += g.fill_times.size();
    }
    const auto& flag = out.table().column(cn::kInterpolated).as_booleans();
    CHECK(out.num_rows() == f.num_rows() + expected);
    CHECK(static_cast<std::size_t>(std::count(flag.begin(), flag.end(), 1)) == expected);
    // Inserted times lie on the lattice anchored at the preceding original point.
    std::int64_t anchor = 0;
    for (std::size_t r = 0; r < out.num_rows(); ++r) {
      if (!flag[r]) {
        anchor = out.times()[r];
      } else {
        CHECK((out.times()[r] - anchor) % 60 == 0);
      }
    }
  }
  auto empty = interpolate(TrajectoryFrame(), {InterpMethod::RandomWalk, 60, std::nullopt, false}, {1, 0});
  CHECK(empty.table().find(cn::kInterpolated));
  CHECK(empty.table().find(cn::kFallback));
}
