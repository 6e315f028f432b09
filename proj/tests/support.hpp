#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "trajkit/frame.hpp"

namespace testutil {

using trajkit::TrajectoryFrame;
using trajkit::TrajectoryPoint;

inline TrajectoryFrame frame_of(std::vector<TrajectoryPoint> pts) {
  return TrajectoryFrame::from_points(std::move(pts));
}

// Random-ish walk around a base point; irregular sampling with occasional long gaps.
inline std::vector<TrajectoryPoint> synthetic_points(std::size_t trajectories, std::size_t points, std::uint64_t seed,
                                                     bool noisy = true) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<TrajectoryPoint> out;
  out.reserve(trajectories * points);
  for (std::size_t k = 0; k < trajectories; ++k) {
    char id[32];
    std::snprintf(id, sizeof id, "T%04zu", k);
    double lat = 45.0 + 0.5 * u(rng);
    double lon = -118.0 + 0.5 * u(rng);
    double heading = 2.0 * 3.141592653589793 * u(rng);
    std::int64_t t = 1600000000 + static_cast<std::int64_t>(u(rng) * 86400.0);
    for (std::size_t i = 0; i < points; ++i) {
      double jlat = 0.0;
      if (noisy && u(rng) < 0.01) jlat = (u(rng) - 0.5) * 0.05;  // GPS spike
      out.push_back({id, lat + jlat, lon, t});
      heading += (u(rng) - 0.5) * 0.6;
      const double step = 2e-4 * (0.2 + u(rng));
      lat += step * std::cos(heading);
      lon += step * std::sin(heading);
      lat = std::clamp(lat, 44.0, 47.0);
      lon = std::clamp(lon, -119.0, -117.0);
      t += (u(rng) < 0.05) ? 150 + static_cast<std::int64_t>(u(rng) * 400) : 5 + static_cast<std::int64_t>(u(rng) * 40);
    }
  }
  return out;
}

inline TrajectoryFrame synthetic_frame(std::size_t trajectories, std::size_t points, std::uint64_t seed,
                                       bool noisy = true) {
  return frame_of(synthetic_points(trajectories, points, seed, noisy));
}

// Numeric series with nulls, spikes and (sometimes) many ties.
inline std::vector<std::optional<double>> random_series(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(0, 1);
  const bool integral = u(rng) < 0.4;  // lots of ties
  std::vector<std::optional<double>> s(n);
  for (auto& v : s) {
    if (u(rng) < 0.1) continue;
    double x = integral ? std::floor(u(rng) * 6) : std::sin(u(rng) * 6) + 0.1 * u(rng);
    if (u(rng) < 0.05) x += (u(rng) - 0.5) * 100.0;
    v = x;
  }
  return s;
}

}  // namespace testutil
