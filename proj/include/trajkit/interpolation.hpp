#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "trajkit/frame.hpp"
#include "trajkit/parallel.hpp"

namespace trajkit {

namespace column_names {
inline constexpr const char* kInterpolated = "interpolated";
inline constexpr const char* kFallback = "fallback";
}  // namespace column_names

/// A consecutive point pair whose time delta exceeds the sampling interval.
struct Gap {
  std::size_t left = 0;  // row index of the left endpoint; right endpoint is left + 1
  std::int64_t t_a = 0;
  std::int64_t t_b = 0;
  std::vector<std::int64_t> fill_times;  // t_a + k * interval, strictly inside (t_a, t_b)

  bool operator==(const Gap&) const = default;
};

/// Gaps of one trajectory. Fill times sit on a lattice anchored at the left
/// endpoint of each gap. Throws ConfigError for a non-positive interval.
std::vector<Gap> detect_gaps(std::span<const std::int64_t> times, std::int64_t sampling_interval);

/// Natural cubic spline through (x_i, y_i), x strictly increasing.
class NaturalCubicSpline {
 public:
  NaturalCubicSpline(std::span<const double> x, std::span<const double> y);

  double operator()(double x) const;
  double second_derivative(double x) const;
  std::span<const double> knot_second_derivatives() const { return m_; }

 private:
  std::size_t interval_of(double x) const;

  std::vector<double> x_;
  std::vector<double> y_;
  std::vector<double> m_;  // second derivatives at the knots
};

// Cubic with p(0) = p_a, p(T) = p_b, p'(0) = v_a, p'(T) = v_b, evaluated at tau in [0, T].
double kinematic_cubic(double p_a, double v_a, double p_b, double v_b, double T, double tau) noexcept;

// Minimum trajectory size for cubic interpolation.
inline constexpr std::size_t kCubicMinPoints = 4;
// Rejection-sampling attempts per random-walk point before falling back to linear.
inline constexpr int kRandomWalkMaxAttempts = 10000;
// Default random-walk speed limit as a multiple of the maximum observed speed.
inline constexpr double kRandomWalkSpeedFactor = 1.25;

/// Each method returns the segment with one row per fill time inserted,
/// in time order. Inserted rows carry interpolated = true and nulls in the
/// pre-existing feature columns; original rows keep every value.
Table interpolate_linear(const TrajectorySegment& segment, std::span<const Gap> gaps);
// Throws ConfigError when the segment has fewer than kCubicMinPoints rows.
Table interpolate_cubic(const TrajectorySegment& segment, std::span<const Gap> gaps);
Table interpolate_kinematic(const TrajectorySegment& segment, std::span<const Gap> gaps);

/// Space-time-prism sampling. `vmax` defaults to 1.25x the maximum observed
/// speed of the segment. Infeasible gaps and exhausted rejection sampling
/// fall back to linear interpolation with fallback = true. Adds the
/// `fallback` column.
Table interpolate_random_walk(const TrajectorySegment& segment, std::span<const Gap> gaps,
                              std::optional<double> vmax, std::uint64_t stream_seed);

enum class InterpMethod { Linear, Cubic, Kinematic, RandomWalk };

std::string_view to_string(InterpMethod method);
// Throws ConfigError naming the valid methods.
InterpMethod parse_interp_method(std::string_view name);

struct InterpParams {
  InterpMethod method = InterpMethod::Linear;
  std::int64_t sampling_interval = 60;  // seconds
  std::optional<double> vmax;           // m/s, random walk only
  // When false, cubic skips trajectories below kCubicMinPoints with a warning.
  bool strict = false;

  void validate() const;
};

TrajectoryFrame interpolate(const TrajectoryFrame& frame, const InterpParams& params, const ExecConfig& cfg,
                            std::vector<SegmentWarning>* warnings = nullptr);

}  // namespace trajkit
