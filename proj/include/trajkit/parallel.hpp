#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "trajkit/frame.hpp"

namespace trajkit {

// Environment variable consulted by default_worker_count().
inline constexpr const char* kThreadsEnvVar = "TRAJKIT_THREADS";

// TRAJKIT_THREADS when set to a positive integer.
std::optional<std::size_t> env_worker_count();
// env_worker_count(), else the number of logical processors.
std::size_t default_worker_count();

struct ExecConfig {
  std::size_t worker_count = default_worker_count();
  std::uint64_t global_seed = 0;

  void validate() const;
};

/// Seed of the random stream owned by one trajectory: 64-bit FNV-1a over the
/// eight little-endian bytes of the global seed followed by the id bytes.
std::uint64_t stream_seed(std::uint64_t global_seed, std::string_view traj_id) noexcept;

struct SegmentWarning {
  std::string traj_id;
  std::string message;
};

// Per-invocation state handed to a segment op.
struct SegmentContext {
  std::string_view traj_id;
  std::uint64_t stream_seed = 0;
  std::vector<std::string> warnings;
};

using SegmentOp = std::function<Table(const TrajectorySegment&, SegmentContext&)>;

/// Applies `op` to every trajectory on a pool of `cfg.worker_count` threads.
///
/// Results are stored in slots keyed by segment position and reassembled in
/// traj_id order, so the output is bit-identical for any worker count. Each
/// returned table must hold rows of its own trajectory only, strictly
/// increasing in time, with the same schema as every other segment result.
/// An empty result drops the trajectory. The first failing segment (by id
/// order among those that ran) aborts the call with a SegmentError; workers
/// stop picking up new segments once a failure is seen.
TrajectoryFrame map_segments(const TrajectoryFrame& frame, const SegmentOp& op, const ExecConfig& cfg,
                             std::vector<SegmentWarning>* warnings = nullptr);

// Runs fn(segment_index, segment, ctx) for each trajectory; same scheduling
// and failure rules as map_segments.
void for_each_segment(const TrajectoryFrame& frame, const ExecConfig& cfg,
                      const std::function<void(std::size_t, const TrajectorySegment&, SegmentContext&)>& fn,
                      std::vector<SegmentWarning>* warnings = nullptr);

// Calls fn(i) for i in [0, count) on up to `workers` threads.
void parallel_for(std::size_t count, std::size_t workers, const std::function<void(std::size_t)>& fn);

template <class T>
struct Keyed {
  std::string traj_id;
  T value;

  bool operator==(const Keyed&) const = default;
};

/// One summary value per trajectory, ordered by traj_id.
template <class T>
std::vector<Keyed<T>> reduce_segments(const TrajectoryFrame& frame,
                                      const std::function<T(const TrajectorySegment&, SegmentContext&)>& op,
                                      const ExecConfig& cfg, std::vector<SegmentWarning>* warnings = nullptr) {
  const auto bounds = segment_bounds(frame);
  std::vector<Keyed<T>> out(bounds.size());
  for_each_segment(
      frame, cfg,
      [&](std::size_t idx, const TrajectorySegment& seg, SegmentContext& ctx) {
        out[idx] = Keyed<T>{seg.traj_id, op(seg, ctx)};
      },
      warnings);
  return out;
}

}  // namespace trajkit
