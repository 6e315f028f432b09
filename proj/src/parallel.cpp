#include "trajkit/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <thread>

#include "trajkit/error.hpp"

namespace trajkit {

std::optional<std::size_t> env_worker_count() {
  const char* env = std::getenv(kThreadsEnvVar);
  if (!env || !*env) return std::nullopt;
  std::size_t n = 0;
  const std::string_view s(env);
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), n);
  if (ec != std::errc{} || p != s.data() + s.size() || n == 0) return std::nullopt;
  return n;
}

std::size_t default_worker_count() {
  return env_worker_count().value_or(std::max<std::size_t>(1, std::thread::hardware_concurrency()));
}

void ExecConfig::validate() const {
  if (worker_count < 1) throw ConfigError("worker_count must be at least 1");
}

std::uint64_t stream_seed(std::uint64_t global_seed, std::string_view traj_id) noexcept {
  constexpr std::uint64_t kOffset = 14695981039346656037ull;
  constexpr std::uint64_t kPrime = 1099511628211ull;
  std::uint64_t h = kOffset;
  for (int i = 0; i < 8; ++i) {
    h ^= (global_seed >> (8 * i)) & 0xffu;
    h *= kPrime;
  }
  for (unsigned char c : traj_id) {
    h ^= c;
    h *= kPrime;
  }
  return h;
}

void parallel_for(std::size_t count, std::size_t workers, const std::function<void(std::size_t)>& fn) {
  const std::size_t threads = std::min(std::max<std::size_t>(workers, 1), count);
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  auto worker = [&] {
    while (!failed.load(std::memory_order_relaxed)) {
      const std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
      if (i >= count) break;
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
        failed.store(true, std::memory_order_relaxed);
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

void for_each_segment(const TrajectoryFrame& frame, const ExecConfig& cfg,
                      const std::function<void(std::size_t, const TrajectorySegment&, SegmentContext&)>& fn,
                      std::vector<SegmentWarning>* warnings) {
  cfg.validate();
  const auto bounds = segment_bounds(frame);
  const std::size_t n = bounds.size();
  std::vector<std::exception_ptr> errors(n);
  std::vector<std::vector<std::string>> notes(n);
  std::atomic<bool> failed{false};

  auto run_one = [&](std::size_t i) {
    if (failed.load(std::memory_order_relaxed)) return;
    const auto& b = bounds[i];
    TrajectorySegment seg{b.traj_id, frame.table().slice(b.begin, b.end)};
    SegmentContext ctx{seg.traj_id, stream_seed(cfg.global_seed, seg.traj_id), {}};
    try {
      fn(i, seg, ctx);
    } catch (...) {
      errors[i] = std::current_exception();
      failed.store(true, std::memory_order_relaxed);
    }
    notes[i] = std::move(ctx.warnings);
  };
  parallel_for(n, cfg.worker_count, run_one);

  for (std::size_t i = 0; i < n; ++i) {
    if (!errors[i]) continue;
    try {
      std::rethrow_exception(errors[i]);
    } catch (const SegmentError&) {
      throw;
    } catch (const std::exception& e) {
      throw SegmentError(bounds[i].traj_id, e.what());
    } catch (...) {
      throw SegmentError(bounds[i].traj_id, "unknown error");
    }
  }
  if (warnings) {
    for (std::size_t i = 0; i < n; ++i) {
      for (auto& m : notes[i]) warnings->push_back({bounds[i].traj_id, std::move(m)});
    }
  }
}

namespace {

void check_segment_output(const std::string& traj_id, const Table& out) {
  if (out.num_rows() == 0) return;
  validate_frame_table(out);
  for (const auto& id : ids_of(out)) {
    if (id != traj_id) throw ValidationError("result contains rows of trajectory '" + id + "'");
  }
}

}  // namespace

TrajectoryFrame map_segments(const TrajectoryFrame& frame, const SegmentOp& op, const ExecConfig& cfg,
                             std::vector<SegmentWarning>* warnings) {
  const auto bounds = segment_bounds(frame);
  const std::size_t n = bounds.size();
  if (n == 0) return frame;

  std::vector<Table> results(n);
  for_each_segment(
      frame, cfg,
      [&](std::size_t idx, const TrajectorySegment& seg, SegmentContext& ctx) {
        Table out = op(seg, ctx);
        check_segment_output(seg.traj_id, out);
        results[idx] = std::move(out);
      },
      warnings);

  std::size_t reference = n;
  for (std::size_t i = 0; i < n; ++i) {
    if (results[i].num_rows() > 0) {
      reference = i;
      break;
    }
  }
  Schema schema = reference < n ? results[reference].schema()
                                : (results[0].num_columns() >= kCoreColumnCount ? results[0].schema() : frame.schema());
  std::vector<std::size_t> offsets(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (results[i].num_rows() > 0 && results[i].schema() != schema) {
      throw SegmentError(bounds[i].traj_id, "result schema differs from other trajectories");
    }
    offsets[i + 1] = offsets[i] + results[i].num_rows();
  }

  std::vector<Column> cols;
  cols.reserve(schema.size());
  for (const auto& d : schema) cols.emplace_back(d.kind, offsets[n]);
  parallel_for(n, cfg.worker_count, [&](std::size_t i) {
    if (results[i].num_rows() == 0) return;
    for (std::size_t c = 0; c < cols.size(); ++c) results[i].column(c).copy_into(cols[c], offsets[i]);
    results[i] = Table();
  });
  return assemble_trusted(Table(std::move(schema), std::move(cols)));
}

}  // namespace trajkit
