#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "trajkit/error.hpp"
#include "trajkit/frame.hpp"
#include "trajkit/parallel.hpp"
#include "trajkit/semantic.hpp"

namespace trajkit {

struct StepSpec {
  std::string op;
  nlohmann::json params = nlohmann::json::object();
};

/// {"seed": N, "threads": N, "steps": [{"op": "...", ...params}]}
struct PipelineConfig {
  std::vector<StepSpec> steps;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> threads;
};

// Structural parse only; op names and parameters are checked by compile_pipeline.
PipelineConfig parse_pipeline(std::string_view json_text);
PipelineConfig load_pipeline(const std::filesystem::path& path);

// Names of every registered step, sorted.
std::vector<std::string> registered_ops();

struct StepReport {
  std::size_t index = 0;
  std::string op;
  std::size_t rows_in = 0;
  std::size_t rows_out = 0;
  std::size_t rows_added = 0;
  std::size_t rows_removed = 0;
  double wall_seconds = 0.0;
  std::vector<SegmentWarning> warnings;
  nlohmann::json summary;  // per-trajectory tables for summary steps, null otherwise
};

struct RunReport {
  std::size_t input_rows = 0;
  std::size_t output_rows = 0;
  std::size_t worker_count = 1;
  std::uint64_t seed = 0;
  std::vector<StepReport> steps;

  std::string to_text() const;
  nlohmann::json to_json() const;
};

struct StepOutcome {
  TrajectoryFrame frame;
  std::vector<SegmentWarning> warnings;
  nlohmann::json summary;
};

using CompiledStep = std::function<StepOutcome(const TrajectoryFrame&, const ExecConfig&)>;

/// A fully validated pipeline. Compilation checks every op name and
/// parameter (and layer references) before anything runs; the first problem
/// is reported as a StepError with its step index and op name.
class Pipeline {
 public:
  Pipeline(const PipelineConfig& config, std::shared_ptr<const SemanticLayer> layer = nullptr);

  std::size_t size() const noexcept { return steps_.size(); }
  const PipelineConfig& config() const noexcept { return config_; }

  struct Result {
    TrajectoryFrame frame;
    RunReport report;
  };
  // Runs every step in order. A failing step aborts with a StepError naming
  // the step index, op and cause.
  Result run(const TrajectoryFrame& input, const ExecConfig& cfg) const;

 private:
  PipelineConfig config_;
  std::shared_ptr<const SemanticLayer> layer_;
  std::vector<CompiledStep> steps_;
};

class StepError : public Error {
 public:
  StepError(std::size_t index, std::string op, const std::string& cause)
      : Error("step " + std::to_string(index) + " (" + op + "): " + cause), index_(index), op_(std::move(op)) {}

  std::size_t index() const noexcept { return index_; }
  const std::string& op() const noexcept { return op_; }

 private:
  std::size_t index_;
  std::string op_;
};

Pipeline::Result run_pipeline(const TrajectoryFrame& input, const PipelineConfig& config,
                              std::shared_ptr<const SemanticLayer> layer, const ExecConfig& cfg);

}  // namespace trajkit
