// trajkit: command-line front end for the trajectory preprocessing pipeline.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "trajkit/error.hpp"
#include "trajkit/io.hpp"
#include "trajkit/kinematic.hpp"
#include "trajkit/parallel.hpp"
#include "trajkit/pipeline.hpp"
#include "trajkit/temporal.hpp"
#include "trajkit/timeutil.hpp"

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitInvalid = 2;

struct MappingFlags {
  trajkit::ColumnMapping mapping;

  void add_to(CLI::App& cmd, bool required) {
    cmd.add_option("--id-col", mapping.id_col, "Trajectory id column")->required(required);
    cmd.add_option("--lat-col", mapping.lat_col, "Latitude column (degrees)")->required(required);
    cmd.add_option("--lon-col", mapping.lon_col, "Longitude column (degrees)")->required(required);
    cmd.add_option("--time-col", mapping.time_col, "Timestamp column (epoch seconds or ISO-8601)")
        ->required(required);
  }
};

// --threads, then TRAJKIT_THREADS, then the pipeline file, then all logical processors.
std::size_t resolve_threads(std::optional<std::size_t> flag, const trajkit::PipelineConfig* config) {
  if (flag) return *flag;
  if (auto env = trajkit::env_worker_count()) return *env;
  if (config && config->threads) return *config->threads;
  return trajkit::default_worker_count();
}

std::shared_ptr<const trajkit::SemanticLayer> maybe_layer(const std::string& path) {
  if (path.empty()) return nullptr;
  return std::make_shared<const trajkit::SemanticLayer>(trajkit::load_layer(path));
}

struct Compiled {
  trajkit::PipelineConfig config;
  std::optional<trajkit::Pipeline> pipeline;
};

// Loads and fully validates the pipeline before any data is touched.
std::optional<Compiled> compile(const std::string& pipeline_path, const std::string& layer_path) {
  try {
    Compiled c{trajkit::load_pipeline(pipeline_path), std::nullopt};
    c.pipeline.emplace(c.config, maybe_layer(layer_path));
    return c;
  } catch (const trajkit::Error& e) {
    std::cerr << "invalid configuration: " << e.what() << '\n';
    return std::nullopt;
  }
}

std::string fmt_opt(const std::optional<double>& v) {
  if (!v) return "-";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", *v);
  return buf;
}

int describe(const trajkit::TrajectoryFrame& frame, const trajkit::ExecConfig& cfg) {
  const auto durations = trajkit::trajectory_duration(frame, cfg);
  const auto stats = trajkit::kinematic_stats(frame, cfg);
  std::printf("%-16s %8s %-20s %-20s %12s %14s %10s %10s %10s\n", "traj_id", "points", "start", "end", "duration_s",
              "distance_m", "min_speed", "mean_speed", "max_speed");
  for (std::size_t i = 0; i < durations.size(); ++i) {
    const auto& d = durations[i].value;
    const auto& s = stats[i].value;
    std::printf("%-16s %8zu %-20s %-20s %12lld %14.1f %10s %10s %10s\n", durations[i].traj_id.c_str(), s.points,
                trajkit::timeutil::format_iso8601(d.start_time).c_str(),
                trajkit::timeutil::format_iso8601(d.end_time).c_str(), static_cast<long long>(d.duration),
                s.total_distance, fmt_opt(s.min_speed).c_str(), fmt_opt(s.mean_speed).c_str(),
                fmt_opt(s.max_speed).c_str());
  }
  std::printf("%zu trajectories, %zu points\n", durations.size(), frame.num_rows());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"trajkit - parallel trajectory preprocessing"};
  app.require_subcommand(1);

  std::string input, output, pipeline_path, layer_path, report_path;
  std::optional<std::size_t> threads;
  std::optional<std::uint64_t> seed;

  auto* run = app.add_subcommand("run", "Run a pipeline over a trajectory CSV");
  MappingFlags run_map;
  run->add_option("--input", input, "Input CSV")->required()->check(CLI::ExistingFile);
  run->add_option("--output", output, "Output CSV")->required();
  run->add_option("--pipeline", pipeline_path, "Pipeline JSON")->required()->check(CLI::ExistingFile);
  run->add_option("--layer", layer_path, "GeoJSON semantic layer")->check(CLI::ExistingFile);
  run->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
  run->add_option("--seed", seed, "Global random seed");
  run->add_option("--report", report_path, "Write the run report as JSON");
  run_map.add_to(*run, true);

  auto* validate = app.add_subcommand("validate", "Check a pipeline (and optionally input/layer files)");
  MappingFlags val_map;
  validate->add_option("--pipeline", pipeline_path, "Pipeline JSON")->required()->check(CLI::ExistingFile);
  validate->add_option("--input", input, "Input CSV to validate")->check(CLI::ExistingFile);
  validate->add_option("--layer", layer_path, "GeoJSON semantic layer")->check(CLI::ExistingFile);
  val_map.add_to(*validate, false);

  auto* desc = app.add_subcommand("describe", "Print per-trajectory statistics");
  MappingFlags desc_map;
  desc->add_option("--input", input, "Input CSV")->required()->check(CLI::ExistingFile);
  desc->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
  desc_map.add_to(*desc, true);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      const auto compiled = compile(pipeline_path, layer_path);
      if (!compiled) return kExitInvalid;
      const auto& config = compiled->config;
      const auto& pipeline = *compiled->pipeline;
      trajkit::BuildStats stats;
      const auto frame = trajkit::read_csv(input, run_map.mapping, &stats);
      trajkit::ExecConfig cfg{resolve_threads(threads, &config), seed.value_or(config.seed.value_or(0))};
      if (stats.duplicates_dropped > 0) {
        std::cerr << "collapsed " << stats.duplicates_dropped << " exact duplicate row(s) at load\n";
      }
      const auto result = pipeline.run(frame, cfg);
      trajkit::write_csv(result.frame, output);
      std::cerr << result.report.to_text();
      if (!report_path.empty()) {
        std::ofstream rep(report_path);
        if (!rep) throw trajkit::IoError("cannot open '" + report_path + "' for writing");
        rep << result.report.to_json().dump(2) << '\n';
      }
      return 0;
    }
    if (*validate) {
      const auto compiled = compile(pipeline_path, layer_path);
      if (!compiled) return kExitInvalid;
      std::cout << "pipeline ok: " << compiled->pipeline->size() << " step(s)\n";
      if (!input.empty()) {
        trajkit::BuildStats stats;
        const auto frame = trajkit::read_csv(input, val_map.mapping, &stats);
        std::cout << "input ok: " << frame.num_rows() << " rows, " << frame.num_trajectories()
                  << " trajectories, " << stats.duplicates_dropped << " duplicate(s) collapsed\n";
      }
      return 0;
    }
    if (*desc) {
      const auto frame = trajkit::read_csv(input, desc_map.mapping);
      return describe(frame, trajkit::ExecConfig{resolve_threads(threads, nullptr), 0});
    }
  } catch (const trajkit::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const trajkit::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return 0;
}
