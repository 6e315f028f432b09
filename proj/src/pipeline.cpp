#include "trajkit/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iterator>
#include <map>
#include <sstream>

#include "trajkit/filters.hpp"
#include "trajkit/interpolation.hpp"
#include "trajkit/kinematic.hpp"
#include "trajkit/temporal.hpp"
#include "trajkit/timeutil.hpp"

namespace trajkit {

using nlohmann::json;

PipelineConfig parse_pipeline(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::exception& e) {
    throw ConfigError(std::string("pipeline is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("pipeline must be a JSON object");
  PipelineConfig cfg;
  for (const auto& [key, value] : doc.items()) {
    if (key == "seed") {
      if (!value.is_number_unsigned()) throw ConfigError("'seed' must be a non-negative integer");
      cfg.seed = value.get<std::uint64_t>();
    } else if (key == "threads") {
      if (!value.is_number_unsigned() || value.get<std::uint64_t>() == 0) {
        throw ConfigError("'threads' must be a positive integer");
      }
      cfg.threads = value.get<std::size_t>();
    } else if (key == "steps") {
      if (!value.is_array()) throw ConfigError("'steps' must be an array");
      for (std::size_t i = 0; i < value.size(); ++i) {
        const auto& s = value[i];
        if (!s.is_object() || !s.contains("op") || !s.at("op").is_string()) {
          throw ConfigError("step " + std::to_string(i) + ": must be an object with a string 'op'");
        }
        StepSpec spec{s.at("op").get<std::string>(), json::object()};
        for (const auto& [k, v] : s.items()) {
          if (k != "op") spec.params[k] = v;
        }
        cfg.steps.push_back(std::move(spec));
      }
    } else {
      throw ConfigError("unknown pipeline key '" + key + "' (expected seed, threads, steps)");
    }
  }
  return cfg;
}

PipelineConfig load_pipeline(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_pipeline(text);
}

namespace {

enum class ParamType { Integer, Number, String, Boolean, Timestamp };

struct ParamSpec {
  const char* key;
  ParamType type;
  bool required;
};

using Compiler = std::function<CompiledStep(const json&, const SemanticLayer*)>;

struct OpDef {
  std::vector<ParamSpec> params;
  Compiler compile;
};

std::string type_name(ParamType t) {
  switch (t) {
    case ParamType::Integer: return "an integer";
    case ParamType::Number: return "a number";
    case ParamType::String: return "a string";
    case ParamType::Boolean: return "a boolean";
    case ParamType::Timestamp: return "epoch seconds or an ISO-8601 string";
  }
  return "a value";
}

bool type_matches(const json& v, ParamType t) {
  switch (t) {
    case ParamType::Integer: return v.is_number_integer();
    case ParamType::Number: return v.is_number();
    case ParamType::String: return v.is_string();
    case ParamType::Boolean: return v.is_boolean();
    case ParamType::Timestamp:
      return v.is_number_integer() || (v.is_string() && timeutil::parse_iso8601(v.get<std::string>()));
  }
  return false;
}

std::int64_t timestamp_param(const json& v) {
  if (v.is_number_integer()) return v.get<std::int64_t>();
  return *timeutil::parse_iso8601(v.get<std::string>());
}

template <class T>
std::optional<T> optional_param(const json& params, const char* key) {
  if (!params.contains(key)) return std::nullopt;
  return params.at(key).get<T>();
}

json removed_summary(const std::vector<Keyed<std::size_t>>& removed) {
  json out = json::object();
  for (const auto& r : removed) {
    if (r.value > 0) out[r.traj_id] = r.value;
  }
  return out;
}

json opt_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

const SemanticLayer& require_layer(const SemanticLayer* layer) {
  if (!layer) throw ConfigError("this step needs a semantic layer (--layer)");
  return *layer;
}

const std::map<std::string, OpDef>& registry() {
  static const std::map<std::string, OpDef> ops = [] {
    std::map<std::string, OpDef> m;

    m["hampel"] = {{{"column", ParamType::String, true},
                    {"k", ParamType::Integer, true},
                    {"n_sigmas", ParamType::Number, false}},
                   [](const json& p, const SemanticLayer*) -> CompiledStep {
                     const auto k = p.at("k").get<std::int64_t>();
                     if (k < 1) throw ConfigError("'k' must be at least 1");
                     HampelParams hp{static_cast<std::size_t>(k), optional_param<double>(p, "n_sigmas").value_or(3.0),
                                     p.at("column").get<std::string>()};
                     hp.validate();
                     return [hp](const TrajectoryFrame& f, const ExecConfig& cfg) {
                       auto r = filter_hampel(f, hp, cfg);
                       return StepOutcome{std::move(r.frame), {}, json{{"removed", removed_summary(r.removed)}}};
                     };
                   }};

    m["speed_filter"] = {{{"min_speed", ParamType::Number, false}, {"max_speed", ParamType::Number, false}},
                         [](const json& p, const SemanticLayer*) -> CompiledStep {
                           SpeedBounds b{optional_param<double>(p, "min_speed"), optional_param<double>(p, "max_speed")};
                           b.validate();
                           return [b](const TrajectoryFrame& f, const ExecConfig& cfg) {
                             return StepOutcome{filter_by_speed(f, b, cfg), {}, nullptr};
                           };
                         }};

    m["time_filter"] = {{{"start", ParamType::Timestamp, true}, {"end", ParamType::Timestamp, true}},
                        [](const json& p, const SemanticLayer*) -> CompiledStep {
                          const auto start = timestamp_param(p.at("start"));
                          const auto end = timestamp_param(p.at("end"));
                          if (start > end) throw ConfigError("'start' must not exceed 'end'");
                          return [start, end](const TrajectoryFrame& f, const ExecConfig& cfg) {
                            return StepOutcome{filter_by_time_range(f, start, end, cfg), {}, nullptr};
                          };
                        }};

    m["dedup"] = {{}, [](const json&, const SemanticLayer*) -> CompiledStep {
                    return [](const TrajectoryFrame& f, const ExecConfig& cfg) {
                      auto r = remove_duplicates(f, cfg);
                      return StepOutcome{std::move(r.frame), {}, json{{"removed", removed_summary(r.removed)}}};
                    };
                  }};

    m["min_points"] = {{{"min_points", ParamType::Integer, true}},
                       [](const json& p, const SemanticLayer*) -> CompiledStep {
                         const auto n = p.at("min_points").get<std::int64_t>();
                         if (n < 1) throw ConfigError("'min_points' must be at least 1");
                         return [n](const TrajectoryFrame& f, const ExecConfig& cfg) {
                           return StepOutcome{drop_short_trajectories(f, static_cast<std::size_t>(n), cfg), {}, nullptr};
                         };
                       }};

    m["interpolate"] = {{{"method", ParamType::String, true},
                         {"sampling_interval", ParamType::Integer, true},
                         {"vmax", ParamType::Number, false},
                         {"strict", ParamType::Boolean, false}},
                        [](const json& p, const SemanticLayer*) -> CompiledStep {
                          InterpParams ip;
                          ip.method = parse_interp_method(p.at("method").get<std::string>());
                          ip.sampling_interval = p.at("sampling_interval").get<std::int64_t>();
                          ip.vmax = optional_param<double>(p, "vmax");
                          ip.strict = optional_param<bool>(p, "strict").value_or(false);
                          ip.validate();
                          return [ip](const TrajectoryFrame& f, const ExecConfig& cfg) {
                            StepOutcome out{f, {}, nullptr};
                            out.frame = interpolate(f, ip, cfg, &out.warnings);
                            return out;
                          };
                        }};

    m["temporal_features"] = {{}, [](const json&, const SemanticLayer*) -> CompiledStep {
                                return [](const TrajectoryFrame& f, const ExecConfig& cfg) {
                                  return StepOutcome{create_temporal_features(f, cfg), {}, nullptr};
                                };
                              }};

    m["kinematic_features"] = {{}, [](const json&, const SemanticLayer*) -> CompiledStep {
                                 return [](const TrajectoryFrame& f, const ExecConfig& cfg) {
                                   return StepOutcome{create_kinematic_features(f, cfg), {}, nullptr};
                                 };
                               }};

    m["distance_from_point"] = {{{"lat", ParamType::Number, true},
                                 {"lon", ParamType::Number, true},
                                 {"column", ParamType::String, false}},
                                [](const json& p, const SemanticLayer*) -> CompiledStep {
                                  const double lat = p.at("lat").get<double>();
                                  const double lon = p.at("lon").get<double>();
                                  if (!(lat >= -90.0 && lat <= 90.0) || !(lon >= -180.0 && lon <= 180.0)) {
                                    throw ConfigError("reference point out of range");
                                  }
                                  const std::string name = optional_param<std::string>(p, "column")
                                                               .value_or(column_names::kDistanceFromPoint);
                                  if (name.empty()) throw ConfigError("'column' must be non-empty");
                                  return [lat, lon, name](const TrajectoryFrame& f, const ExecConfig& cfg) {
                                    return StepOutcome{add_distance_from_point(f, lat, lon, name, cfg), {}, nullptr};
                                  };
                                }};

    m["kinematic_stats"] = {{}, [](const json&, const SemanticLayer*) -> CompiledStep {
                              return [](const TrajectoryFrame& f, const ExecConfig& cfg) {
                                json table = json::array();
                                for (const auto& s : kinematic_stats(f, cfg)) {
                                  table.push_back({{"traj_id", s.traj_id},
                                                   {"points", s.value.points},
                                                   {"min_speed", opt_number(s.value.min_speed)},
                                                   {"mean_speed", opt_number(s.value.mean_speed)},
                                                   {"max_speed", opt_number(s.value.max_speed)},
                                                   {"total_distance", s.value.total_distance}});
                                }
                                return StepOutcome{f, {}, json{{"kinematic_stats", table}}};
                              };
                            }};

    m["trajectory_duration"] = {{}, [](const json&, const SemanticLayer*) -> CompiledStep {
                                  return [](const TrajectoryFrame& f, const ExecConfig& cfg) {
                                    json table = json::array();
                                    for (const auto& d : trajectory_duration(f, cfg)) {
                                      table.push_back({{"traj_id", d.traj_id},
                                                       {"start_time", d.value.start_time},
                                                       {"end_time", d.value.end_time},
                                                       {"duration", d.value.duration}});
                                    }
                                    return StepOutcome{f, {}, json{{"trajectory_duration", table}}};
                                  };
                                }};

    m["visited_locations"] = {{}, [](const json&, const SemanticLayer* layer) -> CompiledStep {
                                const auto& l = require_layer(layer);
                                if (l.polygons.empty()) throw ConfigError("layer has no polygons");
                                return [layer](const TrajectoryFrame& f, const ExecConfig& cfg) {
                                  auto r = visited_locations(f, *layer, cfg);
                                  json visits = json::object();
                                  for (const auto& v : r.visits) {
                                    json per = json::object();
                                    for (const auto& c : v.value) per[c.polygon] = c.entries;
                                    visits[v.traj_id] = per;
                                  }
                                  return StepOutcome{std::move(r.frame), {}, json{{"visits", visits}}};
                                };
                              }};

    m["trajectory_inside"] = {{{"polygon", ParamType::String, true}},
                              [](const json& p, const SemanticLayer* layer) -> CompiledStep {
                                const PolygonGeometry& poly = require_layer(layer).polygon(p.at("polygon").get<std::string>());
                                return [&poly](const TrajectoryFrame& f, const ExecConfig& cfg) {
                                  json table = json::object();
                                  for (const auto& r : trajectory_inside(f, poly, cfg)) table[r.traj_id] = r.value;
                                  return StepOutcome{f, {}, json{{"polygon", poly.name}, {"inside", table}}};
                                };
                              }};

    m["nearest_poi"] = {{}, [](const json&, const SemanticLayer* layer) -> CompiledStep {
                          if (require_layer(layer).pois.empty()) throw ConfigError("layer has no points of interest");
                          return [layer](const TrajectoryFrame& f, const ExecConfig& cfg) {
                            return StepOutcome{nearest_poi(f, layer->pois, cfg), {}, nullptr};
                          };
                        }};

    m["intersect_inside"] = {{{"id_a", ParamType::String, true},
                              {"id_b", ParamType::String, true},
                              {"polygon", ParamType::String, true}},
                             [](const json& p, const SemanticLayer* layer) -> CompiledStep {
                               const PolygonGeometry& poly =
                                   require_layer(layer).polygon(p.at("polygon").get<std::string>());
                               const auto a = p.at("id_a").get<std::string>();
                               const auto b = p.at("id_b").get<std::string>();
                               return [&poly, a, b](const TrajectoryFrame& f, const ExecConfig&) {
                                 const auto r = trajectories_intersect_inside(f, a, b, poly);
                                 json pts = json::array();
                                 for (const auto& c : r.crossings) pts.push_back({{"lat", c.lat}, {"lon", c.lon}});
                                 return StepOutcome{f, {}, json{{"intersects", r.intersects}, {"crossings", pts}}};
                               };
                             }};
    return m;
  }();
  return ops;
}

std::size_t edit_distance(std::string_view a, std::string_view b) {
  std::vector<std::size_t> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
      diag = up;
    }
  }
  return row[b.size()];
}

std::string unknown_op_message(const std::string& name) {
  std::string best;
  std::size_t best_d = 4;
  std::string known;
  for (const auto& [op, def] : registry()) {
    const std::size_t d = edit_distance(name, op);
    if (d < best_d) {
      best_d = d;
      best = op;
    }
    known += known.empty() ? op : ", " + op;
  }
  std::string msg = "unknown op '" + name + "'";
  if (!best.empty()) msg += "; did you mean '" + best + "'?";
  return msg + " Known ops: " + known;
}

void check_params(const json& params, const std::vector<ParamSpec>& specs) {
  for (const auto& [key, value] : params.items()) {
    auto it = std::find_if(specs.begin(), specs.end(), [&](const ParamSpec& s) { return key == s.key; });
    if (it == specs.end()) {
      std::string allowed;
      for (const auto& s : specs) allowed += allowed.empty() ? s.key : std::string(", ") + s.key;
      throw ConfigError("unknown parameter '" + key + "'" +
                        (allowed.empty() ? std::string(" (this op takes none)") : " (allowed: " + allowed + ")"));
    }
    if (!type_matches(value, it->type)) throw ConfigError("parameter '" + key + "' must be " + type_name(it->type));
  }
  for (const auto& s : specs) {
    if (s.required && !params.contains(s.key)) throw ConfigError("missing required parameter '" + std::string(s.key) + "'");
  }
}

}  // namespace

std::vector<std::string> registered_ops() {
  std::vector<std::string> out;
  for (const auto& [name, def] : registry()) out.push_back(name);
  return out;
}

Pipeline::Pipeline(const PipelineConfig& config, std::shared_ptr<const SemanticLayer> layer)
    : config_(config), layer_(std::move(layer)) {
  if (layer_) layer_->validate();
  for (std::size_t i = 0; i < config_.steps.size(); ++i) {
    const auto& step = config_.steps[i];
    const auto it = registry().find(step.op);
    if (it == registry().end()) throw StepError(i, step.op, unknown_op_message(step.op));
    try {
      check_params(step.params, it->second.params);
      steps_.push_back(it->second.compile(step.params, layer_.get()));
    } catch (const Error& e) {
      throw StepError(i, step.op, e.what());
    }
  }
}

Pipeline::Result Pipeline::run(const TrajectoryFrame& input, const ExecConfig& cfg) const {
  cfg.validate();
  Result result{input, {}};
  result.report.input_rows = input.num_rows();
  result.report.worker_count = cfg.worker_count;
  result.report.seed = cfg.global_seed;
  for (std::size_t i = 0; i < steps_.size(); ++i) {
    StepReport sr;
    sr.index = i;
    sr.op = config_.steps[i].op;
    sr.rows_in = result.frame.num_rows();
    const auto started = std::chrono::steady_clock::now();
    StepOutcome outcome{result.frame, {}, nullptr};
    try {
      outcome = steps_[i](result.frame, cfg);
    } catch (const std::exception& e) {
      throw StepError(i, sr.op, e.what());
    }
    sr.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    result.frame = std::move(outcome.frame);
    sr.rows_out = result.frame.num_rows();
    sr.rows_added = sr.rows_out > sr.rows_in ? sr.rows_out - sr.rows_in : 0;
    sr.rows_removed = sr.rows_in > sr.rows_out ? sr.rows_in - sr.rows_out : 0;
    sr.warnings = std::move(outcome.warnings);
    sr.summary = std::move(outcome.summary);
    result.report.steps.push_back(std::move(sr));
  }
  result.report.output_rows = result.frame.num_rows();
  return result;
}

Pipeline::Result run_pipeline(const TrajectoryFrame& input, const PipelineConfig& config,
                              std::shared_ptr<const SemanticLayer> layer, const ExecConfig& cfg) {
  return Pipeline(config, std::move(layer)).run(input, cfg);
}

std::string RunReport::to_text() const {
  std::ostringstream out;
  out << "pipeline: " << steps.size() << " step(s), " << worker_count << " worker(s), seed " << seed << '\n';
  out << "input rows: " << input_rows << '\n';
  for (const auto& s : steps) {
    out << "  [" << s.index << "] " << s.op << ": rows " << s.rows_in << " -> " << s.rows_out << " (+"
        << s.rows_added << " / -" << s.rows_removed << "), " << s.wall_seconds << " s\n";
    for (const auto& w : s.warnings) out << "      warning: " << w.traj_id << ": " << w.message << '\n';
  }
  out << "output rows: " << output_rows << '\n';
  return out.str();
}

json RunReport::to_json() const {
  json steps_json = json::array();
  for (const auto& s : steps) {
    json warnings = json::array();
    for (const auto& w : s.warnings) warnings.push_back({{"traj_id", w.traj_id}, {"message", w.message}});
    steps_json.push_back({{"index", s.index},
                          {"op", s.op},
                          {"rows_in", s.rows_in},
                          {"rows_out", s.rows_out},
                          {"rows_added", s.rows_added},
                          {"rows_removed", s.rows_removed},
                          {"wall_seconds", s.wall_seconds},
                          {"warnings", warnings},
                          {"summary", s.summary}});
  }
  return {{"input_rows", input_rows},
          {"output_rows", output_rows},
          {"worker_count", worker_count},
          {"seed", seed},
          {"steps", steps_json}};
}

}  // namespace trajkit
