// Python bindings for the trajkit core.
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "trajkit/error.hpp"
#include "trajkit/filters.hpp"
#include "trajkit/geo.hpp"
#include "trajkit/interpolation.hpp"
#include "trajkit/io.hpp"
#include "trajkit/kinematic.hpp"
#include "trajkit/parallel.hpp"
#include "trajkit/pipeline.hpp"
#include "trajkit/temporal.hpp"

namespace py = pybind11;
using namespace trajkit;

namespace {

ExecConfig exec_config(std::optional<std::size_t> threads, std::uint64_t seed) {
  return ExecConfig{threads.value_or(default_worker_count()), seed};
}

py::list column_values(const Column& c) {
  py::list out;
  for (std::size_t r = 0; r < c.size(); ++r) {
    if (c.is_null(r)) {
      out.append(py::none());
      continue;
    }
    switch (c.kind()) {
      case ValueKind::String: out.append(c.as_strings()[r]); break;
      case ValueKind::Integer:
      case ValueKind::Timestamp: out.append(c.as_integers()[r]); break;
      case ValueKind::Float: out.append(c.as_floats()[r]); break;
      case ValueKind::Boolean: out.append(c.as_booleans()[r] != 0); break;
    }
  }
  return out;
}

std::vector<std::string> column_names_of(const TrajectoryFrame& f) {
  std::vector<std::string> names;
  for (const auto& d : f.schema()) names.push_back(d.name);
  return names;
}

}  // namespace

PYBIND11_MODULE(_trajkit, m) {
  m.doc() = "Parallel trajectory preprocessing";

  auto base = py::register_exception<Error>(m, "TrajkitError");
  py::register_exception<ValidationError>(m, "ValidationError", base.ptr());
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
  py::register_exception<IoError>(m, "IoError", base.ptr());
  py::register_exception<SegmentError>(m, "SegmentError", base.ptr());
  py::register_exception<StepError>(m, "StepError", base.ptr());

  py::class_<ColumnMapping>(m, "ColumnMapping")
      .def(py::init([](std::string id, std::string lat, std::string lon, std::string time) {
             ColumnMapping c{std::move(id), std::move(lat), std::move(lon), std::move(time)};
             c.validate();
             return c;
           }),
           py::arg("id_col") = "traj_id", py::arg("lat_col") = "lat", py::arg("lon_col") = "lon",
           py::arg("time_col") = "time")
      .def_readonly("id_col", &ColumnMapping::id_col)
      .def_readonly("lat_col", &ColumnMapping::lat_col)
      .def_readonly("lon_col", &ColumnMapping::lon_col)
      .def_readonly("time_col", &ColumnMapping::time_col);

  py::class_<TrajectoryFrame>(m, "Frame")
      .def_static(
          "from_points",
          [](const std::vector<std::tuple<std::string, double, double, std::int64_t>>& pts) {
            std::vector<TrajectoryPoint> points;
            points.reserve(pts.size());
            for (const auto& [id, lat, lon, t] : pts) points.push_back({id, lat, lon, t});
            return TrajectoryFrame::from_points(std::move(points));
          },
          py::arg("points"), "Frame from (traj_id, lat, lon, epoch_seconds) tuples.")
      .def_static(
          "from_csv_text",
          [](const std::string& text, const ColumnMapping& mapping) {
            return build_frame(parse_csv_text(text), mapping);
          },
          py::arg("text"), py::arg("mapping") = ColumnMapping{})
      .def_property_readonly("num_rows", &TrajectoryFrame::num_rows)
      .def_property_readonly("num_trajectories", &TrajectoryFrame::num_trajectories)
      .def_property_readonly("columns", &column_names_of)
      .def("column", [](const TrajectoryFrame& f, const std::string& name) { return column_values(f.table().column(name)); })
      .def("to_csv", &to_csv_string)
      .def("__len__", &TrajectoryFrame::num_rows)
      .def("__eq__", [](const TrajectoryFrame& a, const TrajectoryFrame& b) { return a == b; });

  m.def("read_csv", [](const std::string& path, const ColumnMapping& mapping) { return read_csv(path, mapping); },
        py::arg("path"), py::arg("mapping") = ColumnMapping{});
  m.def("write_csv", [](const TrajectoryFrame& f, const std::string& path) { write_csv(f, path); }, py::arg("frame"),
        py::arg("path"));

  m.def("haversine_m", &geo::haversine_m, py::arg("lat1"), py::arg("lon1"), py::arg("lat2"), py::arg("lon2"));
  m.def("stream_seed", &stream_seed, py::arg("global_seed"), py::arg("traj_id"));
  m.def(
      "hampel_mask",
      [](const std::vector<std::optional<double>>& series, std::size_t k, double n_sigmas) {
        return hampel_mask(series, HampelParams{k, n_sigmas, "series"});
      },
      py::arg("series"), py::arg("k"), py::arg("n_sigmas") = 3.0);

  m.def(
      "kinematic_features",
      [](const TrajectoryFrame& f, std::optional<std::size_t> threads) {
        py::gil_scoped_release release;
        return create_kinematic_features(f, exec_config(threads, 0));
      },
      py::arg("frame"), py::arg("threads") = py::none());
  m.def(
      "temporal_features",
      [](const TrajectoryFrame& f, std::optional<std::size_t> threads) {
        py::gil_scoped_release release;
        return create_temporal_features(f, exec_config(threads, 0));
      },
      py::arg("frame"), py::arg("threads") = py::none());
  m.def(
      "hampel_filter",
      [](const TrajectoryFrame& f, const std::string& column, std::size_t k, double n_sigmas,
         std::optional<std::size_t> threads) {
        py::gil_scoped_release release;
        return filter_hampel(f, HampelParams{k, n_sigmas, column}, exec_config(threads, 0)).frame;
      },
      py::arg("frame"), py::arg("column"), py::arg("k"), py::arg("n_sigmas") = 3.0, py::arg("threads") = py::none());
  m.def(
      "interpolate",
      [](const TrajectoryFrame& f, const std::string& method, std::int64_t sampling_interval,
         std::optional<double> vmax, std::optional<std::size_t> threads, std::uint64_t seed) {
        InterpParams p{parse_interp_method(method), sampling_interval, vmax, false};
        p.validate();
        py::gil_scoped_release release;
        return interpolate(f, p, exec_config(threads, seed));
      },
      py::arg("frame"), py::arg("method"), py::arg("sampling_interval"), py::arg("vmax") = py::none(),
      py::arg("threads") = py::none(), py::arg("seed") = 0);

  m.def("registered_ops", &registered_ops);
  // Returns (frame, report as a JSON string).
  m.def(
      "_run_pipeline",
      [](const TrajectoryFrame& f, const std::string& pipeline_json, const std::string& layer_path,
         std::optional<std::size_t> threads, std::optional<std::uint64_t> seed) {
        const auto config = parse_pipeline(pipeline_json);
        std::shared_ptr<const SemanticLayer> layer;
        if (!layer_path.empty()) layer = std::make_shared<const SemanticLayer>(load_layer(layer_path));
        const Pipeline pipeline(config, layer);
        const ExecConfig cfg{threads ? *threads : config.threads.value_or(default_worker_count()),
                             seed.value_or(config.seed.value_or(0))};
        py::gil_scoped_release release;
        auto result = pipeline.run(f, cfg);
        return std::make_pair(std::move(result.frame), result.report.to_json().dump());
      },
      py::arg("frame"), py::arg("pipeline_json"), py::arg("layer_path") = "", py::arg("threads") = py::none(),
      py::arg("seed") = py::none());
}
