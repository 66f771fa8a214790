#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "mapstruct/evalharness.hpp"
#include "mapstruct/grid_map.hpp"
#include "mapstruct/pipeline.hpp"
#include "mapstruct/report.hpp"
#include "mapstruct/synthetic.hpp"

namespace py = pybind11;
using namespace mapstruct;

namespace {

constexpr const char* kArrayInput = "<array>";

// Leaked on purpose: the type must outlive interpreter teardown.
py::exception<Error>* error_type = nullptr;

using ByteArray = py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>;

BinaryMap to_map(const ByteArray& a) {
  if (a.ndim() != 2) throw Error(ErrorCode::kInvalidArgument, "map must be a 2-D array");
  const int h = static_cast<int>(a.shape(0));
  const int w = static_cast<int>(a.shape(1));
  BinaryMap m(w, h);
  const auto* p = a.data();
  for (std::size_t i = 0; i < m.size(); ++i) m[i] = p[i] != 0;
  return m;
}

template <typename T>
py::array_t<T> to_array(const Raster<T>& r) {
  py::array_t<T> out({r.height(), r.width()});
  std::copy(r.values().begin(), r.values().end(), out.mutable_data());
  return out;
}

py::array_t<std::uint8_t> to_labels(const Raster<CellLabel>& r) {
  py::array_t<std::uint8_t> out({r.height(), r.width()});
  auto* p = out.mutable_data();
  for (std::size_t i = 0; i < r.size(); ++i) p[i] = static_cast<std::uint8_t>(r[i]);
  return out;
}

PipelineConfig make_config(int angle_bins, int radius_bins, double prominence,
                           const std::string& prominence_mode, double mask_half_width,
                           std::optional<double> threshold) {
  if (prominence_mode != "circular" && prominence_mode != "linear") {
    throw Error(ErrorCode::kInvalidArgument, "prominence_mode must be circular or linear");
  }
  if (angle_bins < 4) throw Error(ErrorCode::kInvalidArgument, "angle_bins must be >= 4");
  PipelineConfig c;
  c.angle_bins = angle_bins;
  c.radius_bins = radius_bins;
  c.directions.threshold = prominence;
  c.directions.mode =
      prominence_mode == "linear" ? ProminenceMode::kLinear : ProminenceMode::kCircular;
  c.mask_half_width_deg = mask_half_width;
  c.threshold_override = threshold;
  return c;
}

#define MAPSTRUCT_CONFIG_ARGS                                                  \
  py::arg("angle_bins") = 720, py::arg("radius_bins") = 0,                     \
  py::arg("prominence") = 0.5, py::arg("prominence_mode") = "circular",        \
  py::arg("mask_half_width") = 0.0

std::string analyze(const ByteArray& a, int angle_bins, int radius_bins, double prominence,
                    const std::string& mode, double half_width) {
  const BinaryMap m = to_map(a);
  const auto config = make_config(angle_bins, radius_bins, prominence, mode, half_width, {});
  return report::analysis_report(kArrayInput, m, analyze_map(m, config), config).dump();
}

py::tuple declutter_array(const ByteArray& a, std::optional<double> threshold, int angle_bins,
                    int radius_bins, double prominence, const std::string& mode,
                    double half_width) {
  const BinaryMap m = to_map(a);
  const auto config =
      make_config(angle_bins, radius_bins, prominence, mode, half_width, threshold);
  const DeclutterResult r = declutter_map(m, config);
  py::object scores = py::none();
  if (r.nominal) scores = to_array(r.nominal->normalized);
  return py::make_tuple(report::declutter_report(kArrayInput, m, r, config).dump(),
                        to_array(r.decluttered), scores);
}

std::string walls(const ByteArray& a, bool filter, std::optional<std::string> ground_truth,
                  int votes, int min_length, int max_gap, std::uint64_t seed, double angle_tol,
                  double offset_tol, double snap_tol, std::optional<double> threshold,
                  int angle_bins, int radius_bins, double prominence, const std::string& mode,
                  double half_width) {
  const BinaryMap m = to_map(a);
  const auto config =
      make_config(angle_bins, radius_bins, prominence, mode, half_width, threshold);
  WallConfig wc;
  wc.hough.votes = votes;
  wc.hough.min_length = min_length;
  wc.hough.max_gap = max_gap;
  wc.hough.seed = seed;
  wc.angle_tol_deg = angle_tol;
  wc.offset_tol = offset_tol;
  wc.snap_tol_deg = snap_tol;
  const WallExtraction x = extract_walls(m, filter, config, wc);
  std::optional<WallEvalResult> eval;
  if (ground_truth) {
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(*ground_truth);
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kFormat, std::string("ground truth: ") + e.what());
    }
    const auto gt = report::parse_ground_truth(doc, x.center);
    eval = wall_error(x.lines, gt, x.center);
  }
  return report::walls_report(kArrayInput, m, x, wc, config, eval).dump();
}

py::tuple inject(const ByteArray& a, const std::string& shape, int count, int size,
                 std::uint64_t seed) {
  ClutterSpec spec{parse_clutter_shape(shape), count, size, seed};
  const LabeledMap l = inject_clutter(to_map(a), spec);
  return py::make_tuple(to_array(l.bits), to_labels(l.truth));
}

py::tuple sweep(const std::vector<std::pair<std::string, ByteArray>>& maps,
                const std::vector<std::string>& shapes, const std::vector<int>& sizes,
                const std::vector<int>& counts, const std::vector<std::uint64_t>& seeds) {
  std::vector<SweepMap> sm;
  for (const auto& [name, a] : maps) sm.push_back({name, to_map(a)});
  SweepGrid grid;
  for (const auto& s : shapes) grid.shapes.push_back(parse_clutter_shape(s));
  grid.sizes = sizes;
  grid.counts = counts;
  grid.seeds = seeds;
  const auto rows = run_sweep(sm, grid);
  return py::make_tuple(report::sweep_json(rows).dump(), to_csv(rows));
}

py::tuple builtin_map(const std::string& name, int size) {
  const auto s = synthetic::by_name(name, size);
  return py::make_tuple(to_array(s.map), report::ground_truth_json(s.ground_truth).dump());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Native core of the mapstruct package.";

  error_type = new py::exception<Error>(m, "Error", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      const auto type = py::reinterpret_borrow<py::object>(*error_type);
      py::object instance = type(e.what());
      instance.attr("code") = std::string(to_string(e.code()));
      PyErr_SetObject(type.ptr(), instance.ptr());
    }
  });

  m.def("analyze", &analyze, py::arg("map"), MAPSTRUCT_CONFIG_ARGS);
  m.def("declutter", &declutter_array, py::arg("map"), py::arg("threshold") = py::none(),
        MAPSTRUCT_CONFIG_ARGS);
  m.def("walls", &walls, py::arg("map"), py::arg("filter") = true,
        py::arg("ground_truth") = py::none(), py::arg("votes") = 20, py::arg("min_length") = 10,
        py::arg("max_gap") = 3, py::arg("seed") = 0, py::arg("angle_tol") = 5.0,
        py::arg("offset_tol") = 5.0, py::arg("snap_tol") = 5.0,
        py::arg("threshold") = py::none(), MAPSTRUCT_CONFIG_ARGS);
  m.def("inject", &inject, py::arg("map"), py::arg("shape") = "square", py::arg("count") = 20,
        py::arg("size") = 5, py::arg("seed") = 0);
  m.def("sweep", &sweep, py::arg("maps"), py::arg("shapes"), py::arg("sizes"),
        py::arg("counts"), py::arg("seeds"));
  m.def(
      "correlate",
      [](const std::string& csv) {
        return report::correlation_json(correlation(parse_csv(csv))).dump();
      },
      py::arg("csv"));
  m.def("builtin_map", &builtin_map, py::arg("name"), py::arg("size") = 200);
  m.def(
      "shuffle_cells",
      [](const ByteArray& a, std::uint64_t seed) {
        return to_array(synthetic::shuffle_cells(to_map(a), seed));
      },
      py::arg("map"), py::arg("seed"));
  m.def(
      "load_map",
      [](const std::string& path, std::optional<std::string> meta,
         std::optional<double> occupied_threshold) {
        std::optional<std::filesystem::path> mp;
        if (meta) mp = *meta;
        const OccupancyGrid g = load_map(path, mp);
        const double t = occupied_threshold.value_or(
            meta ? load_metadata(*meta).occupied_thresh : PipelineConfig{}.occupied_threshold);
        return to_array(binarize(g, t));
      },
      py::arg("path"), py::arg("meta") = py::none(), py::arg("occupied_threshold") = py::none());
  m.def(
      "save_map", [](const ByteArray& a, const std::string& path) { save_map(to_map(a), path); },
      py::arg("map"), py::arg("path"));
}
